# domain/experiments/oblivious.py

from __future__ import annotations

import logging
import math
from typing import Any, Dict, List

import numpy as np

from domain.bounds import (
    BoundCurve,
    Quantity,
    constant_schedule_e_floor,
    constant_schedule_exp_ceiling,
    constant_schedule_gap_ceiling,
    oblivious_gap_floor,
    one_step_grad_ceiling,
)
from domain.instances import make_convex_hard_for_schedule
from domain.methods import attach_pareto_gaps, min_running, run_oblivious_gd
from domain.models import StepSchedule
from domain.polynomials import product_values, residual_from_schedule

from .base import (
    Experiment,
    ExperimentConfig,
    ExperimentName,
    ExperimentResult,
    MethodRun,
    lifted_setup,
)

logger = logging.getLogger(__name__)


def build_schedule(cfg: ExperimentConfig, rng: np.random.Generator) -> StepSchedule:
    """Calendrier constant 1/L, aléatoire dans [0, 1/L] ou explicite (tronqué à T)."""
    if cfg.schedule == "constant":
        return StepSchedule.constant(cfg.L, cfg.T)
    if cfg.schedule == "random":
        return StepSchedule.random(cfg.L, cfg.T, rng)
    return StepSchedule(np.asarray(cfg.schedule[: cfg.T], dtype=float), cfg.L)


def run_oblivious(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Instance 1-D adaptée au calendrier (ζ⋆ maximise ζ·∏(1 − α_k ζ)), relevée en
    instance convexe, puis GD oblivious sur f_{e_1}. On suit min_{s<=t} 𝒢(x⁽ˢ⁾).
    """
    L, T, R = cfg.L, cfg.T, cfg.R
    rng = np.random.default_rng(cfg.seed)
    metrics: Dict[str, Any] = {}
    violations: List = []

    schedule = build_schedule(cfg, rng)
    constant = cfg.schedule == "constant"
    g = make_convex_hard_for_schedule(L, schedule, R)
    setup = lifted_setup(g, cfg, rng, metrics, violations)
    inst = setup.inst

    trace = run_oblivious_gd(setup.oracle, schedule, setup.x0, T)
    attach_pareto_gaps(inst, trace, cfg.tol, cfg.max_iter)
    running = min_running(trace.gaps).tolist()

    floor_T = oblivious_gap_floor(L, R, T)
    product_ceiling = constant_schedule_gap_ceiling(L, R, T)
    e_floor = constant_schedule_e_floor(L, R, T)

    def ceiling(t: int) -> float:
        if not constant:
            return L * R
        if t == T:
            return min(one_step_grad_ceiling(L, R, t), product_ceiling)
        return one_step_grad_ceiling(L, R, t)

    curve = BoundCurve.build(
        Quantity.MIN_PARETO_GAP,
        T,
        lambda t: floor_T,
        ceiling,
        "L*R/(4(T+1))",
        "L*R/sqrt(t), final min(., R*(L/(T+1))(1-1/(T+1))^T)" if constant else "L*R",
    )
    runs = [MethodRun(trace=trace, curves=[curve], measured={Quantity.MIN_PARETO_GAP: running})]

    # Représentation de Krylov : x_V⁽ᵀ⁾ = p_T(ζ⋆)·e0 avec p_T = ∏(1 − α_k ζ)
    zeta_star = float(g.eigs[0])
    phi_star = float(product_values(schedule.alphas, zeta_star)[0])
    ratio = float(trace.points[-1][0] / g.e0[0])
    expected = float(residual_from_schedule(schedule)(zeta_star))
    krylov_error = abs(ratio - expected) / max(abs(expected), np.finfo(float).tiny)

    metrics.update(
        {
            "schedule": "explicit" if isinstance(cfg.schedule, list) else cfg.schedule,
            "zeta_star": zeta_star,
            "phi_star": phi_star,
            "phi_star_R": phi_star * R,
            "min_gap": running[-1],
            "floor": floor_T,
            "product_ceiling": product_ceiling if constant else math.nan,
            "e_floor": e_floor,
            "above_e_floor": running[-1] >= e_floor * (1.0 - 1e-9) if constant else None,
            "exp_ceiling": constant_schedule_exp_ceiling(L, R, T),
            "sandwich_holds": floor_T * (1.0 - 1e-9)
            <= running[-1]
            <= (product_ceiling if constant else L * R) * (1.0 + 1e-9),
            "gaps_monotone": all(b <= a * (1.0 + 1e-12) for a, b in zip(trace.gaps, trace.gaps[1:])),
            "krylov_relative_error": krylov_error,
        }
    )
    logger.info(
        "oblivious T=%d (%s): min-gap=%.6g, plancher=%.6g, ζ⋆=%.6g.",
        T,
        metrics["schedule"],
        running[-1],
        floor_T,
        zeta_star,
    )
    return ExperimentResult(config=cfg, runs=runs, metrics=metrics, violations=violations)


OBLIVIOUS_EXPERIMENTS = {
    ExperimentName.OBLIVIOUS: Experiment(
        name=ExperimentName.OBLIVIOUS,
        runner=run_oblivious,
        description="Plancher Ω(1/T) des calendriers fixés à l'avance.",
    )
}
