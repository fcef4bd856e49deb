# domain/experiments/upper_agd.py

from __future__ import annotations

import logging
from typing import Any, Dict, List, Tuple

import numpy as np

from domain.bounds import (
    BoundCurve,
    Quantity,
    accelerated_gap_bound,
    agd_fgap_ceiling,
    agd_gap_ceiling,
    agd_strong_fgap_ceiling,
    agd_strong_gap_ceiling,
    one_step_grad_ceiling,
)
from domain.instances import make_random_quadratic
from domain.methods import (
    attach_pareto_gaps,
    min_running,
    run_agd_convex,
    run_agd_strongly_convex,
    run_gd_constant,
)
from domain.polynomials import (
    agd_classical_iterations_strongly_convex,
    agd_sufficient_iterations_convex,
    agd_sufficient_iterations_strongly_convex,
)
from domain.stationarity import pareto_gap
from domain.validator import Violation

from .base import (
    Experiment,
    ExperimentConfig,
    ExperimentName,
    ExperimentResult,
    LiftedSetup,
    MethodRun,
    lifted_setup,
)

logger = logging.getLogger(__name__)


def _complexity_rows(
    cfg: ExperimentConfig, setup: LiftedSetup
) -> Tuple[List[Dict[str, Any]], List[Violation]]:
    """
    Pour chaque ε : nombre de pas suffisant, exécution d'AGD sur exactement ce nombre
    de pas, et gap final. Un ε manqué est une violation de type "complexity".
    """
    L, mu, R = cfg.L, cfg.mu, cfg.R
    rows: List[Dict[str, Any]] = []
    violations: List[Violation] = []

    for eps in cfg.epsilons:
        if cfg.strongly_convex:
            steps = agd_classical_iterations_strongly_convex(L, mu, R, eps)
            announced = agd_sufficient_iterations_strongly_convex(L, mu, R, eps)
            trace = run_agd_strongly_convex(setup.oracle, L, mu, setup.x0, max(steps, announced))
            tag = "ceil(2ln(sqrt(L(L+mu))R/eps)/-ln(1-sqrt(mu/L)))"
        else:
            steps = agd_sufficient_iterations_convex(L, R, eps)
            announced = steps
            trace = run_agd_convex(setup.oracle, L, setup.x0, steps)
            tag = "ceil(2LR/eps)-1"

        gap = pareto_gap(setup.inst, trace.points[steps], cfg.tol, cfg.max_iter).gap
        gap_announced = pareto_gap(setup.inst, trace.points[announced], cfg.tol, cfg.max_iter).gap
        rows.append(
            {
                "epsilon": eps,
                "T_sufficient": steps,
                "gap": gap,
                "met": gap <= eps,
                "T_announced": announced,
                "gap_at_announced": gap_announced,
                "met_at_announced": gap_announced <= eps,
            }
        )
        if gap > eps:
            violations.append(
                Violation(trace.method_tag, "complexity", Quantity.PARETO_GAP.value, steps, gap, eps, tag)
            )
            logger.error("ε=%g non atteint après %d pas (gap=%.6g).", eps, steps, gap)
        else:
            logger.debug("ε=%g atteint en %d pas (gap=%.6g).", eps, steps, gap)
    return rows, violations


def run_upper_agd(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Quadratique aléatoire relevée, scalarisation λ = e_1 (donc R_λ = R) :
    bornes supérieures d'AGD sur le f-gap et sur 𝒢, GD en référence, complexités en ε.
    """
    L, T, R = cfg.L, cfg.T, cfg.R
    mu = cfg.mu if cfg.strongly_convex else 0.0
    rng = np.random.default_rng(cfg.seed)
    metrics: Dict[str, Any] = {}
    violations: List = []

    g = make_random_quadratic(L, mu, cfg.n_eigs, R, rng)
    setup = lifted_setup(g, cfg, rng, metrics, violations)
    inst, x0, oracle = setup.inst, setup.x0, setup.oracle

    agd = attach_pareto_gaps(inst, run_agd_convex(oracle, L, x0, T), cfg.tol, cfg.max_iter)
    gd = attach_pareto_gaps(inst, run_gd_constant(oracle, L, x0, T), cfg.tol, cfg.max_iter)

    runs = [
        MethodRun(
            trace=agd,
            curves=[
                BoundCurve.build(
                    Quantity.PARETO_GAP, T, None, lambda t: agd_gap_ceiling(L, R, t), "", "2LR/(t+1)"
                ),
                BoundCurve.build(
                    Quantity.F_GAP, T, None, lambda t: agd_fgap_ceiling(L, R, t), "", "2LR^2/(t+1)^2"
                ),
            ],
            measured={Quantity.PARETO_GAP: agd.gaps, Quantity.F_GAP: agd.f_gaps},
        ),
        MethodRun(
            trace=gd,
            curves=[
                BoundCurve.build(
                    Quantity.MIN_PARETO_GAP,
                    T,
                    None,
                    lambda t: one_step_grad_ceiling(L, R, t),
                    "",
                    "L*R/sqrt(t)",
                ),
                BoundCurve.build(
                    Quantity.MIN_GRAD_NORM,
                    T,
                    None,
                    lambda t: one_step_grad_ceiling(L, R, t),
                    "",
                    "L*R/sqrt(t)",
                ),
            ],
            measured={
                Quantity.MIN_PARETO_GAP: min_running(gd.gaps).tolist(),
                Quantity.MIN_GRAD_NORM: min_running(gd.grad_norms).tolist(),
            },
        ),
    ]

    if cfg.strongly_convex:
        agd_sc = attach_pareto_gaps(
            inst, run_agd_strongly_convex(oracle, L, mu, x0, T), cfg.tol, cfg.max_iter
        )
        runs.append(
            MethodRun(
                trace=agd_sc,
                curves=[
                    BoundCurve.build(
                        Quantity.PARETO_GAP,
                        T,
                        None,
                        lambda t: agd_strong_gap_ceiling(L, mu, R, t),
                        "",
                        "sqrt(L(L+mu))*R*(1-sqrt(mu/L))^(t/2)",
                    ),
                    BoundCurve.build(
                        Quantity.F_GAP,
                        T,
                        None,
                        lambda t: agd_strong_fgap_ceiling(L, mu, R, t),
                        "",
                        "(L+mu)/2*R^2*(1-sqrt(mu/L))^t",
                    ),
                ],
                measured={Quantity.PARETO_GAP: agd_sc.gaps, Quantity.F_GAP: agd_sc.f_gaps},
            )
        )
        accelerated = [
            gap / accelerated_gap_bound(L, mu, R, t) for t, gap in enumerate(agd_sc.gaps)
        ]
        metrics["agd_sc_accelerated_factor_worst_ratio"] = max(accelerated)
        metrics["agd_sc_accelerated_factor_holds"] = max(accelerated) <= 1.0 + 1e-9

    rows, missed = _complexity_rows(cfg, setup)
    violations.extend(missed)

    metrics.update(
        {
            "strongly_convex": cfg.strongly_convex,
            "final_gap": {run.method: run.trace.gaps[-1] for run in runs},
            "final_f_gap": {run.method: run.trace.f_gaps[-1] for run in runs},
            "agd_gap_ceiling_T": agd_gap_ceiling(L, R, T),
            "agd_fgap_ceiling_T": agd_fgap_ceiling(L, R, T),
            "complexity": rows,
        }
    )
    logger.info(
        "upper-agd T=%d (%s): gap AGD final=%.6g, plafond=%.6g.",
        T,
        "fortement convexe" if cfg.strongly_convex else "convexe",
        agd.gaps[-1],
        agd_gap_ceiling(L, R, T),
    )
    return ExperimentResult(config=cfg, runs=runs, metrics=metrics, violations=violations)


UPPER_AGD_EXPERIMENTS = {
    ExperimentName.UPPER_AGD: Experiment(
        name=ExperimentName.UPPER_AGD,
        runner=run_upper_agd,
        description="Bornes supérieures d'AGD sur le gap de Pareto et complexités en ε.",
    )
}
