# domain/experiments/strongly_convex.py

from __future__ import annotations

import logging
import math
from typing import Any, Dict, List

import numpy as np

from domain.bounds import (
    BoundCurve,
    Quantity,
    accelerated_fgap_bound,
    agd_strong_fgap_ceiling,
    agd_strong_gap_ceiling,
    chebyshev_gap_ceiling,
    gd_strong_gap_ceiling,
    strong_convex_gap_floor,
)
from domain.instances import make_strongly_convex_hard
from domain.methods import (
    attach_pareto_gaps,
    run_agd_strongly_convex,
    run_chebyshev_iteration,
    run_gd_constant,
)
from domain.polynomials import ChebyshevFrame, coefficient_distance, fit_residual_from_trace

from .base import (
    Experiment,
    ExperimentConfig,
    ExperimentName,
    ExperimentResult,
    MethodRun,
    lifted_setup,
)

logger = logging.getLogger(__name__)

# En dessous de ce κ, le plancher μR·v_t n'est appliqué qu'à la dernière ligne.
ROWWISE_FLOOR_KAPPA = 4.0


def run_strongly_convex(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Instance aux nœuds de Chebyshev relevée (cas fortement convexe), puis GD, AGD-sc et
    itération de Chebyshev sur f_{e_1}. Le gap mesuré est 𝒢(x⁽ᵗ⁾).
    """
    L, mu, kappa, T, R = cfg.L, cfg.mu, cfg.kappa, cfg.T, cfg.R
    rng = np.random.default_rng(cfg.seed)
    metrics: Dict[str, Any] = {}
    violations: List = []

    g = make_strongly_convex_hard(L, mu, T, R)
    setup = lifted_setup(g, cfg, rng, metrics, violations)
    inst, x0, oracle = setup.inst, setup.x0, setup.oracle

    def floor(t: int) -> float:
        if kappa >= ROWWISE_FLOOR_KAPPA or t == T:
            return strong_convex_gap_floor(mu, R, kappa, t)
        return math.nan

    gd = attach_pareto_gaps(inst, run_gd_constant(oracle, L, x0, T), cfg.tol, cfg.max_iter)
    agd = attach_pareto_gaps(
        inst, run_agd_strongly_convex(oracle, L, mu, x0, T), cfg.tol, cfg.max_iter
    )
    cheb = attach_pareto_gaps(
        inst, run_chebyshev_iteration(oracle, mu, L, T, x0), cfg.tol, cfg.max_iter
    )

    runs = [
        MethodRun(
            trace=gd,
            curves=[
                BoundCurve.build(
                    Quantity.PARETO_GAP,
                    T,
                    floor,
                    lambda t: gd_strong_gap_ceiling(L, R, kappa, t),
                    "mu*R*v_t",
                    "L*R*(1-1/kappa)^t",
                )
            ],
            measured={Quantity.PARETO_GAP: gd.gaps},
        ),
        MethodRun(
            trace=agd,
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
            measured={Quantity.PARETO_GAP: agd.gaps, Quantity.F_GAP: agd.f_gaps},
        ),
        MethodRun(
            trace=cheb,
            curves=[
                BoundCurve.build(
                    Quantity.PARETO_GAP,
                    T,
                    floor,
                    lambda t: chebyshev_gap_ceiling(L, R, kappa, t),
                    "mu*R*v_t",
                    "L*R*v_t",
                    rtol=1e-6,
                )
            ],
            measured={Quantity.PARETO_GAP: cheb.gaps},
        ),
    ]

    # Polynôme résiduel de l'itération de Chebyshev contre T_T(ξ)/T_T(ξ₀)
    fit = fit_residual_from_trace(g.eigs, g.e0, cheb.points[-1][: inst.dim_v], T)
    expected = ChebyshevFrame(mu=mu, L=L).residual(T)
    floor_T = strong_convex_gap_floor(mu, R, kappa, T)
    ceiling_T = chebyshev_gap_ceiling(L, R, kappa, T)
    accelerated = [
        f / accelerated_fgap_bound(L, mu, R, t) for t, f in enumerate(agd.f_gaps)
    ]

    metrics.update(
        {
            "floor_T": floor_T,
            "chebyshev_ceiling_T": ceiling_T,
            "final_gap": {run.method: run.trace.gaps[-1] for run in runs},
            "chebyshev_sandwich_holds": floor_T * (1.0 - 1e-9)
            <= cheb.gaps[-1]
            <= ceiling_T * (1.0 + 1e-6),
            "gd_above_floor": gd.gaps[-1] > floor_T,
            "agd_sc_final_over_floor": agd.gaps[-1] / floor_T,
            "agd_sc_accelerated_factor_worst_ratio": max(accelerated),
            "agd_sc_accelerated_factor_holds": max(accelerated) <= 1.0 + 1e-9,
            "chebyshev_fit_residual": fit.fit_residual,
            "chebyshev_fit_coeff_error": coefficient_distance(fit.polynomial, expected, L),
        }
    )
    logger.info(
        "strongly-convex κ=%g T=%d: gap Chebyshev=%.6g dans [%.6g, %.6g].",
        kappa,
        T,
        cheb.gaps[-1],
        floor_T,
        ceiling_T,
    )
    return ExperimentResult(config=cfg, runs=runs, metrics=metrics, violations=violations)


STRONGLY_CONVEX_EXPERIMENTS = {
    ExperimentName.STRONGLY_CONVEX: Experiment(
        name=ExperimentName.STRONGLY_CONVEX,
        runner=run_strongly_convex,
        description="Plancher linéaire μR·v_T sur l'instance aux nœuds de Chebyshev.",
    )
}
