# domain/experiments/universal.py

from __future__ import annotations

import logging
from typing import Any, Dict, List, Tuple

import numpy as np

from domain.bounds import (
    BoundCurve,
    Quantity,
    agd_fgap_ceiling,
    agd_gap_ceiling,
    one_step_grad_ceiling,
    universal_gap_floor,
)
from domain.instances import make_markov_grid_instance
from domain.methods import (
    attach_pareto_gaps,
    min_running,
    mgda_is_monotone,
    run_agd_convex,
    run_chebyshev_iteration,
    run_mgda,
)
from domain.models import MAX_EIGS, IterateTrace
from domain.polynomials import fit_residual_from_trace, grid_max_abs_zeta_p

from .base import (
    Experiment,
    ExperimentConfig,
    ExperimentConfigError,
    ExperimentName,
    ExperimentResult,
    MethodRun,
    lifted_setup,
)

logger = logging.getLogger(__name__)


def markov_grid_size(T: int) -> int:
    return 4 * (T + 1) ** 2


def forced_gaps(
    trace: IterateTrace,
    eigs: np.ndarray,
    e0: np.ndarray,
    L: float,
    R: float,
) -> Tuple[List[float], float]:
    """
    R·max_{ζ∈[0,L]} |ζ p_t(ζ)| pour le polynôme résiduel p_t ajusté à chaque itéré.
    Renvoie aussi le plus grand résidu d'ajustement rencontré.
    """
    dim_v = eigs.size
    forced: List[float] = []
    worst_fit = 0.0
    for t, point in enumerate(trace.points):
        fit = fit_residual_from_trace(eigs, e0, point[:dim_v], t)
        worst_fit = max(worst_fit, fit.fit_residual)
        forced.append(R * grid_max_abs_zeta_p(fit.polynomial, L))
    return forced, worst_fit


def run_universal(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Grille de Markov relevée (cas convexe) ; AGD, MGDA et itération de Chebyshev.
    Pour chaque itéré on ajuste p_t et on certifie max|ζ p_t(ζ)| >= L/(2(t+1)²).
    """
    L, T, R = cfg.L, cfg.T, cfg.R
    n_nodes = markov_grid_size(T)
    if n_nodes > MAX_EIGS:
        raise ExperimentConfigError(
            f"universal: 4(T+1)² = {n_nodes} nœuds dépasse le plafond {MAX_EIGS} (T trop grand)."
        )

    rng = np.random.default_rng(cfg.seed)
    metrics: Dict[str, Any] = {}
    violations: List = []

    g = make_markov_grid_instance(L, T, R, n_nodes)
    setup = lifted_setup(g, cfg, rng, metrics, violations)
    inst, x0, oracle = setup.inst, setup.x0, setup.oracle

    agd = attach_pareto_gaps(inst, run_agd_convex(oracle, L, x0, T), cfg.tol, cfg.max_iter)
    mgda = run_mgda(inst, 1.0 / L, T, cfg.tol, x0, cfg.max_iter)
    cheb = attach_pareto_gaps(
        inst, run_chebyshev_iteration(oracle, L / n_nodes, L, T, x0), cfg.tol, cfg.max_iter
    )

    def floor_curve() -> BoundCurve:
        return BoundCurve.build(
            Quantity.FORCED_GAP,
            T,
            lambda t: universal_gap_floor(L, R, t),
            None,
            "L*R/(2(t+1)^2)",
        )

    runs: List[MethodRun] = []
    worst_fit: Dict[str, float] = {}
    for trace in (agd, mgda, cheb):
        forced, worst = forced_gaps(trace, g.eigs, g.e0, L, R)
        worst_fit[trace.method_tag] = worst
        curves = [floor_curve()]
        measured = {Quantity.FORCED_GAP: forced}
        if trace is agd:
            curves.append(
                BoundCurve.build(
                    Quantity.PARETO_GAP, T, None, lambda t: agd_gap_ceiling(L, R, t), "", "2LR/(t+1)"
                )
            )
            curves.append(
                BoundCurve.build(
                    Quantity.F_GAP, T, None, lambda t: agd_fgap_ceiling(L, R, t), "", "2LR^2/(t+1)^2"
                )
            )
            measured[Quantity.PARETO_GAP] = trace.gaps
            measured[Quantity.F_GAP] = trace.f_gaps
        elif trace is mgda:
            curves.append(
                BoundCurve.build(
                    Quantity.MIN_PARETO_GAP,
                    T,
                    None,
                    lambda t: one_step_grad_ceiling(L, R, t),
                    "",
                    "L*R/sqrt(t)",
                )
            )
            measured[Quantity.MIN_PARETO_GAP] = min_running(trace.gaps).tolist()
        runs.append(MethodRun(trace=trace, curves=curves, measured=measured))

    floor_T = universal_gap_floor(L, R, T)
    metrics.update(
        {
            "n_nodes": n_nodes,
            "floor_T": floor_T,
            "final_forced_gap": {
                run.method: run.measured[Quantity.FORCED_GAP][-1] for run in runs
            },
            "min_forced_over_floor": {
                run.method: min(
                    f / universal_gap_floor(L, R, t)
                    for t, f in enumerate(run.measured[Quantity.FORCED_GAP])
                )
                for run in runs
            },
            "final_gap": {run.method: run.trace.gaps[-1] for run in runs},
            "worst_fit_residual": worst_fit,
            "mgda_monotone": mgda_is_monotone(mgda, cfg.tol),
        }
    )
    logger.info(
        "universal T=%d, %d nœuds: plancher final %.6g, gaps forcés %s.",
        T,
        n_nodes,
        floor_T,
        metrics["final_forced_gap"],
    )
    return ExperimentResult(config=cfg, runs=runs, metrics=metrics, violations=violations)


UNIVERSAL_EXPERIMENTS = {
    ExperimentName.UNIVERSAL: Experiment(
        name=ExperimentName.UNIVERSAL,
        runner=run_universal,
        description="Plancher Ω(1/T²) de toute méthode de l'espace de Krylov (grille de Markov).",
    )
}
