# domain/methods.py

from __future__ import annotations

import logging
from typing import Optional, Protocol, Union

import numpy as np

from config.settings import DEFAULT_MAX_ITER, DEFAULT_TOL
from domain.models import (
    AgdState,
    IterateTrace,
    MooLiftedInstance,
    Point,
    ScheduleError,
    SimplexWeights,
    SpectralQuadratic,
    StepSchedule,
)
from domain.stationarity import pareto_gap

logger = logging.getLogger(__name__)


class MethodError(RuntimeError):
    """
    Erreur interne d'une méthode du premier ordre (itéré non fini, paramètres impossibles).
    """


class FirstOrderOracle(Protocol):
    def value(self, x: np.ndarray) -> float: ...

    def gradient(self, x: np.ndarray) -> np.ndarray: ...

    def suboptimality(self, x: np.ndarray) -> float: ...


# ---------------------------------------------------------------------------
# Scalarisation
# ---------------------------------------------------------------------------


class ScalarizedOracle:
    """
    Oracle de f_λ = Σ λ_i f_i sur une instance relevée.

    Avec ā = Σ λ_i a_i :
        f_λ(x)  = g(x_V) + (γ/2) Σ λ_i ‖x_W − a_i‖²
        ∇f_λ(x) = (∇g(x_V), γ(x_W − ā))
        x⋆_λ    = (x⋆_V, ā)
    """

    def __init__(self, inst: MooLiftedInstance, weights: SimplexWeights) -> None:
        if weights.m != inst.m:
            raise MethodError(f"{weights.m} poids pour {inst.m} objectifs.")
        self.inst = inst
        self.weights = weights
        self.center = weights.lam @ inst.anchors

    @property
    def smoothness(self) -> float:
        return self.inst.smoothness

    @property
    def minimizer(self) -> np.ndarray:
        return self.inst.pareto_point(self.weights).as_vector()

    def value(self, x: np.ndarray) -> float:
        return float(self.weights.lam @ self.inst.value_vector(x))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        point = self.inst.split(x)
        grad_w = self.inst.gamma * (point.w_part - self.center)
        return np.concatenate([self.inst.g.gradient(point.v_part), grad_w])

    def suboptimality(self, x: np.ndarray) -> float:
        # f_λ − f_λ⋆ sans soustraction : g(x_V) + (γ/2)‖x_W − ā‖²
        point = self.inst.split(x)
        diff = point.w_part - self.center
        return self.inst.g.value(point.v_part) + 0.5 * self.inst.gamma * float(diff @ diff)


def scalarize(inst: MooLiftedInstance, weights: SimplexWeights) -> ScalarizedOracle:
    return ScalarizedOracle(inst, weights)


def initial_radius(
    inst: MooLiftedInstance,
    x0: Union[Point, np.ndarray],
    weights: SimplexWeights,
) -> float:
    """R_λ = ‖x⁽⁰⁾ − x⋆_λ‖."""
    start = inst.split(x0).as_vector()
    return float(np.linalg.norm(start - inst.pareto_point(weights).as_vector()))


# ---------------------------------------------------------------------------
# Outils communs
# ---------------------------------------------------------------------------


def _record(trace: IterateTrace, oracle: FirstOrderOracle, x: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(x)):
        logger.error("Itéré non fini dans '%s' à t=%d.", trace.method_tag, len(trace.points))
        raise MethodError(f"Itéré non fini dans la méthode '{trace.method_tag}'.")
    grad = oracle.gradient(x)
    trace.record(
        x,
        fval=oracle.value(x),
        f_gap=oracle.suboptimality(x),
        grad_norm=float(np.linalg.norm(grad)),
    )
    return grad


def _start(oracle: FirstOrderOracle, x0: Optional[np.ndarray]) -> np.ndarray:
    if x0 is not None:
        return np.array(x0, dtype=float).reshape(-1)
    if isinstance(oracle, SpectralQuadratic):
        return oracle.x0
    raise MethodError("x0 requis pour un oracle sans point de départ canonique.")


# ---------------------------------------------------------------------------
# Méthodes oblivious à un pas
# ---------------------------------------------------------------------------


def run_oblivious_gd(
    oracle: FirstOrderOracle,
    schedule: StepSchedule,
    x0: Optional[np.ndarray] = None,
    T: Optional[int] = None,
    tag: str = "oblivious-gd",
) -> IterateTrace:
    """x⁽ᵗ⁺¹⁾ = x⁽ᵗ⁾ − α_t ∇f(x⁽ᵗ⁾) sur un calendrier fixé à l'avance."""
    T = len(schedule) if T is None else T
    if T < 0 or len(schedule) < T:
        raise ScheduleError(f"Calendrier de {len(schedule)} pas pour T={T}.")

    trace = IterateTrace(method_tag=tag)
    x = _start(oracle, x0)
    grad = _record(trace, oracle, x)
    for t in range(T):
        x = x - schedule.alphas[t] * grad
        grad = _record(trace, oracle, x)
    logger.debug("%s: %d pas, ‖∇f‖ final=%.3e.", tag, T, trace.grad_norms[-1])
    return trace


def run_gd_constant(
    oracle: FirstOrderOracle,
    L: float,
    x0: Optional[np.ndarray] = None,
    T: int = 0,
) -> IterateTrace:
    return run_oblivious_gd(oracle, StepSchedule.constant(L, T), x0, T, tag="gd")


# ---------------------------------------------------------------------------
# Méthodes accélérées
# ---------------------------------------------------------------------------


def _run_agd(
    oracle: FirstOrderOracle,
    L: float,
    state: AgdState,
    T: int,
    tag: str,
) -> IterateTrace:
    trace = IterateTrace(method_tag=tag)
    _record(trace, oracle, state.x)
    for _ in range(T):
        x_next = state.y - oracle.gradient(state.y) / L
        coef = state.momentum()
        state.y = x_next + coef * (x_next - state.x)
        state.x = x_next
        _record(trace, oracle, state.x)
    logger.debug("%s: %d pas, f-gap final=%.3e.", tag, T, trace.f_gaps[-1])
    return trace


def run_agd_convex(
    oracle: FirstOrderOracle,
    L: float,
    x0: Optional[np.ndarray] = None,
    T: int = 1,
) -> IterateTrace:
    """AGD convexe : t_0 = 1, t_{k+1} = (1+√(1+4t_k²))/2, extrapolation (t_k−1)/t_{k+1}."""
    if not L > 0.0:
        raise MethodError(f"L doit être > 0 (reçu {L}).")
    return _run_agd(oracle, L, AgdState.convex(_start(oracle, x0)), T, "agd")


def run_agd_strongly_convex(
    oracle: FirstOrderOracle,
    L: float,
    mu: float,
    x0: Optional[np.ndarray] = None,
    T: int = 1,
) -> IterateTrace:
    """AGD fortement convexe : moment constant β = (1−q)/(1+q), q = √(μ/L)."""
    if not mu > 0.0:
        raise MethodError(f"μ doit être > 0 pour AGD fortement convexe (reçu {mu}).")
    if L < mu:
        raise MethodError(f"L={L} doit être >= μ={mu}.")
    state = AgdState.strongly_convex(_start(oracle, x0), L, mu)
    return _run_agd(oracle, L, state, T, "agd-sc")


# ---------------------------------------------------------------------------
# Semi-itération de Chebyshev
# ---------------------------------------------------------------------------


def run_chebyshev_iteration(
    oracle: FirstOrderOracle,
    mu: float,
    L: float,
    T: int,
    x0: Optional[np.ndarray] = None,
) -> IterateTrace:
    """
    Méthode semi-itérative de Chebyshev sur [μ, L] (d = (L+μ)/2, c = (L−μ)/2).
    Son polynôme résiduel au pas T est T_T(ξ)/T_T(ξ₀).
    """
    if not mu > 0.0:
        raise MethodError(f"μ doit être > 0 pour l'itération de Chebyshev (reçu {mu}).")
    if L < mu:
        raise MethodError(f"L={L} doit être >= μ={mu}.")

    d = 0.5 * (L + mu)
    c = 0.5 * (L - mu)
    trace = IterateTrace(method_tag="chebyshev")
    x = _start(oracle, x0)
    r = -_record(trace, oracle, x)
    p = np.zeros_like(x)
    alpha = 0.0

    for k in range(T):
        if k == 0:
            p = r.copy()
            alpha = 1.0 / d
        else:
            beta = 0.5 * (c * alpha) ** 2
            if k > 1:
                beta *= 0.5
            alpha = 1.0 / (d - beta / alpha)
            p = r + beta * p
        x = x + alpha * p
        r = -_record(trace, oracle, x)
    return trace


# ---------------------------------------------------------------------------
# MGDA
# ---------------------------------------------------------------------------


def run_mgda(
    inst: MooLiftedInstance,
    step: float,
    T: int,
    tol: float = DEFAULT_TOL,
    x0: Optional[Union[Point, np.ndarray]] = None,
    max_iter: int = DEFAULT_MAX_ITER,
) -> IterateTrace:
    """
    x⁺ = x − step·d, d point de norme minimale des gradients.
    Arrêt anticipé dès que 𝒢(x) <= tol. Le f-gap suit la scalarisation λ_t du certificat.
    """
    if not 0.0 < step <= (1.0 / inst.smoothness) * (1.0 + 1e-12):
        raise MethodError(f"Pas MGDA {step} hors de ]0, 1/L].")

    if x0 is None:
        x = np.concatenate([inst.g.e0, inst.anchors[0]])
    else:
        x = inst.split(x0).as_vector()

    trace = IterateTrace(method_tag="mgda")
    for t in range(T + 1):
        if not np.all(np.isfinite(x)):
            raise MethodError("Itéré MGDA non fini.")
        cert = pareto_gap(inst, x, tol=tol, max_iter=max_iter)
        oracle = ScalarizedOracle(inst, cert.weights)
        trace.record(
            x,
            fval=oracle.value(x),
            f_gap=oracle.suboptimality(x),
            grad_norm=cert.gap,
            gap=cert.gap,
        )
        if cert.gap <= tol:
            logger.info("MGDA stationnaire à t=%d (gap=%.3e).", t, cert.gap)
            break
        if t < T:
            x = x - step * cert.min_point

    if not mgda_is_monotone(trace, tol):
        logger.info("MGDA: suite des gaps non monotone sur cette exécution.")
    return trace


def attach_pareto_gaps(
    inst: MooLiftedInstance,
    trace: IterateTrace,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> IterateTrace:
    """Remplit trace.gaps avec 𝒢(x⁽ᵗ⁾) pour chaque itéré."""
    trace.gaps = [pareto_gap(inst, x, tol=tol, max_iter=max_iter).gap for x in trace.points]
    return trace


def mgda_is_monotone(trace: IterateTrace, tol: float = DEFAULT_TOL) -> bool:
    gaps = trace.gaps
    return all(b <= a * (1.0 + 1e-12) + tol for a, b in zip(gaps, gaps[1:]))


def min_running(values) -> np.ndarray:
    """Minimum courant min_{s<=t} v_s."""
    return np.minimum.accumulate(np.asarray(values, dtype=float))

