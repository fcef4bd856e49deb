# domain/instances.py

from __future__ import annotations

import logging
import math
from typing import Sequence, Tuple, Union

import numpy as np

from domain.models import (
    InstanceError,
    MooLiftedInstance,
    Point,
    ScheduleError,
    SpectralQuadratic,
    StepSchedule,
)
from domain.polynomials import product_extremal
from domain.stationarity import dist_to_hull

logger = logging.getLogger(__name__)

ANCHOR_DRAWS = 10


def _require_finite(**values: float) -> None:
    bad = [name for name, v in values.items() if not math.isfinite(v)]
    if bad:
        logger.error("Paramètres non finis: %s", bad)
        raise InstanceError(f"Paramètres non finis: {', '.join(bad)}.")


# ---------------------------------------------------------------------------
# Instances quadratiques difficiles
# ---------------------------------------------------------------------------


def make_strongly_convex_hard(L: float, mu: float, T: int, R: float) -> SpectralQuadratic:
    """
    Spectre aux T+1 nœuds d'alternance de Chebyshev sur [μ, L] :
        ζ_j = (L+μ)/2 − ((L−μ)/2)·cos(jπ/T),  j = 0..T
    avec une masse égale R/√(T+1) sur chaque nœud.
    """
    _require_finite(L=L, mu=mu, R=R)
    if mu <= 0.0:
        raise InstanceError(f"μ doit être > 0 pour l'instance fortement convexe (reçu {mu}).")
    if L < mu:
        raise InstanceError(f"L={L} doit être >= μ={mu}.")
    if T < 1:
        raise InstanceError(f"T doit être >= 1 (reçu {T}).")
    if R <= 0.0:
        raise InstanceError(f"R doit être > 0 (reçu {R}).")

    j = np.arange(T + 1)
    nodes = 0.5 * (L + mu) - 0.5 * (L - mu) * np.cos(j * np.pi / T)
    nodes = np.clip(nodes, mu, L)
    nodes[0] = mu
    nodes[-1] = L

    e0 = np.full(T + 1, R / math.sqrt(T + 1))
    logger.info("Instance fortement convexe: κ=%g, T=%d, R=%g.", L / mu, T, R)
    return SpectralQuadratic(eigs=nodes, e0=e0, mu_bound=mu, L_bound=L)


def make_convex_hard_for_schedule(L: float, schedule: StepSchedule, R: float) -> SpectralQuadratic:
    """
    Instance 1-D dont la valeur propre maximise ζ·∏(1 − α_k ζ) sur [0, L].
    """
    _require_finite(L=L, R=R)
    if L <= 0.0 or R <= 0.0:
        raise InstanceError(f"L et R doivent être > 0 (reçu L={L}, R={R}).")
    if np.any(schedule.alphas > (1.0 / L) * (1.0 + 1e-12)):
        raise ScheduleError(f"Calendrier hors du plafond 1/L={1.0 / L}.")

    zeta_star, value = product_extremal(schedule, L)
    logger.info(
        "Instance convexe pour un calendrier de %d pas: ζ⋆=%.6g, Φ(ζ⋆)=%.6g.",
        len(schedule),
        zeta_star,
        value,
    )
    return SpectralQuadratic(eigs=[zeta_star], e0=[R], mu_bound=0.0, L_bound=L)


def make_markov_grid_instance(L: float, T: int, R: float, n_nodes: int) -> SpectralQuadratic:
    """
    Grille uniforme ζ_k = kL/n (k = 1..n) de (0, L], masse égale, ‖e0‖ = R.
    La grille doit compter au moins 4(T+1)² nœuds.
    """
    _require_finite(L=L, R=R)
    if L <= 0.0 or R <= 0.0:
        raise InstanceError(f"L et R doivent être > 0 (reçu L={L}, R={R}).")
    if T < 0:
        raise InstanceError(f"T doit être >= 0 (reçu {T}).")
    floor = 4 * (T + 1) ** 2
    if n_nodes < floor:
        raise InstanceError(f"Grille trop grossière: {n_nodes} nœuds < 4(T+1)² = {floor}.")

    eigs = L * np.arange(1, n_nodes + 1) / n_nodes
    eigs[-1] = L
    e0 = np.full(n_nodes, R / math.sqrt(n_nodes))
    logger.info("Instance de Markov: L=%g, T=%d, %d nœuds.", L, T, n_nodes)
    return SpectralQuadratic(eigs=eigs, e0=e0, mu_bound=0.0, L_bound=L)


def make_random_quadratic(
    L: float,
    mu: float,
    n: int,
    R: float,
    rng: np.random.Generator,
) -> SpectralQuadratic:
    """Spectre aléatoire dans [μ, L] contenant les deux extrémités, direction initiale aléatoire."""
    _require_finite(L=L, mu=mu, R=R)
    if n < 1:
        raise InstanceError(f"n doit être >= 1 (reçu {n}).")
    if not 0.0 <= mu <= L or L <= 0.0 or R <= 0.0:
        raise InstanceError(f"Paramètres incohérents (L={L}, μ={mu}, R={R}).")

    eigs = rng.uniform(mu, L, size=n)
    eigs[-1] = L
    if n > 1:
        eigs[0] = mu
    direction = rng.standard_normal(n)
    e0 = R * direction / np.linalg.norm(direction)
    return SpectralQuadratic(eigs=eigs, e0=e0, mu_bound=mu, L_bound=L)


# ---------------------------------------------------------------------------
# Relèvement multi-objectif
# ---------------------------------------------------------------------------


def default_anchors(m: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    """
    m ancres gaussiennes dans R^{m−1}, affinement indépendantes et deux à deux distinctes.
    """
    if m < 2:
        raise InstanceError(f"Au moins 2 objectifs requis (reçu m={m}).")
    for attempt in range(ANCHOR_DRAWS):
        anchors = scale * rng.standard_normal((m, m - 1))
        rank = np.linalg.matrix_rank(anchors[1:] - anchors[0])
        if rank == m - 1 and len({row.tobytes() for row in anchors}) == m:
            return anchors
        logger.warning("Tirage d'ancres dégénéré (tentative %d, rang %d).", attempt + 1, rank)
    raise InstanceError(f"Impossible de tirer {m} ancres affinement indépendantes.")


def lift_to_moo(
    g: SpectralQuadratic,
    anchors: Union[Sequence[Sequence[float]], np.ndarray],
    strongly_convex: bool,
) -> MooLiftedInstance:
    """
    f_i(x) = g(x_V) + (γ/2)‖x_W − a_i‖², γ = μ si fortement convexe, sinon L.
    """
    if strongly_convex != g.strongly_convex:
        logger.error(
            "Drapeau strongly_convex=%s incohérent avec μ=%g.", strongly_convex, g.mu_bound
        )
        raise InstanceError(
            f"strongly_convex={strongly_convex} incohérent avec mu_bound={g.mu_bound}."
        )
    gamma = g.mu_bound if strongly_convex else g.L_bound
    inst = MooLiftedInstance(g=g, anchors=anchors, gamma=gamma)
    logger.debug(
        "Instance relevée: m=%d, dim(V)=%d, dim(W)=%d, γ=%g.",
        inst.m,
        inst.dim_v,
        inst.dim_w,
        inst.gamma,
    )
    return inst


def initial_point(inst: MooLiftedInstance) -> Point:
    """x⁽⁰⁾ = (e0, a_1) : à distance exactement R de l'ensemble de Pareto."""
    return Point(v_part=inst.g.e0, w_part=inst.anchors[0])


def oracle_eval(
    inst: MooLiftedInstance,
    i: int,
    x: Union[Point, np.ndarray],
) -> Tuple[float, Point]:
    """(f_i(x), ∇f_i(x)) pour un indice d'objectif 0 <= i < m."""
    return inst.objective(i, x)


def dist_to_pareto(inst: MooLiftedInstance, x: Union[Point, np.ndarray]) -> float:
    """√(‖x_V − x⋆_V‖² + dist(x_W, conv{a_i})²)."""
    point = inst.split(x)
    return math.hypot(
        float(np.linalg.norm(point.v_part)),
        dist_to_hull(point.w_part, inst.anchors),
    )
