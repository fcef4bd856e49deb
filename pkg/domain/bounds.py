# domain/bounds.py

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np

from domain.polynomials import (
    constant_schedule_extremal,
    markov_floor,
    strong_convex_extremal_value,
    strong_convex_rate,
)

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-9


class Quantity(str, Enum):
    """
    Grandeur mesurée à laquelle une courbe de bornes s'applique.
    """

    PARETO_GAP = "pareto_gap"
    MIN_PARETO_GAP = "min_pareto_gap"
    MIN_GRAD_NORM = "min_grad_norm"
    F_GAP = "f_gap"
    FORCED_GAP = "forced_gap"


@dataclass
class BoundCurve:
    """
    Planchers et plafonds théoriques par itération t = 0..T (NaN quand non définis).

    - quantity    : grandeur mesurée
    - floor_tag   : formule du plancher (ex. "mu*R*v_t")
    - ceiling_tag : formule du plafond
    - rtol        : tolérance relative appliquée lors de la vérification
    """

    quantity: Quantity
    floor: List[float] = field(default_factory=list)
    ceiling: List[float] = field(default_factory=list)
    floor_tag: str = ""
    ceiling_tag: str = ""
    rtol: float = DEFAULT_RTOL

    def __post_init__(self) -> None:
        if len(self.floor) != len(self.ceiling):
            raise ValueError(
                f"floor ({len(self.floor)}) et ceiling ({len(self.ceiling)}) de longueurs différentes."
            )

    @property
    def T(self) -> int:
        return len(self.floor) - 1

    def is_consistent(self) -> bool:
        """Plancher <= plafond partout où les deux sont définis."""
        lo = np.asarray(self.floor, dtype=float)
        hi = np.asarray(self.ceiling, dtype=float)
        both = np.isfinite(lo) & np.isfinite(hi)
        return bool(np.all(lo[both] <= hi[both] * (1.0 + self.rtol)))

    @classmethod
    def build(
        cls,
        quantity: Quantity,
        T: int,
        floor: Optional[Callable[[int], float]] = None,
        ceiling: Optional[Callable[[int], float]] = None,
        floor_tag: str = "",
        ceiling_tag: str = "",
        rtol: float = DEFAULT_RTOL,
    ) -> "BoundCurve":
        nan = float("nan")
        curve = cls(
            quantity=quantity,
            floor=[floor(t) if floor else nan for t in range(T + 1)],
            ceiling=[ceiling(t) if ceiling else nan for t in range(T + 1)],
            floor_tag=floor_tag,
            ceiling_tag=ceiling_tag,
            rtol=rtol,
        )
        if not curve.is_consistent():
            logger.warning(
                "Courbe %s incohérente: plancher '%s' au-dessus du plafond '%s'.",
                quantity.value,
                floor_tag,
                ceiling_tag,
            )
        return curve


# ---------------------------------------------------------------------------
# Formules : cas fortement convexe
# ---------------------------------------------------------------------------


def strong_convex_gap_floor(mu: float, R: float, kappa: float, t: int) -> float:
    """μR·v_t avec v_t = 2/(ρ^t + ρ^{−t})."""
    return mu * R * strong_convex_extremal_value(kappa, t)


def chebyshev_gap_ceiling(L: float, R: float, kappa: float, t: int) -> float:
    """LR·v_t."""
    return L * R * strong_convex_extremal_value(kappa, t)


def gd_strong_gap_ceiling(L: float, R: float, kappa: float, t: int) -> float:
    """LR(1 − 1/κ)^t pour GD au pas 1/L."""
    return L * R * (1.0 - 1.0 / kappa) ** t


def nesterov_factor(kappa: float) -> float:
    """1 − √(μ/L), contraction par pas d'AGD à moment constant."""
    return 1.0 - 1.0 / math.sqrt(kappa)


def agd_strong_fgap_ceiling(L: float, mu: float, R: float, t: int) -> float:
    """((L+μ)/2)R²(1 − √(μ/L))^t."""
    return 0.5 * (L + mu) * R * R * nesterov_factor(L / mu) ** t


def agd_strong_gap_ceiling(L: float, mu: float, R: float, t: int) -> float:
    """√(L(L+μ))·R·(1 − √(μ/L))^{t/2}, via ‖∇f‖² <= 2L(f − f⋆)."""
    return math.sqrt(L * (L + mu)) * R * nesterov_factor(L / mu) ** (0.5 * t)


def accelerated_fgap_bound(L: float, mu: float, R: float, t: int) -> float:
    """((L+μ)/2)R²((√κ−1)/(√κ+1))^{2t} (facteur accéléré annoncé, suivi à titre indicatif)."""
    return 0.5 * (L + mu) * R * R * strong_convex_rate(L / mu) ** (2 * t)


def accelerated_gap_bound(L: float, mu: float, R: float, t: int) -> float:
    """√(L(L+μ))·R·((√κ−1)/(√κ+1))^t."""
    return math.sqrt(L * (L + mu)) * R * strong_convex_rate(L / mu) ** t


# ---------------------------------------------------------------------------
# Formules : cas convexe
# ---------------------------------------------------------------------------


def agd_fgap_ceiling(L: float, R: float, t: int) -> float:
    """2LR²/(t+1)²."""
    return 2.0 * L * R * R / (t + 1) ** 2


def agd_gap_ceiling(L: float, R: float, t: int) -> float:
    """2LR/(t+1)."""
    return 2.0 * L * R / (t + 1)


def oblivious_gap_floor(L: float, R: float, T: int) -> float:
    """LR/(4(T+1))."""
    return L * R / (4.0 * (T + 1))


def constant_schedule_gap_ceiling(L: float, R: float, T: int) -> float:
    """R·(L/(T+1))(1 − 1/(T+1))^T."""
    return R * constant_schedule_extremal(L, T)


def constant_schedule_e_floor(L: float, R: float, T: int) -> float:
    """LR/(e(T+1)) : (1 − 1/(T+1))^T >= 1/e, donc le pas constant reste au-dessus."""
    return L * R / (math.e * (T + 1))


def constant_schedule_exp_ceiling(L: float, R: float, T: int) -> float:
    """LR·e^{−T/(T+1)}/(T+1), via 1 − x <= e^{−x}."""
    return L * R * math.exp(-T / (T + 1)) / (T + 1)


def one_step_grad_ceiling(L: float, R: float, t: int) -> float:
    """LR/√t pour t >= 1 ; LR à t = 0."""
    return L * R / math.sqrt(t) if t >= 1 else L * R


def universal_gap_floor(L: float, R: float, t: int) -> float:
    """LR/(2(t+1)²)."""
    return R * markov_floor(L, t)
