# domain/validator.py

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Sequence

from domain.bounds import BoundCurve
from domain.models import IterateTrace

logger = logging.getLogger(__name__)

DESCENT_RTOL = 1e-9


@dataclass(frozen=True)
class Violation:
    """
    Une borne non respectée sur une ligne de trace.

    - kind : "floor", "ceiling" ou "descent"
    """

    method: str
    kind: str
    quantity: str
    t: int
    measured: float
    bound: float
    tag: str

    @property
    def margin(self) -> float:
        if self.kind == "floor":
            return self.measured - self.bound
        return self.bound - self.measured

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["margin"] = self.margin
        return data


def check_curve(curve: BoundCurve, measured: Sequence[float], method: str) -> List[Violation]:
    """
    Compare une série mesurée à une courbe de bornes, ligne par ligne.
    Les lignes absentes (arrêt anticipé) ou non définies (NaN) sont ignorées.
    """
    violations: List[Violation] = []
    rows = min(len(measured), len(curve.floor))

    for t in range(rows):
        value = float(measured[t])
        if math.isnan(value):
            continue
        lo = curve.floor[t]
        hi = curve.ceiling[t]
        if math.isfinite(lo) and value < lo * (1.0 - curve.rtol):
            violations.append(
                Violation(method, "floor", curve.quantity.value, t, value, lo, curve.floor_tag)
            )
        if math.isfinite(hi) and value > hi * (1.0 + curve.rtol):
            violations.append(
                Violation(method, "ceiling", curve.quantity.value, t, value, hi, curve.ceiling_tag)
            )

    if violations:
        logger.error(
            "%d violations pour %s (%s): %s",
            len(violations),
            method,
            curve.quantity.value,
            [(v.kind, v.t) for v in violations[:5]],
        )
    return violations


def check_descent_lemma(trace: IterateTrace, L: float) -> List[Violation]:
    """‖∇f(x)‖² <= 2L(f(x) − f⋆)(1 + 1e−9) sur chaque itéré où le f-gap est défini."""
    violations: List[Violation] = []
    for t, (grad_norm, f_gap) in enumerate(zip(trace.grad_norms, trace.f_gaps)):
        if math.isnan(f_gap):
            continue
        bound = 2.0 * L * f_gap * (1.0 + DESCENT_RTOL)
        if grad_norm * grad_norm > bound:
            violations.append(
                Violation(
                    trace.method_tag,
                    "descent",
                    "grad_norm_sq",
                    t,
                    grad_norm * grad_norm,
                    bound,
                    "2L(f-f*)",
                )
            )
    if violations:
        logger.error("Lemme de descente violé pour %s: %d itérés.", trace.method_tag, len(violations))
    else:
        logger.debug("Lemme de descente OK pour %s.", trace.method_tag)
    return violations
