# domain/appendix_checks.py

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Optional

import numpy as np
from tqdm import tqdm

from domain.models import StepSchedule
from domain.polynomials import (
    ChebyshevFrame,
    chebyshev_T,
    constant_schedule_extremal,
    grid_max_abs_zeta_p,
    markov_floor,
    product_extremal,
    product_values,
    random_residual_polynomials,
)

logger = logging.getLogger(__name__)

PRODUCT_MAX_FACTORS = 50
SCHEDULE_MAX_T = 50
CONSTANT_MAX_T = 200
MARKOV_MAX_DEGREE = 20
CHEBYSHEV_MAX_DEGREE = 200


@dataclass
class CheckReport:
    """
    Bilan d'une suite de propriétés.

    - worst_margin : plus petite marge normalisée rencontrée (négative = échec)
    """

    name: str
    trials: int
    failures: int
    worst_margin: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


class _Tally:
    def __init__(self, name: str, tolerance: float) -> None:
        self.name = name
        self.tolerance = tolerance
        self.trials = 0
        self.failures = 0
        self.worst = math.inf

    def add(self, margin: float) -> None:
        self.trials += 1
        self.worst = min(self.worst, margin)
        if not margin >= -self.tolerance:
            self.failures += 1
            logger.warning("%s: échec (marge %.3e).", self.name, margin)

    def report(self) -> CheckReport:
        return CheckReport(self.name, self.trials, self.failures, self.worst)


def _progress(iterable, name: str, progress: bool):
    return tqdm(iterable, desc=name, disable=not progress, leave=False)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def check_product_inequality(
    trials: int, rng: np.random.Generator, progress: bool = False
) -> CheckReport:
    """∏(1 − x_i) >= 1 − Σx_i pour des x_i dans [0, 1]."""
    tally = _Tally("product_inequality", 1e-12)
    for _ in _progress(range(trials), tally.name, progress):
        r = int(rng.integers(1, PRODUCT_MAX_FACTORS + 1))
        x = rng.uniform(0.0, 1.0, size=r)
        tally.add(float(np.prod(1.0 - x) - (1.0 - x.sum())))
    return tally.report()


def check_product_extremal_floor(
    trials: int, rng: np.random.Generator, progress: bool = False, L: float = 1.0
) -> CheckReport:
    """max ζ·∏(1 − α_k ζ) >= L/(4(T+1)) pour des calendriers aléatoires plafonnés."""
    tally = _Tally("product_extremal_floor", 1e-9)
    for k in _progress(range(trials), tally.name, progress):
        T = k % SCHEDULE_MAX_T + 1
        _, value = product_extremal(StepSchedule.random(L, T, rng), L)
        tally.add(value / (L / (4.0 * (T + 1))) - 1.0)
    return tally.report()


def check_constant_schedule(
    trials: int, rng: np.random.Generator, progress: bool = False, L: float = 1.0
) -> CheckReport:
    """
    Calendrier constant 1/L : l'extrémal numérique vaut (L/(T+1))(1 − 1/(T+1))^T à 1e−12
    et tient entre L/(e(T+1)) et (L/(T+1))·e^{−T/(T+1)}.
    """
    del rng
    tally = _Tally("constant_schedule", 0.0)
    for k in _progress(range(trials), tally.name, progress):
        T = k % CONSTANT_MAX_T + 1
        exact = constant_schedule_extremal(L, T)
        _, value = product_extremal(StepSchedule.constant(L, T), L)
        agreement = 1e-12 - abs(value - exact) / exact
        floor = exact / (L / (math.e * (T + 1))) - 1.0
        ceiling = 1.0 - exact / (L * math.exp(-T / (T + 1)) / (T + 1))
        tally.add(min(agreement, floor, ceiling))
    return tally.report()


def check_monotonicity(
    trials: int, rng: np.random.Generator, progress: bool = False, L: float = 1.0
) -> CheckReport:
    """s ↦ ζ·∏_{k<s}(1 − α_k ζ) est non croissante pour un calendrier plafonné."""
    tally = _Tally("monotonicity", 1e-15)
    for _ in _progress(range(trials), tally.name, progress):
        T = int(rng.integers(1, SCHEDULE_MAX_T + 1))
        alphas = StepSchedule.random(L, T, rng).alphas
        zeta = float(rng.uniform(0.0, L))
        values = np.array([product_values(alphas[:s], zeta)[0] for s in range(T + 1)])
        tally.add(-float(np.max(np.diff(values))) / max(zeta, np.finfo(float).tiny))
    return tally.report()


def check_markov_floor(
    trials: int, rng: np.random.Generator, progress: bool = False, L: float = 1.0
) -> CheckReport:
    """max_{[0,L]} |ζ p(ζ)| >= L/(2(t+1)²) pour des polynômes résiduels aléatoires."""
    tally = _Tally("markov_floor", 1e-9)
    per_degree = max(1, math.ceil(trials / MARKOV_MAX_DEGREE))
    for t in _progress(range(1, MARKOV_MAX_DEGREE + 1), tally.name, progress):
        for poly in random_residual_polynomials(t, per_degree, L, rng):
            tally.add(grid_max_abs_zeta_p(poly, L) / markov_floor(L, t) - 1.0)
    return tally.report()


def check_rho_identity(
    trials: int, rng: np.random.Generator, progress: bool = False
) -> CheckReport:
    """|ξ₀| + √(ξ₀² − 1) = (√κ+1)/(√κ−1) à 1e−12 près."""
    tally = _Tally("rho_identity", 0.0)
    for _ in _progress(range(trials), tally.name, progress):
        kappa = 10.0 ** rng.uniform(0.1, 6.0)
        frame = ChebyshevFrame(mu=1.0 / kappa, L=1.0)
        tally.add(1e-12 - abs(frame.rho_from_xi0() - frame.rho) / frame.rho)
    return tally.report()


def check_chebyshev_paths(
    trials: int, rng: np.random.Generator, progress: bool = False
) -> CheckReport:
    """Récurrence et forme close de T_t(x) concordent à 1e−10 pour 1 < |x| <= 10³."""
    tally = _Tally("chebyshev_paths", 0.0)
    for _ in _progress(range(trials), tally.name, progress):
        x = math.exp(rng.uniform(1e-6, math.log(1e3))) * rng.choice([-1.0, 1.0])
        # degré borné pour rester sous le plus grand flottant
        t = int(rng.integers(0, min(CHEBYSHEV_MAX_DEGREE, int(700.0 / math.log(2.0 * abs(x)))) + 1))
        closed = chebyshev_T(t, x, path="closed")
        recurrence = chebyshev_T(t, x, path="recurrence")
        tally.add(1e-10 - abs(closed - recurrence) / abs(closed))
    return tally.report()


# ---------------------------------------------------------------------------
# Registre
# ---------------------------------------------------------------------------


class AppendixSuite(NamedTuple):
    check: Callable[..., CheckReport]
    default_trials: int


APPENDIX_SUITES: Dict[str, AppendixSuite] = {
    "product_inequality": AppendixSuite(check_product_inequality, 10_000),
    "product_extremal_floor": AppendixSuite(check_product_extremal_floor, 100 * SCHEDULE_MAX_T),
    "constant_schedule": AppendixSuite(check_constant_schedule, CONSTANT_MAX_T),
    "monotonicity": AppendixSuite(check_monotonicity, 1_000),
    "markov_floor": AppendixSuite(check_markov_floor, 500 * MARKOV_MAX_DEGREE),
    "rho_identity": AppendixSuite(check_rho_identity, 1_000),
    "chebyshev_paths": AppendixSuite(check_chebyshev_paths, 1_000),
}


def run_appendix_checks(
    trials: Optional[int] = None,
    seed: int = 0,
    progress: bool = True,
) -> List[CheckReport]:
    """
    Exécute toutes les suites. trials=None garde le nombre d'essais par défaut de chaque
    suite ; sinon chaque suite fait `trials` essais.
    """
    if trials is not None and trials < 1:
        raise ValueError(f"trials doit être >= 1 (reçu {trials}).")
    rng = np.random.default_rng(seed)
    reports: List[CheckReport] = []
    for name, suite in APPENDIX_SUITES.items():
        report = suite.check(trials or suite.default_trials, rng, progress)
        logger.info(
            "Suite %s: %d essais, %d échecs, marge min %.3e.",
            name,
            report.trials,
            report.failures,
            report.worst_margin,
        )
        reports.append(report)
    return reports
