# domain/experiments/base.py

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from config.settings import DEFAULT_MAX_ITER, DEFAULT_OUTPUT_DIR, DEFAULT_TOL
from domain.bounds import BoundCurve, Quantity
from domain.instances import default_anchors, dist_to_pareto, initial_point, lift_to_moo
from domain.methods import ScalarizedOracle, initial_radius, scalarize
from domain.models import IterateTrace, MooLiftedInstance, SimplexWeights, SpectralQuadratic
from domain.validator import Violation, check_curve, check_descent_lemma

logger = logging.getLogger(__name__)

CALIBRATION_RTOL = 1e-12


class ExperimentConfigError(ValueError):
    """
    Configuration d'expérience invalide ou incohérente.
    """


class ExperimentName(str, Enum):
    """
    Nom logique des expériences canoniques.
    """

    STRONGLY_CONVEX = "strongly-convex"
    OBLIVIOUS = "oblivious"
    UNIVERSAL = "universal"
    UPPER_AGD = "upper-agd"


class ExperimentConfig(BaseModel):
    """
    Configuration d'une expérience, validée depuis le fichier JSON.

    L, mu et kappa sont résolus entre eux : deux valeurs suffisent, la troisième est
    déduite ; si les trois sont fournies, κ = L/μ doit tenir. Sans L, on prend L = 1.
    """

    model_config = ConfigDict(extra="forbid")

    experiment: ExperimentName
    L: Optional[float] = Field(default=None, gt=0)
    mu: Optional[float] = Field(default=None, ge=0)
    kappa: Optional[float] = Field(default=None, gt=0)
    T: int = Field(ge=1)
    R: float = Field(default=1.0, gt=0)
    m: int = Field(default=2, ge=2)
    seed: int = 0
    tol: float = Field(default=DEFAULT_TOL, gt=0)
    max_iter: int = Field(default=DEFAULT_MAX_ITER, ge=1)
    output_dir: str = DEFAULT_OUTPUT_DIR
    schedule: Union[Literal["constant", "random"], List[float]] = "constant"
    epsilons: List[float] = Field(default_factory=lambda: [0.1, 0.01])
    n_eigs: int = Field(default=50, ge=1)
    anchor_scale: float = Field(default=1.0, gt=0)

    @model_validator(mode="after")
    def _resolve_constants(self) -> "ExperimentConfig":
        L, mu, kappa = self.L, self.mu, self.kappa

        if kappa is not None:
            if L is not None and mu is not None:
                if mu == 0.0 or abs(L / mu - kappa) > 1e-12 * kappa:
                    raise ValueError(f"kappa={kappa} incohérent avec L/mu={L}/{mu}.")
            elif L is not None:
                mu = L / kappa
            elif mu is not None:
                L = mu * kappa
            else:
                L = 1.0
                mu = L / kappa
        if L is None:
            L = 1.0
        if mu is not None and mu > L:
            raise ValueError(f"mu={mu} dépasse L={L}.")
        if mu is not None and mu > 0.0:
            kappa = L / mu

        self.L, self.mu, self.kappa = L, mu, kappa

        if self.experiment == ExperimentName.STRONGLY_CONVEX:
            if mu is None or mu <= 0.0:
                raise ValueError("strongly-convex requiert mu > 0 (ou kappa).")
            if not kappa > 1.0:
                raise ValueError(f"strongly-convex requiert κ > 1 (reçu κ={kappa}).")
        if self.experiment == ExperimentName.UPPER_AGD and self.strongly_convex and not kappa > 1.0:
            raise ValueError(f"upper-agd fortement convexe requiert κ > 1 (reçu κ={kappa}).")
        if isinstance(self.schedule, list):
            if len(self.schedule) < self.T:
                raise ValueError(f"schedule explicite de {len(self.schedule)} pas pour T={self.T}.")
            if any(not 0.0 <= a <= (1.0 / L) * (1.0 + 1e-12) for a in self.schedule):
                raise ValueError(f"schedule explicite hors de [0, 1/L={1.0 / L}].")
        if any(not (e > 0.0 and math.isfinite(e)) for e in self.epsilons):
            raise ValueError("epsilons doit contenir des valeurs > 0.")
        return self

    @property
    def strongly_convex(self) -> bool:
        return self.mu is not None and self.mu > 0.0


def load_config(data: Dict[str, Any]) -> ExperimentConfig:
    """Valide un dict de configuration ; lève ExperimentConfigError."""
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        logger.error("Configuration invalide: %s", exc.errors(include_url=False))
        raise ExperimentConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Résultats
# ---------------------------------------------------------------------------


@dataclass
class MethodRun:
    """
    Une exécution de méthode et ses courbes de bornes.
    La première courbe est la courbe principale (colonnes floor/ceiling du CSV).
    """

    trace: IterateTrace
    curves: List[BoundCurve]
    measured: Dict[Quantity, List[float]]

    @property
    def method(self) -> str:
        return self.trace.method_tag

    @property
    def primary(self) -> BoundCurve:
        return self.curves[0]

    def evaluate(self, L: float) -> List[Violation]:
        violations: List[Violation] = []
        for curve in self.curves:
            violations.extend(check_curve(curve, self.measured[curve.quantity], self.method))
        violations.extend(check_descent_lemma(self.trace, L))
        return violations


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: List[MethodRun]
    metrics: Dict[str, Any] = field(default_factory=dict)
    violations: List[Violation] = field(default_factory=list)
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.violations

    def collect(self) -> "ExperimentResult":
        """Évalue toutes les courbes et le lemme de descente."""
        for run in self.runs:
            self.violations.extend(run.evaluate(self.config.L))
        return self


@dataclass
class Experiment:
    """
    Entrée du registre d'expériences.

    - name        : identifiant logique
    - runner      : fonction ExperimentConfig -> ExperimentResult
    - description : résumé affiché par la CLI
    """

    name: ExperimentName
    runner: Callable[[ExperimentConfig], ExperimentResult]
    description: str


# ---------------------------------------------------------------------------
# Mise en place commune
# ---------------------------------------------------------------------------


@dataclass
class LiftedSetup:
    inst: MooLiftedInstance
    x0: np.ndarray
    oracle: ScalarizedOracle


def lifted_setup(
    g: SpectralQuadratic,
    cfg: ExperimentConfig,
    rng: np.random.Generator,
    metrics: Dict[str, Any],
    violations: List[Violation],
) -> LiftedSetup:
    """
    Relève g en instance à m objectifs (ancres gaussiennes), part de x⁽⁰⁾ = (e0, a_1)
    et scalarise avec λ = e_1. Vérifie dist(x⁽⁰⁾, 𝒫) = R_{e_1} = R.
    """
    anchors = default_anchors(cfg.m, cfg.anchor_scale, rng)
    inst = lift_to_moo(g, anchors, strongly_convex=g.strongly_convex)
    weights = SimplexWeights.vertex(inst.m, 0)
    x0 = initial_point(inst).as_vector()

    dist = dist_to_pareto(inst, x0)
    radius = initial_radius(inst, x0, weights)
    metrics["instance"] = {
        "m": inst.m,
        "dim_v": inst.dim_v,
        "dim_w": inst.dim_w,
        "gamma": inst.gamma,
        "hull_dimension": inst.hull_dimension(),
        "objectives_distinct": inst.objectives_distinct(),
        "dist_to_pareto": dist,
        "R_e1": radius,
    }
    for name, value in (("dist_to_pareto", dist), ("R_e1", radius)):
        if abs(value - cfg.R) > CALIBRATION_RTOL * cfg.R:
            violations.append(
                Violation("setup", "calibration", name, 0, value, cfg.R, "R")
            )
            logger.error("Calibration %s=%r ≠ R=%r.", name, value, cfg.R)

    return LiftedSetup(inst=inst, x0=x0, oracle=scalarize(inst, weights))