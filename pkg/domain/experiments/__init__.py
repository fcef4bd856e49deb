# domain/experiments/__init__.py

from __future__ import annotations

import logging
import time
from typing import Dict

from .base import (
    Experiment,
    ExperimentConfig,
    ExperimentConfigError,
    ExperimentName,
    ExperimentResult,
    MethodRun,
    load_config,
)
from .oblivious import OBLIVIOUS_EXPERIMENTS
from .strongly_convex import STRONGLY_CONVEX_EXPERIMENTS
from .universal import UNIVERSAL_EXPERIMENTS
from .upper_agd import UPPER_AGD_EXPERIMENTS

logger = logging.getLogger(__name__)

# Dictionnaire global de toutes les expériences disponibles
ALL_EXPERIMENTS: Dict[ExperimentName, Experiment] = {
    **STRONGLY_CONVEX_EXPERIMENTS,
    **OBLIVIOUS_EXPERIMENTS,
    **UNIVERSAL_EXPERIMENTS,
    **UPPER_AGD_EXPERIMENTS,
}

logger.debug(
    "ALL_EXPERIMENTS initialisé avec %d expériences: %s",
    len(ALL_EXPERIMENTS),
    [name.value for name in ALL_EXPERIMENTS.keys()],
)


def get_experiment(name: ExperimentName) -> Experiment:
    """
    Récupère une expérience à partir de son enum ExperimentName.
    Lève KeyError si l'expérience n'existe pas.
    """
    return ALL_EXPERIMENTS[name]


def list_experiments() -> Dict[ExperimentName, Experiment]:
    """Copie du registre, pour itérer sans le modifier."""
    return dict(ALL_EXPERIMENTS)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """
    Exécute l'expérience décrite par cfg, confronte chaque trace à ses courbes de bornes
    et renvoie le résultat avec ses violations et sa durée.

    Les erreurs de solveur (ConvergenceError, MethodError, PolynomialError) remontent
    telles quelles ; l'appelant décide du code de sortie.
    """
    experiment = get_experiment(cfg.experiment)
    logger.info("Expérience '%s' : T=%d, seed=%d.", cfg.experiment.value, cfg.T, cfg.seed)

    start = time.perf_counter()
    result = experiment.runner(cfg).collect()
    result.runtime_ms = (time.perf_counter() - start) * 1000.0

    if result.passed:
        logger.info(
            "Expérience '%s' OK en %.1f ms.", cfg.experiment.value, result.runtime_ms
        )
    else:
        logger.warning(
            "Expérience '%s' : %d violations.", cfg.experiment.value, len(result.violations)
        )
    return result


__all__ = [
    "ALL_EXPERIMENTS",
    "Experiment",
    "ExperimentConfig",
    "ExperimentConfigError",
    "ExperimentName",
    "ExperimentResult",
    "MethodRun",
    "get_experiment",
    "list_experiments",
    "load_config",
    "run_experiment",
]
