# config/settings.py

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000
DEFAULT_OUTPUT_DIR = "runs"
DEFAULT_LOG_LEVEL = "INFO"


@dataclass
class Settings:
    """
    Configuration applicative centrale du laboratoire.

    - tol         : tolérance unique de stationnarité (gap <= tol)
    - max_iter    : plafond d'itérations du solveur de point de norme minimale
    - output_dir  : répertoire racine des rapports
    - log_level   : niveau de log racine (DEBUG, INFO, ...)
    """
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    output_dir: str = DEFAULT_OUTPUT_DIR
    log_level: str = DEFAULT_LOG_LEVEL


def _read_env(name: str) -> str | None:
    raw = os.getenv(name)
    if raw is None:
        return None
    if not raw.strip():
        logger.warning("%s est défini mais vide, utilisation de la valeur par défaut.", name)
        return None
    return raw.strip()


def load_settings() -> Settings:
    """
    Charge la configuration à partir des variables d'environnement.

    Variables prises en compte (toutes optionnelles) :
    - LAB_TOL         (float > 0)
    - LAB_MAX_ITER    (int >= 1)
    - LAB_OUTPUT_DIR
    - LAB_LOG_LEVEL

    Lève RuntimeError si une valeur est présente mais invalide.
    """
    logger.debug("Chargement des Settings depuis les variables d'environnement.")

    try:
        tol = DEFAULT_TOL
        raw_tol = _read_env("LAB_TOL")
        if raw_tol is not None:
            tol = float(raw_tol)
            if not tol > 0.0:
                raise RuntimeError(f"LAB_TOL doit être strictement positif (reçu {raw_tol!r}).")

        max_iter = DEFAULT_MAX_ITER
        raw_iter = _read_env("LAB_MAX_ITER")
        if raw_iter is not None:
            max_iter = int(raw_iter)
            if max_iter < 1:
                raise RuntimeError(f"LAB_MAX_ITER doit être >= 1 (reçu {raw_iter!r}).")

        output_dir = _read_env("LAB_OUTPUT_DIR") or DEFAULT_OUTPUT_DIR

        log_level = (_read_env("LAB_LOG_LEVEL") or DEFAULT_LOG_LEVEL).upper()
        if not isinstance(logging.getLevelName(log_level), int):
            logger.warning(
                "LAB_LOG_LEVEL inconnu (%r), utilisation de '%s'.",
                log_level,
                DEFAULT_LOG_LEVEL,
            )
            log_level = DEFAULT_LOG_LEVEL

        settings = Settings(
            tol=tol,
            max_iter=max_iter,
            output_dir=output_dir,
            log_level=log_level,
        )
        logger.info(
            "Settings chargés (tol=%g, max_iter=%d, output_dir='%s', log_level=%s).",
            settings.tol,
            settings.max_iter,
            settings.output_dir,
            settings.log_level,
        )
        return settings

    except RuntimeError:
        raise
    except ValueError as exc:
        logger.error("Valeur numérique invalide dans l'environnement: %s", exc)
        raise RuntimeError(f"Configuration invalide: {exc}") from exc
    except Exception as exc:
        logger.exception("Erreur inattendue lors du chargement des Settings.")
        raise RuntimeError(
            f"Erreur inattendue lors du chargement de la configuration: {exc}"
        ) from exc
