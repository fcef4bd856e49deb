# infrastructure/config_loader.py

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from config.settings import Settings
from domain.experiments import ExperimentConfig, ExperimentConfigError, load_config
from domain.json_utils import safe_json_parse

logger = logging.getLogger(__name__)


def read_config(
    path: Union[str, Path],
    settings: Optional[Settings] = None,
    out: Optional[str] = None,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
) -> ExperimentConfig:
    """
    Lit un fichier de configuration JSON et applique les surcharges.

    Priorité : option CLI > fichier > Settings (environnement) > défaut du modèle.
    Lève ExperimentConfigError si le fichier est illisible ou la configuration invalide.
    """
    path = Path(path)
    logger.debug("Lecture de la configuration %s.", path)

    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        logger.error("Fichier de configuration illisible: %s (%s)", path, exc)
        raise ExperimentConfigError(f"Fichier de configuration illisible: {path}") from exc

    try:
        data: Dict[str, Any] = safe_json_parse(text)
    except ValueError as exc:
        raise ExperimentConfigError(f"JSON invalide dans {path}: {exc}") from exc

    if settings is not None:
        data.setdefault("tol", settings.tol)
        data.setdefault("max_iter", settings.max_iter)
        data.setdefault("output_dir", settings.output_dir)

    overrides = {"output_dir": out, "seed": seed, "tol": tol}
    for key, value in overrides.items():
        if value is not None:
            logger.debug("Surcharge CLI %s=%r (fichier: %r).", key, value, data.get(key))
            data[key] = value

    cfg = load_config(data)
    logger.info(
        "Configuration '%s' chargée: experiment=%s, T=%d, seed=%d.",
        path.name,
        cfg.experiment.value,
        cfg.T,
        cfg.seed,
    )
    return cfg
