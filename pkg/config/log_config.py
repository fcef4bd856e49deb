# config/log_config.py

from __future__ import annotations

import copy
import logging
import logging.config


LOGGING_CONFIG = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": (
                "%(asctime)s | %(levelname)-8s | %(name)s | "
                "%(funcName)s:%(lineno)d | %(message)s"
            ),
            "datefmt": "%Y-%m-%d %H:%M:%S",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
            "level": "DEBUG",
            "stream": "ext://sys.stderr",
        },
    },
    "loggers": {
        "scipy": {"level": "WARNING"},
    },
    "root": {
        "handlers": ["console"],
        "level": "INFO",
    },
}


def setup_logging(level: int | str = logging.INFO) -> None:
    """
    Initialise la configuration de logging du laboratoire.

    À appeler une seule fois au démarrage (main.py). Les rapports CSV/JSON
    partent sur disque, les logs sur stderr : stdout reste réservé aux tableaux.
    """
    config = copy.deepcopy(LOGGING_CONFIG)
    if isinstance(level, int):
        level = logging.getLevelName(level)
    config["root"]["level"] = level
    logging.config.dictConfig(config)
