# main.py

from __future__ import annotations

import logging
import sys
import traceback

from config.log_config import setup_logging
from config.settings import load_settings
from presentation.cli import EXIT_CONFIG, main as cli_main


def main() -> None:
    """
    Point d'entrée principal du laboratoire (`lab`).

    - Initialise le logging
    - Charge la configuration (Settings)
    - Délègue à la CLI et sort avec son code
    """
    # ------------------------------------------------------------------
    # Logging
    # ------------------------------------------------------------------
    setup_logging(logging.INFO)
    logger = logging.getLogger(__name__)

    # ------------------------------------------------------------------
    # Chargement Settings
    # ------------------------------------------------------------------
    try:
        settings = load_settings()
        logging.getLogger().setLevel(settings.log_level)
        logger.debug("Settings chargés: %r", settings)
    except Exception as exc:
        logger.critical(
            "Impossible de charger la configuration (Settings). Erreur: %s",
            exc,
        )
        sys.exit(EXIT_CONFIG)

    # ------------------------------------------------------------------
    # CLI
    # ------------------------------------------------------------------
    try:
        code = cli_main(sys.argv[1:], settings)

    except KeyboardInterrupt:
        logger.warning("Interruption clavier - fermeture.")
        sys.exit(130)

    except Exception:
        logger.critical(
            "Erreur fatale inattendue:\n%s",
            traceback.format_exc(),
        )
        sys.exit(1)

    sys.exit(code)


if __name__ == "__main__":
    main()
