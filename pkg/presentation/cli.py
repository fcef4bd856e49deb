# presentation/cli.py

from __future__ import annotations

import argparse
import logging
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from tabulate import tabulate

from config.settings import Settings
from domain.appendix_checks import run_appendix_checks
from domain.experiments import ExperimentConfigError, list_experiments, run_experiment
from domain.methods import MethodError
from domain.polynomials import PolynomialError
from domain.stationarity import ConvergenceError
from infrastructure.config_loader import read_config
from infrastructure.report_writer import ReportError, write_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_SOLVER = 3
EXIT_CONFIG = 4

SOLVER_ERRORS = (ConvergenceError, MethodError, PolynomialError)


@dataclass
class JobOutcome:
    """Bilan d'une configuration exécutée par `lab run`."""

    config: str
    experiment: str
    code: int
    violations: int
    runtime_ms: float
    output: str
    message: str = ""


def build_parser() -> argparse.ArgumentParser:
    experiments = ", ".join(name.value for name in list_experiments())
    parser = argparse.ArgumentParser(
        prog="lab",
        description=f"Laboratoire de bornes de complexité en optimisation multi-objectif ({experiments}).",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Logs au niveau DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Exécute une ou plusieurs configurations JSON")
    run.add_argument("configs", nargs="+", type=Path, help="Fichiers de configuration JSON")
    run.add_argument("--out", type=str, default=None, help="Répertoire de sortie")
    run.add_argument("--seed", type=int, default=None, help="Surcharge de la graine")
    run.add_argument("--tol", type=float, default=None, help="Surcharge de la tolérance")
    run.add_argument("--jobs", type=int, default=1, help="Configurations exécutées en parallèle")

    verify = sub.add_parser("verify-appendix", help="Suites de propriétés des polynômes extrémaux")
    verify.add_argument("--trials", type=int, default=None, help="Essais par suite")
    verify.add_argument("--seed", type=int, default=0, help="Graine")
    verify.add_argument("--no-progress", action="store_true", help="Sans barre de progression")
    return parser


def _output_dir(config: Path, out: Optional[str], many: bool) -> Optional[str]:
    if out is None:
        return None
    return str(Path(out) / config.stem) if many else out


def run_one(
    config: Path,
    settings: Settings,
    out: Optional[str],
    seed: Optional[int],
    tol: Optional[float],
    many: bool,
) -> JobOutcome:
    """
    Charge, exécute et écrit une configuration. Ne lève jamais : l'échec est
    traduit en code de sortie dans le JobOutcome.
    """
    try:
        cfg = read_config(config, settings, _output_dir(config, out, many), seed, tol)
        if out is None:
            cfg.output_dir = str(Path(cfg.output_dir) / config.stem)
    except ExperimentConfigError as exc:
        return JobOutcome(str(config), "?", EXIT_CONFIG, 0, 0.0, "", str(exc).splitlines()[0])

    try:
        result = run_experiment(cfg)
        write_report(result, cfg.output_dir)
    except ExperimentConfigError as exc:
        return JobOutcome(str(config), cfg.experiment.value, EXIT_CONFIG, 0, 0.0, "", str(exc))
    except SOLVER_ERRORS as exc:
        logger.error("Échec solveur pour %s: %s", config, exc)
        return JobOutcome(
            str(config), cfg.experiment.value, EXIT_SOLVER, 0, 0.0, "", f"{type(exc).__name__}: {exc}"
        )
    except ReportError as exc:
        return JobOutcome(str(config), cfg.experiment.value, EXIT_SOLVER, 0, 0.0, "", str(exc))

    code = EXIT_OK if result.passed else EXIT_VIOLATION
    return JobOutcome(
        str(config),
        cfg.experiment.value,
        code,
        len(result.violations),
        result.runtime_ms,
        cfg.output_dir,
    )


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    configs: List[Path] = list(args.configs)
    many = len(configs) > 1
    jobs = max(1, args.jobs)

    def job(path: Path) -> JobOutcome:
        return run_one(path, settings, args.out, args.seed, args.tol, many)

    if jobs == 1 or not many:
        outcomes = [job(path) for path in configs]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(job, configs))

    rows = [
        [o.config, o.experiment, _status(o.code), o.violations, f"{o.runtime_ms:.1f}", o.output or o.message]
        for o in outcomes
    ]
    print(
        tabulate(
            rows,
            headers=["config", "experiment", "statut", "violations", "ms", "sortie"],
            tablefmt="github",
        )
    )
    return max(o.code for o in outcomes)


def _status(code: int) -> str:
    return {
        EXIT_OK: "OK",
        EXIT_VIOLATION: "VIOLATION",
        EXIT_SOLVER: "ÉCHEC SOLVEUR",
        EXIT_CONFIG: "CONFIG",
    }.get(code, str(code))


def cmd_verify_appendix(args: argparse.Namespace) -> int:
    try:
        reports = run_appendix_checks(args.trials, args.seed, progress=not args.no_progress)
    except ValueError as exc:
        logger.error("verify-appendix: %s", exc)
        return EXIT_CONFIG
    except SOLVER_ERRORS as exc:
        logger.error("verify-appendix: échec solveur: %s", exc)
        return EXIT_SOLVER

    rows = [
        [r.name, r.trials, r.failures, f"{r.worst_margin:.3e}", "OK" if r.passed else "ÉCHEC"]
        for r in reports
    ]
    print(
        tabulate(
            rows,
            headers=["suite", "essais", "échecs", "marge min", "statut"],
            tablefmt="github",
        )
    )
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def main(argv: Optional[Sequence[str]], settings: Settings) -> int:
    """
    Point d'entrée de la CLI `lab`. Renvoie le code de sortie :
    0 toutes les bornes tiennent, 2 violation, 3 échec solveur, 4 configuration invalide.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse sort en 2 sur erreur d'usage, qui serait confondu avec une violation
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
        logger.debug("Mode verbeux activé.")

    try:
        if args.command == "run":
            return cmd_run(args, settings)
        return cmd_verify_appendix(args)
    except Exception:
        logger.critical("Erreur inattendue dans la CLI:\n%s", traceback.format_exc())
        return EXIT_SOLVER
