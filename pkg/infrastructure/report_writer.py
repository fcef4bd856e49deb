# infrastructure/report_writer.py

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from domain.experiments import ExperimentResult, MethodRun
from domain.json_utils import dumps
from infrastructure.svg_chart import Series, render_log_chart

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ("t", "f_gap", "grad_norm", "pareto_gap", "floor", "ceiling", "method")


class ReportError(RuntimeError):
    """
    Échec d'écriture des rapports (I/O).
    """


def _cell(value: Any) -> str:
    """repr des flottants (aller-retour exact) ; NaN, inf et absent deviennent une cellule vide."""
    if value is None:
        return ""
    if isinstance(value, float) or hasattr(value, "dtype"):
        f = float(value)
        return repr(f) if math.isfinite(f) else ""
    return str(value)


def _at(values: Sequence[float], t: int) -> Any:
    return values[t] if t < len(values) else None


def trace_rows(runs: Sequence[MethodRun]) -> List[List[str]]:
    rows: List[List[str]] = []
    for run in runs:
        trace = run.trace
        curve = run.primary
        for t in range(trace.T + 1):
            rows.append(
                [
                    str(t),
                    _cell(trace.f_gaps[t]),
                    _cell(trace.grad_norms[t]),
                    _cell(_at(trace.gaps, t)),
                    _cell(_at(curve.floor, t)),
                    _cell(_at(curve.ceiling, t)),
                    run.method,
                ]
            )
    return rows


def bound_summary(runs: Sequence[MethodRun]) -> List[Dict[str, Any]]:
    """
    Pour chaque courbe : statut et plus petites marges (mesure − plancher, plafond − mesure).
    """
    summary: List[Dict[str, Any]] = []
    for run in runs:
        for curve in run.curves:
            measured = run.measured[curve.quantity]
            floor_margin = math.inf
            ceiling_margin = math.inf
            passed = True
            for t in range(min(len(measured), len(curve.floor))):
                value = float(measured[t])
                if math.isnan(value):
                    continue
                lo, hi = curve.floor[t], curve.ceiling[t]
                if math.isfinite(lo):
                    floor_margin = min(floor_margin, value - lo)
                    passed &= value >= lo * (1.0 - curve.rtol)
                if math.isfinite(hi):
                    ceiling_margin = min(ceiling_margin, hi - value)
                    passed &= value <= hi * (1.0 + curve.rtol)
            summary.append(
                {
                    "method": run.method,
                    "quantity": curve.quantity.value,
                    "floor": curve.floor_tag or None,
                    "ceiling": curve.ceiling_tag or None,
                    "passed": passed,
                    "min_floor_margin": floor_margin,
                    "min_ceiling_margin": ceiling_margin,
                }
            )
    return summary


def summary_document(result: ExperimentResult) -> Dict[str, Any]:
    metrics = dict(result.metrics)
    metrics["bounds"] = bound_summary(result.runs)
    return {
        "experiment": result.config.experiment.value,
        "config": result.config.model_dump(mode="json"),
        "metrics": metrics,
        "violations": [v.to_dict() for v in result.violations],
        "runtime_ms": result.runtime_ms,
    }


def chart_series(runs: Sequence[MethodRun]) -> List[Series]:
    series: List[Series] = []
    for run in runs:
        curve = run.primary
        series.append((f"{run.method} {curve.quantity.value}", run.measured[curve.quantity], False))
        if any(math.isfinite(v) for v in curve.floor):
            series.append((f"{run.method} plancher", curve.floor, True))
        if any(math.isfinite(v) for v in curve.ceiling):
            series.append((f"{run.method} plafond", curve.ceiling, True))
    return series


def write_report(result: ExperimentResult, out_dir: Union[str, Path]) -> List[Path]:
    """
    Écrit trace.csv, summary.json et chart.svg (pas de graphique si T = 0) dans out_dir.
    Renvoie la liste des fichiers écrits ; lève ReportError en cas d'échec I/O.
    """
    out = Path(out_dir)
    written: List[Path] = []
    try:
        out.mkdir(parents=True, exist_ok=True)

        csv_path = out / "trace.csv"
        with csv_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(TRACE_COLUMNS)
            writer.writerows(trace_rows(result.runs))
        written.append(csv_path)

        summary_path = out / "summary.json"
        summary_path.write_text(dumps(summary_document(result)), encoding="utf-8")
        written.append(summary_path)

        T = max((run.trace.T for run in result.runs), default=0)
        if T > 0:
            svg = render_log_chart(chart_series(result.runs), result.config.experiment.value)
            if svg is not None:
                chart_path = out / "chart.svg"
                chart_path.write_text(svg, encoding="utf-8")
                written.append(chart_path)
        else:
            logger.debug("T = 0 : pas de graphique.")

    except OSError as exc:
        logger.error("Écriture des rapports impossible dans %s: %s", out, exc)
        raise ReportError(f"Écriture des rapports impossible dans {out}: {exc}") from exc

    logger.info("Rapports écrits dans %s: %s", out, [p.name for p in written])
    return written
