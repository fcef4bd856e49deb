# tests/test_report_writer.py

from __future__ import annotations

import csv
import json
import math

import pytest

from domain.bounds import BoundCurve, Quantity
from domain.experiments import ExperimentResult, MethodRun, load_config, run_experiment
from domain.models import IterateTrace
from infrastructure.report_writer import (
    TRACE_COLUMNS,
    ReportError,
    bound_summary,
    chart_series,
    write_report,
)
from infrastructure.svg_chart import render_log_chart


@pytest.fixture
def oblivious_result() -> ExperimentResult:
    return run_experiment(load_config({"experiment": "oblivious", "L": 1.0, "T": 4}))


def _read_csv(path):
    with path.open(encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


def test_writes_trace_summary_and_chart(tmp_path, oblivious_result):
    written = write_report(oblivious_result, tmp_path)
    assert [p.name for p in written] == ["trace.csv", "summary.json", "chart.svg"]

    rows = _read_csv(tmp_path / "trace.csv")
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert [row[0] for row in rows[1:]] == ["0", "1", "2", "3", "4"]
    assert {row[-1] for row in rows[1:]} == {"oblivious-gd"}

    summary = json.loads((tmp_path / "summary.json").read_text(encoding="utf-8"))
    assert set(summary) == {"experiment", "config", "metrics", "violations", "runtime_ms"}
    assert summary["experiment"] == "oblivious"
    assert summary["violations"] == []
    assert summary["metrics"]["bounds"][0]["passed"] is True

    svg = (tmp_path / "chart.svg").read_text(encoding="utf-8")
    assert svg.startswith("<svg") or svg.startswith("<?xml")
    assert "polyline" in svg


def test_reports_are_deterministic_except_runtime(tmp_path, oblivious_result):
    again = run_experiment(load_config({"experiment": "oblivious", "L": 1.0, "T": 4}))
    write_report(oblivious_result, tmp_path / "a")
    write_report(again, tmp_path / "b")

    assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()
    first = json.loads((tmp_path / "a" / "summary.json").read_text(encoding="utf-8"))
    second = json.loads((tmp_path / "b" / "summary.json").read_text(encoding="utf-8"))
    first.pop("runtime_ms")
    second.pop("runtime_ms")
    assert first == second


def test_floor_column_follows_primary_curve(tmp_path):
    result = run_experiment(
        load_config({"experiment": "strongly-convex", "L": 4.0, "mu": 1.0, "T": 10})
    )
    write_report(result, tmp_path)
    rows = _read_csv(tmp_path / "trace.csv")[1:]
    assert len(rows) == 3 * 11

    floor_index = TRACE_COLUMNS.index("floor")
    gd_rows = [row for row in rows if row[-1] == "gd"]
    agd_rows = [row for row in rows if row[-1] == "agd-sc"]
    assert all(row[floor_index] for row in gd_rows)
    # AGD-sc n'a pas de plancher propre
    assert all(row[floor_index] == "" for row in agd_rows)


def test_zero_horizon_writes_no_chart(tmp_path, oblivious_result):
    trace = IterateTrace(method_tag="gd")
    trace.record([1.0, 0.0], fval=0.5, f_gap=0.5, grad_norm=1.0, gap=1.0)
    curve = BoundCurve.build(Quantity.PARETO_GAP, 0, None, lambda t: 1.0, "", "L*R")
    result = ExperimentResult(
        config=oblivious_result.config,
        runs=[MethodRun(trace=trace, curves=[curve], measured={Quantity.PARETO_GAP: trace.gaps})],
    )
    written = write_report(result.collect(), tmp_path)
    assert [p.name for p in written] == ["trace.csv", "summary.json"]
    rows = _read_csv(tmp_path / "trace.csv")
    assert rows[1] == ["0", "0.5", "1.0", "1.0", "", "1.0", "gd"]


def test_bound_summary_margins(oblivious_result):
    summary = bound_summary(oblivious_result.runs)
    assert len(summary) == 1
    entry = summary[0]
    assert entry["quantity"] == "min_pareto_gap"
    assert entry["min_floor_margin"] >= 0.0
    assert entry["min_ceiling_margin"] >= 0.0


def test_chart_series_and_empty_chart(oblivious_result):
    series = chart_series(oblivious_result.runs)
    assert [dashed for _, _, dashed in series] == [False, True, True]
    assert render_log_chart([("vide", [math.nan, 0.0], False)], "titre") is None


def test_unwritable_directory_raises(tmp_path, oblivious_result):
    blocker = tmp_path / "fichier"
    blocker.write_text("occupé", encoding="utf-8")
    with pytest.raises(ReportError):
        write_report(oblivious_result, blocker / "sous-dossier")
