# tests/test_bounds_validator.py

from __future__ import annotations

import math

import pytest

from domain.bounds import (
    BoundCurve,
    Quantity,
    agd_gap_ceiling,
    agd_strong_gap_ceiling,
    chebyshev_gap_ceiling,
    constant_schedule_e_floor,
    constant_schedule_exp_ceiling,
    constant_schedule_gap_ceiling,
    oblivious_gap_floor,
    one_step_grad_ceiling,
    strong_convex_gap_floor,
    universal_gap_floor,
)
from domain.models import IterateTrace
from domain.validator import Violation, check_curve, check_descent_lemma


def test_formula_values():
    assert strong_convex_gap_floor(1.0, 1.0, 9.0, 2) == pytest.approx(8.0 / 17.0)
    assert chebyshev_gap_ceiling(9.0, 1.0, 9.0, 2) == pytest.approx(72.0 / 17.0)
    assert agd_gap_ceiling(1.0, 1.0, 3) == 0.5
    assert oblivious_gap_floor(1.0, 2.0, 3) == 0.125
    assert universal_gap_floor(2.0, 1.0, 1) == 0.25
    assert one_step_grad_ceiling(1.0, 1.0, 0) == 1.0
    assert one_step_grad_ceiling(1.0, 1.0, 4) == 0.5
    assert agd_strong_gap_ceiling(1.0, 0.25, 1.0, 2) == pytest.approx(math.sqrt(1.25) * 0.5)


def test_constant_schedule_bounds_are_ordered():
    for T in range(1, 100):
        low = constant_schedule_e_floor(1.0, 1.0, T)
        exact = constant_schedule_gap_ceiling(1.0, 1.0, T)
        high = constant_schedule_exp_ceiling(1.0, 1.0, T)
        assert oblivious_gap_floor(1.0, 1.0, T) < low < exact < high


def test_build_fills_nan_for_missing_side():
    curve = BoundCurve.build(Quantity.PARETO_GAP, 3, None, lambda t: 1.0)
    assert curve.T == 3
    assert all(math.isnan(v) for v in curve.floor)
    assert curve.ceiling == [1.0] * 4
    assert curve.is_consistent()


def test_curve_lengths_must_match():
    with pytest.raises(ValueError):
        BoundCurve(Quantity.F_GAP, floor=[0.0], ceiling=[1.0, 2.0])


def test_inconsistent_curve_is_flagged():
    curve = BoundCurve.build(Quantity.F_GAP, 1, lambda t: 2.0, lambda t: 1.0)
    assert not curve.is_consistent()


def test_check_curve_reports_both_sides():
    curve = BoundCurve.build(
        Quantity.PARETO_GAP, 2, lambda t: 1.0, lambda t: 3.0, "lo", "hi", rtol=1e-9
    )
    violations = check_curve(curve, [0.5, 2.0, 4.0], "gd")
    assert [(v.kind, v.t) for v in violations] == [("floor", 0), ("ceiling", 2)]
    assert violations[0].tag == "lo"
    assert violations[0].margin == pytest.approx(-0.5)
    assert violations[1].margin == pytest.approx(-1.0)


def test_check_curve_tolerates_relative_slack_and_nan():
    curve = BoundCurve.build(Quantity.PARETO_GAP, 2, lambda t: 1.0, lambda t: 1.0, rtol=1e-6)
    assert check_curve(curve, [1.0 - 1e-8, math.nan, 1.0 + 1e-8], "agd") == []


def test_check_curve_ignores_missing_rows():
    curve = BoundCurve.build(Quantity.PARETO_GAP, 5, lambda t: 1.0, None)
    assert check_curve(curve, [2.0, 2.0], "mgda") == []


def test_violation_serialization():
    violation = Violation("gd", "ceiling", "f_gap", 3, 2.0, 1.5, "2LR^2/(t+1)^2")
    data = violation.to_dict()
    assert data["method"] == "gd"
    assert data["margin"] == pytest.approx(-0.5)


def test_descent_lemma_detects_violation():
    trace = IterateTrace(method_tag="bad")
    trace.record([0.0], fval=0.0, f_gap=0.5, grad_norm=1.0)
    trace.record([0.0], fval=0.0, f_gap=0.1, grad_norm=1.0)
    trace.record([0.0], fval=0.0, f_gap=math.nan, grad_norm=1.0)
    violations = check_descent_lemma(trace, 1.0)
    assert [(v.kind, v.t) for v in violations] == [("descent", 1)]
