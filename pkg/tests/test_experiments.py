# tests/test_experiments.py

from __future__ import annotations

import math

import pytest

from domain.bounds import Quantity, strong_convex_gap_floor
from domain.experiments import (
    ExperimentConfigError,
    ExperimentName,
    list_experiments,
    load_config,
    run_experiment,
)
from domain.experiments.universal import markov_grid_size
from domain.polynomials import constant_schedule_extremal


def _run(**data):
    return run_experiment(load_config(data))


def test_registry_lists_every_experiment():
    assert set(list_experiments()) == set(ExperimentName)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def test_constants_are_resolved():
    cfg = load_config({"experiment": "strongly-convex", "L": 2.0, "kappa": 4.0, "T": 3})
    assert cfg.mu == pytest.approx(0.5)

    cfg = load_config({"experiment": "strongly-convex", "mu": 0.5, "kappa": 4.0, "T": 3})
    assert cfg.L == pytest.approx(2.0)

    cfg = load_config({"experiment": "oblivious", "T": 3})
    assert (cfg.L, cfg.mu, cfg.kappa) == (1.0, None, None)
    assert not cfg.strongly_convex


@pytest.mark.parametrize(
    "data",
    [
        {"experiment": "strongly-convex", "kappa": 1.0, "T": 3},
        {"experiment": "strongly-convex", "T": 3},
        {"experiment": "oblivious", "T": 0},
        {"experiment": "oblivious", "T": 3, "couleur": "bleu"},
        {"experiment": "oblivious", "T": 3, "schedule": [1.0, 1.0]},
        {"experiment": "oblivious", "T": 2, "schedule": [1.0, 1.5]},
        {"experiment": "upper-agd", "L": 1.0, "mu": 2.0, "T": 3},
        {"experiment": "upper-agd", "L": 1.0, "mu": 0.5, "kappa": 3.0, "T": 3},
        {"experiment": "upper-agd", "T": 3, "epsilons": [0.0]},
        {"experiment": "inconnue", "T": 3},
    ],
)
def test_invalid_configs_are_rejected(data):
    with pytest.raises(ExperimentConfigError):
        load_config(data)


def test_universal_refuses_oversized_grid():
    T = 200
    assert markov_grid_size(T) > 10_000
    with pytest.raises(ExperimentConfigError):
        _run(experiment="universal", T=T)


# ---------------------------------------------------------------------------
# Expériences
# ---------------------------------------------------------------------------


def test_strongly_convex_sandwich():
    result = _run(experiment="strongly-convex", L=1.0, kappa=9.0, T=8)
    assert result.passed, [v.to_dict() for v in result.violations]
    assert [run.method for run in result.runs] == ["gd", "agd-sc", "chebyshev"]
    metrics = result.metrics
    assert metrics["floor_T"] == pytest.approx(strong_convex_gap_floor(1.0 / 9.0, 1.0, 9.0, 8))
    assert metrics["chebyshev_sandwich_holds"]
    assert metrics["gd_above_floor"]
    assert metrics["chebyshev_fit_residual"] <= 1e-8
    assert metrics["instance"]["dist_to_pareto"] == pytest.approx(1.0, rel=1e-12)
    assert result.runtime_ms > 0.0


def test_strongly_convex_small_kappa_floors_last_row_only():
    result = _run(experiment="strongly-convex", L=1.0, kappa=2.0, T=4)
    floor = result.runs[0].primary.floor
    assert all(math.isnan(v) for v in floor[:-1])
    assert math.isfinite(floor[-1])
    assert result.passed


def test_oblivious_constant_schedule():
    result = _run(experiment="oblivious", L=1.0, T=4)
    assert result.passed, [v.to_dict() for v in result.violations]
    metrics = result.metrics
    # (1/5)(4/5)^4
    assert metrics["min_gap"] == pytest.approx(0.08192, rel=1e-6)
    assert metrics["zeta_star"] == pytest.approx(0.2, rel=1e-6)
    assert metrics["above_e_floor"] is True
    assert metrics["sandwich_holds"]
    assert metrics["gaps_monotone"]
    assert metrics["krylov_relative_error"] <= 1e-10
    assert metrics["e_floor"] < metrics["min_gap"] < metrics["exp_ceiling"]


def test_oblivious_random_and_explicit_schedules():
    random_result = _run(experiment="oblivious", L=2.0, T=6, schedule="random", seed=3)
    assert random_result.passed
    assert random_result.metrics["above_e_floor"] is None
    assert math.isnan(random_result.metrics["product_ceiling"])

    explicit = _run(experiment="oblivious", L=1.0, T=2, schedule=[0.5, 0.25, 1.0])
    assert explicit.passed
    assert explicit.metrics["schedule"] == "explicit"
    assert explicit.runs[0].trace.T == 2


def test_universal_forced_gap_floor():
    result = _run(experiment="universal", L=1.0, T=5)
    assert result.passed, [v.to_dict() for v in result.violations]
    assert result.metrics["n_nodes"] == 144
    assert [run.method for run in result.runs] == ["agd", "mgda", "chebyshev"]
    for ratio in result.metrics["min_forced_over_floor"].values():
        assert ratio >= 1.0 - 1e-9
    forced = result.runs[0].measured[Quantity.FORCED_GAP]
    assert len(forced) == 6


def test_upper_agd_convex():
    result = _run(experiment="upper-agd", L=1.0, T=20, n_eigs=20, epsilons=[0.5, 0.25])
    assert result.passed, [v.to_dict() for v in result.violations]
    rows = result.metrics["complexity"]
    assert [row["T_sufficient"] for row in rows] == [3, 7]
    assert all(row["met"] for row in rows)
    assert not result.metrics["strongly_convex"]


def test_upper_agd_strongly_convex():
    result = _run(
        experiment="upper-agd", L=1.0, mu=0.1, T=15, n_eigs=20, epsilons=[0.1], seed=7
    )
    assert result.passed, [v.to_dict() for v in result.violations]
    assert [run.method for run in result.runs][-1] == "agd-sc"
    assert "agd_sc_accelerated_factor_worst_ratio" in result.metrics
    row = result.metrics["complexity"][0]
    assert row["met"]
    assert row["T_sufficient"] >= row["T_announced"]


# ---------------------------------------------------------------------------
# Grilles d'horizons
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("kappa", [4.0, 9.0, 25.0])
@pytest.mark.parametrize("T", range(2, 9))
def test_strongly_convex_every_horizon(kappa, T):
    result = _run(experiment="strongly-convex", L=1.0, kappa=kappa, T=T)
    assert result.passed, [v.to_dict() for v in result.violations]
    assert result.metrics["chebyshev_sandwich_holds"]
    assert result.metrics["gd_above_floor"]
    assert result.metrics["floor_T"] == pytest.approx(
        strong_convex_gap_floor(1.0 / kappa, 1.0, kappa, T)
    )


@pytest.mark.slow
@pytest.mark.parametrize("T", [1, 10, 20, 30])
def test_universal_floor_up_to_large_horizons(T):
    result = _run(experiment="universal", L=1.0, T=T)
    assert result.passed, [v.to_dict() for v in result.violations]
    assert result.metrics["n_nodes"] == markov_grid_size(T)
    for ratio in result.metrics["min_forced_over_floor"].values():
        assert ratio >= 1.0 - 1e-9
    assert result.metrics["mgda_monotone"]


@pytest.mark.slow
@pytest.mark.parametrize("kappa", [None, 4.0, 25.0])
def test_upper_agd_complexities(kappa):
    data = {"experiment": "upper-agd", "L": 1.0, "T": 100, "epsilons": [0.1, 0.01], "seed": 2}
    if kappa is not None:
        data["kappa"] = kappa
    result = _run(**data)
    assert result.passed, [v.to_dict() for v in result.violations]
    rows = result.metrics["complexity"]
    assert [row["epsilon"] for row in rows] == [0.1, 0.01]
    assert all(row["met"] for row in rows)
    if kappa is not None:
        assert result.metrics["agd_sc_accelerated_factor_holds"]
        assert all(row["T_sufficient"] >= row["T_announced"] for row in rows)


@pytest.mark.slow
@pytest.mark.parametrize("schedule", ["constant", "random"])
@pytest.mark.parametrize("T", range(1, 51))
def test_oblivious_every_horizon(T, schedule):
    result = _run(experiment="oblivious", L=1.0, T=T, schedule=schedule, seed=T)
    assert result.passed, [v.to_dict() for v in result.violations]
    metrics = result.metrics
    assert metrics["sandwich_holds"]
    assert metrics["gaps_monotone"]
    if schedule == "constant":
        assert metrics["above_e_floor"] is True
        assert metrics["min_gap"] == pytest.approx(constant_schedule_extremal(1.0, T), rel=1e-6)
    else:
        assert metrics["above_e_floor"] is None
