# tests/test_polynomials.py

from __future__ import annotations

import math

import numpy as np
import pytest

from domain.models import StepSchedule
from domain.polynomials import (
    ChebyshevFrame,
    PolynomialError,
    ResidualPolynomial,
    agd_classical_iterations_strongly_convex,
    agd_sufficient_iterations_convex,
    agd_sufficient_iterations_strongly_convex,
    chebyshev_T,
    coefficient_distance,
    constant_schedule_extremal,
    fit_residual_from_trace,
    grid_max_abs_zeta_p,
    markov_floor,
    minimax_on_nodes,
    product_extremal,
    random_residual_polynomials,
    residual_from_schedule,
    strong_convex_extremal_value,
    strong_convex_iteration_floor,
)


# ---------------------------------------------------------------------------
# Chebyshev
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "t, x, expected",
    [(0, 0.3, 1.0), (1, 0.3, 0.3), (3, 2.0, 26.0), (2, -1.25, 2.125)],
)
def test_chebyshev_values(t, x, expected):
    assert chebyshev_T(t, x) == pytest.approx(expected)
    assert chebyshev_T(t, x, path="recurrence") == pytest.approx(expected)


def test_chebyshev_paths_agree_outside_unit_interval():
    for x in (1.001, -1.5, 7.0, -250.0, 1000.0):
        for t in range(0, 40):
            assert chebyshev_T(t, x, "closed") == pytest.approx(
                chebyshev_T(t, x, "recurrence"), rel=1e-10
            )


def test_chebyshev_unknown_path():
    with pytest.raises(PolynomialError):
        chebyshev_T(2, 0.5, path="remez")


def test_chebyshev_frame_rho_identity():
    for kappa in (1.5, 4.0, 9.0, 100.0, 1e6):
        frame = ChebyshevFrame(mu=1.0, L=kappa)
        assert frame.rho_from_xi0() == pytest.approx(frame.rho, rel=1e-12)
    assert ChebyshevFrame(mu=1.0, L=9.0).rho == pytest.approx(2.0)


def test_chebyshev_frame_rejects_unit_kappa():
    with pytest.raises(PolynomialError):
        ChebyshevFrame(mu=1.0, L=1.0)


# ---------------------------------------------------------------------------
# Valeur extrémale fortement convexe
# ---------------------------------------------------------------------------


def test_extremal_value_examples():
    assert strong_convex_extremal_value(4.0, 1) == pytest.approx(0.6)
    assert strong_convex_extremal_value(9.0, 2) == pytest.approx(8.0 / 17.0)
    assert strong_convex_extremal_value(37.0, 0) == pytest.approx(1.0)


@pytest.mark.parametrize("kappa", [1.0, 0.5, math.inf])
def test_extremal_value_rejects_bad_kappa(kappa):
    with pytest.raises(PolynomialError):
        strong_convex_extremal_value(kappa, 3)


@pytest.mark.parametrize("kappa", [4.0, 9.0, 100.0])
@pytest.mark.parametrize("T", range(1, 11))
def test_minimax_on_alternation_nodes_matches_closed_form(kappa, T):
    frame = ChebyshevFrame(mu=1.0, L=kappa)
    nodes = 0.5 * (kappa + 1.0) - 0.5 * (kappa - 1.0) * np.cos(np.arange(T + 1) * np.pi / T)
    result = minimax_on_nodes(nodes, T)
    assert result.value == pytest.approx(strong_convex_extremal_value(kappa, T), rel=1e-9)
    assert coefficient_distance(result.polynomial, frame.residual(T), kappa) <= 1e-8


def test_minimax_two_nodes():
    result = minimax_on_nodes([1.0, 9.0], 1)
    assert result.value == pytest.approx(0.8)
    assert result.polynomial.coeffs.tolist() == pytest.approx([1.0, -0.2])
    assert not result.degenerate


def test_minimax_single_node_is_degenerate():
    result = minimax_on_nodes([3.0], 2)
    assert result.value == 0.0
    assert result.degenerate
    assert result.polynomial(3.0) == pytest.approx(0.0, abs=1e-12)


def test_minimax_on_many_nodes_uses_linear_program():
    nodes = np.linspace(1.0, 9.0, 41)
    result = minimax_on_nodes(nodes, 2)
    # le grain ne peut que diminuer la valeur du problème sur [1, 9]
    assert result.value <= 8.0 / 17.0 * (1.0 + 1e-6)
    assert result.value == pytest.approx(8.0 / 17.0, rel=1e-6)


def test_minimax_rejects_nonpositive_nodes():
    with pytest.raises(PolynomialError):
        minimax_on_nodes([0.0, 1.0], 1)


# ---------------------------------------------------------------------------
# Extrémal de forme produit
# ---------------------------------------------------------------------------


def test_product_extremal_examples():
    zeta, value = product_extremal(StepSchedule([1.0], 1.0), 1.0)
    assert zeta == pytest.approx(0.5, abs=1e-7)
    assert value == pytest.approx(0.25)

    zeta, value = product_extremal(StepSchedule([], 1.0), 1.0)
    assert (zeta, value) == (1.0, 1.0)

    zeta, value = product_extremal(StepSchedule([1.0, 1.0], 1.0), 1.0)
    assert zeta == pytest.approx(1.0 / 3.0, abs=1e-7)
    assert value == pytest.approx(4.0 / 27.0, rel=1e-10)


def test_product_extremal_floor_on_random_schedules(rng):
    for T in range(1, 51):
        for _ in range(100):
            schedule = StepSchedule.random(2.0, T, rng)
            _, value = product_extremal(schedule, 2.0)
            assert value >= 2.0 / (4.0 * (T + 1))


def test_constant_schedule_closed_form():
    for t in range(0, 60):
        _, value = product_extremal(StepSchedule.constant(1.0, t), 1.0)
        assert value == pytest.approx(constant_schedule_extremal(1.0, t), rel=1e-12)
        assert value >= 1.0 / (math.e * (t + 1))
        assert value <= math.exp(-t / (t + 1)) / (t + 1) * (1.0 + 1e-12)


# ---------------------------------------------------------------------------
# Plancher de Markov
# ---------------------------------------------------------------------------


def test_markov_floor_values():
    assert markov_floor(1.0, 0) == 0.5
    assert markov_floor(2.0, 1) == 0.25
    assert markov_floor(1.0, 3) == 1.0 / 32.0


def test_markov_floor_holds_for_random_polynomials(rng):
    for t in range(0, 21):
        for poly in random_residual_polynomials(t, 100, 1.0, rng):
            assert poly(0.0) == pytest.approx(1.0)
            assert grid_max_abs_zeta_p(poly, 1.0) >= markov_floor(1.0, t)


@pytest.mark.parametrize("t", [10, 12, 16, 20])
def test_random_residuals_of_high_degree_are_normalized(t):
    polys = random_residual_polynomials(t, 200, 1.0, np.random.default_rng(t))
    assert len(polys) == 200
    for poly in polys:
        assert poly.degree == t
        assert poly(0.0) == pytest.approx(1.0, abs=1e-8)


def test_markov_floor_on_grid_for_degree_one():
    eigs = np.arange(1, 17) / 16.0
    for slope in np.linspace(-3.0, 3.0, 61):
        p = ResidualPolynomial.from_coeffs([1.0, slope])
        assert float(np.max(np.abs(eigs * p(eigs)))) >= 0.125


# ---------------------------------------------------------------------------
# Résidus depuis un calendrier ou une trace
# ---------------------------------------------------------------------------


def test_residual_from_schedule_examples():
    assert residual_from_schedule(StepSchedule([0.5, 0.25], 1.0)).coeffs.tolist() == pytest.approx(
        [1.0, -0.75, 0.125]
    )
    assert residual_from_schedule(StepSchedule([], 1.0)).coeffs.tolist() == [1.0]
    zero = residual_from_schedule(StepSchedule([0.0], 1.0))
    assert zero.degree == 1
    assert zero.coeffs.tolist() == [1.0, 0.0]


def test_residual_requires_normalization():
    with pytest.raises(PolynomialError):
        ResidualPolynomial.from_coeffs([2.0, 1.0])


def test_fit_recovers_gd_residual(rng):
    eigs = np.sort(rng.uniform(0.0, 1.0, 6))
    e0 = rng.standard_normal(6)
    T = 5
    eT = (1.0 - eigs) ** T * e0
    fit = fit_residual_from_trace(eigs, e0, eT, T)
    expected = residual_from_schedule(StepSchedule.constant(1.0, T))
    assert fit.fit_residual <= 1e-10
    assert coefficient_distance(fit.polynomial, expected, 1.0) <= 1e-8


def test_fit_degree_zero_is_constant():
    fit = fit_residual_from_trace([1.0, 2.0], [1.0, 1.0], [1.0, 1.0], 0)
    assert fit.polynomial.coeffs.tolist() == [1.0]
    assert fit.fit_residual == 0.0


def test_fit_excludes_zero_start_components():
    fit = fit_residual_from_trace([1.0, 2.0, 3.0], [1.0, 0.0, 1.0], [0.5, 0.0, -0.5], 1)
    assert fit.excluded.tolist() == [1]
    assert fit.fit_residual <= 1e-12


def test_fit_rejects_all_zero_start():
    with pytest.raises(PolynomialError):
        fit_residual_from_trace([1.0], [0.0], [0.0], 1)


# ---------------------------------------------------------------------------
# Complexités
# ---------------------------------------------------------------------------


def test_agd_convex_iteration_count():
    assert agd_sufficient_iterations_convex(1.0, 1.0, 0.01) == 199
    assert agd_sufficient_iterations_convex(1.0, 1.0, 10.0) == 0


def test_agd_strongly_convex_iteration_counts():
    L, mu, R, eps = 1.0, 0.01, 1.0, 1e-3
    scale = math.sqrt(L * (L + mu)) * R
    announced = agd_sufficient_iterations_strongly_convex(L, mu, R, eps)
    classical = agd_classical_iterations_strongly_convex(L, mu, R, eps)
    assert announced == math.ceil(math.log(scale / eps) / math.log(11.0 / 9.0))
    assert classical == math.ceil(2.0 * math.log(scale / eps) / -math.log(0.9))
    assert classical > announced
    assert agd_classical_iterations_strongly_convex(L, mu, 1e-6, 1.0) == 0


def test_strong_convex_iteration_floor_is_tight():
    kappa, mu, R, eps = 9.0, 1.0, 1.0, 1e-3
    T = strong_convex_iteration_floor(kappa, mu, R, eps)
    assert mu * R * 0.5**T <= eps < mu * R * 0.5 ** (T - 1)


def test_classical_count_rejects_unit_kappa():
    with pytest.raises(PolynomialError):
        agd_classical_iterations_strongly_convex(1.0, 1.0, 1.0, 0.1)
