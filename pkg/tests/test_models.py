# tests/test_models.py

from __future__ import annotations

import math

import numpy as np
import pytest

from domain.models import (
    InstanceError,
    IterateTrace,
    MooLiftedInstance,
    Point,
    ScheduleError,
    SimplexWeights,
    SpectralQuadratic,
    StepSchedule,
)


def test_point_from_vector_splits_blocks():
    point = Point.from_vector(np.array([1.0, 2.0, 3.0]), dim_v=2)
    assert point.v_part.tolist() == [1.0, 2.0]
    assert point.w_part.tolist() == [3.0]
    assert point.as_vector().tolist() == [1.0, 2.0, 3.0]


def test_spectral_quadratic_rejects_eigs_outside_bounds():
    with pytest.raises(InstanceError):
        SpectralQuadratic(eigs=[0.5, 2.0], e0=[1.0, 1.0], mu_bound=0.0, L_bound=1.0)


def test_spectral_quadratic_rejects_dimension_mismatch():
    with pytest.raises(InstanceError):
        SpectralQuadratic(eigs=[0.5, 1.0], e0=[1.0], mu_bound=0.0, L_bound=1.0)


def test_spectral_quadratic_oracle():
    g = SpectralQuadratic(eigs=[1.0, 4.0], e0=[1.0, 1.0], mu_bound=1.0, L_bound=4.0)
    assert g.value([2.0, 1.0]) == pytest.approx(0.5 * (4.0 + 4.0))
    assert g.gradient([2.0, 1.0]).tolist() == [2.0, 4.0]
    assert g.R == pytest.approx(math.sqrt(2.0))
    assert g.strongly_convex


def test_lifted_objective_matches_componentwise_formula():
    g = SpectralQuadratic(eigs=[1.0], e0=[1.0], mu_bound=0.0, L_bound=1.0)
    inst = MooLiftedInstance(g=g, anchors=[[1.0], [-1.0]], gamma=1.0)

    value, grad = inst.objective(0, np.array([2.0, 0.0]))

    assert value == pytest.approx(2.5)
    assert grad.v_part.tolist() == [2.0]
    assert grad.w_part.tolist() == [-1.0]


def test_lifted_gradient_zero_at_joint_minimizer():
    g = SpectralQuadratic(eigs=[1.0, 2.0], e0=[1.0, 1.0], mu_bound=0.0, L_bound=2.0)
    inst = MooLiftedInstance(g=g, anchors=[[0.0], [1.0]], gamma=2.0)
    value, grad = inst.objective(1, np.array([0.0, 0.0, 1.0]))
    assert value == 0.0
    assert not np.any(grad.as_vector())


def test_lifted_midpoint_gradients_are_opposite_in_w():
    g = SpectralQuadratic(eigs=[1.0], e0=[1.0], mu_bound=0.0, L_bound=1.0)
    inst = MooLiftedInstance(g=g, anchors=[[-1.0], [1.0]], gamma=1.0)
    G = inst.gradient_matrix(np.array([0.0, 0.0]))
    assert G[:, 0].tolist() == [0.0, 0.0]
    assert G[:, 1].tolist() == [1.0, -1.0]


def test_objective_index_is_zero_based():
    g = SpectralQuadratic(eigs=[1.0], e0=[1.0], mu_bound=0.0, L_bound=1.0)
    inst = MooLiftedInstance(g=g, anchors=[[-1.0], [1.0]], gamma=1.0)
    with pytest.raises(InstanceError):
        inst.objective(2, np.zeros(2))


def test_duplicate_anchors_rejected():
    g = SpectralQuadratic(eigs=[1.0], e0=[1.0], mu_bound=0.0, L_bound=1.0)
    with pytest.raises(InstanceError):
        MooLiftedInstance(g=g, anchors=[[0.5], [0.5]], gamma=1.0)


def test_gamma_above_L_rejected():
    g = SpectralQuadratic(eigs=[1.0], e0=[1.0], mu_bound=0.0, L_bound=1.0)
    with pytest.raises(InstanceError):
        MooLiftedInstance(g=g, anchors=[[-1.0], [1.0]], gamma=2.0)


def test_simplex_weights_validation():
    with pytest.raises(InstanceError):
        SimplexWeights([0.7, 0.7])
    with pytest.raises(InstanceError):
        SimplexWeights([1.5, -0.5])
    assert SimplexWeights.from_raw([2.0, -1e-18, 2.0]).lam.tolist() == [0.5, 0.0, 0.5]
    assert SimplexWeights.vertex(3, 0).lam.tolist() == [1.0, 0.0, 0.0]


def test_step_schedule_enforces_cap():
    with pytest.raises(ScheduleError):
        StepSchedule([0.5, 1.5], L=1.0)
    with pytest.raises(ScheduleError):
        StepSchedule([-0.1], L=1.0)
    schedule = StepSchedule.constant(2.0, 3)
    assert schedule.alphas.tolist() == [0.5, 0.5, 0.5]
    assert schedule.partial_sums().tolist() == [0.0, 0.5, 1.0, 1.5]


def test_random_schedule_within_cap(rng):
    schedule = StepSchedule.random(4.0, 100, rng)
    assert len(schedule) == 100
    assert np.all((schedule.alphas >= 0.0) & (schedule.alphas <= 0.25))


def test_iterate_trace_validate_detects_length_mismatch():
    trace = IterateTrace(method_tag="gd")
    trace.record(np.zeros(2), fval=0.0, f_gap=0.0, grad_norm=0.0)
    trace.f_gaps.append(1.0)
    with pytest.raises(ValueError):
        trace.validate()
