import numpy as np
import pytest

from hardylab.errors import DimensionMismatch, NotNormalized, NotProjector, ScenarioMismatch
from hardylab.quantum import (
    Behavior,
    GeneralMeasurement,
    Observable,
    PureState,
    Scenario,
    born_behavior,
    frequencies,
    sample_behavior,
)
from hardylab.polytope import is_no_signalling

from conftest import random_ket, random_projector

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


def test_pure_state_validation():
    with pytest.raises(NotNormalized):
        PureState([1, 1], (2,))
    with pytest.raises(DimensionMismatch):
        PureState([1, 0, 0], (2, 2))


def test_observable_from_matrix_and_back():
    o = Observable.from_matrix(SX)
    assert np.allclose(o.matrix, SX)
    assert np.allclose(o.plus_projector + o.minus_projector, np.eye(2))
    with pytest.raises(NotProjector):
        Observable(np.eye(2) * 0.5)


def test_measurement_completeness():
    with pytest.raises(NotProjector):
        GeneralMeasurement((np.diag([1, 0]),))
    m = GeneralMeasurement.from_hermitian(np.diag([1.0, 0.0, -1.0]))
    assert m.labels == (1.0, 0.0, -1.0)


def test_bell_state_correlations():
    phi = PureState(np.array([1, 0, 0, 1]) / np.sqrt(2), (2, 2))
    z = Observable.from_matrix(SZ)
    b = born_behavior(phi, [[z], [z]])
    assert np.allclose(b.row((0, 0)), [[0.5, 0], [0, 0.5]])


def test_density_matrix_matches_pure(rng):
    psi = PureState(random_ket(rng, 6), (2, 3))
    ma = [Observable(random_projector(rng, 2, 1)) for _ in range(2)]
    mb = [GeneralMeasurement.from_hermitian(np.diag([2.0, 1.0, 0.0])), Observable(random_projector(rng, 3, 2))]
    # mixed outcome counts within Bob are rejected
    with pytest.raises(ScenarioMismatch):
        born_behavior(psi, [ma, mb])
    mb = [Observable(random_projector(rng, 3, 1)), Observable(random_projector(rng, 3, 2))]
    b1 = born_behavior(psi, [ma, mb])
    b2 = born_behavior(psi.density(), [ma, mb], (2, 3))
    assert np.allclose(b1.table, b2.table, atol=1e-12)


def test_born_behaviors_are_no_signalling(rng):
    for _ in range(20):
        psi = PureState(random_ket(rng, 4), (2, 2))
        obs = [[Observable(random_projector(rng, 2, 1)) for _ in range(2)] for _ in range(2)]
        b = born_behavior(psi, obs)
        assert is_no_signalling(b)
        assert np.allclose(b.table.sum(axis=(2, 3)), 1, atol=1e-12)


def test_behavior_validation():
    s = Scenario.uniform(2)
    with pytest.raises(ScenarioMismatch):
        Behavior(s, np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        Behavior(s, np.zeros(s.shape))
    t = np.full(s.shape, 0.25)
    b = Behavior(s, t)
    with pytest.raises(ValueError):
        b.table[0, 0, 0, 0] = 1.0


def test_relabel_swaps_settings():
    s = Scenario.uniform(2)
    t = np.full(s.shape, 0.25)
    t[1, 0] = [[1, 0], [0, 0]]
    b = Behavior(s, t).relabel(setting_perms=([1, 0], None))
    assert b.p((0, 0), (0, 0)) == 1.0


def test_sampler_is_deterministic_and_consistent():
    s = Scenario.uniform(2)
    t = np.full(s.shape, 0.25)
    b = Behavior(s, t)
    c1 = sample_behavior(b, 10_000, seed=3)
    c2 = sample_behavior(b, 10_000, seed=3)
    assert np.array_equal(c1, c2)
    assert c1.sum() == 10_000
    assert np.allclose(frequencies(c1), 0.25, atol=0.03)
    with pytest.raises(ValueError):
        sample_behavior(b, 0, seed=1)
