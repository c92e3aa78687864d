import numpy as np
import pytest

from hardylab import temporal
from hardylab.errors import DimensionMismatch
from hardylab.quantum import Observable

from conftest import random_hermitian, random_ket, random_projector


def test_pauli_example_exact():
    cert = temporal.temporal_hardy_witness(temporal.sequential_behavior(temporal.pauli_example()))
    assert cert.satisfied
    assert abs(cert.q1 - 0.25) < 1e-12
    assert cert.max_zero < 1e-12


def test_repeated_observable_is_perfectly_correlated(rng):
    for _ in range(10):
        o = Observable(random_projector(rng, 3, 1))
        sc = temporal.TemporalScenario(random_ket(rng, 3), o, o, o, o)
        t = temporal.sequential_behavior(sc).table
        assert np.allclose(t[..., 0, 1], 0, atol=1e-14) and np.allclose(t[..., 1, 0], 0, atol=1e-14)
        assert np.allclose(t[..., 0, 0] + t[..., 1, 1], 1)


def test_forward_no_signalling_and_normalization(rng):
    for d in (2, 3):
        for _ in range(10):
            obs = [Observable(random_projector(rng, d, 1)) for _ in range(4)]
            b = temporal.sequential_behavior(temporal.TemporalScenario(random_ket(rng, d), *obs))
            assert np.allclose(b.table.sum(axis=(2, 3)), 1, atol=1e-12)
            first = b.table.sum(axis=3)  # [x, y, a]
            assert np.allclose(first[:, 0], first[:, 1], atol=1e-12)


def test_mixed_state_input(rng):
    sc = temporal.pauli_example()
    rho = np.eye(2) / 2
    mixed = temporal.TemporalScenario(rho, sc.A, sc.A_, sc.B, sc.B_)
    cert = temporal.temporal_hardy_witness(temporal.sequential_behavior(mixed))
    assert not cert.satisfied  # p(+,+|A',B') = 1/2 for the maximally mixed state
    with pytest.raises(DimensionMismatch):
        temporal.TemporalScenario(random_hermitian(rng, 2), sc.A, sc.A_, sc.B, sc.B_)


def test_dimension_mismatch(rng):
    sc = temporal.pauli_example()
    with pytest.raises(DimensionMismatch):
        temporal.TemporalScenario(random_ket(rng, 3), sc.A, sc.A_, sc.B, sc.B_)


def test_commuting_first_measurements_never_witness(rng):
    for _ in range(20):
        p = random_projector(rng, 2, 1)
        a, a_ = Observable(p), Observable(np.eye(2) - p)
        b, b_ = Observable(random_projector(rng, 2, 1)), Observable(random_projector(rng, 2, 1))
        sc = temporal.TemporalScenario(random_ket(rng, 2), a, a_, b, b_)
        assert not temporal.temporal_hardy_witness(temporal.sequential_behavior(sc)).satisfied


def test_commuting_family_is_zero():
    opt = temporal.maximize_temporal_hardy(2, restarts=2, seed=0, family="commuting")
    assert opt.certificate.q1 < 1e-6


def test_qubit_search_reaches_quarter():
    opt = temporal.maximize_temporal_hardy(2, restarts=3, seed=1)
    c = opt.certificate
    assert c.max_zero < 1e-8
    assert abs(c.q1 - 0.25) < 1e-6


@pytest.mark.slow
def test_qutrit_search_bounded():
    c = temporal.maximize_temporal_hardy(3, restarts=1, seed=0).certificate
    if c.max_zero < 1e-8:
        assert c.q1 <= 0.25 + 1e-4
