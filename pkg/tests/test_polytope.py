import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from hardylab import hardy, polytope
from hardylab.clauses import hardy_clauses, tripartite_clauses
from hardylab.errors import SizeLimit
from hardylab.quantum import Behavior, Scenario


def optimum_behavior():
    s, o = hardy.optimal_selftest_point(0.0)
    return hardy.hardy_behavior(s, o)


def test_strategy_counts():
    assert len(polytope.enumerate_deterministic(Scenario.uniform(2))) == 16
    assert len(polytope.enumerate_deterministic(Scenario.uniform(3))) == 64
    with pytest.raises(SizeLimit):
        polytope.enumerate_deterministic(Scenario.uniform(2, 2, 3), cap=10)


def test_strategy_cap_from_environment(monkeypatch):
    monkeypatch.setenv("HARDYLAB_MAX_STRATEGIES", "5")
    with pytest.raises(SizeLimit):
        polytope.enumerate_deterministic(Scenario.uniform(2))


def test_strategies_are_predictable_local_no_signalling():
    scen = Scenario.uniform(2)
    for s in polytope.enumerate_deterministic(scen):
        b = s.behavior(scen)
        assert polytope.is_predictable(b) and polytope.is_no_signalling(b)
        model = polytope.is_local(b)
        assert model is not None and model.reconstruction_error(b) < 1e-9


def test_uniform_is_local():
    scen = Scenario.uniform(2)
    b = Behavior(scen, np.full(scen.shape, 0.25))
    assert polytope.is_local(b) is not None


def test_optimum_is_nonlocal_with_separating_functional():
    b = optimum_behavior()
    res = polytope.locality_test(b)
    assert not res.local
    scen = b.scenario
    assert res.witness_value > res.witness.bound + 1e-6
    for s in polytope.enumerate_deterministic(scen):
        assert res.witness.value(s.behavior(scen)) <= res.witness.bound + 1e-9


def test_no_predictable_hardy_model():
    scen = Scenario.uniform(2)
    for s in polytope.enumerate_deterministic(scen):
        b = s.behavior(scen)
        assert not polytope.hardy_certificate(b).satisfied
        assert polytope.ch_value(polytope.hardy_certificate(b)) <= 1e-12


def test_gnlt_bounds():
    v, b = polytope.gnlt_max_hardy()
    assert abs(v - 0.5) < 1e-9
    assert polytope.is_no_signalling(b)
    v3, _ = polytope.gnlt_max_hardy(tripartite_clauses())
    assert abs(v3 - 0.5) < 1e-9
    v_loc, _ = polytope.gnlt_max_hardy(local=True)
    assert abs(v_loc) < 1e-12


def test_gnlt_matches_highs():
    cm = hardy_clauses()
    a, b = polytope._ns_constraints(cm)
    c = cm.nonzero.mask(cm.scenario).reshape(-1)
    ref = linprog(-c, A_eq=a, b_eq=b)
    assert math.isclose(-ref.fun, polytope.gnlt_max_hardy(cm)[0], abs_tol=1e-9)


def test_min_entropy_examples():
    scen = Scenario.uniform(2)
    assert polytope.min_entropy(Behavior(scen, np.full(scen.shape, 0.25)), (0, 0)) == 2.0
    det = polytope.enumerate_deterministic(scen)[5].behavior(scen)
    assert polytope.min_entropy(det, (1, 0)) == 0.0


def test_adversarial_min_entropy_lp():
    adv = polytope.adversarial_min_entropy()
    cm = hardy_clauses()
    a, b = polytope._ns_constraints(cm, fix_nonzero=polytope.HARDY_MAX)
    best = 0.0
    for o in itertools.product(range(2), range(2)):
        c = np.zeros(cm.scenario.shape)
        c[(0, 0) + o] = 1
        best = max(best, -linprog(-c.reshape(-1), A_eq=a, b_eq=b).fun)
    assert math.isclose(adv.guessing_probability, best, abs_tol=1e-9)
    assert 0 < adv.bits < math.inf
    # the adversary is less constrained than the quantum optimum itself
    assert adv.bits <= polytope.min_entropy(optimum_behavior(), (0, 0)) + 1e-9
    assert polytope.is_no_signalling(adv.behavior)


def test_ch_at_optimum():
    cert = polytope.hardy_certificate(optimum_behavior())
    assert math.isclose(polytope.ch_value(cert), hardy.HARDY_MAX, abs_tol=1e-12)
