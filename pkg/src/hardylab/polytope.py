"""Local and no-signalling polytopes over finite Bell scenarios.

Local models are convex mixtures of deterministic strategies; the
no-signalling set is described by linear equalities on the table.  All
optimization goes through the in-house simplex in :mod:`hardylab.simplex`.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass

import numpy as np

from .clauses import HardyCertificate, hardy_clauses
from .errors import Infeasible, SizeLimit
from .numerics import DEFAULT_TOL
from .quantum import Behavior
from .simplex import LinearProgram, solve

DEFAULT_MAX_STRATEGIES = 10**6
TOL_FEAS = 1e-9
# (5 sqrt5 - 11) / 2, written without the cancellation
HARDY_MAX = 2 / (5 * math.sqrt(5) + 11)


def max_strategies():
    env = os.environ.get("HARDYLAB_MAX_STRATEGIES")
    return int(env) if env else DEFAULT_MAX_STRATEGIES


@dataclass(frozen=True)
class DeterministicStrategy:
    """``assignment[k][x]`` is party k's outcome for setting x."""

    assignment: tuple

    def behavior(self, scenario):
        t = np.zeros(scenario.shape)
        for xs in scenario.setting_tuples():
            os_ = tuple(self.assignment[k][x] for k, x in enumerate(xs))
            t[xs + os_] = 1.0
        return Behavior(scenario, t)


@dataclass(frozen=True)
class LocalModel:
    strategies: tuple
    weights: np.ndarray

    def behavior(self, scenario):
        t = sum(w * s.behavior(scenario).table for s, w in zip(self.strategies, self.weights))
        return Behavior(scenario, np.clip(t, 0.0, 1.0))

    def reconstruction_error(self, behavior):
        t = sum(w * s.behavior(behavior.scenario).table for s, w in zip(self.strategies, self.weights))
        return float(np.max(np.abs(t - behavior.table)))


@dataclass(frozen=True)
class BellFunctional:
    """Linear functional ``F`` with ``F.p <= bound`` on every local behavior."""

    coefficients: np.ndarray
    bound: float

    def value(self, behavior):
        return float(np.sum(self.coefficients * behavior.table))


@dataclass(frozen=True)
class LocalityResult:
    local: bool
    model: LocalModel = None
    witness: BellFunctional = None
    witness_value: float = float("nan")


def strategy_count(scenario):
    return math.prod(o**s for s, o in zip(scenario.settings, scenario.outcomes))


def enumerate_deterministic(scenario, cap=None):
    """Every deterministic strategy of ``scenario``, in lexicographic order."""
    cap = max_strategies() if cap is None else cap
    count = strategy_count(scenario)
    if count > cap:
        raise SizeLimit(f"{count} deterministic strategies exceed the cap of {cap}")
    per_party = [
        list(itertools.product(range(o), repeat=s)) for s, o in zip(scenario.settings, scenario.outcomes)
    ]
    return [DeterministicStrategy(a) for a in itertools.product(*per_party)]


def _strategy_matrix(scenario, strategies):
    return np.column_stack([s.behavior(scenario).table.reshape(-1) for s in strategies])


def locality_test(behavior, tol=TOL_FEAS, cap=None):
    """LP membership in the convex hull of deterministic strategies.

    When infeasible, the phase-1 Farkas vector gives a Bell functional
    separating ``behavior`` from every local behavior.
    """
    scen = behavior.scenario
    strategies = enumerate_deterministic(scen, cap)
    d = _strategy_matrix(scen, strategies)
    p = behavior.vector()
    a_eq = np.vstack([d, np.ones((1, d.shape[1]))])
    b_eq = np.concatenate([p, [1.0]])
    res = solve(LinearProgram(np.zeros(d.shape[1]), a_eq, b_eq), tol=tol)
    if res.success:
        keep = np.flatnonzero(res.x > 0)
        w = res.x[keep] / res.x[keep].sum()
        model = LocalModel(tuple(strategies[i] for i in keep), w)
        return LocalityResult(True, model=model)
    y = res.farkas
    coeffs = y[:-1].reshape(scen.shape)
    bound = -y[-1]
    scale = np.max(np.abs(coeffs))
    if scale > 0:
        coeffs, bound = coeffs / scale, bound / scale
    func = BellFunctional(coeffs, float(bound))
    return LocalityResult(False, witness=func, witness_value=func.value(behavior))


def is_local(behavior, tol=TOL_FEAS, cap=None):
    """A :class:`LocalModel` reproducing ``behavior``, or None if none exists."""
    return locality_test(behavior, tol, cap).model


def is_predictable(behavior, tol=1e-9):
    t = behavior.table
    return bool(np.all(np.minimum(np.abs(t), np.abs(t - 1.0)) <= tol))


def _signalling_rows(scenario):
    """Equality rows: each party's setting leaves the others' marginal unchanged."""
    n = scenario.parties
    shape = scenario.shape
    rows = []
    for k in range(n):
        for xs in scenario.setting_tuples():
            if xs[k] != 0:
                continue
            for xk in range(1, scenario.settings[k]):
                ys = list(xs)
                ys[k] = xk
                ys = tuple(ys)
                others = [range(scenario.outcomes[j]) for j in range(n) if j != k]
                for oo in itertools.product(*others):
                    r = np.zeros(shape)
                    for ok in range(scenario.outcomes[k]):
                        o = list(oo)
                        o.insert(k, ok)
                        r[xs + tuple(o)] += 1.0
                        r[ys + tuple(o)] -= 1.0
                    rows.append(r.reshape(-1))
    return np.array(rows).reshape(-1, math.prod(shape))


def _normalization_rows(scenario):
    rows = []
    for xs in scenario.setting_tuples():
        r = np.zeros(scenario.shape)
        r[xs] = 1.0
        rows.append(r.reshape(-1))
    return np.array(rows)


def is_no_signalling(behavior, tol=1e-9):
    rows = _signalling_rows(behavior.scenario)
    if rows.size == 0:
        return True
    return bool(np.max(np.abs(rows @ behavior.vector())) <= tol)


def ch_value(cert):
    """``q1 - q2 - q3 - q4``; at most 0 for every local behavior."""
    return cert.q1 - cert.q2 - cert.q3 - cert.q4


def _ns_constraints(clause_map, fix_nonzero=None):
    scen = clause_map.scenario
    a = [_normalization_rows(scen)]
    b = [np.ones(a[0].shape[0])]
    ns = _signalling_rows(scen)
    if ns.size:
        a.append(ns)
        b.append(np.zeros(ns.shape[0]))
    for z in clause_map.zeros:
        a.append(z.mask(scen).reshape(1, -1))
        b.append([0.0])
    if fix_nonzero is not None:
        a.append(clause_map.nonzero.mask(scen).reshape(1, -1))
        b.append([fix_nonzero])
    return np.vstack(a), np.concatenate(b)


def gnlt_max_hardy(clause_map=None, local=False, tol=TOL_FEAS):
    """Maximize the nonzero clause subject to the zero clauses.

    Over all no-signalling behaviors by default; ``local=True`` restricts
    to mixtures of deterministic strategies.  Returns ``(value, behavior)``.
    """
    clause_map = clause_map or hardy_clauses()
    scen = clause_map.scenario
    if local:
        strategies = enumerate_deterministic(scen)
        d = _strategy_matrix(scen, strategies)
        obj = clause_map.nonzero.mask(scen).reshape(-1) @ d
        rows = [np.ones((1, d.shape[1]))] + [z.mask(scen).reshape(1, -1) @ d for z in clause_map.zeros]
        b = np.concatenate([[1.0], np.zeros(len(clause_map.zeros))])
        res = solve(LinearProgram(obj, np.vstack(rows), b), tol=tol, maximize=True)
        if not res.success:
            raise Infeasible(f"local Hardy LP failed: {res.status}")
        table = (d @ res.x).reshape(scen.shape)
        return float(obj @ res.x), Behavior(scen, np.clip(table, 0, 1))
    a, b = _ns_constraints(clause_map)
    obj = clause_map.nonzero.mask(scen).reshape(-1)
    res = solve(LinearProgram(obj, a, b), tol=tol, maximize=True)
    if not res.success:
        raise Infeasible(f"no-signalling Hardy LP failed: {res.status}; check the clause map")
    return float(obj @ res.x), Behavior(scen, np.clip(res.x.reshape(scen.shape), 0, 1))


def min_entropy(behavior, settings):
    """``-log2 max_o p(o | settings)`` in bits."""
    pmax = float(np.max(behavior.row(settings)))
    return -math.log2(pmax)


@dataclass(frozen=True)
class AdversarialEntropy:
    bits: float
    guessing_probability: float
    outcome: tuple
    behavior: Behavior
    settings: tuple


def adversarial_min_entropy(clause_map=None, q1=HARDY_MAX, settings=None, tol=TOL_FEAS):
    """Min-entropy against the most predictable no-signalling behavior.

    For each outcome tuple of the input pair ``settings`` (the nonzero
    clause's pair by default), maximize its probability over all
    no-signalling behaviors meeting the zero clauses with the nonzero
    clause fixed to ``q1``; the largest of these is the guessing
    probability.
    """
    clause_map = clause_map or hardy_clauses()
    scen = clause_map.scenario
    settings = tuple(settings) if settings is not None else tuple(clause_map.nonzero.settings)
    a, b = _ns_constraints(clause_map, fix_nonzero=q1)
    best = None
    for o in scen.outcome_tuples():
        obj = np.zeros(scen.shape)
        obj[settings + o] = 1.0
        obj = obj.reshape(-1)
        res = solve(LinearProgram(obj, a, b), tol=tol, maximize=True)
        if res.status == "infeasible":
            raise Infeasible("Hardy constraints are inconsistent at the requested q1")
        val = float(obj @ res.x)
        if best is None or val > best[0] + 1e-12:
            best = (val, o, res.x)
    val, o, x = best
    return AdversarialEntropy(
        bits=-math.log2(val),
        guessing_probability=val,
        outcome=o,
        behavior=Behavior(scen, np.clip(x.reshape(scen.shape), 0, 1)),
        settings=settings,
    )


def hardy_certificate(behavior, clause_map=None, tol_zero=DEFAULT_TOL.zero, tol_success=DEFAULT_TOL.success):
    clause_map = clause_map or hardy_clauses(behavior.scenario)
    q1, zs = clause_map.evaluate(behavior)
    return HardyCertificate(q1, *zs, tol_zero=tol_zero, tol_success=tol_success)
