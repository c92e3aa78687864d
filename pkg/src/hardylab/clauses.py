"""Clause maps: which table entries form the nonzero and the zero conditions.

A clause is a setting tuple plus a set of outcome tuples; its value on a
behavior is the summed probability of those outcomes.  Every witness in
the package (bipartite, minimal form, spin-s, tripartite, temporal) is a
clause map, and the polytope LPs take clause maps directly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BadRoleLabels, ScenarioMismatch
from .numerics import DEFAULT_TOL
from .quantum import Scenario


@dataclass(frozen=True)
class Clause:
    settings: tuple
    outcomes: frozenset
    name: str = ""

    def value(self, behavior):
        row = behavior.row(self.settings)
        return float(sum(row[o] for o in self.outcomes))

    def mask(self, scenario):
        m = np.zeros(scenario.shape)
        for o in self.outcomes:
            m[tuple(self.settings) + tuple(o)] = 1.0
        return m


@dataclass(frozen=True)
class ClauseMap:
    scenario: Scenario
    nonzero: Clause
    zeros: tuple

    def evaluate(self, behavior):
        if behavior.scenario != self.scenario:
            raise ScenarioMismatch(
                f"clause map expects scenario {self.scenario.shape}, behavior has {behavior.scenario.shape}"
            )
        return self.nonzero.value(behavior), [z.value(behavior) for z in self.zeros]


@dataclass(frozen=True)
class HardyCertificate:
    """Nonzero clause ``q1`` and zero clauses ``q2..q4``, in the evaluator's clause order."""

    q1: float
    q2: float
    q3: float
    q4: float
    tol_zero: float = DEFAULT_TOL.zero
    tol_success: float = DEFAULT_TOL.success

    @property
    def zeros(self):
        return (self.q2, self.q3, self.q4)

    @property
    def max_zero(self):
        return max(self.zeros)

    @property
    def satisfied(self):
        return all(z < self.tol_zero for z in self.zeros) and self.q1 > self.tol_success

    def as_dict(self):
        return {
            "q1": self.q1,
            "q2": self.q2,
            "q3": self.q3,
            "q4": self.q4,
            "satisfied": self.satisfied,
            "tol_zero": self.tol_zero,
            "tol_success": self.tol_success,
        }


def _check_two_party(scenario, outcomes=None):
    if scenario.parties != 2 or scenario.settings != (2, 2):
        raise ScenarioMismatch(f"need a 2-party, 2-setting scenario, got {scenario}")
    if outcomes is not None and scenario.outcomes != outcomes:
        raise ScenarioMismatch(f"need outcomes {outcomes}, got {scenario.outcomes}")


def hardy_clauses(scenario=None, alice=(0, 1), bob=(0, 1), plus=0):
    """Hardy's four conditions with the nonzero clause on the unprimed pair.

    ``alice = (A, A')`` and ``bob = (B, B')`` are setting indices; ``plus``
    is the outcome index read as +1.

    - q1 = p(+,+ | A, B)
    - q2 = p(-,+ | A', B)
    - q3 = p(+,- | A, B')
    - q4 = p(+,+ | A', B')
    """
    scenario = scenario or Scenario.uniform(2)
    _check_two_party(scenario, (2, 2))
    if sorted(alice) != [0, 1] or sorted(bob) != [0, 1] or plus not in (0, 1):
        raise BadRoleLabels(f"bad Hardy labels alice={alice} bob={bob} plus={plus}")
    a, a_ = alice
    b, b_ = bob
    p, m = plus, 1 - plus
    return ClauseMap(
        scenario,
        Clause((a, b), frozenset({(p, p)}), "p(+,+|A,B)"),
        (
            Clause((a_, b), frozenset({(m, p)}), "p(-,+|A',B)"),
            Clause((a, b_), frozenset({(p, m)}), "p(+,-|A,B')"),
            Clause((a_, b_), frozenset({(p, p)}), "p(+,+|A',B')"),
        ),
    )


def minimal_form_clauses(scenario, roles):
    """Qudit minimal form; settings 0/1 are A1/A2 and B1/B2.

    ``roles = (a1, b1, a2, b2)`` are outcome indices.  Clause order:

    - q1 = p(a2, b2 | A2, B2)
    - q2 = p(a1, b1 | A1, B1)
    - q3 = p(not a1, b2 | A1, B2)
    - q4 = p(a2, not b1 | A2, B1)
    """
    _check_two_party(scenario)
    da, db = scenario.outcomes
    a1, b1, a2, b2 = roles
    if not (0 <= a1 < da and 0 <= a2 < da and 0 <= b1 < db and 0 <= b2 < db):
        raise BadRoleLabels(f"roles {roles} out of range for outcomes {scenario.outcomes}")
    return ClauseMap(
        scenario,
        Clause((1, 1), frozenset({(a2, b2)}), "p(a2,b2|A2,B2)"),
        (
            Clause((0, 0), frozenset({(a1, b1)}), "p(a1,b1|A1,B1)"),
            Clause((0, 1), frozenset((a, b2) for a in range(da) if a != a1), "p(~a1,b2|A1,B2)"),
            Clause((1, 0), frozenset((a2, b) for b in range(db) if b != b1), "p(a2,~b1|A2,B1)"),
        ),
    )


def spin_values(s):
    """Spin values ``s, s-1, ..., -s``; outcome index k carries ``s - k``."""
    s = Fraction(s).limit_denominator(2)
    return [s - k for k in range(int(2 * s) + 1)]


def clifton_niemann_clauses(s, scenario=None):
    """Spin-s conditions; settings 0/1 are a/a' for Alice and b/b' for Bob.

    - q1 = P(S_a' = S_b' = -s)
    - q2 = 1 - P(S_a + S_b' >= 0)
    - q3 = 1 - P(S_a' + S_b >= 0)
    - q4 = P(S_a = S_b = s)
    """
    vals = spin_values(s)
    d = len(vals)
    scenario = scenario or Scenario.uniform(2, 2, d)
    _check_two_party(scenario, (d, d))
    negative = frozenset((i, j) for i in range(d) for j in range(d) if vals[i] + vals[j] < 0)
    return ClauseMap(
        scenario,
        Clause((1, 1), frozenset({(d - 1, d - 1)}), "P(Sa'=Sb'=-s)"),
        (
            Clause((0, 1), negative, "1-P(Sa+Sb'>=0)"),
            Clause((1, 0), negative, "1-P(Sa'+Sb>=0)"),
            Clause((0, 0), frozenset({(0, 0)}), "P(Sa=Sb=s)"),
        ),
    )


U, D = 0, 1


def tripartite_clauses(scenario=None, plus=0):
    """Three-qubit conditions; setting 0 is U_j and 1 is D_j for every party.

    zeros: p(D1+,U2+,U3+), p(U1+,D2+,U3+), p(U1+,U2+,D3+), p(D1-,D2-,D3-);
    nonzero: p(U1+,U2+,U3+).
    """
    scenario = scenario or Scenario.uniform(3)
    if scenario.parties != 3 or scenario.settings != (2, 2, 2) or scenario.outcomes != (2, 2, 2):
        raise ScenarioMismatch(f"need a 3-party, 2-setting, 2-outcome scenario, got {scenario}")
    p, m = plus, 1 - plus
    ppp = frozenset({(p, p, p)})
    return ClauseMap(
        scenario,
        Clause((U, U, U), ppp, "p(U1+,U2+,U3+)"),
        (
            Clause((D, U, U), ppp, "p(D1+,U2+,U3+)"),
            Clause((U, D, U), ppp, "p(U1+,D2+,U3+)"),
            Clause((U, U, D), ppp, "p(U1+,U2+,D3+)"),
            Clause((D, D, D), frozenset({(m, m, m)}), "p(D1-,D2-,D3-)"),
        ),
    )


def all_outcomes(scenario):
    return list(itertools.product(*(range(o) for o in scenario.outcomes)))
