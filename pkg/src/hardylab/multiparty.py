"""Three-qubit Hardy-type conditions.

Every party has settings ``U`` (index 0) and ``D`` (index 1); outcome
index 0 is +1.  Zero clauses ``z1..z4`` are p(D+U+U+), p(U+D+U+),
p(U+U+D+) and p(D-D-D-); the nonzero clause is p(U+U+U+).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import optimize as opt
from .clauses import tripartite_clauses
from .numerics import DEFAULT_TOL
from .quantum import Behavior, Observable, PureState, born_behavior

TRIPARTITE_MAX = 0.125
GHZ = np.zeros(8, dtype=complex)
GHZ[[0, 7]] = 1 / math.sqrt(2)


@dataclass(frozen=True)
class TripartiteCertificate:
    z1: float
    z2: float
    z3: float
    z4: float
    q: float
    tol_zero: float = DEFAULT_TOL.zero
    tol_success: float = DEFAULT_TOL.success

    @property
    def zeros(self):
        return (self.z1, self.z2, self.z3, self.z4)

    @property
    def max_zero(self):
        return max(self.zeros)

    @property
    def satisfied(self):
        return all(z < self.tol_zero for z in self.zeros) and self.q > self.tol_success

    def as_dict(self):
        d = {f"z{i + 1}": z for i, z in enumerate(self.zeros)}
        d.update(q=self.q, satisfied=self.satisfied, tol_zero=self.tol_zero, tol_success=self.tol_success)
        return d


def tripartite_witness(behavior, tol_zero=DEFAULT_TOL.zero, tol_success=DEFAULT_TOL.success):
    q, zs = tripartite_clauses(behavior.scenario).evaluate(behavior)
    return TripartiteCertificate(*zs, q, tol_zero=tol_zero, tol_success=tol_success)


def tripartite_behavior(state, observables):
    """``observables = ((U1, D1), (U2, D2), (U3, D3))``."""
    return born_behavior(state, [list(pair) for pair in observables])


@dataclass(frozen=True)
class TripartiteOptimum:
    certificate: TripartiteCertificate
    state: PureState
    observables: tuple
    behavior: Behavior
    restart_values: tuple = ()


def _rows(bases):
    """``bases[j] = ((U+, U-), (D+, D-))`` column bases for party j."""
    (u1, d1), (u2, d2), (u3, d3) = bases
    zero = np.vstack(
        [
            opt.product_rows(d1[0], u2[0], u3[0]),
            opt.product_rows(u1[0], d2[0], u3[0]),
            opt.product_rows(u1[0], u2[0], d3[0]),
            opt.product_rows(d1[1], d2[1], d3[1]),
        ]
    )
    return zero, opt.product_rows(u1[0], u2[0], u3[0])


def _bases(x, frames):
    out = []
    for j in range(3):
        pair = tuple(opt.split_basis(x[4 * j + 2 * k : 4 * j + 2 * k + 2], 2, 1, frames[2 * j + k]) for k in range(2))
        out.append(pair)
    return out


def maximize_tripartite_hardy(restarts=8, seed=0, family="general", maxfev=None, workers=1):
    """Search three-qubit pure states and dichotomic observables for the largest ``q``.

    ``family``: ``"general"`` (state eliminated as the top eigenvector on the
    zero-clause kernel), ``"ghz"`` (local unitaries on the GHZ state, folded
    into the observables) or ``"product"``.
    """
    if family not in ("general", "ghz", "product"):
        raise ValueError(f"unknown family {family!r}")

    def run(rng, index):
        frames = [opt.random_unitary(rng, 2) for _ in range(6)]
        if family == "general":

            def objective(x):
                return -opt.constrained_max(*_rows(_bases(x, frames)))

            x, _ = opt.polish(objective, rng.normal(size=12), maxfev or 6000)
            bases = _bases(x, frames)
            value, psi = opt.constrained_argmax(*_rows(bases))
            if psi is None:
                psi = GHZ
            return value, (psi, bases)

        def state_of(x):
            if family == "ghz":
                return GHZ
            ks = [x[12 + 4 * j : 12 + 4 * j + 2] + 1j * x[14 + 4 * j : 14 + 4 * j + 2] for j in range(3)]
            ks = [k / np.linalg.norm(k) for k in ks]
            return np.kron(np.kron(ks[0], ks[1]), ks[2])

        def evaluate(x):
            psi = state_of(x)
            zero, target = _rows(_bases(x, frames))
            return float(np.sum(np.abs(target.conj() @ psi) ** 2)), np.abs(zero.conj() @ psi) ** 2

        n = 12 if family == "ghz" else 24
        x = opt.penalty_search(evaluate, rng.normal(size=n), maxfev or 100 * n)
        q, z = evaluate(x)
        return (q if np.sum(z) < 1e-8 else -float(np.sum(z))), (state_of(x), _bases(x, frames))

    _, (psi, bases), values = opt.multistart(run, restarts, seed, workers)
    state = PureState(psi, (2, 2, 2))
    observables = tuple(tuple(Observable.from_basis(b[0]) for b in pair) for pair in bases)
    beh = tripartite_behavior(state, observables)
    return TripartiteOptimum(tripartite_witness(beh), state, observables, beh, tuple(values))
