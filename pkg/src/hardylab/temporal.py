"""Hardy's conditions for two measurements in sequence on one system.

The first measurement (A or A') is made at t1, the second (B or B') at
t2, with the Lueders update in between, so

    p(a, b | X, Y) = Tr[P_b^Y P_a^X rho P_a^X].

Behaviors use the bipartite layout: "party" 0 is time t1, party 1 is t2.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import optimize as opt
from .errors import DimensionMismatch
from .hardy import hardy_witness
from .numerics import DEFAULT_TOL, is_hermitian
from .quantum import Behavior, Observable, PureState, Scenario

TEMPORAL_MAX = 0.25


@dataclass(frozen=True)
class TemporalScenario:
    """Initial state (ket, :class:`PureState` or density matrix) and observables A, A', B, B'."""

    state: object
    A: Observable
    A_: Observable
    B: Observable
    B_: Observable

    def __post_init__(self):
        rho = self.density
        d = rho.shape[0]
        for name in ("A", "A_", "B", "B_"):
            if getattr(self, name).dim != d:
                raise DimensionMismatch(f"observable {name} acts on C^{getattr(self, name).dim}, state on C^{d}")

    @property
    def density(self):
        s = self.state
        if isinstance(s, PureState):
            return s.density()
        s = np.asarray(s, dtype=complex)
        if s.ndim == 1:
            return PureState(s, (s.size,)).density()
        if s.ndim != 2 or s.shape[0] != s.shape[1] or not is_hermitian(s):
            raise DimensionMismatch("density matrix must be square and Hermitian")
        if abs(np.trace(s).real - 1.0) > DEFAULT_TOL.norm:
            raise DimensionMismatch("density matrix must have unit trace")
        return s

    @property
    def dim(self):
        return self.density.shape[0]


def sequential_behavior(sc):
    rho = sc.density
    first = [sc.A, sc.A_]
    second = [sc.B, sc.B_]
    t = np.zeros((2, 2, 2, 2))
    for x, y in itertools.product(range(2), range(2)):
        pa = (first[x].plus_projector, first[x].minus_projector)
        pb = (second[y].plus_projector, second[y].minus_projector)
        for a, b in itertools.product(range(2), range(2)):
            t[x, y, a, b] = np.real(np.trace(pb[b] @ pa[a] @ rho @ pa[a]))
    t = np.clip(t, 0.0, 1.0)
    t /= t.sum(axis=(2, 3), keepdims=True)
    return Behavior(Scenario.uniform(2), t)


def temporal_hardy_witness(behavior, tol_zero=DEFAULT_TOL.zero, tol_success=DEFAULT_TOL.success):
    """Same clauses as :func:`hardylab.hardy.hardy_witness`: t1 plays Alice, t2 Bob."""
    return hardy_witness(behavior, tol_zero=tol_zero, tol_success=tol_success)


def pauli_example():
    """``|1>`` with A = B' = sigma_x and A' = B = sigma_z; q1 = 1/4 with exact zeros."""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sz = np.diag([1.0, -1.0]).astype(complex)
    x, z = Observable.from_matrix(sx), Observable.from_matrix(sz)
    return TemporalScenario(np.array([0, 1], dtype=complex), x, z, z, x)


def _sequential_rows(first, second):
    """Kets ``P_a e`` for ``e`` spanning the range of ``P_b``; ``first = P_a``, ``second`` a column basis."""
    return (first @ second).T


def _temporal_rows(bases):
    (ap, am), (a_p, a_m), (bp, bm), (b_p, b_m) = bases

    def proj(cols):
        return cols @ cols.conj().T

    zero = np.vstack(
        [
            _sequential_rows(proj(a_m), bp),
            _sequential_rows(proj(ap), b_m),
            _sequential_rows(proj(a_p), b_p),
        ]
    )
    return zero, _sequential_rows(proj(ap), bp)


@dataclass(frozen=True)
class TemporalOptimum:
    certificate: object
    scenario: TemporalScenario
    behavior: Behavior
    restart_values: tuple = ()


def maximize_temporal_hardy(d=2, restarts=8, seed=0, family="general", ranks=None, maxfev=None, workers=1):
    """Best ``q1`` over initial states and two-outcome projective observables on C^d.

    The state is eliminated from the quadratic penalty ``T - mu Z`` and
    ``mu`` is raised by continuation; restarts whose zero clauses stay
    above 1e-8 score their violation, negated.

    ``family="commuting"`` restricts all four observables to one common
    eigenbasis; every +1 subspace choice is then enumerated.
    """
    d = int(d)
    if d < 2:
        raise DimensionMismatch("d must be >= 2")
    if family == "general":
        run = _general_run(d, ranks, maxfev)
    elif family == "commuting":
        run = _commuting_run(d)
    else:
        raise ValueError(f"unknown family {family!r}")
    _, (psi, bases), values = opt.multistart(run, restarts, seed, workers)
    obs = [Observable.from_basis(p) for p, _ in bases]
    sc = TemporalScenario(PureState(psi, (d,)), *obs)
    beh = sequential_behavior(sc)
    return TemporalOptimum(temporal_hardy_witness(beh), sc, beh, tuple(values))


def _best_state(bases, d):
    value, psi = opt.constrained_argmax(*_temporal_rows(bases))
    if psi is None:
        return 0.0, np.eye(d, dtype=complex)[0]
    return value, psi


def _general_run(d, ranks, maxfev):
    def run(rng, index):
        rk = ranks or tuple(1 if d == 2 else int(rng.integers(1, d)) for _ in range(4))
        frames = [opt.random_unitary(rng, d) for _ in range(4)]
        sizes = [opt.subspace_params(d, r) for r in rk]
        offsets = np.cumsum([0] + sizes)

        def bases_of(x):
            return [opt.split_basis(x[offsets[i] : offsets[i + 1]], d, rk[i], frames[i]) for i in range(4)]

        def rows_of(x):
            return _temporal_rows(bases_of(x))

        x, psi = opt.penalized_continuation(rows_of, rng.normal(size=offsets[-1]), maxfev or 200 * offsets[-1])
        zero, target = rows_of(x)
        q1 = float(np.sum(np.abs(target.conj() @ psi) ** 2))
        viol = float(np.sum(np.abs(zero.conj() @ psi) ** 2))
        return (q1 if viol < 1e-8 else -viol), (psi, bases_of(x))

    return run


def _commuting_run(d):
    subsets = [s for r in range(1, d) for s in itertools.combinations(range(d), r)]

    def run(rng, index):
        frame = opt.random_unitary(rng, d)
        best = None
        for choice in itertools.product(subsets, repeat=4):
            bases = []
            for plus in choice:
                minus = [k for k in range(d) if k not in plus]
                bases.append((frame[:, list(plus)], frame[:, minus]))
            value, psi = _best_state(bases, d)
            if best is None or value > best[0]:
                best = (value, (psi, bases))
        return best

    return run
