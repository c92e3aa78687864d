"""Bipartite Hardy machinery.

Clause orientations:

* :func:`hardy_witness` puts the nonzero clause on the unprimed pair,
  ``p(+,+|A,B)``, with zeros ``p(-,+|A',B)``, ``p(+,-|A,B')``, ``p(+,+|A',B')``.
* :func:`minimal_form_witness` puts it on ``(A2, B2)``; settings 0/1 are
  A1/A2.  :func:`hardy_to_minimal` maps between the two by swapping
  setting indices: A' -> A1, A -> A2, B' -> B1, B -> B2, every role at
  outcome index 0.

Computational basis convention for the canonical family: ``u = |0>``,
``v = |1>`` on each qubit.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import optimize as opt
from .clauses import HardyCertificate, clifton_niemann_clauses, hardy_clauses, minimal_form_clauses
from .errors import (
    BadDirection,
    BadSpin,
    CommutingObservables,
    DegenerateFamily,
    DimensionMismatch,
    NotNormalized,
)
from .numerics import DEFAULT_TOL, kron, null_space
from .quantum import Behavior, GeneralMeasurement, Observable, PureState, born_behavior

# (5 sqrt5 - 11) / 2, written without the cancellation
HARDY_MAX = 2 / (5 * math.sqrt(5) + 11)
OPTIMAL_B = math.sqrt((3 - math.sqrt(5)) / 2)

_U = np.array([1, 0], dtype=complex)
_V = np.array([0, 1], dtype=complex)


def _certificate(clause_map, behavior, tol_zero, tol_success):
    q1, zs = clause_map.evaluate(behavior)
    return HardyCertificate(q1, *zs, tol_zero=tol_zero, tol_success=tol_success)


def hardy_witness(behavior, alice=(0, 1), bob=(0, 1), plus=0, tol_zero=DEFAULT_TOL.zero, tol_success=DEFAULT_TOL.success):
    """Read Hardy's four probabilities off a 2x2x2x2 behavior.

    ``alice``/``bob`` give the setting indices of (A, A') and (B, B');
    ``plus`` is the outcome index carrying +1.
    """
    cm = hardy_clauses(behavior.scenario, alice, bob, plus)
    return _certificate(cm, behavior, tol_zero, tol_success)


def minimal_form_witness(behavior, roles=(0, 0, 0, 0), tol_zero=DEFAULT_TOL.zero, tol_success=DEFAULT_TOL.success):
    """Minimal-form certificate; ``roles = (a1, b1, a2, b2)`` outcome indices."""
    cm = minimal_form_clauses(behavior.scenario, roles)
    return _certificate(cm, behavior, tol_zero, tol_success)


def best_minimal_roles(behavior, tol_zero=DEFAULT_TOL.zero, tol_success=DEFAULT_TOL.success):
    """Scan every ``(a1, b1, a2, b2)``; return ``(roles, certificate)`` with the largest satisfied q1.

    Falls back to the assignment with the smallest largest zero clause.
    """
    da, db = behavior.scenario.outcomes
    best = None
    for roles in itertools.product(range(da), range(db), range(da), range(db)):
        cert = minimal_form_witness(behavior, roles, tol_zero, tol_success)
        key = (cert.satisfied, cert.q1 if cert.satisfied else -cert.max_zero)
        if best is None or key > best[0]:
            best = (key, roles, cert)
    return best[1], best[2]


def clifton_niemann_witness(behavior, s=None, tol_zero=DEFAULT_TOL.zero, tol_success=DEFAULT_TOL.success):
    """Spin-s certificate; outcome index k carries spin value ``s - k``.

    q1 = P(S_a'=S_b'=-s); q2, q3 are the failure probabilities of the two
    ``>= 0`` sum clauses; q4 = P(S_a=S_b=s).
    """
    if s is None:
        s = Fraction(behavior.scenario.outcomes[0] - 1, 2)
    cm = clifton_niemann_clauses(s, behavior.scenario)
    return _certificate(cm, behavior, tol_zero, tol_success)


def hardy_to_minimal(behavior):
    """Reorder settings so a Hardy-oriented behavior reads in minimal-form orientation."""
    return behavior.relabel(setting_perms=([1, 0], [1, 0]))


minimal_to_hardy = hardy_to_minimal


@dataclass(frozen=True)
class CanonicalHardyFamily:
    """Amplitudes of ``a|v1 v2> + b|u1 v2> + c|v1 u2>`` with ``abc != 0``."""

    a: complex
    b: complex
    c: complex
    tol: float = DEFAULT_TOL.zero

    def __post_init__(self):
        a, b, c = (complex(x) for x in (self.a, self.b, self.c))
        if not all(map(np.isfinite, (a, b, c))):
            raise ValueError("amplitudes must be finite")
        norm = abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2
        if abs(norm - 1.0) > DEFAULT_TOL.norm:
            raise NotNormalized(f"|a|^2+|b|^2+|c|^2 = {norm!r}, expected 1")
        small = [n for n, x in zip("abc", (a, b, c)) if abs(x) <= self.tol]
        if small:
            raise DegenerateFamily(f"amplitude(s) {','.join(small)} vanish; Hardy needs abc != 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @classmethod
    def from_moduli(cls, b, c, phase_b=0.0, phase_c=0.0):
        """``a`` real positive, fixed by normalization."""
        a2 = 1.0 - b * b - c * c
        if a2 <= 0:
            raise DegenerateFamily("|b|^2 + |c|^2 must be < 1")
        return cls(math.sqrt(a2), b * np.exp(1j * phase_b), c * np.exp(1j * phase_c))

    @classmethod
    def optimal(cls):
        return cls.from_moduli(OPTIMAL_B, OPTIMAL_B)


def canonical_state(fam):
    ket = fam.a * kron(_V, _V) + fam.b * kron(_U, _V) + fam.c * kron(_V, _U)
    return PureState(ket, (2, 2))


def _perp(w):
    return np.array([-np.conj(w[1]), np.conj(w[0])])


def canonical_observables(fam):
    """``(A, A', B, B')`` with +1 eigenvectors ``w1_perp, u1, w2_perp, u2``."""
    w1 = (fam.a * _V + fam.b * _U) / math.sqrt(abs(fam.a) ** 2 + abs(fam.b) ** 2)
    w2 = (fam.a * _V + fam.c * _U) / math.sqrt(abs(fam.a) ** 2 + abs(fam.c) ** 2)
    return (
        Observable.from_ket(_perp(w1)),
        Observable.from_ket(_U),
        Observable.from_ket(_perp(w2)),
        Observable.from_ket(_U),
    )


def hardy_behavior(state, observables):
    """Behavior with Alice's settings (A, A') and Bob's (B, B'), +1 at index 0."""
    a, a_, b, b_ = observables
    return born_behavior(state, [[a, a_], [b, b_]])


def hardy_probability_moduli(a2, b2, c2):
    """Closed form on squared moduli; broadcasts over arrays."""
    return a2 * b2 * c2 / ((a2 + b2) * (a2 + c2))


def hardy_probability_formula(fam):
    """Success probability of the canonical construction in closed form."""
    return hardy_probability_moduli(abs(fam.a) ** 2, abs(fam.b) ** 2, abs(fam.c) ** 2)


def _rank_one_vectors(obs, name):
    if obs.dim != 2:
        raise DimensionMismatch(f"{name} must act on C^2")
    plus, minus = obs.plus_basis(), obs.minus_basis()
    if plus.shape[1] != 1:
        raise DimensionMismatch(f"{name} must have a one-dimensional +1 eigenspace")
    return plus[:, 0], minus[:, 0]


def unique_hardy_state(A, A_, B, B_, tol=DEFAULT_TOL.zero):
    """The one two-qubit state satisfying Hardy's zero clauses for these observables.

    It is orthogonal to ``|a1'^perp b1>``, ``|a1 b1'^perp>`` and
    ``|a1' b1'>``; with noncommuting pairs those span a 3-dim subspace.
    """
    if A.commutator_norm(A_) <= tol:
        raise CommutingObservables("A and A' commute")
    if B.commutator_norm(B_) <= tol:
        raise CommutingObservables("B and B' commute")
    a1, _ = _rank_one_vectors(A, "A")
    a1p, a1p_perp = _rank_one_vectors(A_, "A'")
    b1, _ = _rank_one_vectors(B, "B")
    b1p, b1p_perp = _rank_one_vectors(B_, "B'")
    kernel = null_space([kron(a1p_perp, b1), kron(a1, b1p_perp), kron(a1p, b1p)], tol=tol)
    if len(kernel) != 1:
        raise CommutingObservables("the three zero-clause vectors are linearly dependent")
    psi = kernel[0]
    if abs(np.vdot(kron(a1, b1), psi)) ** 2 <= tol:
        raise CommutingObservables("the recovered state has no overlap with |a1 b1>")
    return PureState(psi / np.linalg.norm(psi), (2, 2))


def spin_operator(s, direction, tol=DEFAULT_TOL.norm):
    """``n . S`` for spin ``s``; basis index k carries ``S_z = s - k``."""
    two_s = 2 * Fraction(s).limit_denominator(1000)
    if two_s.denominator != 1 or two_s < 1:
        raise BadSpin(f"spin must be a positive half-integer, got {s!r}")
    n = np.asarray(direction, dtype=float).reshape(-1)
    if n.size != 3 or not np.all(np.isfinite(n)) or abs(np.linalg.norm(n) - 1.0) > tol:
        raise BadDirection(f"direction must be a unit 3-vector, got {direction!r}")
    s = float(two_s) / 2
    d = int(two_s) + 1
    m = s - np.arange(d)
    sz = np.diag(m).astype(complex)
    sp = np.zeros((d, d), dtype=complex)
    for k in range(1, d):
        sp[k - 1, k] = math.sqrt(s * (s + 1) - m[k] * (m[k] + 1))
    sx = (sp + sp.conj().T) / 2
    sy = (sp - sp.conj().T) / 2j
    return n[0] * sx + n[1] * sy + n[2] * sz


def spin_measurement(s, direction):
    """Spin measurement with outcome index k for value ``s - k``."""
    return GeneralMeasurement.from_hermitian(spin_operator(s, direction))


def optimal_selftest_point(theta=0.0):
    """State and ``(A, A', B, B')`` reaching the two-qubit maximum for any phase ``theta``."""
    b = OPTIMAL_B
    ph = np.exp(1j * theta) * math.sqrt(1 - 2 * b * b)
    ket = b * (kron(_U, _V) + kron(_V, _U)) + ph * kron(_V, _V)
    w = (ph * _V + b * _U) / math.sqrt(1 - b * b)
    state = PureState(ket, (2, 2))
    obs = (Observable.from_ket(_perp(w)), Observable.from_ket(_U), Observable.from_ket(_perp(w)), Observable.from_ket(_U))
    return state, obs


@dataclass(frozen=True)
class HardyOptimum:
    certificate: HardyCertificate
    state: PureState
    observables: tuple
    behavior: Behavior
    restart_values: tuple = ()


def _hardy_rows(bases):
    """Zero-clause rows and success rows from ``[(plus, minus)]`` for A, A', B, B'."""
    (ap, _), (a_p, a_m), (bp, _), (b_p, b_m) = bases
    zero = np.vstack([opt.product_rows(a_m, bp), opt.product_rows(ap, b_m), opt.product_rows(a_p, b_p)])
    return zero, opt.product_rows(ap, bp)


def _default_maxfev(nparams):
    return max(2000, 400 * nparams)


def maximize_hardy(local_dims=(2, 2), restarts=8, seed=0, family="general", ranks=None, maxfev=None, workers=1):
    """Search states and two-outcome projective measurements for the largest ``q1``.

    ``family``:

    * ``"general"`` eliminates the state (see :mod:`hardylab.optimize`);
      for local dimension > 2 the ranks of the four +1 projectors are
      drawn per restart unless ``ranks`` fixes them.
    * ``"maximally_entangled"`` and ``"product"`` restrict the state and
      enforce the zero clauses by penalty continuation.

    Returns a :class:`HardyOptimum` whose certificate is in Hardy orientation.
    """
    da, db = (int(d) for d in local_dims)
    if da < 2 or db < 2:
        raise DimensionMismatch("local dimensions must be >= 2")
    dims = (da, da, db, db)
    if family == "general":
        run = _general_run(dims, ranks, maxfev)
    elif family in ("maximally_entangled", "product"):
        if family == "maximally_entangled" and da != db:
            raise DimensionMismatch("maximally entangled family needs equal local dimensions")
        run = _restricted_run(dims, family, maxfev)
    else:
        raise ValueError(f"unknown family {family!r}")
    _, payload, values = opt.multistart(run, restarts, seed, workers)
    state, bases = payload
    observables = tuple(Observable.from_basis(p) for p, _ in bases)
    beh = hardy_behavior(state, observables)
    return HardyOptimum(hardy_witness(beh), state, observables, beh, tuple(values))


def _general_run(dims, ranks, maxfev):
    def run(rng, index):
        rk = ranks or tuple(1 if d == 2 else int(rng.integers(1, d)) for d in dims)
        frames = [opt.random_unitary(rng, d) for d in dims]
        sizes = [opt.subspace_params(d, r) for d, r in zip(dims, rk)]
        offsets = np.cumsum([0] + sizes)

        def bases_of(x):
            return [
                opt.split_basis(x[offsets[i] : offsets[i + 1]], dims[i], rk[i], frames[i]) for i in range(4)
            ]

        def objective(x):
            zero, target = _hardy_rows(bases_of(x))
            return -opt.constrained_max(zero, target)

        x0 = rng.normal(size=offsets[-1])
        x, f = opt.polish(objective, x0, maxfev or _default_maxfev(offsets[-1]))
        bases = bases_of(x)
        zero, target = _hardy_rows(bases)
        value, psi = opt.constrained_argmax(zero, target)
        if psi is None:
            return 0.0, (PureState(np.eye(dims[0] * dims[2])[0], (dims[0], dims[2])), bases)
        return value, (PureState(psi, (dims[0], dims[2])), bases)

    return run


def _restricted_run(dims, family, maxfev):
    da, db = dims[0], dims[2]

    def run(rng, index):
        frames = [opt.random_unitary(rng, d) for d in dims]
        nobs = 4 * 2 * (dims[0] - 1)
        nstate = 2 * db * db if family == "maximally_entangled" else 2 * (da + db)

        def state_of(x):
            y = x[nobs:]
            if family == "maximally_entangled":
                z = (y[: db * db] + 1j * y[db * db :]).reshape(db, db)
                u, _ = np.linalg.qr(z)
                phi = np.eye(da, dtype=complex).reshape(-1) / math.sqrt(da)
                return np.kron(np.eye(da), u) @ phi
            pa = y[:da] + 1j * y[da : 2 * da]
            pb = y[2 * da : 2 * da + db] + 1j * y[2 * da + db :]
            return np.kron(pa / np.linalg.norm(pa), pb / np.linalg.norm(pb))

        def bases_of(x):
            return [opt.split_basis(x[2 * (d - 1) * i : 2 * (d - 1) * (i + 1)], d, 1, frames[i]) for i, d in enumerate(dims)]

        def probs(x):
            psi = state_of(x)
            zero, target = _hardy_rows(bases_of(x))
            return float(np.sum(np.abs(target.conj() @ psi) ** 2)), np.abs(zero.conj() @ psi) ** 2

        x0 = rng.normal(size=nobs + nstate)
        x = opt.penalty_search(probs, x0, maxfev or 100 * len(x0))
        q1, z = probs(x)
        return q1 if np.sum(z) < 1e-8 else -np.sum(z), (PureState(state_of(x), (da, db)), bases_of(x))

    return run
