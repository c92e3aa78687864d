"""States, projective measurements, Born-rule behaviors and a seeded sampler.

Outcome convention: for a two-outcome observable the +1 outcome is index 0
and -1 is index 1.  d-outcome measurements use indices ``0..d-1`` with an
explicit label list.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import DimensionMismatch, NotProjector, ScenarioMismatch
from .numerics import DEFAULT_TOL, as_ket, as_matrix, is_projector

RNG_ALGORITHM = "numpy.random.PCG64"


@dataclass(frozen=True)
class PureState:
    ket: np.ndarray
    local_dims: tuple

    def __post_init__(self):
        ket = as_ket(self.ket, normalized=True)
        dims = tuple(int(d) for d in self.local_dims)
        if any(d < 1 for d in dims) or prod(dims) != ket.size:
            raise DimensionMismatch(f"local dims {dims} do not match ket dimension {ket.size}")
        object.__setattr__(self, "ket", ket)
        object.__setattr__(self, "local_dims", dims)

    @classmethod
    def from_amplitudes(cls, amplitudes, local_dims):
        """Normalize ``amplitudes`` and wrap them."""
        k = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(k / np.linalg.norm(k), local_dims)

    @property
    def dim(self):
        return self.ket.size

    def density(self):
        return np.outer(self.ket, self.ket.conj())

    def fidelity(self, other):
        return float(abs(np.vdot(self.ket, other.ket)) ** 2)


@dataclass(frozen=True)
class GeneralMeasurement:
    """Projective measurement: mutually orthogonal projectors summing to I."""

    effects: tuple
    labels: tuple = None

    def __post_init__(self):
        effects = tuple(as_matrix(e) for e in self.effects)
        if not effects:
            raise DimensionMismatch("a measurement needs at least one effect")
        d = effects[0].shape[0]
        for e in effects:
            if e.shape != (d, d):
                raise DimensionMismatch("effects must share one square shape")
            if not is_projector(e, DEFAULT_TOL.herm * 10):
                raise NotProjector("measurement effects must be projectors")
        total = sum(effects)
        if np.max(np.abs(total - np.eye(d))) > DEFAULT_TOL.herm * 10:
            raise NotProjector("measurement effects must sum to the identity")
        labels = tuple(range(len(effects))) if self.labels is None else tuple(self.labels)
        if len(labels) != len(effects):
            raise DimensionMismatch("one label per effect required")
        object.__setattr__(self, "effects", effects)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self):
        return self.effects[0].shape[0]

    @property
    def n_outcomes(self):
        return len(self.effects)

    @classmethod
    def from_basis(cls, basis, labels=None):
        """Rank-1 measurement in the given orthonormal column basis."""
        b = as_matrix(basis)
        return cls(tuple(np.outer(b[:, i], b[:, i].conj()) for i in range(b.shape[1])), labels)

    @classmethod
    def from_hermitian(cls, h, tol=1e-9):
        """Spectral measurement of ``h``; outcomes ordered by descending eigenvalue."""
        h = as_matrix(h)
        w, v = np.linalg.eigh(h)
        order = np.argsort(-w, kind="stable")
        w, v = w[order], v[:, order]
        groups = []
        for i, lam in enumerate(w):
            if groups and abs(groups[-1][0] - lam) <= tol:
                groups[-1][1].append(i)
            else:
                groups.append((lam, [i]))
        effects = tuple(v[:, idx] @ v[:, idx].conj().T for _, idx in groups)
        return cls(effects, tuple(float(lam) for lam, _ in groups))


@dataclass(frozen=True)
class Observable:
    """Two-outcome (+1/-1) projective observable stored as its +1 projector."""

    plus_projector: np.ndarray

    def __post_init__(self):
        p = as_matrix(self.plus_projector)
        if p.shape[0] != p.shape[1] or not is_projector(p, DEFAULT_TOL.herm * 10):
            raise NotProjector("plus_projector must be a Hermitian idempotent")
        object.__setattr__(self, "plus_projector", p)

    @property
    def dim(self):
        return self.plus_projector.shape[0]

    @property
    def minus_projector(self):
        return np.eye(self.dim) - self.plus_projector

    @property
    def matrix(self):
        return 2 * self.plus_projector - np.eye(self.dim)

    def measurement(self):
        return GeneralMeasurement((self.plus_projector, self.minus_projector), (+1, -1))

    @classmethod
    def from_ket(cls, plus):
        k = as_ket(plus)
        k = k / np.linalg.norm(k)
        return cls(np.outer(k, k.conj()))

    @classmethod
    def from_matrix(cls, m):
        """From a Hermitian operator with spectrum in {+1, -1}."""
        m = as_matrix(m)
        return cls((np.eye(m.shape[0]) + m) / 2)

    @classmethod
    def from_basis(cls, plus_columns):
        """+1 eigenspace spanned by the given orthonormal columns."""
        v = as_matrix(plus_columns)
        return cls(v @ v.conj().T)

    def plus_basis(self):
        w, v = np.linalg.eigh(self.plus_projector)
        return v[:, w > 0.5]

    def minus_basis(self):
        w, v = np.linalg.eigh(self.plus_projector)
        return v[:, w <= 0.5]

    def commutator_norm(self, other):
        a, b = self.plus_projector, other.plus_projector
        return float(np.linalg.norm(a @ b - b @ a))


@dataclass(frozen=True)
class Scenario:
    """Party count, settings per party, outcomes per party (uniform across a party's settings)."""

    settings: tuple
    outcomes: tuple

    def __post_init__(self):
        s = tuple(int(x) for x in self.settings)
        o = tuple(int(x) for x in self.outcomes)
        if len(s) != len(o) or not s:
            raise ScenarioMismatch("settings and outcomes need one entry per party")
        if any(x < 1 for x in s + o):
            raise ScenarioMismatch("all counts must be >= 1")
        object.__setattr__(self, "settings", s)
        object.__setattr__(self, "outcomes", o)

    @classmethod
    def uniform(cls, parties, settings=2, outcomes=2):
        return cls((settings,) * parties, (outcomes,) * parties)

    @classmethod
    def from_outcome_lists(cls, outcomes_per_setting):
        """Build from ``[[outcomes of each setting] for each party]``."""
        outs = []
        for party in outcomes_per_setting:
            if len(set(party)) != 1:
                raise ScenarioMismatch("outcome counts must be uniform across one party's settings")
            outs.append(party[0])
        return cls(tuple(len(p) for p in outcomes_per_setting), tuple(outs))

    @property
    def parties(self):
        return len(self.settings)

    @property
    def shape(self):
        return self.settings + self.outcomes

    def setting_tuples(self):
        return list(itertools.product(*(range(s) for s in self.settings)))

    def outcome_tuples(self):
        return list(itertools.product(*(range(o) for o in self.outcomes)))

    def to_json(self):
        return {"settings": list(self.settings), "outcomes": list(self.outcomes)}


@dataclass(frozen=True)
class Behavior:
    """Joint table ``p(outcomes | settings)``, indexed ``table[settings..., outcomes...]``."""

    scenario: Scenario
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.shape != self.scenario.shape:
            raise ScenarioMismatch(f"table shape {t.shape} does not match scenario {self.scenario.shape}")
        if not np.all(np.isfinite(t)):
            raise ValueError("probabilities must be finite")
        if t.min(initial=0.0) < -1e-9 or t.max(initial=0.0) > 1 + 1e-9:
            raise ValueError("probabilities must lie in [0, 1]")
        n = self.scenario.parties
        sums = t.sum(axis=tuple(range(n, 2 * n)))
        if np.max(np.abs(sums - 1.0)) > 1e-9:
            raise ValueError("each setting row must sum to 1 within 1e-9")
        t = np.clip(t, 0.0, 1.0)
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def p(self, settings, outcomes):
        return float(self.table[tuple(settings) + tuple(outcomes)])

    def row(self, settings):
        return self.table[tuple(settings)]

    def marginal(self, parties, settings):
        """Marginal over ``parties`` (indices) given the full setting tuple."""
        n = self.scenario.parties
        row = self.row(settings)
        drop = tuple(i for i in range(n) if i not in parties)
        return row.sum(axis=drop)

    def vector(self):
        return self.table.reshape(-1)

    def relabel(self, setting_perms=None, outcome_perms=None):
        """Permute settings/outcomes per party; ``perm[new] = old``."""
        n = self.scenario.parties
        t = self.table
        for k in range(n):
            if setting_perms and setting_perms[k] is not None:
                t = np.take(t, setting_perms[k], axis=k)
            if outcome_perms and outcome_perms[k] is not None:
                t = np.take(t, outcome_perms[k], axis=n + k)
        return Behavior(self.scenario, t)


def _born_pure(ket, dims, effect_stacks):
    """``p[o...] = <psi| E_1[o_1] x ... x E_n[o_n] |psi>`` via one einsum."""
    n = len(dims)
    letters = iter("abcdefghijklmnopqrstuvwxyz")
    ins = [next(letters) for _ in range(n)]
    outs = [next(letters) for _ in range(n)]
    oc = [next(letters) for _ in range(n)]
    spec = ",".join(["".join(outs)] + [oc[k] + outs[k] + ins[k] for k in range(n)] + ["".join(ins)])
    psi = ket.reshape(dims)
    return np.einsum(spec + "->" + "".join(oc), psi.conj(), *effect_stacks, psi, optimize=True).real


def born_behavior(state, measurements, local_dims=None):
    """Born-rule behavior of a state under per-party, per-setting measurements.

    ``measurements[k][x]`` is the :class:`GeneralMeasurement` (or
    :class:`Observable`) party ``k`` uses for setting ``x``.  ``state`` is
    a :class:`PureState` or a density matrix (then ``local_dims`` is needed).
    """
    meas = [[m.measurement() if isinstance(m, Observable) else m for m in party] for party in measurements]
    if isinstance(state, PureState):
        dims = state.local_dims
        rho = None
        ket = state.ket
    else:
        rho = as_matrix(state)
        if local_dims is None:
            raise DimensionMismatch("local_dims required for a density matrix")
        dims = tuple(local_dims)
        if rho.shape != (prod(dims), prod(dims)):
            raise DimensionMismatch("density matrix does not match local dims")
    if len(meas) != len(dims):
        raise DimensionMismatch(f"{len(meas)} measurement lists for {len(dims)} parties")
    outcomes = []
    for k, party in enumerate(meas):
        if not party:
            raise DimensionMismatch("every party needs at least one setting")
        counts = {m.n_outcomes for m in party}
        if len(counts) != 1:
            raise ScenarioMismatch("outcome counts must be uniform across one party's settings")
        outcomes.append(counts.pop())
        for m in party:
            if m.dim != dims[k]:
                raise DimensionMismatch(f"party {k} measurement has dim {m.dim}, state has {dims[k]}")
    scen = Scenario(tuple(len(p) for p in meas), tuple(outcomes))
    n = len(dims)
    table = np.zeros(scen.shape)
    for xs in scen.setting_tuples():
        if rho is None:
            probs = _born_pure(ket, dims, [np.stack(meas[k][x].effects) for k, x in enumerate(xs)])
        else:
            probs = np.zeros(tuple(outcomes))
            for os_ in scen.outcome_tuples():
                op = meas[0][xs[0]].effects[os_[0]]
                for k in range(1, n):
                    op = np.kron(op, meas[k][xs[k]].effects[os_[k]])
                probs[os_] = np.trace(rho @ op).real
        table[xs] = np.clip(probs, 0.0, 1.0)
    return Behavior(scen, table)


def sample_behavior(behavior, n, seed, settings_policy=None):
    """Simulate ``n`` trials of ``behavior`` and return outcome counts.

    Each trial draws a setting tuple from ``settings_policy`` (weights over
    ``scenario.setting_tuples()``, uniform by default) and then an outcome
    tuple from that row.  Returns integer counts with the table's shape.
    Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("trial count must be >= 1")
    scen = behavior.scenario
    settings = scen.setting_tuples()
    if settings_policy is None:
        weights = np.full(len(settings), 1.0 / len(settings))
    else:
        weights = np.asarray(settings_policy, dtype=float)
        if weights.shape != (len(settings),) or weights.min() < 0 or weights.sum() <= 0:
            raise ValueError("settings_policy needs one nonnegative weight per setting tuple")
        weights = weights / weights.sum()
    rng = np.random.Generator(np.random.PCG64(seed))
    per_setting = rng.multinomial(int(n), weights)
    counts = np.zeros(scen.shape, dtype=np.int64)
    for xs, m in zip(settings, per_setting):
        row = behavior.row(xs).reshape(-1)
        row = row / row.sum()
        counts[xs] = rng.multinomial(int(m), row).reshape(scen.outcomes)
    return counts


def frequencies(counts):
    """Row-normalized empirical table; rows with no trials stay zero."""
    counts = np.asarray(counts)
    n = counts.ndim // 2
    totals = counts.sum(axis=tuple(range(n, 2 * n)), keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(totals > 0, counts / np.maximum(totals, 1), 0.0)
    return f
