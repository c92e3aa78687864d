"""Small dense complex linear algebra.

States and operators are plain ``numpy`` complex arrays: a ket is a 1-D
array, a matrix is 2-D.  Everything here is a pure function; nothing
mutates its inputs.

Tensor ordering is fixed globally: the left factor of ``kron`` is the
slow index, and parties are ordered Alice, Bob, Charlie.
"""
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import _backend
from .errors import DimensionMismatch, NotNormalized, NotProjector

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "as_ket",
    "as_matrix",
    "kron",
    "kron_all",
    "dagger",
    "is_hermitian",
    "is_projector",
    "projector",
    "orthonormalize",
    "null_space",
    "rank",
    "eigh",
    "jordan_blocks",
]


@dataclass(frozen=True)
class Tolerances:
    """Thresholds standing in for the exact zeros of the analytic argument."""

    norm: float = 1e-10
    herm: float = 1e-10
    orth: float = 1e-10
    zero: float = 1e-10
    success: float = 1e-6
    feas: float = 1e-9
    pivot: float = 1e-10

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_TOL = Tolerances()


def as_ket(v, normalized=False, tol=DEFAULT_TOL.norm):
    """Coerce ``v`` to a 1-D complex array, rejecting NaN/Inf entries."""
    k = np.asarray(v, dtype=complex).reshape(-1)
    if k.size == 0:
        raise DimensionMismatch("ket must have at least one entry")
    if not np.all(np.isfinite(k)):
        raise ValueError("ket entries must be finite")
    if normalized:
        nrm = np.linalg.norm(k)
        if abs(nrm - 1.0) > tol:
            raise NotNormalized(f"ket norm {nrm!r} deviates from 1 by more than {tol}")
    return k


def as_matrix(m):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def kron(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(factors):
    return reduce(kron, factors)


def dagger(m):
    return np.conj(np.asarray(m)).T


def is_hermitian(m, tol=DEFAULT_TOL.herm):
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m)), initial=0.0) <= tol


def is_projector(m, tol=DEFAULT_TOL.herm):
    m = np.asarray(m)
    return is_hermitian(m, tol) and np.max(np.abs(m @ m - m), initial=0.0) <= tol


def projector(v, tol=DEFAULT_TOL.norm):
    """Return ``|v><v|`` for a normalized ket."""
    k = as_ket(v, normalized=True, tol=tol)
    return np.outer(k, k.conj())


def orthonormalize(vs, tol=DEFAULT_TOL.pivot):
    """Orthonormal rows spanning the given vectors (MGS, re-orthogonalized)."""
    vs = np.atleast_2d(np.asarray(vs, dtype=complex))
    return _backend.orthonormalize(vs, tol)


def _stack(vs):
    kets = [as_ket(v) for v in vs]
    dims = {k.size for k in kets}
    if len(dims) > 1:
        raise DimensionMismatch(f"kets of differing dimension: {sorted(dims)}")
    return np.vstack(kets)


def rank(vs, tol=DEFAULT_TOL.pivot):
    if len(vs) == 0:
        return 0
    return orthonormalize(_stack(vs), tol).shape[0]


def null_space(vs, dim=None, tol=DEFAULT_TOL.pivot):
    """Orthonormal basis of the orthogonal complement of ``span(vs)``.

    ``dim`` is only needed when ``vs`` is empty.
    """
    if len(vs) == 0:
        if dim is None:
            raise DimensionMismatch("dimension required for an empty vector list")
        return [e for e in np.eye(dim, dtype=complex)]
    stacked = _stack(vs)
    d = stacked.shape[1]
    if dim is not None and dim != d:
        raise DimensionMismatch(f"vectors have dimension {d}, expected {dim}")
    span = orthonormalize(stacked, tol)
    # Completing with the standard basis leaves exactly d - rank new rows.
    full = orthonormalize(np.vstack([span, np.eye(d, dtype=complex)]), tol)
    return [row.copy() for row in full[span.shape[0]:]]


def eigh(h, tol=1e-12):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ascending eigenvalues and column eigenvectors.
    """
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionMismatch("eigh needs a square matrix")
    return _backend.jacobi_eigh(h, tol)


def _restrict(basis, op):
    """Matrix of ``op`` in the orthonormal column ``basis``."""
    return dagger(basis) @ op @ basis


def jordan_blocks(p, q, tol=DEFAULT_TOL.herm):
    """Split the space into subspaces of dimension <= 2 invariant under ``p`` and ``q``.

    Returns a list of ``(n, k)`` column-orthonormal bases, ``k`` in {1, 2}.
    Blocks come from the eigenvectors ``x`` of ``p q p`` on ``range(p)``
    paired with ``q x``; whatever is left is acted on by ``q`` alone.
    """
    p = as_matrix(p)
    q = as_matrix(q)
    if p.shape != q.shape or p.shape[0] != p.shape[1]:
        raise DimensionMismatch(f"projector shapes differ: {p.shape} vs {q.shape}")
    for name, m in (("P", p), ("Q", q)):
        if not is_projector(m, tol):
            raise NotProjector(f"{name} is not a Hermitian idempotent within {tol}")
    n = p.shape[0]
    blocks = []

    w, v = eigh(p)
    range_p = v[:, w > 0.5]
    if range_p.shape[1]:
        c, x = eigh(_restrict(range_p, q))
        for j in range(x.shape[1]):
            xv = range_p @ x[:, j]
            qx = q @ xv
            resid = qx - c[j] * xv
            nr = np.linalg.norm(resid)
            if nr <= tol:
                blocks.append(xv.reshape(n, 1))
            else:
                second = resid / nr
                second = second - np.vdot(xv, second) * xv
                blocks.append(np.column_stack([xv, second / np.linalg.norm(second)]))

    covered = np.hstack(blocks) if blocks else np.zeros((n, 0), dtype=complex)
    rest = null_space(list(covered.T), dim=n) if covered.shape[1] else list(np.eye(n, dtype=complex))
    if rest:
        r = np.column_stack(rest)
        _, y = eigh(_restrict(r, q))
        for j in range(y.shape[1]):
            blocks.append((r @ y[:, j]).reshape(n, 1))
    return blocks
