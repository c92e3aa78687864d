"""Pure-Python (numpy) implementations of the hot kernels.

Mirrors ``_core.pyx`` routine for routine; :mod:`hardylab._backend`
picks whichever is importable.  Both operate on row-stacked complex
vectors, shape ``(count, dim)``.
"""
import math

import numpy as np

NAME = "python"


def orthonormalize(vs, tol=1e-10):
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Rows whose residual norm falls below ``tol`` times their original
    norm are dropped as linearly dependent.  Returns an ``(r, n)`` array
    of orthonormal rows.
    """
    vs = np.asarray(vs, dtype=complex)
    n = vs.shape[1]
    basis = np.empty((0, n), dtype=complex)
    for v in vs:
        v0 = math.sqrt(float(np.vdot(v, v).real))
        if v0 <= tol:
            continue
        w = v.copy()
        for _ in range(2):
            for e in basis:
                w -= np.vdot(e, w) * e
        nw = math.sqrt(float(np.vdot(w, w).real))
        if nw > tol * v0:
            basis = np.vstack([basis, w / nw])
    return basis


def jacobi_eigh(h, tol=1e-12, max_sweeps=64):
    """Cyclic complex Jacobi eigensolver for a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ascending and eigenvectors in the
    columns of ``v``.  Stops once the off-diagonal Frobenius norm drops
    below ``tol * max(1, ||h||_F)``.
    """
    a = np.array(h, dtype=complex, copy=True)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                gqp = -s * ph.conjugate()
                gqq = c * ph.conjugate()
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp + gqp * colq
                a[:, q] = s * colp + gqq * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp + gqp.conjugate() * rowq
                a[q, :] = s * rowp + gqq.conjugate() * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                colp = v[:, p].copy()
                colq = v[:, q].copy()
                v[:, p] = c * colp + gqp * colq
                v[:, q] = s * colp + gqq * colq
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def constrained_max(zero_vecs, targets, tol=1e-10):
    """Largest ``<psi|T|psi>`` over unit ``psi`` orthogonal to every zero vector.

    ``T`` is the sum of ``|t><t|`` over the target rows.  Returns 0.0 when
    the zero vectors span the whole space.
    """
    targets = np.asarray(targets, dtype=complex)
    basis = orthonormalize(zero_vecs, tol)
    w = targets.copy()
    if basis.shape[0]:
        for _ in range(2):
            w = w - (w @ basis.conj().T) @ basis
    if w.shape[0] == 1:
        return float(np.vdot(w[0], w[0]).real)
    gram = w.conj() @ w.T
    vals, _ = jacobi_eigh(gram)
    return float(max(vals[-1], 0.0))
