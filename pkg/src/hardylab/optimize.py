"""Derivative-free search machinery shared by the Hardy maximizers.

Two strategies are used:

* elimination: the zero clauses are linear constraints on the state once
  the measurements are fixed, so the best state is the top eigenvector of
  the success operator restricted to their common kernel.  Only the
  measurements are searched, and the zero clauses hold to rounding error.
* penalty continuation: the zero clauses enter as a penalty whose weight
  is raised geometrically, warm-starting each stage.  Used for state
  families that are not linear spaces (maximally entangled, product,
  GHZ-class), and for sequential measurements, where the zero-clause
  kernel is generically empty and the state is instead eliminated from
  the penalized objective ``T - mu Z``.

Restarts draw independent streams from one ``SeedSequence`` and are merged
by best objective, ties going to the lowest restart index, so results do
not depend on how restarts are scheduled.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import minimize

from . import _backend
from .numerics import null_space

# Fine early steps keep the search out of the trivial q1 = 0 valleys while
# the success term still dominates.
PENALTY_WEIGHTS = (1.0, 3.0, 1e1, 3e1, 1e2, 3e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def subspace_params(d, r):
    """Real parameter count of the rank-``r`` chart used by :func:`split_basis`."""
    return 2 * r * (d - r)


def split_basis(params, d, r, frame):
    """Orthonormal bases ``(plus, minus)`` of a rank-``r`` subspace of C^d and its complement.

    The subspace is spanned by ``frame @ [I_r; Y]`` with ``Y`` read from
    ``params``; the random ``frame`` keeps restarts away from chart edges.
    """
    y = np.asarray(params[: r * (d - r)]) + 1j * np.asarray(params[r * (d - r) : 2 * r * (d - r)])
    x = np.vstack([np.eye(r), y.reshape(d - r, r)]) if d > r else np.eye(r)
    q = _complete(frame @ x)
    return q[:, :r], q[:, r:]


def _complete(x):
    q, _ = np.linalg.qr(x, mode="complete")
    return q


def product_rows(*bases):
    """Rows ``kron(c_1, c_2, ...)`` over every combination of basis columns."""
    rows = [np.ones(1, dtype=complex)]
    for b in bases:
        rows = [np.kron(r, b[:, j]) for r in rows for j in range(b.shape[1])]
    return np.array(rows)


def constrained_max(zero_rows, target_rows, tol=1e-10):
    return _backend.constrained_max(zero_rows, target_rows, tol)


def constrained_argmax(zero_rows, target_rows, tol=1e-10):
    """Best unit vector orthogonal to ``zero_rows`` and its success value."""
    dim = target_rows.shape[1]
    kernel = null_space(list(zero_rows), dim=dim, tol=tol)
    if not kernel:
        return 0.0, None
    n = np.array(kernel)  # rows
    amp = n.conj() @ target_rows.T  # <n_i|t>
    k = amp @ amp.conj().T
    w, v = np.linalg.eigh(k)
    psi = v[:, -1] @ n
    psi = psi / np.linalg.norm(psi)
    return float(w[-1]), psi


def gram(rows):
    """``sum_r |r><r|`` for kets stored as rows."""
    return rows.T @ rows.conj()


def penalized_max(zero_rows, target_rows, mu):
    """``max_psi <psi|T - mu Z|psi>``: the quadratic penalty with the state eliminated."""
    w, v = _backend.jacobi_eigh(gram(target_rows) - mu * gram(zero_rows))
    return float(w[-1]), v[:, -1]


def penalized_continuation(rows_of, x0, maxfev, weights=PENALTY_WEIGHTS, rounds=2):
    """Raise ``mu`` through ``weights``, warm-starting the measurement search each stage.

    ``rows_of(x)`` returns ``(zero_rows, target_rows)``.
    """
    x = np.asarray(x0, dtype=float)
    for mu in weights:
        x, _ = polish(lambda p, mu=mu: -penalized_max(*rows_of(p), mu)[0], x, maxfev, rounds=rounds)
    zero, target = rows_of(x)
    _, psi = penalized_max(zero, target, weights[-1])
    return x, psi / np.linalg.norm(psi)


def nelder_mead(fun, x0, maxfev, xatol=1e-10, fatol=1e-15):
    res = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={"maxfev": maxfev, "xatol": xatol, "fatol": fatol, "adaptive": len(x0) > 10},
    )
    return res.x, float(res.fun)


def polish(fun, x0, maxfev, rounds=6):
    """Repeated Nelder-Mead restarts from the incumbent until it stops improving."""
    x, f = nelder_mead(fun, x0, maxfev)
    for _ in range(rounds - 1):
        x2, f2 = nelder_mead(fun, x, maxfev)
        improved = f - f2
        if f2 < f:
            x, f = x2, f2
        if improved <= 1e-13:
            break
    return x, f


def penalty_search(evaluate, x0, maxfev, weights=PENALTY_WEIGHTS, rounds=2):
    """Maximize the success value with the zero clauses driven to zero by continuation.

    ``evaluate(x)`` returns ``(success, zeros)``.
    """
    x = np.asarray(x0, dtype=float)

    def objective(p, mu):
        s, z = evaluate(p)
        return -s + mu * float(np.sum(z))

    for mu in weights:
        x, _ = polish(lambda p, mu=mu: objective(p, mu), x, maxfev, rounds=rounds)
    return x


def multistart(run_one, restarts, seed, workers=1):
    """Run ``run_one(rng, index) -> (objective, payload)`` per restart; keep the max."""
    children = np.random.SeedSequence(seed).spawn(restarts)
    rngs = [np.random.default_rng(c) for c in children]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, rngs, range(restarts)))
    else:
        results = [run_one(r, i) for i, r in enumerate(rngs)]
    best = 0
    for i, (obj, _) in enumerate(results):
        if obj > results[best][0]:
            best = i
    return results[best][0], results[best][1], [r[0] for r in results]
