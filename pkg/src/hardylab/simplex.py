"""Dense two-phase primal simplex with Bland's anti-cycling rule.

Problems here have at most a few dozen structural variables, so a full
tableau is fine.  Solves

    minimize c.x  subject to  A_eq x = b_eq,  A_ub x <= b_ub,  x >= 0.

Infeasible problems come back with a Farkas vector ``y`` (one entry per
original constraint row, equalities first) such that ``y.A <= 0`` on
every column and ``y.b > 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import Infeasible, Unbounded


@dataclass(frozen=True)
class LinearProgram:
    c: np.ndarray
    A_eq: np.ndarray = None
    b_eq: np.ndarray = None
    A_ub: np.ndarray = None
    b_ub: np.ndarray = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        n = c.size
        object.__setattr__(self, "c", c)
        for a_name, b_name in (("A_eq", "b_eq"), ("A_ub", "b_ub")):
            a = getattr(self, a_name)
            b = getattr(self, b_name)
            if a is None:
                a, b = np.zeros((0, n)), np.zeros(0)
            a = np.atleast_2d(np.asarray(a, dtype=float))
            b = np.asarray(b, dtype=float).reshape(-1)
            if a.shape != (b.size, n):
                raise ValueError(f"{a_name} has shape {a.shape}, expected ({b.size}, {n})")
            object.__setattr__(self, a_name, a)
            object.__setattr__(self, b_name, b)


@dataclass
class LPResult:
    status: str
    x: np.ndarray = None
    value: float = float("nan")
    farkas: np.ndarray = None
    iterations: int = 0
    residual: float = float("nan")
    extra: dict = field(default_factory=dict)

    @property
    def success(self):
        return self.status == "optimal"


class _Tableau:
    def __init__(self, a, b, tol_pivot):
        m, n = a.shape
        self.m, self.n = m, n
        self.t = np.hstack([a, np.eye(m), b.reshape(-1, 1)])
        self.basis = list(range(n, n + m))
        self.tol_pivot = tol_pivot
        self.iterations = 0

    def pivot(self, row, col):
        t = self.t
        t[row] /= t[row, col]
        colv = t[:, col].copy()
        colv[row] = 0.0
        t -= np.outer(colv, t[row])
        self.basis[row] = col
        self.iterations += 1

    def run(self, cost, allowed, tol_opt, max_iter):
        """Minimize ``cost`` over the current basis; ``allowed`` masks entering columns."""
        t = self.t
        while True:
            cb = cost[self.basis]
            reduced = cost - cb @ t[:, :-1]
            entering = -1
            for j in np.flatnonzero(allowed):
                if reduced[j] < -tol_opt and j not in self.basis:
                    entering = j
                    break
            if entering < 0:
                return "optimal"
            colv = t[:, entering]
            best_row, best_ratio = -1, np.inf
            for i in range(self.m):
                if colv[i] > self.tol_pivot:
                    ratio = t[i, -1] / colv[i]
                    if ratio < best_ratio - 1e-12 or (
                        abs(ratio - best_ratio) <= 1e-12 and self.basis[i] < self.basis[best_row]
                    ):
                        best_row, best_ratio = i, ratio
            if best_row < 0:
                return "unbounded"
            self.pivot(best_row, entering)
            if self.iterations > max_iter:
                raise RuntimeError("simplex iteration limit reached")


def solve(lp, tol=1e-9, tol_pivot=1e-10, maximize=False, max_iter=50_000):
    """Solve ``lp``; never raises on infeasible/unbounded, see ``LPResult.status``."""
    n = lp.c.size
    m_eq, m_ub = lp.b_eq.size, lp.b_ub.size
    a = np.zeros((m_eq + m_ub, n + m_ub))
    a[:m_eq, :n] = lp.A_eq
    a[m_eq:, :n] = lp.A_ub
    a[m_eq:, n:] = np.eye(m_ub)
    b = np.concatenate([lp.b_eq, lp.b_ub])
    nvar = n + m_ub
    m = a.shape[0]

    # Unit row norms, then nonnegative right-hand sides.
    norms = np.linalg.norm(a, axis=1)
    norms[norms == 0] = 1.0
    signs = np.where(b < 0, -1.0, 1.0)
    scale = signs / norms
    a = a * scale[:, None]
    b = b * scale

    tab = _Tableau(a, b, tol_pivot)
    cost1 = np.zeros(nvar + m)
    cost1[nvar:] = 1.0
    allowed = np.ones(nvar + m, dtype=bool)
    tab.run(cost1, allowed, 1e-12, max_iter)
    infeas = float(tab.t[:, -1] @ cost1[tab.basis])
    if infeas > tol:
        y_scaled = cost1[tab.basis] @ tab.t[:, nvar : nvar + m]
        return LPResult("infeasible", farkas=y_scaled * scale, iterations=tab.iterations, residual=infeas)

    # Drive zero-level artificials out; rows where that fails are redundant.
    keep = []
    for i in range(m):
        if tab.basis[i] >= nvar:
            cands = np.flatnonzero(np.abs(tab.t[i, :nvar]) > tol_pivot)
            if cands.size:
                tab.pivot(i, int(cands[0]))
                keep.append(i)
        else:
            keep.append(i)
    if len(keep) < m:
        tab.t = tab.t[keep]
        tab.basis = [tab.basis[i] for i in keep]
        tab.m = len(keep)

    cost2 = np.zeros(nvar + m)
    cost2[:n] = -lp.c if maximize else lp.c
    allowed = np.zeros(nvar + m, dtype=bool)
    allowed[:nvar] = True
    status = tab.run(cost2, allowed, 1e-11, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", iterations=tab.iterations)
    x = np.zeros(nvar + m)
    x[tab.basis] = tab.t[:, -1]
    x = np.clip(x[:n], 0.0, None)
    value = float(lp.c @ x)
    resid = 0.0
    if m_eq:
        resid = max(resid, float(np.max(np.abs(lp.A_eq @ x - lp.b_eq))))
    if m_ub:
        resid = max(resid, float(np.max(lp.A_ub @ x - lp.b_ub, initial=0.0)))
    return LPResult("optimal", x=x, value=value, iterations=tab.iterations, residual=resid)


def solve_or_raise(lp, **kwargs):
    res = solve(lp, **kwargs)
    if res.status == "infeasible":
        raise Infeasible(f"LP infeasible (phase-1 residual {res.residual:.3g})")
    if res.status == "unbounded":
        raise Unbounded("LP unbounded")
    return res
