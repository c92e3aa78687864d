import numpy as np
import pytest
from scipy.optimize import linprog

from hardylab.errors import Infeasible, Unbounded
from hardylab.simplex import LinearProgram, solve, solve_or_raise


def test_textbook_max():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    lp = LinearProgram([3, 5], A_ub=[[1, 0], [0, 2], [3, 2]], b_ub=[4, 12, 18])
    r = solve(lp, maximize=True)
    assert r.success
    assert np.isclose(r.value, 36)
    assert np.allclose(r.x, [2, 6])


def test_infeasible_gives_farkas_certificate():
    a = np.array([[1.0, 1.0], [1.0, 1.0]])
    b = np.array([1.0, 2.0])
    r = solve(LinearProgram([0, 0], A_eq=a, b_eq=b))
    assert r.status == "infeasible"
    y = r.farkas
    assert np.all(y @ a <= 1e-9)
    assert y @ b > 1e-9
    with pytest.raises(Infeasible):
        solve_or_raise(LinearProgram([0, 0], A_eq=a, b_eq=b))


def test_unbounded():
    with pytest.raises(Unbounded):
        solve_or_raise(LinearProgram([-1, 0], A_ub=[[0, 1]], b_ub=[1]))


def test_redundant_equalities():
    a = np.array([[1.0, 1, 0], [2, 2, 0], [0, 1, 1]])
    r = solve(LinearProgram([1, 2, 3], A_eq=a, b_eq=[1, 2, 1]))
    ref = linprog([1, 2, 3], A_eq=a, b_eq=[1, 2, 1])
    assert r.success and np.isclose(r.value, ref.fun)


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates.
    c = [-0.75, 150, -0.02, 6]
    a = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    r = solve(LinearProgram(c, A_ub=a, b_ub=[0, 0, 1]))
    assert r.success and np.isclose(r.value, -0.05)


@pytest.mark.parametrize("seed", range(25))
def test_random_lps_against_highs(seed):
    rng = np.random.default_rng(seed)
    n, me, mu = rng.integers(2, 9), rng.integers(0, 4), rng.integers(1, 6)
    x0 = rng.uniform(0, 1, n)
    a_eq = rng.normal(size=(me, n))
    a_ub = rng.normal(size=(mu, n))
    b_eq = a_eq @ x0
    b_ub = a_ub @ x0 + rng.uniform(0, 1, mu)
    a_ub = np.vstack([a_ub, np.ones((1, n))])
    b_ub = np.append(b_ub, 10 * n)
    c = rng.normal(size=n)
    r = solve(LinearProgram(c, a_eq if me else None, b_eq if me else None, a_ub, b_ub))
    ref = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq if me else None, b_eq=b_eq if me else None)
    assert r.success and ref.status == 0
    assert np.isclose(r.value, ref.fun, atol=1e-7)
    assert r.residual < 1e-8
