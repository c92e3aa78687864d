"""Acceptance criteria, each at its stated tolerance and time budget.

Run under pytest (one PASS/FAIL line per criterion is added to the
terminal summary) or directly: ``python tests/test_acceptance.py``.
"""
import io as _io
import math
import sys
import time

import numpy as np
import pytest

from hardylab import cli, hardy, multiparty, polytope, temporal
from hardylab.clauses import tripartite_clauses
from hardylab.quantum import Observable, Scenario
from hardylab.polytope import LocalModel

FIXTURES = __import__("pathlib").Path(__file__).parent / "fixtures"
Q_MAX = (5 * math.sqrt(5) - 11) / 2
RESULTS = []


def _rng(seed):
    return np.random.default_rng(seed)


def criterion_1():
    t0 = time.perf_counter()
    b = np.linspace(1e-3, 1 - 1e-3, 1000)
    bb, cc = np.meshgrid(b, b)
    a2 = 1 - bb**2 - cc**2
    ok_pts = a2 > 1e-12
    grid = hardy.hardy_probability_moduli(np.where(ok_pts, a2, 1.0), bb**2, cc**2)
    grid_max = float(np.max(np.where(ok_pts, grid, 0.0)))
    analytic = hardy.hardy_probability_formula(hardy.CanonicalHardyFamily.optimal())
    best = max(grid_max, analytic)
    dt = time.perf_counter() - t0
    ok = abs(best - Q_MAX) <= 1e-9 and grid_max <= Q_MAX + 1e-12 and dt < 10
    return ok, f"max={best:.12f} (grid {grid_max:.12f}) target={Q_MAX:.12f} in {dt:.2f}s"


def criterion_2():
    good, worst = 0, 0.0
    for seed in range(10):
        t0 = time.perf_counter()
        c = hardy.maximize_hardy((2, 2), restarts=4, seed=seed).certificate
        dt = time.perf_counter() - t0
        worst = max(worst, dt)
        if c.q1 >= 0.0901699 - 1e-6 and c.max_zero < 1e-8 and dt < 60:
            good += 1
    return good >= 8, f"{good}/10 seeds reached the optimum; slowest run {worst:.1f}s"


def criterion_3():
    t0 = time.perf_counter()
    bad, best = [], 0.0
    for d in (3, 4):
        for seed in range(10):
            c = hardy.maximize_hardy((d, d), restarts=1, seed=seed).certificate
            best = max(best, c.q1)
            if not (c.max_zero < 1e-8 and c.q1 <= 0.0901699 + 1e-4):
                bad.append((d, seed, c.q1, c.max_zero))
    dt = time.perf_counter() - t0
    return not bad and dt < 600, f"largest q1={best:.10f}, violations={bad}, {dt:.0f}s"


def criterion_4():
    t0 = time.perf_counter()
    c = hardy.maximize_hardy((2, 2), restarts=2, seed=0, family="maximally_entangled").certificate
    dt = time.perf_counter() - t0
    ok = c.q1 < 1e-6 and c.max_zero < 1e-8 and dt < 60
    return ok, f"q1={c.q1:.3e} zeros<={c.max_zero:.1e} in {dt:.1f}s"


def criterion_5():
    t0 = time.perf_counter()
    rng = _rng(5)
    worst, fails = 0.0, 0
    done = 0
    while done < 100:
        obs = []
        for _ in range(4):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            obs.append(Observable.from_ket(v))
        if obs[0].commutator_norm(obs[1]) < 1e-6 or obs[2].commutator_norm(obs[3]) < 1e-6:
            continue
        done += 1
        st = hardy.unique_hardy_state(*obs)
        c = hardy.hardy_witness(hardy.hardy_behavior(st, obs))
        worst = max(worst, c.max_zero)
        fails += not (c.satisfied and c.max_zero < 1e-10)
    dt = time.perf_counter() - t0
    return fails == 0 and dt < 10, f"{100 - fails}/100 satisfied, worst zero overlap {worst:.1e}, {dt:.2f}s"


def criterion_6():
    t0 = time.perf_counter()
    st, obs = hardy.optimal_selftest_point(0.0)
    rejected = polytope.is_local(hardy.hardy_behavior(st, obs)) is None
    scen = Scenario.uniform(2)
    strategies = polytope.enumerate_deterministic(scen)
    rng = _rng(6)
    worst, accepted = 0.0, 0
    for _ in range(1000):
        k = rng.integers(1, len(strategies) + 1)
        idx = rng.choice(len(strategies), size=k, replace=False)
        w = rng.dirichlet(np.ones(k))
        beh = LocalModel(tuple(strategies[i] for i in idx), w).behavior(scen)
        model = polytope.is_local(beh)
        if model is not None:
            err = model.reconstruction_error(beh)
            worst = max(worst, err)
            accepted += err < 1e-8
    dt = time.perf_counter() - t0
    ok = rejected and accepted == 1000 and dt < 30
    return ok, f"optimum rejected={rejected}, mixtures accepted {accepted}/1000 (max err {worst:.1e}), {dt:.1f}s"


def criterion_7():
    t0 = time.perf_counter()
    v2, _ = polytope.gnlt_max_hardy()
    v3, _ = polytope.gnlt_max_hardy(tripartite_clauses())
    dt = time.perf_counter() - t0
    ok = abs(v2 - 0.5) <= 1e-9 and abs(v3 - 0.5) <= 1e-9 and dt < 5
    return ok, f"bipartite={v2:.12f} tripartite={v3:.12f} in {dt:.2f}s"


def criterion_8():
    t0 = time.perf_counter()
    good, qs = 0, []
    for seed in range(10):
        c = multiparty.maximize_tripartite_hardy(restarts=2, seed=seed).certificate
        qs.append(c.q)
        good += abs(c.q - 0.125) <= 1e-4 and c.max_zero < 1e-8
    dt = time.perf_counter() - t0
    return good >= 6 and dt < 600, f"{good}/10 seeds within 1e-4 of 0.125 (min {min(qs):.6f}), {dt:.0f}s"


def criterion_9():
    t0 = time.perf_counter()
    c = temporal.temporal_hardy_witness(temporal.sequential_behavior(temporal.pauli_example()))
    exact = abs(c.q1 - 0.25) <= 1e-12 and max(c.q2, c.q3, c.q4) <= 1e-12
    opt = temporal.maximize_temporal_hardy(2, restarts=4, seed=0)
    oc = opt.certificate
    reached = abs(oc.q1 - 0.25) <= 1e-6 and oc.max_zero < 1e-8
    capped = max(opt.restart_values) <= 0.25 + 1e-4 and oc.q1 <= 0.25 + 1e-4
    dt = time.perf_counter() - t0
    ok = exact and reached and capped and dt < 120
    return ok, f"fixture q=({c.q1}, {c.q2}, {c.q3}, {c.q4}); optimizer q1={oc.q1:.10f} zeros<={oc.max_zero:.1e}; {dt:.1f}s"


def criterion_10():
    t0 = time.perf_counter()
    scen = Scenario.uniform(2)
    det = [polytope.ch_value(polytope.hardy_certificate(s.behavior(scen))) for s in polytope.enumerate_deterministic(scen)]
    rng = _rng(10)
    worst = 0.0
    for _ in range(200):
        z = rng.normal(size=3) + 1j * rng.normal(size=3)
        fam = hardy.CanonicalHardyFamily(*(z / np.linalg.norm(z)))
        cert = hardy.hardy_witness(hardy.hardy_behavior(hardy.canonical_state(fam), hardy.canonical_observables(fam)))
        if cert.satisfied:
            worst = max(worst, abs(polytope.ch_value(cert) - cert.q1))
    dt = time.perf_counter() - t0
    ok = max(det) <= 1e-9 and worst <= 1e-12 and dt < 1
    return ok, f"max CH over 16 strategies={max(det)}, |CH-q1| at satisfied certificates <= {worst:.1e}, {dt:.2f}s"


def criterion_11():
    t0 = time.perf_counter()
    adv = polytope.adversarial_min_entropy()
    dt = time.perf_counter() - t0
    ok = math.isfinite(adv.bits) and adv.bits > 0 and adv.bits >= 1.0 and dt < 5
    return ok, f"no-signalling LP bound {adv.bits:.5f} bits (p_guess={adv.guessing_probability:.6f}) vs reference 1.35 bits; {dt:.2f}s"


def criterion_12():
    t0 = time.perf_counter()
    certs = [hardy.hardy_witness(hardy.hardy_behavior(*hardy.optimal_selftest_point(t))) for t in (0, np.pi / 4, np.pi / 2, np.pi)]
    vals = np.array([[c.q1, c.q2, c.q3, c.q4] for c in certs])
    spread = float(np.max(np.abs(vals - vals[0])))
    dt = time.perf_counter() - t0
    return spread <= 1e-12 and dt < 1, f"max certificate spread {spread:.1e}, q1={vals[0, 0]:.12f}, {dt:.3f}s"


def criterion_13():
    t0 = time.perf_counter()
    code, rep = cli.run(["sample", str(FIXTURES / "hardy_optimum.json"), "-n", "1000000", "--seed", "20240611"], out=_io.StringIO())
    q1 = rep["results"]["clauses"][0]
    dt = time.perf_counter() - t0
    ok = abs(q1["estimate"] - 0.0902) <= 0.001 and dt < 30
    return ok, f"q1_hat={q1['estimate']:.5f} ({q1['count']}/{q1['trials']}), Wilson95={q1['wilson95']}, {dt:.1f}s"


CRITERIA = [
    (1, "closed-form optimum", criterion_1),
    (2, "optimizer recovery 2x2", criterion_2),
    (3, "dimension independence", criterion_3),
    (4, "maximally-entangled no-go", criterion_4),
    (5, "unique Hardy state", criterion_5),
    (6, "LHV infeasibility", criterion_6),
    (7, "GNLT bounds", criterion_7),
    (8, "tripartite quantum maximum", criterion_8),
    (9, "temporal example and maximum", criterion_9),
    (10, "CH consistency", criterion_10),
    (11, "randomness at the optimum", criterion_11),
    (12, "self-testing point", criterion_12),
    (13, "finite statistics", criterion_13),
]


def _line(n, name, ok, detail):
    return f"criterion {n:2d} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"


@pytest.mark.slow
@pytest.mark.parametrize("n,name,fn", CRITERIA, ids=[f"c{n:02d}" for n, _, _ in CRITERIA])
def test_acceptance(n, name, fn):
    ok, detail = fn()
    line = _line(n, name, ok, detail)
    RESULTS.append(line)
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for n, name, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(_line(n, name, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
