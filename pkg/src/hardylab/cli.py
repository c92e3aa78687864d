"""``hardylab`` command line.

Every command prints one JSON report on stdout; diagnostics go to stderr.
Exit codes: 0 when the tested property holds (certificate satisfied,
behavior nonlocal, CH violated), 1 when it does not, 2 on bad input.
``sweep`` prints CSV instead of a report.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import math
import sys
import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import binomtest

from . import __version__, hardy, io, multiparty, polytope, temporal
from .clauses import clifton_niemann_clauses, hardy_clauses, minimal_form_clauses, tripartite_clauses
from .errors import HardyLabError
from .numerics import DEFAULT_TOL, Tolerances
from .quantum import RNG_ALGORITHM, Behavior, PureState, born_behavior, frequencies, sample_behavior

VARIANTS = ("bipartite", "minimal", "clifton-niemann", "tripartite", "temporal")
PAPER_RANDOMNESS_BITS = 1.35


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    seed: int = None
    version: str = __version__
    tolerances: dict = field(default_factory=dict)
    rng_algorithm: str = RNG_ALGORITHM
    results: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self):
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "seed": self.seed,
            "version": self.version,
            "tolerances": self.tolerances,
            "rng_algorithm": self.rng_algorithm,
            "results": self.results,
            "wall_time": self.wall_time,
        }


def parse_tolerances(items):
    tol = DEFAULT_TOL
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or key not in Tolerances.__dataclass_fields__:
            raise io.InputError(f"--tol expects KEY=VALUE with KEY in {sorted(Tolerances.__dataclass_fields__)}")
        try:
            v = float(value)
        except ValueError:
            raise io.InputError(f"--tol {key}: {value!r} is not a number") from None
        if not v > 0:
            raise io.InputError(f"--tol {key} must be positive")
        tol = replace(tol, **{key: v})
    return tol


def _ints(text, name):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise io.InputError(f"{name} must be comma-separated integers, got {text!r}") from None


# -- document -> behavior -------------------------------------------------


def behavior_from_document(doc, variant):
    if "table" in doc:
        return io.behavior_from_json(doc)
    if "behavior" in doc:
        return io.behavior_from_json(doc["behavior"])
    if "state" not in doc:
        raise io.InputError("document needs a behavior ('scenario'/'table') or 'state' and 'measurements'")
    state, meas = io.quantum_from_json(doc)
    if variant == "temporal":
        if len(meas) != 2 or any(len(p) != 2 for p in meas):
            raise io.InputError("temporal documents need measurements [[A, A'], [B, B']]")
        ket = state.ket if isinstance(state, PureState) else state[0]
        return temporal.sequential_behavior(temporal.TemporalScenario(ket, meas[0][0], meas[0][1], meas[1][0], meas[1][1]))
    if isinstance(state, PureState):
        return born_behavior(state, meas)
    rho, dims = state
    return born_behavior(rho, meas, dims)


def clause_map_for(variant, behavior, roles=None, spin=None):
    scen = behavior.scenario
    if variant in ("bipartite", "temporal"):
        return hardy_clauses(scen)
    if variant == "minimal":
        return minimal_form_clauses(scen, roles or (0, 0, 0, 0))
    if variant == "clifton-niemann":
        return clifton_niemann_clauses(spin if spin is not None else (scen.outcomes[0] - 1) / 2, scen)
    if variant == "tripartite":
        return tripartite_clauses(scen)
    raise io.InputError(f"unknown variant {variant!r}")


def certificate_for(variant, behavior, tol, roles=None, spin=None):
    if variant == "tripartite":
        return multiparty.tripartite_witness(behavior, tol.zero, tol.success)
    if variant == "minimal" and roles is None:
        return hardy.best_minimal_roles(behavior, tol.zero, tol.success)[1]
    if variant == "clifton-niemann":
        return hardy.clifton_niemann_witness(behavior, spin, tol.zero, tol.success)
    if variant == "minimal":
        return hardy.minimal_form_witness(behavior, roles, tol.zero, tol.success)
    return hardy.hardy_witness(behavior, tol_zero=tol.zero, tol_success=tol.success)


def _roles(args):
    if getattr(args, "roles", None) in (None, "auto"):
        return None
    return _ints(args.roles, "--roles")


# -- commands -------------------------------------------------------------


def cmd_witness(args, tol):
    doc, _ = io.load(args.input)
    beh = behavior_from_document(doc, args.variant)
    roles = _roles(args)
    results = {"variant": args.variant, "behavior": io.behavior_to_json(beh)}
    if args.variant == "minimal" and roles is None:
        roles, cert = hardy.best_minimal_roles(beh, tol.zero, tol.success)
        results["roles"] = list(roles)
    else:
        cert = certificate_for(args.variant, beh, tol, roles, args.spin)
    results["certificate"] = cert.as_dict()
    return results, 0 if cert.satisfied else 1


def cmd_optimize(args, tol):
    if args.restarts < 1:
        raise io.InputError("--restarts must be >= 1")
    v = args.variant
    if v == "bipartite":
        dims = _ints(args.dims or "2,2", "--dims")
        if len(dims) != 2 or min(dims) < 2:
            raise io.InputError("--dims for bipartite must be two integers >= 2")
        opt = hardy.maximize_hardy(dims, args.restarts, args.seed, args.family or "general", workers=args.workers)
        state, meas = opt.state, [[opt.observables[0], opt.observables[1]], [opt.observables[2], opt.observables[3]]]
    elif v == "tripartite":
        opt = multiparty.maximize_tripartite_hardy(args.restarts, args.seed, args.family or "general", workers=args.workers)
        state, meas = opt.state, [list(p) for p in opt.observables]
    elif v == "temporal":
        dims = _ints(args.dims or "2", "--dims")
        if len(dims) != 1 or dims[0] < 2:
            raise io.InputError("--dims for temporal must be one integer >= 2")
        opt = temporal.maximize_temporal_hardy(dims[0], args.restarts, args.seed, args.family or "general", workers=args.workers)
        sc = opt.scenario
        state, meas = PureState(sc.state.ket, sc.state.local_dims), [[sc.A, sc.A_], [sc.B, sc.B_]]
    else:
        raise io.InputError(f"optimize supports bipartite, tripartite and temporal, not {v!r}")
    cert = replace(opt.certificate, tol_zero=tol.zero, tol_success=tol.success)
    results = {
        "variant": v,
        "certificate": cert.as_dict(),
        "restart_values": list(opt.restart_values),
        "solution": io.quantum_to_json(state, meas),
    }
    return results, 0 if cert.satisfied else 1


def cmd_polytope(args, tol):
    action = args.action
    if action == "ns-max":
        cm = tripartite_clauses() if args.variant == "tripartite" else hardy_clauses()
        value, beh = polytope.gnlt_max_hardy(cm, local=args.local, tol=tol.feas)
        return {"variant": args.variant, "local": args.local, "max_q1": value, "behavior": io.behavior_to_json(beh)}, 0
    if action == "randomness":
        if not args.at_optimum and args.q1 is None:
            raise io.InputError("randomness needs --at-optimum or --q1")
        q1 = hardy.HARDY_MAX if args.at_optimum else args.q1
        adv = polytope.adversarial_min_entropy(q1=q1, tol=tol.feas)
        state, obs = hardy.optimal_selftest_point(0.0)
        qbeh = hardy.hardy_behavior(state, obs)
        per_setting = {
            ",".join(map(str, xs)): polytope.min_entropy(qbeh, xs) for xs in qbeh.scenario.setting_tuples()
        }
        results = {
            "q1": q1,
            "no_signalling_bits": adv.bits,
            "guessing_probability": adv.guessing_probability,
            "guessed_outcome": list(adv.outcome),
            "settings": list(adv.settings),
            "quantum_optimum_bits": per_setting,
            "reference_bits": PAPER_RANDOMNESS_BITS,
        }
        return results, 0 if math.isfinite(adv.bits) and adv.bits > 0 else 1
    if args.input is None:
        raise io.InputError(f"polytope {action} needs an input file")
    doc, _ = io.load(args.input)
    beh = behavior_from_document(doc, args.variant)
    if action == "local-test":
        res = polytope.locality_test(beh, tol=tol.feas)
        results = {"local": res.local}
        if res.local:
            results["weights"] = res.model.weights.tolist()
            results["strategies"] = [list(map(list, s.assignment)) for s in res.model.strategies]
            results["reconstruction_error"] = res.model.reconstruction_error(beh)
        else:
            results["verdict"] = "nonlocal"
            results["functional"] = {
                "coefficients": {
                    ",".join(map(str, xs)): res.witness.coefficients[xs].tolist() for xs in beh.scenario.setting_tuples()
                },
                "local_bound": res.witness.bound,
                "value": res.witness_value,
            }
        return results, 1 if res.local else 0
    if action == "ch":
        cert = certificate_for(args.variant, beh, tol, _roles(args))
        value = polytope.ch_value(cert)
        return {"ch_value": value, "certificate": cert.as_dict()}, 0 if value > tol.feas else 1
    raise io.InputError(f"unknown polytope action {action!r}")


def wilson(k, n, level=0.95):
    if n == 0:
        return [0.0, 1.0]
    ci = binomtest(int(k), int(n)).proportion_ci(confidence_level=level, method="wilson")
    return [float(ci.low), float(ci.high)]


def cmd_sample(args, tol):
    if args.n < 1:
        raise io.InputError("-n must be >= 1")
    doc, _ = io.load(args.input)
    beh = behavior_from_document(doc, args.variant)
    counts = sample_behavior(beh, args.n, args.seed)
    est = Behavior(beh.scenario, _fill_empty_rows(frequencies(counts)))
    cm = clause_map_for(args.variant, beh, _roles(args) or (0, 0, 0, 0), args.spin)
    clauses = [cm.nonzero, *cm.zeros]
    intervals = []
    for c in clauses:
        row = counts[tuple(c.settings)]
        k = int(sum(row[o] for o in c.outcomes))
        n = int(row.sum())
        intervals.append({"clause": c.name, "estimate": k / n if n else 0.0, "count": k, "trials": n, "wilson95": wilson(k, n)})
    cert = certificate_for(args.variant, est, tol, _roles(args) or (0, 0, 0, 0), args.spin)
    results = {
        "n": args.n,
        "counts": {",".join(map(str, xs)): counts[xs].tolist() for xs in beh.scenario.setting_tuples()},
        "clauses": intervals,
        "certificate": cert.as_dict(),
    }
    return results, 0 if cert.satisfied else 1


def _fill_empty_rows(f):
    """Rows without trials become uniform so the estimate is a valid behavior."""
    n = f.ndim // 2
    sums = f.sum(axis=tuple(range(n, 2 * n)), keepdims=True)
    uniform = np.full_like(f, 1.0 / np.prod(f.shape[n:]))
    return np.where(sums > 0, f, uniform)


def cmd_sweep(args, tol, out=None):
    out = out or sys.stdout
    if args.num < 1:
        raise io.InputError("--num must be >= 1")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["parameter", "q1", "q2", "q3", "q4"])
    for x in np.linspace(args.start, args.stop, args.num):
        if args.family == "canonical":
            fam = hardy.CanonicalHardyFamily.from_moduli(x, x)
            state, obs = hardy.canonical_state(fam), hardy.canonical_observables(fam)
        else:
            state, obs = hardy.optimal_selftest_point(x)
        c = hardy.hardy_witness(hardy.hardy_behavior(state, obs), tol_zero=tol.zero, tol_success=tol.success)
        writer.writerow([repr(float(x)), repr(c.q1), repr(c.q2), repr(c.q3), repr(c.q4)])
    return None, 0


# -- parser ---------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", action="append", metavar="KEY=VALUE", help="override a tolerance, e.g. zero=1e-8")

    p = argparse.ArgumentParser(prog="hardylab", description="Hardy-type nonlocality analyses.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witness", parents=[common], help="evaluate Hardy clauses on a document")
    w.add_argument("input")
    w.add_argument("--variant", choices=VARIANTS, default="bipartite")
    w.add_argument("--roles", help="a1,b1,a2,b2 for --variant minimal, or 'auto' (default) to scan")
    w.add_argument("--spin", type=float, help="spin s for clifton-niemann (default from outcome count)")

    o = sub.add_parser("optimize", parents=[common], help="search for the largest success probability")
    o.add_argument("--variant", choices=("bipartite", "tripartite", "temporal"), default="bipartite")
    o.add_argument("--dims", help="'dA,dB' (bipartite) or 'd' (temporal)")
    o.add_argument("--family", help="restricted search family, e.g. maximally_entangled, product, ghz, commuting")
    o.add_argument("--restarts", type=int, default=8)
    o.add_argument("--seed", type=int, required=True)
    o.add_argument("--workers", type=int, default=1)

    pl = sub.add_parser("polytope", parents=[common], help="local / no-signalling polytope analyses")
    pl.add_argument("action", choices=("local-test", "ns-max", "ch", "randomness"))
    pl.add_argument("input", nargs="?")
    pl.add_argument("--variant", choices=VARIANTS, default="bipartite")
    pl.add_argument("--roles")
    pl.add_argument("--local", action="store_true", help="ns-max over local behaviors only")
    pl.add_argument("--at-optimum", action="store_true", help="randomness at the qubit optimum q1")
    pl.add_argument("--q1", type=float)

    s = sub.add_parser("sample", parents=[common], help="finite-statistics estimate of a certificate")
    s.add_argument("input")
    s.add_argument("-n", "--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--variant", choices=VARIANTS, default="bipartite")
    s.add_argument("--roles")
    s.add_argument("--spin", type=float)

    sw = sub.add_parser("sweep", parents=[common], help="CSV of q1..q4 along a one-parameter family")
    sw.add_argument("--family", choices=("canonical", "selftest-theta"), default="canonical")
    sw.add_argument("--start", type=float, default=0.05)
    sw.add_argument("--stop", type=float, default=0.7)
    sw.add_argument("--num", type=int, default=27)
    return p


COMMANDS = {"witness": cmd_witness, "optimize": cmd_optimize, "polytope": cmd_polytope, "sample": cmd_sample}


def _digest_inputs(args):
    parts = {k: v for k, v in vars(args).items() if k not in ("workers",)}
    path = getattr(args, "input", None)
    if path:
        try:
            with open(path, "rb") as f:
                parts["input_sha256"] = hashlib.sha256(f.read()).hexdigest()
        except OSError:
            pass
    return io.digest(parts)


def run(argv=None, out=None):
    """Run one command; returns ``(exit_code, report_dict_or_None)``."""
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        tol = parse_tolerances(args.tol)
        if args.command == "sweep":
            cmd_sweep(args, tol, out)
            return 0, None
        results, code = COMMANDS[args.command](args, tol)
    except (HardyLabError, ValueError) as e:
        print(f"hardylab {args.command}: error: {e}", file=sys.stderr)
        return 2, None
    report = RunReport(
        command=args.command if not hasattr(args, "action") else f"polytope {args.action}",
        inputs_digest=_digest_inputs(args),
        seed=getattr(args, "seed", None),
        tolerances=tol.as_dict(),
        results=results,
        wall_time=time.perf_counter() - t0,
    )
    out.write(io.dumps(report.to_json()) + "\n")
    return code, report.to_json()


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
