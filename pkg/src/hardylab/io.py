"""JSON (de)serialization of states, measurements and behaviors.

Conventions:

* complex numbers are ``[re, im]``; plain reals are accepted on input;
* kets are lists of complex numbers, matrices row-major nested lists;
* behaviors are ``{"scenario": {"settings": [...], "outcomes": [...]},
  "table": {"x,y": [[p(0,0), p(0,1)], ...]}}`` with the key listing the
  setting indices and the nested array indexed by outcome (index 0 is +1);
* a quantum document is ``{"state": {"ket": ..., "dims": ...}}`` (or
  ``{"density": ..., "dims": ...}``) plus ``"measurements"``, a per-party
  list of per-setting Hermitian matrices.  Matrices squaring to the
  identity become +-1 observables; anything else is split into its
  eigenspaces, largest eigenvalue first.
"""
from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import HardyLabError
from .quantum import Behavior, GeneralMeasurement, Observable, PureState, Scenario


class InputError(HardyLabError):
    """A document that does not match the expected schema."""


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def complex_from_json(v):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise InputError(f"expected a number or [re, im], got {v!r}")


def ket_to_json(k):
    return [complex_to_json(z) for z in np.asarray(k).reshape(-1)]


def ket_from_json(v):
    if not isinstance(v, list) or not v:
        raise InputError("ket must be a non-empty list")
    return np.array([complex_from_json(z) for z in v], dtype=complex)


def matrix_to_json(m):
    return [ket_to_json(row) for row in np.asarray(m)]


def matrix_from_json(v):
    if not isinstance(v, list) or not v or not all(isinstance(r, list) for r in v):
        raise InputError("matrix must be a non-empty list of rows")
    rows = [ket_from_json(r) for r in v]
    if len({r.size for r in rows}) != 1:
        raise InputError("matrix rows have different lengths")
    return np.array(rows)


def behavior_to_json(b):
    scen = b.scenario
    return {
        "scenario": scen.to_json(),
        "table": {",".join(map(str, xs)): b.row(xs).tolist() for xs in scen.setting_tuples()},
    }


def behavior_from_json(doc):
    try:
        s = doc["scenario"]
        scen = Scenario(tuple(s["settings"]), tuple(s["outcomes"]))
        t = np.zeros(scen.shape)
        table = doc["table"]
        for xs in scen.setting_tuples():
            key = ",".join(map(str, xs))
            if key not in table:
                raise InputError(f"behavior table lacks row {key!r}")
            row = np.asarray(table[key], dtype=float)
            if row.shape != scen.outcomes:
                raise InputError(f"row {key!r} has shape {row.shape}, expected {scen.outcomes}")
            t[xs] = row
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed behavior: {e}") from None
    return Behavior(scen, t)


def state_to_json(state):
    return {"ket": ket_to_json(state.ket), "dims": list(state.local_dims)}


def state_from_json(doc):
    try:
        dims = tuple(int(d) for d in doc["dims"])
        if "ket" in doc:
            return PureState(ket_from_json(doc["ket"]), dims)
        if "density" in doc:
            return matrix_from_json(doc["density"]), dims
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed state: {e}") from None
    raise InputError("state needs a 'ket' or 'density' entry")


def measurement_to_json(m):
    if isinstance(m, Observable):
        return matrix_to_json(m.matrix)
    return matrix_to_json(sum(lab * e for lab, e in zip(m.labels, m.effects)))


def measurement_from_json(v):
    m = matrix_from_json(v)
    if m.shape[0] != m.shape[1]:
        raise InputError("measurement matrix must be square")
    if np.allclose(m @ m, np.eye(m.shape[0]), atol=1e-9) and np.allclose(m, m.conj().T, atol=1e-9):
        return Observable.from_matrix(m)
    return GeneralMeasurement.from_hermitian(m)


def quantum_to_json(state, measurements, **extra):
    doc = {
        "state": state_to_json(state),
        "measurements": [[measurement_to_json(m) for m in party] for party in measurements],
    }
    doc.update(extra)
    return doc


def quantum_from_json(doc):
    """``(state, measurements)``; ``state`` is a PureState or ``(rho, dims)``."""
    try:
        state = state_from_json(doc["state"])
        meas = [[measurement_from_json(m) for m in party] for party in doc["measurements"]]
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed quantum document: {e}") from None
    return state, meas


def load(path):
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    return doc, text


def digest(*parts):
    """sha256 over the canonical JSON of ``parts``."""
    blob = json.dumps(parts, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True)
