"""Deterministic JSON and matrix serialization.

Output files must be byte-identical across runs with the same inputs, so
floats are always rendered with 17 significant digits and object keys are
sorted; complex numbers travel as [re, im] pairs and 2x2 matrices as
{"rows": [[[re, im], ...], ...]}.
"""

from __future__ import annotations

import json

import numpy as np


def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    return {"rows": [[[z.real, z.imag] for z in row] for row in m]}


def matrix_from_json(data):
    rows = data["rows"] if isinstance(data, dict) else data
    return np.array([[complex(re, im) for re, im in row] for row in rows])


def _render(value, out):
    if isinstance(value, dict):
        out.append("{")
        for i, key in enumerate(sorted(value)):
            if i:
                out.append(",")
            out.append(json.dumps(str(key)))
            out.append(":")
            _render(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    elif isinstance(value, (bool, np.bool_)) or value is None:
        out.append(json.dumps(bool(value) if value is not None else None))
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        out.append(format(float(value), ".17g"))
    elif isinstance(value, (complex, np.complexfloating)):
        _render([value.real, value.imag], out)
    elif isinstance(value, np.ndarray):
        _render(value.tolist(), out)
    else:
        out.append(json.dumps(value))


def dumps(value):
    """Canonical JSON: sorted keys, floats at 17 significant digits."""
    out = []
    _render(value, out)
    return "".join(out)


def write(path, value):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(value))
        fh.write("\n")


def read(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
