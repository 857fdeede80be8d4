"""Writers for meshes (OBJ), node samples (CSV) and reports (JSON).

All writers are deterministic: nodes are emitted row-major over ``(r, theta)``
and floats use 17 significant digits.
"""

from __future__ import annotations

import csv
import json

import numpy as np

CSV_COLUMNS = ["u", "v", "r", "theta", "x", "y", "z", "method"]

_CHECK_SCHEMA = {
    "type": "object",
    "required": ["name", "max_residual", "tolerance", "pass"],
    "properties": {
        "name": {"type": "string"},
        "max_residual": {"type": "number"},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "pass": {"type": "boolean"},
    },
    "additionalProperties": False,
}

_DOMAIN_SCHEMA = {
    "type": "object",
    "required": ["r_min", "r_max", "theta_min", "theta_max", "n_r", "n_theta"],
    "properties": {
        "r_min": {"type": "number", "minimum": 0},
        "r_max": {"type": "number"},
        "theta_min": {"type": "number"},
        "theta_max": {"type": "number"},
        "n_r": {"type": "integer", "minimum": 2},
        "n_theta": {"type": "integer", "minimum": 2},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cmc1 verification report",
    "type": "object",
    "required": ["expression", "domain", "method", "checks", "holes", "timing_ms"],
    "properties": {
        "expression": {"type": "string"},
        "domain": _DOMAIN_SCHEMA,
        "method": {"enum": ["bianchi", "small", "both"]},
        "checks": {"type": "array", "items": _CHECK_SCHEMA},
        "holes": {"type": "integer", "minimum": 0},
        "timing_ms": {"type": ["number", "null"]},
    },
    "additionalProperties": False,
}


def _fmt(x):
    return format(float(x), ".17g")


def write_obj(grid, path):
    """Write non-hole nodes as vertices and every hole-free grid cell as a quad.

    Returns ``(vertex_count, face_count)``.
    """
    index = np.full(grid.shape, 0, dtype=np.int64)
    valid = ~grid.holes
    index[valid] = np.arange(1, valid.sum() + 1)
    faces = []
    n0, n1 = grid.shape
    for i in range(n0 - 1):
        for j in range(n1 - 1):
            corners = (index[i, j], index[i + 1, j], index[i + 1, j + 1], index[i, j + 1])
            if all(corners):
                faces.append(corners)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# expression: {grid.expression}\n# method: {grid.method}\n")
        fh.write(f"# grid: {n0}x{n1}, holes: {grid.hole_count}\n")
        for p in grid.points[valid]:
            fh.write(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}\n")
        for quad in faces:
            fh.write("f " + " ".join(str(int(k)) for k in quad) + "\n")
    return int(valid.sum()), len(faces)


def read_obj(path):
    """``(vertices, faces)`` from an OBJ file written by :func:`write_obj`."""
    vertices, faces = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                vertices.append([float(t) for t in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(t.split("/")[0]) for t in parts[1:]])
    return np.array(vertices, dtype=float).reshape(-1, 3), faces


def write_csv(grids, path):
    """One row per non-hole node of each grid, in the given grid order."""
    rows = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for g in grids:
            r, theta = g.domain.mesh()
            for i, j in zip(*np.nonzero(~g.holes)):
                t = g.tau[i, j]
                x, y, z = g.points[i, j]
                writer.writerow([_fmt(t.real), _fmt(t.imag), _fmt(r[i, j]), _fmt(theta[i, j]),
                                 _fmt(x), _fmt(y), _fmt(z), g.method])
                rows += 1
    return rows


def build_report(expression, domain, method, checks, holes, timing_ms=None):
    return {
        "expression": expression,
        "domain": domain.to_dict(),
        "method": method,
        "checks": [c.to_dict() for c in checks],
        "holes": int(holes),
        "timing_ms": timing_ms,
    }


def write_json(data, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(data, fh, indent=2, allow_nan=False)
        fh.write("\n")
