"""JSON codec for problem files, symbols and reports.

Complex entries are encoded as [re, im] pairs and coefficient lists are
degree-indexed sparse arrays ``{"deg": k, "mat": [[..]]}`` so that
negative-degree support reads naturally.  Numbers are written with 17
significant digits, which round-trips IEEE doubles bit-for-bit.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ParseError
from .inversion import DataSet
from .series import LaurentPoly


# -- low-level writer ---------------------------------------------------------


def _fmt_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return f"{x:.17g}"


def dumps(obj, indent=0) -> str:
    """Serialize with 17-significant-digit numbers (bit-exact round trip)."""
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, int, float, np.bool_, np.integer, np.floating)):
        return _fmt_number(obj)
    if isinstance(obj, (list, tuple)):
        items = [dumps(v, indent) for v in obj]
        return "[" + ", ".join(items) + "]"
    if isinstance(obj, dict):
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps(v, indent + 2)}' for k, v in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


def read_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


# -- matrices and symbols -----------------------------------------------------


def matrix_to_json(mat) -> list:
    mat = np.asarray(mat, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in mat]


def matrix_from_json(obj, rows=None, cols=None):
    try:
        mat = np.array(
            [[complex(c[0], c[1]) for c in row] for row in obj], dtype=complex
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"malformed matrix entry: {exc}") from exc
    if mat.ndim != 2:
        raise ParseError("matrix must be a list of rows")
    if rows is not None and mat.shape != (rows, cols):
        raise ParseError(f"matrix must be {rows}x{cols}, got {mat.shape}")
    if not (np.all(np.isfinite(mat.real)) and np.all(np.isfinite(mat.imag))):
        raise ParseError("matrix entries must be finite")
    return mat


def poly_to_json(f: LaurentPoly) -> dict:
    return {
        "rows": f.rows,
        "cols": f.cols,
        "coeffs": [
            {"deg": d, "mat": matrix_to_json(f.coeff(d))} for d in f.degrees()
        ],
    }


def _coeff_list_from_json(obj, rows, cols, lo=None, hi=None, name="symbol"):
    coeffs = {}
    if not isinstance(obj, list):
        raise ParseError(f"{name}: coefficient list expected")
    for item in obj:
        if not isinstance(item, dict) or "deg" not in item or "mat" not in item:
            raise ParseError(f'{name}: coefficients must be {{"deg", "mat"}} objects')
        deg = item["deg"]
        if not isinstance(deg, int):
            raise ParseError(f"{name}: degree must be an integer")
        if lo is not None and not (lo <= deg <= hi):
            raise ParseError(f"{name}: degree {deg} outside [{lo}, {hi}]")
        if deg in coeffs:
            raise ParseError(f"{name}: duplicate degree {deg}")
        coeffs[deg] = matrix_from_json(item["mat"], rows, cols)
    return coeffs


def poly_from_json(obj, name="symbol") -> LaurentPoly:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{name}: needs integer 'rows' and 'cols'") from exc
    coeffs = _coeff_list_from_json(obj.get("coeffs", []), rows, cols, name=name)
    return LaurentPoly(rows, cols, coeffs)


# -- problem files ------------------------------------------------------------


def problem_to_json(data: DataSet, g: LaurentPoly = None, metadata: dict = None) -> dict:
    out = {
        "p": data.p,
        "q": data.q,
        "m": data.m,
        "alpha": poly_to_json(data.alpha)["coeffs"],
        "beta": poly_to_json(data.beta)["coeffs"],
        "gamma": poly_to_json(data.gamma)["coeffs"],
        "delta": poly_to_json(data.delta)["coeffs"],
    }
    if g is not None:
        out["g"] = poly_to_json(g)["coeffs"]
    if metadata:
        out["metadata"] = metadata
    return out


def problem_from_json(obj):
    """Parse a problem file; returns (DataSet, g or None, metadata)."""
    if not isinstance(obj, dict):
        raise ParseError("problem file must be a JSON object")
    try:
        p, q, m = int(obj["p"]), int(obj["q"]), int(obj["m"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError("problem file needs integer 'p', 'q', 'm'") from exc
    if p < 1 or q < 1 or m < 0:
        raise ParseError("p, q must be positive and m nonnegative")
    shapes = {
        "alpha": (p, p, 0, m),
        "beta": (p, q, 0, m),
        "gamma": (q, p, -m, 0),
        "delta": (q, q, -m, 0),
    }
    polys = {}
    for name, (rows, cols, lo, hi) in shapes.items():
        if name not in obj:
            raise ParseError(f"problem file is missing '{name}'")
        coeffs = _coeff_list_from_json(obj[name], rows, cols, lo, hi, name=name)
        polys[name] = LaurentPoly(rows, cols, coeffs)
    try:
        data = DataSet(**polys)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    g = None
    if "g" in obj and obj["g"] is not None:
        coeffs = _coeff_list_from_json(obj["g"], p, q, 0, m, name="g")
        g = LaurentPoly(p, q, coeffs)
    metadata = obj.get("metadata") or {}
    return data, g, metadata


# -- reports ------------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.ndarray):
        return matrix_to_json(np.atleast_2d(value))
    if isinstance(value, LaurentPoly):
        return poly_to_json(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def solve_report_to_json(report) -> dict:
    out = {
        "method": report.method,
        "g": poly_to_json(report.g),
        "residual_identities": list(report.residual_identities),
        "residual_inclusions": list(report.residual_inclusions),
        "cross_method_gap": report.cross_method_gap,
        "accepted": report.accepted,
        "tol": report.tol,
        "flags": list(report.flags),
        "details": _jsonable(report.details),
    }
    if report.phi is not None:
        out["phi"] = poly_to_json(report.phi)
    return out


def check_report_to_json(report) -> dict:
    return {
        "overall": report.overall(),
        "entries": [
            {
                "name": e.name,
                "value": None if np.isnan(e.value) else e.value,
                "threshold": e.threshold,
                "verdict": e.verdict,
            }
            for e in report.entries
        ],
    }
