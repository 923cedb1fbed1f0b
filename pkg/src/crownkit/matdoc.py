"""JSON documents for matrices and tube coordinates, plus deterministic number formatting.

Matrix document::

    {"n": 2, "entries": [[[1], [0.5, 0]], [[0], [2, -1e-3]]]}

Each entry is ``[re]`` or ``[re, im]``.  Tube document::

    {"alpha": [re, im], "beta": [re, im], "gamma": [re, im], "zeta": [[re, im], [re, im], [re, im]]}
"""

from __future__ import annotations

import json
import math

import numpy as np

from crownkit.crown import TubeCoordinates


class DocumentError(ValueError):
    """Malformed input document (CLI exit code 2)."""


def _number(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise DocumentError(f"{where}: non-finite value")
    return float(x)


def _complex(x, where: str) -> complex:
    if not isinstance(x, list) or len(x) not in (1, 2):
        raise DocumentError(f"{where}: expected [re] or [re, im], got {x!r}")
    re_ = _number(x[0], where)
    im_ = _number(x[1], where) if len(x) == 2 else 0.0
    return complex(re_, im_)


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None


def parse_matrix(text: str, allow_complex: bool = False) -> np.ndarray:
    doc = _load_json(text)
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise DocumentError('expected an object with keys "n" and "entries"')
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DocumentError(f'"n" must be a positive integer, got {n!r}')
    rows = doc["entries"]
    if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise DocumentError(f"entries must be an {n} x {n} array")
    M = np.array([[_complex(x, f"entry ({i + 1},{j + 1})") for j, x in enumerate(r)] for i, r in enumerate(rows)])
    if allow_complex:
        return M
    if np.any(M.imag != 0):
        raise DocumentError("this command takes a real matrix")
    return M.real.copy()


def parse_tube(text: str) -> TubeCoordinates:
    doc = _load_json(text)
    if not isinstance(doc, dict) or set(doc) != {"alpha", "beta", "gamma", "zeta"}:
        raise DocumentError('expected an object with keys "alpha", "beta", "gamma", "zeta"')
    zeta = doc["zeta"]
    if not isinstance(zeta, list) or len(zeta) != 3:
        raise DocumentError('"zeta" must list three entries')
    return TubeCoordinates(
        _complex(doc["alpha"], "alpha"),
        _complex(doc["beta"], "beta"),
        _complex(doc["gamma"], "gamma"),
        tuple(_complex(z, f"zeta[{k}]") for k, z in enumerate(zeta)),
    )


# --- output -----------------------------------------------------------------------


def fmt_real(x: float, digits: int = 12) -> str:
    """Shortest %g form at the given precision, without negative zero."""
    s = f"{float(x):.{digits}g}"
    return "0" if s in ("-0", "0") else s


def fmt_complex(z: complex, digits: int = 12) -> str:
    z = complex(z)
    if z.imag == 0 or abs(z.imag) < 10.0 ** (-digits - 3):
        return fmt_real(z.real, digits)
    sign = "-" if z.imag < 0 else "+"
    return f"{fmt_real(z.real, digits)}{sign}{fmt_real(abs(z.imag), digits)}i"


def format_matrix(M: np.ndarray, digits: int = 12) -> str:
    M = np.asarray(M)
    fmt = fmt_complex if np.iscomplexobj(M) else fmt_real
    cells = [[fmt(x, digits) for x in row] for row in M]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  " + " ".join(c.rjust(width) for c in row) for row in cells)


def _pair(z: complex, digits: int = 17) -> list:
    z = complex(z)
    clean = lambda x: 0.0 if x == 0 else float(f"{x:.{digits}g}")
    return [clean(z.real), clean(z.imag)]


def matrix_document(M: np.ndarray) -> str:
    M = np.asarray(M, dtype=complex)
    doc = {"n": M.shape[0], "entries": [[_pair(x) for x in row] for row in M]}
    return json.dumps(doc)


def tube_document(tc: TubeCoordinates) -> str:
    doc = {
        "alpha": _pair(tc.alpha),
        "beta": _pair(tc.beta),
        "gamma": _pair(tc.gamma),
        "zeta": [_pair(z) for z in tc.zeta],
    }
    return json.dumps(doc)
