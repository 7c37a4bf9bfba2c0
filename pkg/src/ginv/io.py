"""Matrix files: Matrix Market ``array`` format and rational JSON.

Matrix Market files are dense, column-major, ``real`` or ``complex``
``general``; values are written with the shortest repr that round-trips.
Rational JSON files look like::

    {"cols": 2, "data": [["2", "0"], ["1", "0"]], "field": "rational", "rows": 2}

and always load on the exact backend.
"""

import json
from pathlib import Path

import numpy as np

from .scalar import as_exact, as_float, format_rational, parse_rational

__all__ = [
    "MatrixFormatError",
    "MM_REAL_HEADER",
    "MM_COMPLEX_HEADER",
    "parse_matrix",
    "loads_matrix",
    "write_matrix",
    "dumps_matrix",
    "matrix_to_json",
    "matrix_from_json",
    "format_matrix",
]

MM_REAL_HEADER = "%%MatrixMarket matrix array real general"
MM_COMPLEX_HEADER = "%%MatrixMarket matrix array complex general"


class MatrixFormatError(ValueError):
    """Malformed or unsupported matrix file."""


def _float_token(x):
    x = float(x)
    if x == 0:
        x = 0.0
    return repr(x)


def _parse_mm(text):
    lines = text.splitlines()
    if not lines:
        raise MatrixFormatError("empty file")
    header = lines[0].strip()
    if header == MM_REAL_HEADER:
        is_complex = False
    elif header == MM_COMPLEX_HEADER:
        is_complex = True
    elif header.lower().startswith("%%matrixmarket"):
        raise MatrixFormatError(f"unsupported Matrix Market variant: {header!r}")
    else:
        raise MatrixFormatError("missing %%MatrixMarket header")
    body = [ln.strip() for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixFormatError("missing size line")
    try:
        rows, cols = (int(t) for t in body[0].split())
    except ValueError:
        raise MatrixFormatError(f"bad size line {body[0]!r}") from None
    if rows < 0 or cols < 0:
        raise MatrixFormatError("negative dimensions")
    width = 2 if is_complex else 1
    values = []
    for ln in body[1:]:
        toks = ln.split()
        if len(toks) != width:
            raise MatrixFormatError(f"expected {width} value(s) per line, got {ln!r}")
        try:
            nums = [float(t) for t in toks]
        except ValueError:
            raise MatrixFormatError(f"unparseable value in {ln!r}") from None
        values.append(complex(nums[0], nums[1]) if is_complex else nums[0])
    if len(values) != rows * cols:
        raise MatrixFormatError(f"expected {rows * cols} entries, found {len(values)}")
    arr = np.array(values, dtype=complex if is_complex else float)
    return arr.reshape((cols, rows)).T.copy()


def _dumps_mm(M):
    M = as_float(M)
    is_complex = np.iscomplexobj(M)
    out = [MM_COMPLEX_HEADER if is_complex else MM_REAL_HEADER, f"{M.shape[0]} {M.shape[1]}"]
    for x in M.T.flat:
        if is_complex:
            out.append(f"{_float_token(x.real)} {_float_token(x.imag)}")
        else:
            out.append(_float_token(x))
    return "\n".join(out) + "\n"


def matrix_to_json(M):
    """JSON-ready dict; rationals as ``"p/q"``, complex entries as ``[re, im]``."""
    rows, cols = M.shape
    if M.dtype == object:
        data = [[format_rational(x) for x in row] for row in M]
        field = "rational"
    elif np.iscomplexobj(M):
        data = [[[float(x.real) + 0.0, float(x.imag) + 0.0] for x in row] for row in M]
        field = "complex"
    else:
        data = [[float(x) + 0.0 for x in row] for row in M]
        field = "real"
    return {"cols": cols, "data": data, "field": field, "rows": rows}


def matrix_from_json(obj):
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        field = obj.get("field", "rational")
    except (KeyError, TypeError, ValueError):
        raise MatrixFormatError("JSON matrix needs rows, cols and data") from None
    if not isinstance(data, list) or len(data) != rows or any(
        not isinstance(r, list) or len(r) != cols for r in data
    ):
        raise MatrixFormatError("ragged or mis-sized data array")
    try:
        if field == "rational":
            M = np.empty((rows, cols), dtype=object)
            for i, row in enumerate(data):
                for j, v in enumerate(row):
                    M[i, j] = parse_rational(v)
            return M
        if field == "real":
            return as_float(np.array(data, dtype=float).reshape(rows, cols))
        if field == "complex":
            arr = np.array(data, dtype=float).reshape(rows, cols, 2)
            return arr[..., 0] + 1j * arr[..., 1]
    except (ValueError, TypeError) as exc:
        raise MatrixFormatError(f"unparseable entry: {exc}") from None
    raise MatrixFormatError(f"unknown field {field!r}")


def loads_matrix(text):
    """Parse matrix text, sniffing the format from its first character."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON: {exc}") from None
        return matrix_from_json(obj)
    return _parse_mm(stripped)


def parse_matrix(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc.strerror}") from None
    return loads_matrix(text)


def dumps_matrix(M, fmt=None):
    """Serialize ``M``; ``fmt`` is ``"mtx"`` or ``"json"`` (default by backend)."""
    if fmt is None:
        fmt = "json" if M.dtype == object else "mtx"
    if fmt == "json":
        return json.dumps(matrix_to_json(M), sort_keys=True) + "\n"
    if fmt == "mtx":
        return _dumps_mm(M)
    raise ValueError(f"unknown format {fmt!r}")


def write_matrix(M, path, fmt=None):
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "mtx"
    Path(path).write_text(dumps_matrix(M, fmt))


def _fmt_real(x):
    s = f"{x:.12g}"
    return "0" if s in ("-0", "0") else s


def format_matrix(M, rank_tol=1e-10):
    """Compact nested-list rendering, e.g. ``[[2,0],[1,0]]``.

    Float entries below ``rank_tol * max|M|`` print as ``0``.
    """
    if M.dtype == object:
        cells = [[format_rational(x) for x in row] for row in M]
    else:
        M = np.asarray(M)
        top = float(np.max(np.abs(M), initial=0.0))
        cut = rank_tol * top
        is_complex = np.iscomplexobj(M)

        def cell(x):
            if is_complex:
                re = x.real if abs(x.real) > cut else 0.0
                im = x.imag if abs(x.imag) > cut else 0.0
                if im == 0:
                    return _fmt_real(re)
                sign = "+" if im > 0 else "-"
                return f"{_fmt_real(re)}{sign}{_fmt_real(abs(im))}j"
            return _fmt_real(x if abs(x) > cut else 0.0)

        cells = [[cell(x) for x in row] for row in M]
    return "[" + ",".join("[" + ",".join(row) + "]" for row in cells) + "]"


def load_exact_or_float(path, backend=None):
    M = parse_matrix(path)
    if backend == "exact" and M.dtype != object:
        return as_exact(M)
    if backend == "float" and M.dtype == object:
        return as_float(M)
    return M

