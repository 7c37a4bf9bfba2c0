"""Scalar backends, tolerance policy and matrix input validation.

Two backends exist. ``EXACT`` stores :class:`fractions.Fraction` entries in
numpy object arrays and never rounds. ``FLOAT`` stores IEEE doubles
(real or complex). Every rank or equality decision goes through a
:class:`TolerancePolicy`; under ``EXACT`` the policy is ignored.
"""

import enum
import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import BackendMismatchError

__all__ = [
    "Backend",
    "TolerancePolicy",
    "DEFAULT_POLICY",
    "backend_of",
    "add",
    "sub",
    "mul",
    "div",
    "is_negligible",
    "format_rational",
    "parse_rational",
    "as_matrix",
    "as_exact",
    "as_float",
    "check_square",
    "check_same_backend",
]


class Backend(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds for floating-point decisions.

    Parameters
    ----------
    rank_tol : float
        Relative threshold on pivots and singular values.
    residual_tol : float
        Relative residual under which an identity counts as satisfied.
    angle_tol : float
        Largest sine of a principal angle for two subspaces to be
        considered equal (or one contained in the other).
    strict : bool
        Raise :class:`~ginv.exceptions.RankAmbiguityError` when a pivot
        lies within a factor of 100 of the rank threshold.
    """

    rank_tol: float = 1e-10
    residual_tol: float = 1e-9
    angle_tol: float = 1e-8
    strict: bool = False

    def __post_init__(self):
        for name in ("rank_tol", "residual_tol", "angle_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_POLICY = TolerancePolicy()


def backend_of(x):
    """Backend tag of a scalar or an array."""
    if isinstance(x, np.ndarray):
        return Backend.EXACT if x.dtype == object else Backend.FLOAT
    if isinstance(x, (Fraction, numbers.Integral)) and not isinstance(x, bool):
        return Backend.EXACT
    if isinstance(x, numbers.Complex):
        return Backend.FLOAT
    raise TypeError(f"unsupported scalar {x!r}")


def _same(x, y):
    bx, by = backend_of(x), backend_of(y)
    if bx is not by:
        raise BackendMismatchError(f"cannot combine {bx.value} and {by.value} operands")
    if bx is Backend.EXACT:
        return Fraction(x), Fraction(y)
    return complex(x), complex(y)


def add(x, y):
    x, y = _same(x, y)
    return x + y


def sub(x, y):
    x, y = _same(x, y)
    return x - y


def mul(x, y):
    x, y = _same(x, y)
    return x * y


def div(x, y):
    x, y = _same(x, y)
    if y == 0:
        raise ZeroDivisionError("division by zero")
    return x / y


def is_negligible(x, scale=1.0, policy=DEFAULT_POLICY):
    """True when ``x`` is zero for rank purposes.

    Exact zero under ``EXACT``; ``|x| <= rank_tol * max(scale, 1)`` under ``FLOAT``.
    """
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    if backend_of(x) is Backend.EXACT:
        return x == 0
    return abs(x) <= policy.rank_tol * max(scale, 1.0)


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s):
    """Parse ``"p/q"`` or ``"p"``; decimals are rejected to keep inputs exact."""
    if isinstance(s, bool):
        raise ValueError(f"not a rational literal: {s!r}")
    if isinstance(s, numbers.Integral):
        return Fraction(s)
    if not isinstance(s, str):
        raise ValueError(f"not a rational literal: {s!r}")
    text = s.strip()
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational literal: {s!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {s!r}")
    return Fraction(p, q)


def _to_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return parse_rational(v)
    if isinstance(v, (numbers.Integral, np.integer)):
        return Fraction(int(v))
    if isinstance(v, (numbers.Real, np.floating)):
        if not np.isfinite(v):
            raise ValueError("non-finite entry")
        return Fraction(float(v))
    raise TypeError(f"cannot represent {v!r} exactly (complex entries need the float backend)")


def as_exact(A):
    """Exact copy of ``A`` as an object array of fractions."""
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    out = np.empty(A.shape, dtype=object)
    for idx, v in np.ndenumerate(A):
        out[idx] = _to_fraction(v)
    return out


def as_float(A):
    """Floating copy of ``A``; real stays real, complex stays complex."""
    A = np.asarray(A)
    if A.dtype == object:
        if any(isinstance(v, complex) for v in A.flat):
            A = A.astype(complex)
        else:
            A = np.array([[float(v) for v in row] for row in A], dtype=float).reshape(A.shape)
    elif not np.issubdtype(A.dtype, np.complexfloating):
        A = A.astype(float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


def as_matrix(A, backend=None):
    """Validate ``A`` as a 2-d matrix and fix its backend.

    With ``backend=None`` object arrays (fractions, strings, Python ints in
    lists containing fractions) become exact and everything else float.
    """
    if backend is None:
        arr = np.asarray(A) if not isinstance(A, np.ndarray) else A
        if arr.dtype == object or arr.dtype.kind in "US":
            return as_exact(arr)
        return as_float(arr)
    backend = Backend(backend)
    return as_exact(A) if backend is Backend.EXACT else as_float(A)


def check_square(A, name="A"):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    return A


def check_same_backend(*mats):
    tags = {backend_of(m) for m in mats if m is not None}
    if len(tags) > 1:
        raise BackendMismatchError("exact and float matrices cannot be mixed; convert explicitly")
    return tags.pop() if tags else None
