from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ginv.exceptions import BackendMismatchError
from ginv.scalar import (
    Backend,
    TolerancePolicy,
    add,
    as_exact,
    as_float,
    as_matrix,
    backend_of,
    check_same_backend,
    check_square,
    div,
    format_rational,
    is_negligible,
    mul,
    parse_rational,
    sub,
)

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f.numerator) < 10**6)


def test_exact_addition():
    assert add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)


def test_exact_values_are_reduced():
    x = Fraction(2, 4)
    assert (x.numerator, x.denominator) == (1, 2)
    assert parse_rational("2/4") == Fraction(1, 2)


def test_complex_square_of_i():
    assert mul(1j, 1j) == -1 + 0j


def test_mixed_backends_rejected():
    with pytest.raises(BackendMismatchError):
        add(Fraction(1), 1.0)
    with pytest.raises(BackendMismatchError):
        check_same_backend(as_exact(np.eye(2)), np.eye(2))


def test_division_by_exact_zero():
    with pytest.raises(ZeroDivisionError):
        div(Fraction(1), Fraction(0))


@pytest.mark.parametrize(
    "x, tol, expected",
    [(Fraction(0), 1e-10, True), (1e-14, 1e-10, True), (1e-6, 1e-10, False)],
)
def test_is_negligible(x, tol, expected):
    assert is_negligible(x, 1.0, TolerancePolicy(rank_tol=tol)) is expected


def test_exact_nonzero_never_negligible():
    assert not is_negligible(Fraction(1, 10**30), 1e6)


def test_policy_rejects_nonpositive():
    with pytest.raises(ValueError):
        TolerancePolicy(rank_tol=0)
    with pytest.raises(ValueError):
        TolerancePolicy(residual_tol=-1)


@pytest.mark.parametrize("text, value", [("1/3", Fraction(1, 3)), ("-7", Fraction(-7)), ("4/-6", Fraction(-2, 3))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1/0", "abc", ""])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_omits_unit_denominator():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-1, 3)) == "-1/3"


@given(fractions)
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x


@given(fractions, fractions)
def test_exact_field_identities(x, y):
    assert sub(add(x, y), y) == x
    if y != 0:
        assert mul(div(x, y), y) == x


def test_backend_detection():
    assert backend_of(Fraction(1)) is Backend.EXACT
    assert backend_of(1.0) is Backend.FLOAT
    assert backend_of(as_exact(np.eye(2))) is Backend.EXACT
    assert backend_of(np.eye(2)) is Backend.FLOAT


def test_matrix_conversion_round_trip():
    M = as_exact(np.array([[1, 2], [3, 4]]))
    assert M.dtype == object and isinstance(M[0, 0], Fraction)
    assert np.array_equal(as_float(M), [[1.0, 2.0], [3.0, 4.0]])
    assert as_matrix([[1, 2]]).dtype == float


def test_float_to_exact_is_exact_binary_value():
    M = as_exact(np.array([[0.1]]))
    assert M[0, 0] == Fraction(0.1)


def test_check_square():
    with pytest.raises(ValueError):
        check_square(np.ones((2, 3)))
