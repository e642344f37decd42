from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bideform.errors import FieldMismatchError, ScalarFormatError
from bideform.fields import GF, QQ, field_from_header, is_prime


def test_rational_parse_canonical():
    assert QQ.parse("3/6") == Fraction(1, 2)
    assert QQ.parse("-4/2") == Fraction(-2)
    assert QQ.parse("7") == Fraction(7)
    v = QQ.parse("-3/9")
    assert v.denominator == 3 and v.numerator == -1


def test_rational_rejects_bad_literals():
    for bad in ("1/0", "1/-2", "a", "1.5", "2/3/4"):
        with pytest.raises(ScalarFormatError):
            QQ.parse(bad)


def test_rational_rejects_floats():
    with pytest.raises(ScalarFormatError):
        QQ.check(0.5)


def test_prime_field_basics():
    F5 = GF(5)
    assert F5.add(3, 4) == 2
    assert F5.mul(3, 4) == 2
    assert F5.inv(2) == 3
    assert F5.neg(1) == 4
    assert F5.parse("4") == 4
    with pytest.raises(ScalarFormatError):
        F5.parse("5")
    with pytest.raises(ScalarFormatError):
        F5.parse("-1")


def test_prime_field_requires_prime_modulus():
    for bad in (0, 1, 4, 6, 9, 2**40 + 2):
        with pytest.raises(ScalarFormatError):
            GF(bad)
    GF(2), GF(3), GF(7), GF(2**31 - 1)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}
    for n in range(2, 32):
        assert is_prime(n) == (n in primes)


def test_field_mismatch_is_an_error():
    with pytest.raises(FieldMismatchError):
        QQ.unify(GF(5))
    with pytest.raises(FieldMismatchError):
        GF(5).unify(GF(7))
    assert GF(5).unify(GF(5)) == GF(5)
    assert QQ.unify(QQ) == QQ


def test_field_from_header():
    assert field_from_header("rational") == QQ
    assert field_from_header("prime", "5") == GF(5)
    with pytest.raises(ScalarFormatError):
        field_from_header("prime", "6")
    with pytest.raises(ScalarFormatError):
        field_from_header("complex")
    with pytest.raises(ScalarFormatError):
        field_from_header("rational", "3")


@given(num=st.integers(-10**12, 10**12), den=st.integers(1, 10**9))
def test_rational_format_parse_round_trip(num, den):
    v = Fraction(num, den)
    assert QQ.parse(QQ.format(v)) == v


@given(v=st.integers(0, 10**9 + 6))
def test_prime_format_parse_round_trip(v):
    F = GF(10**9 + 7)
    assert F.parse(F.format(v % F.prime)) == v % F.prime
