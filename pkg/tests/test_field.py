import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.field import FieldElement, FieldKind, FieldSpec, add, div, element_from_int, inv, mul, power
from src.core.field import pow as field_pow
from src.core.field.tables import REDUCTION_POLYNOMIALS, gf2_multiply, is_irreducible_gf2, is_prime
from src.utils.error_handler import FieldMismatchError, FieldTooSmallError, ParameterError, ZeroDivisionFieldError

SMALL_FIELDS = [FieldSpec.prime(2), FieldSpec.prime(7), FieldSpec.prime(11),
                FieldSpec.binary(1), FieldSpec.binary(4), FieldSpec.binary(8)]


def test_gf7_examples(gf7):
    assert gf7.add(3, 5) == 1
    assert gf7.inv(3) == 5
    assert gf7.mul(3, 5) == 1
    assert gf7.sub(2, 5) == 4


def test_gf16_multiplication(gf16):
    # x * x^3 = x^4 = x + 1 modulo x^4 + x + 1
    assert gf16.mul(2, 8) == 3
    assert gf16.reduction_polynomial == 0b10011


def test_inverse_of_zero_is_rejected(gf7, gf16):
    with pytest.raises(ZeroDivisionFieldError):
        gf7.inv(0)
    with pytest.raises(ZeroDivisionError):
        gf16.div(5, 0)


@pytest.mark.parametrize("m", sorted(REDUCTION_POLYNOMIALS))
def test_reduction_polynomials_are_irreducible(m):
    poly = REDUCTION_POLYNOMIALS[m]
    assert poly.bit_length() == m + 1
    assert is_irreducible_gf2(poly)


def test_reducible_polynomial_detected():
    # x^4 + 1 = (x + 1)^4
    assert not is_irreducible_gf2(0b10001)


@pytest.mark.parametrize("text,kind,order", [
    ("prime:7", FieldKind.PRIME, 7),
    ("gf2:8", FieldKind.BINARY_EXTENSION, 256),
    (" gf2 : 1 ", FieldKind.BINARY_EXTENSION, 2),
])
def test_parse_and_str(text, kind, order):
    field = FieldSpec.parse(text)
    assert field.kind == kind
    assert field.order == order
    assert FieldSpec.parse(str(field)) == field


@pytest.mark.parametrize("text", ["prime:8", "gf2:17", "gf3:2", "", "prime"])
def test_parse_rejects_invalid(text):
    with pytest.raises(ParameterError):
        FieldSpec.parse(text)


@pytest.mark.parametrize("min_order,expected", [
    (2, "gf2:1"), (5, "prime:5"), (10, "prime:11"), (15, "gf2:4"), (16, "gf2:4"), (21, "prime:23"),
])
def test_smallest_at_least(min_order, expected):
    assert str(FieldSpec.smallest_at_least(min_order)) == expected


def test_smallest_at_least_too_large():
    with pytest.raises(FieldTooSmallError):
        FieldSpec.smallest_at_least(70000)


@pytest.mark.parametrize("field", SMALL_FIELDS, ids=str)
def test_multiplicative_group_is_complete(field):
    exp_table = field.exp_table
    assert sorted(exp_table.tolist()) == list(range(1, field.order))


@pytest.mark.parametrize("field", SMALL_FIELDS, ids=str)
def test_tables_agree_with_slow_multiplication(field):
    table = field.mul_table()
    for a in range(field.order):
        for b in range(field.order):
            assert table[a, b] == field.slow_mul(a, b)


@pytest.mark.parametrize("field", SMALL_FIELDS, ids=str)
def test_field_axioms_exhaustive(field):
    q = field.order
    mult = field.mul_table()
    addition = field.add_table()
    for a in range(q):
        assert addition[a, 0] == a and mult[a, 1] == a
        assert field.add(a, field.neg(a)) == 0
        if a:
            assert field.mul(a, field.inv(a)) == 1
    # distributivité
    for a in range(q):
        for b in range(q):
            for c in range(0, q, max(1, q // 8)):
                assert mult[a, addition[b, c]] == addition[mult[a, b], mult[a, c]]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_gf256_associativity(a, b, c):
    field = FieldSpec.binary(8)
    assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
    assert field.mul(a, b) == gf2_multiply(a, b, field.reduction_polynomial, 8)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 65520), st.integers(-5, 20))
def test_prime_power_matches_python(a, exponent):
    field = FieldSpec.prime(65521)
    expected = pow(a, exponent, 65521)
    assert field.pow(a, exponent) == expected


def test_pow_zero_exponent_and_negative(gf16):
    assert gf16.pow(0, 0) == 1
    assert gf16.pow(7, -1) == gf16.inv(7)


def test_bulk_kernels_match_scalar(gf256, rng):
    a = rng.integers(0, 256, size=(20, 7))
    b = rng.integers(0, 256, size=(20, 7))
    products = gf256.mul_arrays(a, b)
    sums = gf256.add_arrays(a, b)
    for i in range(20):
        for j in range(7):
            assert products[i, j] == gf256.mul(int(a[i, j]), int(b[i, j]))
            assert sums[i, j] == gf256.add(int(a[i, j]), int(b[i, j]))
    assert np.array_equal(gf256.scale(3, a), gf256.mul_arrays(np.full_like(a, 3), a))


@pytest.mark.parametrize("field", [FieldSpec.prime(11), FieldSpec.binary(8)], ids=str)
def test_matmul_matches_dot(field, rng):
    left = rng.integers(0, field.order, size=(6, 4))
    right = rng.integers(0, field.order, size=(4, 3))
    product = field.matmul(left, right)
    for i in range(6):
        for j in range(3):
            assert product[i, j] == field.dot(left[i], right[:, j])


def test_check_symbols_rejects_out_of_range(gf7):
    with pytest.raises(ParameterError):
        gf7.check_symbols(np.array([0, 7]))


def test_field_element_operators(gf7):
    three = element_from_int(3, gf7)
    five = FieldElement(5, gf7)
    assert int(three + five) == 1
    assert int(three * five) == 1
    assert int(five / three) == gf7.mul(5, 5)
    assert int(-three) == 4
    assert int(three ** 6) == 1
    assert three.inverse() == five
    assert add(three, five) == three + five
    assert mul(three, five) == three * five
    assert div(five, five) == FieldElement(1, gf7)
    assert inv(three) == five
    assert power(three, -1) == five


def test_module_level_pow(gf7, gf16):
    assert field_pow(FieldElement(3, gf7), 0) == FieldElement(1, gf7)
    assert field_pow(FieldElement(0, gf16), 0) == FieldElement(1, gf16)
    assert field_pow(FieldElement(2, gf16), 4) == power(FieldElement(2, gf16), 4) == FieldElement(3, gf16)


def test_field_element_mixing_fields(gf7, gf16):
    with pytest.raises(FieldMismatchError):
        FieldElement(1, gf7) + FieldElement(1, gf16)


def test_field_element_range(gf7):
    with pytest.raises(ParameterError):
        FieldElement(7, gf7)


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_fields_are_cached():
    assert FieldSpec.binary(8) is FieldSpec.binary(8)
    assert FieldSpec.prime(7) == FieldSpec.parse("prime:7")
