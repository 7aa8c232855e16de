from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from coprimelab.cyclotomic import (cyclo_ring, cyclotomic_polynomial, element_from_json, field_inverse,
                                   to_complex_float, zeta_power)
from coprimelab.errors import ZeroInverseError


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


@pytest.mark.parametrize("n,coeffs", [(2, (1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1))])
def test_small_cyclotomic_polynomials(n, coeffs):
    assert tuple(cyclotomic_polynomial(n)) == coeffs


@pytest.mark.parametrize("n", range(1, 25))
def test_divisor_product_identity(n):
    prod = [1]
    for d in range(1, n + 1):
        if n % d == 0:
            prod = poly_mul(prod, list(cyclotomic_polynomial(d)))
    assert prod == [-1] + [0] * (n - 1) + [1]


def test_zeta_powers():
    r2, r3 = cyclo_ring(2), cyclo_ring(3)
    assert zeta_power(r2, 2) == r2.from_rational(-1)
    assert zeta_power(r3, 6) == r3.one()
    assert zeta_power(r3, 2).coords == (Fraction(-1), Fraction(1))
    for r in range(2, 8):
        ring = cyclo_ring(r)
        assert zeta_power(ring, r) == ring.from_rational(-1)
        assert zeta_power(ring, -1) * zeta_power(ring, 1) == ring.one()


def test_field_examples():
    R = cyclo_ring(2)
    z = zeta_power(R, 1)
    assert (R.one() + z) * (R.one() - z) == R.from_rational(2)
    assert field_inverse(R.one() + z) == (R.one() - z) / 2
    assert field_inverse(z) == -z
    assert field_inverse(R.one()) == R.one()
    R3 = cyclo_ring(3)
    z3 = zeta_power(R3, 1)
    assert z3 * z3 == z3 - 1


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroInverseError):
        field_inverse(cyclo_ring(3).zero())


def test_complex_embedding():
    R = cyclo_ring(2)
    assert abs(to_complex_float(zeta_power(R, 1)) - 1j) < 1e-12
    assert to_complex_float(R.from_rational(2)) == 2
    R3 = cyclo_ring(3)
    assert abs(to_complex_float(zeta_power(R3, 1) + zeta_power(R3, 5)) - 1.0) < 1e-12


def test_json_round_trip():
    R = cyclo_ring(5)
    a = R.element([Fraction(1, 3), -2, 0, 7])
    assert element_from_json(R, a.to_json()) == a


small = st.fractions(min_value=-20, max_value=20, max_denominator=6)


@st.composite
def element_triples(draw):
    r = draw(st.integers(2, 12))
    ring = cyclo_ring(r)
    els = [ring.element(draw(st.lists(small, min_size=ring.degree, max_size=ring.degree))) for _ in range(3)]
    return ring, els


@given(element_triples())
def test_field_axioms(data):
    ring, (a, b, c) = data
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ring.zero() == a
    assert a * ring.one() == a
    assert a + (-a) == ring.zero()
    if not a.is_zero():
        assert a * field_inverse(a) == ring.one()


@given(element_triples())
def test_embedding_is_a_homomorphism(data):
    _, (a, b, _) = data
    assert abs(to_complex_float(a * b) - to_complex_float(a) * to_complex_float(b)) < 1e-6 * (
        1 + abs(to_complex_float(a)) * abs(to_complex_float(b)))
