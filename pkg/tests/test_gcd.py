import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coprimelab.cyclotomic import cyclo_ring, zeta_power
from coprimelab.engines import LatticeWindow, SystemSpec, simple_iterate, toda1d_iterate
from coprimelab.errors import MoreThanTwoVariables
from coprimelab.gcd import (VERDICT_COPRIME, VERDICT_NOT_COPRIME, coprime_specialized, gcd_exact,
                            gcd_with_method, specialize)
from coprimelab.laurent import LaurentPoly, VariableTable, associate_equal, divides
from coprimelab.modular import certify_coprime, split_primes, upoly_gcd_mod

I = zeta_power(cyclo_ring(2), 1)


def test_gcd_examples(simple_vars):
    _, y0, y1 = simple_vars
    assert gcd_exact(y1 - I, y1 + I) == 1
    f = (y1 ** 2 + y0 + 3).scale(5)
    assert gcd_exact(f, f) == f.normalized()
    st_ = simple_iterate(2, 3)
    p2, p3 = st_[(2,)].p, st_[(3,)].p
    assert gcd_exact(p2 * p3, p3) == p3.normalized()


def test_gcd_subresultant_path(simple_vars):
    _, y0, y1 = simple_vars
    c = y0 * y1 + y1 ** 2 + 2
    f = c * (y0 ** 2 + y1 + 1)
    g = c * (y0 - y1 ** 2 + 5)
    res = gcd_with_method(f, g)
    assert res.method == "subresultant"
    assert associate_equal(res.gcd, c)


def test_gcd_needs_bivariate():
    table = VariableTable(["a", "b", "c"])
    a, b, c = (LaurentPoly.variable(table, x) for x in "abc")
    common = a * b + c + 1
    with pytest.raises(MoreThanTwoVariables):
        gcd_exact(common * (a + b * c + 2), common * (a * c + b + 3))


@pytest.mark.parametrize("order", [2, 4, 6, 8, 10])
def test_split_primes(order):
    for p in split_primes(order):
        assert (p - 1) % order == 0 and p < 2 ** 31


def test_upoly_gcd_mod():
    p = 101
    # (x+1)(x+2) and (x+1)(x+3)
    assert upoly_gcd_mod([2, 3, 1], [3, 4, 1], p) == [1, 1]
    assert upoly_gcd_mod([2, 3, 1], [1, 1, 0], p) == [1, 1]
    assert upoly_gcd_mod([1, 1], [2, 1], p) == [1]


def _det(m):
    m = [row[:] for row in m]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] / m[i][i]
            for c in range(i, n):
                m[r][c] -= f * m[i][c]
    return det


def _resultant(a, b):
    """Sylvester resultant of dense coefficient lists (constant term first)."""
    da, db = len(a) - 1, len(b) - 1
    n = da + db
    rows = []
    for i in range(db):
        rows.append([Fraction(0)] * i + [Fraction(x) for x in reversed(a)] + [Fraction(0)] * (n - da - 1 - i))
    for i in range(da):
        rows.append([Fraction(0)] * i + [Fraction(x) for x in reversed(b)] + [Fraction(0)] * (n - db - 1 - i))
    return _det(rows)


def _univariate(f, var, value):
    """Dense coefficients of f in ``var`` after substituting ``value`` for the other variable."""
    other = 1 - var
    coeffs = {}
    for e, c in f.items():
        coeffs[e[var]] = coeffs.get(e[var], 0) + c * Fraction(value) ** e[other]
    top = max(coeffs)
    return [coeffs.get(i, 0) for i in range(top + 1)]


def _coprime_by_resultant(a, b):
    """Resultants in both variables at a generic point are nonzero => coprime."""
    for var in (0, 1):
        ua, ub = _univariate(a, var, 7), _univariate(b, var, 7)
        if len(ua) == 1 or len(ub) == 1:
            continue
        if ua[-1] == 0 or ub[-1] == 0 or _resultant(ua, ub) == 0:
            return False
    return True


small_poly = st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 2)),
                             st.integers(-3, 3).filter(bool), min_size=2, max_size=4)


@settings(max_examples=40)
@given(small_poly, small_poly, small_poly)
def test_gcd_matches_brute_force_oracle(a, b, c):
    table = VariableTable(["y0", "y1"])
    A, B, C = (LaurentPoly.from_terms(table, t) for t in (a, b, c))
    if any(x.is_constant() for x in (A, B, C)) or not _coprime_by_resultant(A, B):
        return
    h = gcd_exact(A * C, B * C)
    assert divides(C, h) and divides(h, A * C) and divides(h, B * C)
    assert associate_equal(h, C.normalized()) or associate_equal(h, C)


def test_certify_coprime_is_sound(simple_vars):
    _, y0, y1 = simple_vars
    assert certify_coprime(y1 - I, y1 + I).proved
    c = y0 + y1 + 1
    assert not certify_coprime(c * (y0 - 2), c * (y1 + 5)).proved


def test_specialized_examples():
    st_ = toda1d_iterate(SystemSpec.toda1d(2, 1, 1, 1), LatticeWindow(-3, 3, 2))
    t = st_.table
    a = LaurentPoly.variable(t, "tau[0][0]")
    b = LaurentPoly.variable(t, "tau[0][1]")
    assert coprime_specialized(a, b, ["tau[0][0]", "tau[0][1]"]).verdict == VERDICT_COPRIME
    f = st_[(2, 0)].p
    keep = ["tau[1][0]", "tau[1][1]"]
    assert coprime_specialized(f, f, keep).verdict == VERDICT_NOT_COPRIME
    v = coprime_specialized(st_[(2, 0)].p, st_[(2, 1)].p, keep, trials=4, seed=0)
    assert v.verdict == VERDICT_COPRIME and len(v.trial_results) == 4


def test_specialize_substitutes_exactly(simple_vars):
    _, y0, y1 = simple_vars
    f = y0 ** 2 * y1 + 3 * y0 + 1
    assert specialize(f, {0: 2}) == 4 * y1 + 7
    rng = random.Random(1)
    for _ in range(5):
        v = rng.randint(-9, 9)
        assert specialize(f, {0: v}) == v * v * y1 + 3 * v + 1
