import pytest

from coprimelab.engines import LatticeWindow, SystemSpec, laurent_check, simple_iterate, toda1d_iterate
from coprimelab.generic import RatFunc, generic_iterate
from coprimelab.laurent import LaurentPoly, VariableTable, associate_equal


@pytest.mark.parametrize("r", [2, 3])
def test_oracle_matches_simple(r):
    g = generic_iterate(f"y[n] = (y[n-1]^{r} + 1)/y[n-2]", N=6)
    s = simple_iterate(r, 6)
    for n in range(7):
        assert associate_equal(g[(n,)].p, s[(n,)].p)
        assert g[(n,)].q == s[(n,)].q


def test_first_term_r3():
    g = generic_iterate("y[n]=(y[n-1]^3+1)/y[n-2]", N=2)
    y1 = LaurentPoly.variable(g.table, "y1")
    assert g[(2,)].p == y1 ** 3 + 1 and g[(2,)].q == (1, 0)


def test_identity_stream():
    g = generic_iterate("y[n]=y[n-1]", N=5)
    y0 = LaurentPoly.variable(g.table, "y0")
    assert all(g[(n,)].p == y0 and not any(g[(n,)].q) for n in range(6))


def test_non_laurent_recurrence_is_reported():
    g = generic_iterate("y[n]=(y[n-1]^2+y[n-2])/y[n-3]", N=6)
    rep = laurent_check(g)
    assert rep.failed  # recorded, no claim either way
    assert g[(6,)].meta.get("nonmonomial_denominator")


def test_lattice_oracle_matches_toda():
    spec = SystemSpec.toda1d(2, 1, 1, 1)
    w = LatticeWindow(-4, 4, 4)
    closed = toda1d_iterate(spec, w)
    g = generic_iterate("tau[t+1][n] = (tau[t][n+1]^2*tau[t][n-1]^2 + tau[t][n]^2)/tau[t-1][n]", window=w)
    assert g.table == closed.table
    for site in closed.slice_sites(4) + closed.slice_sites(3):
        assert associate_equal(g[site].p, closed[site].p)
        assert g[site].q == closed[site].q


def test_ratfunc_arithmetic():
    t = VariableTable(["a", "b"])
    a, b = (RatFunc.of(LaurentPoly.variable(t, x)) for x in "ab")
    one = RatFunc.of(LaurentPoly.one(t))
    x = (a * a - b * b) / (a - b)
    red, method = x.reduced()
    assert red.num == a.num + b.num and red.den == 1
    y = (one / a) + (one / b)
    assert y.num == a.num + b.num and y.den == a.num * b.num
    with pytest.raises(ZeroDivisionError):
        a / (a - a)
