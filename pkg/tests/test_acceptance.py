"""Acceptance suite.  Each test records its outcome with the ``acceptance``
fixture; one PASS/FAIL line per criterion is printed at the end of the run.

The heavy lattice checks are marked ``slow`` but run by default.
"""
import gc
import math
import os
import random
import time
from fractions import Fraction

import pytest

from coprimelab.analysis import degree_series_exact, degree_series_predicted, entropy_estimate
from coprimelab.cli import main
from coprimelab.cyclotomic import cyclo_ring, cyclotomic_polynomial, field_inverse
from coprimelab.engines import (LatticeWindow, SystemSpec, laurent_check, simple_iterate, somos4_iterate,
                                somos4_numeric, toda1d_iterate, toda2d_iterate)
from coprimelab.errors import BudgetExceeded, DivisionNotExact
from coprimelab.factors import (simple_factors, somos4_factors, toda1d_factors, toda1d_structure_checks,
                                toda2d_pair_certificates, verify_pairwise_coprime)
from coprimelab.generic import generic_iterate
from coprimelab.gcd import VERDICT_NOT_COPRIME
from coprimelab.laurent import LaurentPoly, VariableTable, associate_equal, deserialize, serialize


def record(acceptance, num, label, ok, detail):
    acceptance.setdefault(num, []).append((label, bool(ok), detail))
    print(f"criterion {num} [{label}]: {'PASS' if ok else 'FAIL'} ({detail})")


# ------------------------------------------------------------------ 1
@pytest.mark.parametrize("r", range(2, 11))
def test_first_terms(r, acceptance):
    t0 = time.perf_counter()
    st = simple_iterate(r, 3)
    y0, y1 = (LaurentPoly.variable(st.table, v) for v in ("y0", "y1"))
    ok = (st[(2,)].p == y1 ** r + 1 and st[(2,)].q == (1, 0)
          and st[(3,)].p == (y1 ** r + 1) ** r + y0 ** r and st[(3,)].q == (r, 1))
    dt = time.perf_counter() - t0
    record(acceptance, 1, f"r={r}", ok and dt < 1, f"p2,q2,p3,q3 exact, {dt:.3f}s")
    assert ok and dt < 1


# ------------------------------------------------------------------ 2, 4
def factor_suite(sets, store):
    """(a) exact divisions, (b) product reconstruction, (c) equal degrees, (d) pairwise gcd 1."""
    checks = [fs.meta["checks"] for fs in sets.values()]
    a = all(c.get("twisted_divisibility") for c in checks)
    b = all(fs.product() == store[site].p for site, fs in sets.items())
    c = all(fs.degrees == [store[site].deg_p // fs.r] * fs.r and store[site].deg_p % fs.r == 0
            for site, fs in sets.items())
    certs = verify_pairwise_coprime(sets, "gcd")
    d = all(x.ok for x in certs)
    return a, b, c, d, len(certs)


@pytest.mark.parametrize("r", [2, 3])
def test_simple_factorization_suite(r, acceptance):
    t0 = time.perf_counter()
    try:
        st = simple_iterate(r, 7)
        sets = simple_factors(r, 7, st)
    except DivisionNotExact as exc:
        record(acceptance, 2, f"r={r}", False, f"division not exact: {exc}")
        raise
    a, b, c, d, pairs = factor_suite(sets, st)
    ok = a and b and c and d
    record(acceptance, 2, f"r={r}", ok,
           f"divisions {a}, product {b}, degrees {c}, gcd=1 on {pairs} pairs {d}, "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok


def test_somos_factorization_suite(acceptance):
    t0 = time.perf_counter()
    spec = SystemSpec.somos4(2, 1, 1, 1)
    st = somos4_iterate(spec, 9)
    sets = somos4_factors(spec, 9, st)
    a, b, c, d, pairs = factor_suite(sets, st)
    ok = a and b and c and d
    record(acceptance, 4, "(2,1,1,1) n<=9", ok,
           f"divisions {a}, product {b}, degrees {c}, gcd=1 on {pairs} pairs {d}, "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok


def test_classical_somos_integers(acceptance):
    # direct rational evaluation as the oracle
    z = [Fraction(1)] * 4
    for n in range(4, 12):
        z.append((z[n - 1] * z[n - 3] + z[n - 2] ** 2) / z[n - 4])
    seq = somos4_numeric(12)
    want = [2, 3, 7, 23, 59, 314, 1529, 8209]
    ok = (seq == z and all(x.denominator == 1 for x in seq) and [int(x) for x in seq[4:]] == want)
    record(acceptance, 4, "classical z4..z11", ok, ",".join(str(x) for x in seq[4:]))
    assert ok


# ------------------------------------------------------------------ 3
def toda_checks(spec, t_max):
    """Every lattice check on window [-5,5] up to t_max; returns (ok, detail)."""
    store = toda1d_iterate(spec, LatticeWindow(-5, 5, t_max))
    try:
        sets = toda1d_factors(spec, store, seed=0, trials=4)
    except DivisionNotExact as exc:
        return False, f"twisted divisibility failed: {exc}"
    lc = laurent_check(store, sets)
    laurent_ok = not lc.failed and not lc.pending
    divis = all(fs.meta["checks"].get("twisted_divisibility") for fs in sets.values())
    product = all(fs.meta["checks"].get("product_reconstruction",
                                        fs.meta["checks"].get("product_reconstruction_modular"))
                  for fs in sets.values())
    rows = toda1d_structure_checks(store)
    shifted = [row["shifted_product_identity"] for row in rows if row.get("shifted_product_identity") is not None]
    shifted_ok = bool(shifted) and all(shifted)
    q_div_ok = all(row["q_divisibility"] for row in rows)
    no_mono_ok = (all(row.get("p_no_monomial_factor", True) for row in rows)
                  and all(fs.meta["checks"].get("no_monomial_factor") for fs in sets.values()))
    ident = verify_pairwise_coprime(sets, "identity")
    ident_ok = bool(ident) and all(c.ok for c in ident)
    spec_certs = verify_pairwise_coprime(sets, "specialized", seed=0, trials=4)
    not_coprime = sum(c.payload["verdict"] == VERDICT_NOT_COPRIME for c in spec_certs)
    ok = (laurent_ok and divis and product and shifted_ok and q_div_ok and no_mono_ok and ident_ok
          and not not_coprime)
    detail = (f"laurent {len(lc.passed)} sites ok={laurent_ok}, divisibility {divis}, product {product}, "
              f"shifted identity {len(shifted)} sites {shifted_ok}, q divisibility {q_div_ok}, "
              f"no monomial factor {no_mono_ok}, identity certs {len(ident)} {ident_ok}, "
              f"specialized {len(spec_certs)} pairs with {not_coprime} NOT coprime")
    return ok, detail


@pytest.mark.slow
@pytest.mark.parametrize("params", [(2, 1, 1, 1), (2, 1, 1, 2), (3, 1, 1, 1)], ids=str)
def test_toda_lattice_suite(params, acceptance):
    t0 = time.perf_counter()
    spec = SystemSpec.toda1d(*params)
    label = f"{params} t<=5"
    try:
        ok, detail = toda_checks(spec, 5)
    except BudgetExceeded as exc:
        gc.collect()
        ok4, detail4 = toda_checks(spec, 4)
        record(acceptance, 3, label, False,
               f"t=5 not computable here: {exc}; t<=4: {'all checks pass' if ok4 else 'FAIL'} [{detail4}]")
        assert ok4, detail4
        pytest.xfail(f"t=5 exceeds the desk budget for {params}: {exc}")
    finally:
        gc.collect()
    record(acceptance, 3, label, ok, f"{detail}, {time.perf_counter() - t0:.0f}s")
    assert ok, detail


# ------------------------------------------------------------------ 5
@pytest.mark.slow
@pytest.mark.parametrize("params", [(1, 1, 1, 1), (3, 3, 3, 3)], ids=str)
def test_toda2d_suite(params, acceptance):
    t0 = time.perf_counter()
    store = toda2d_iterate(SystemSpec.toda2d(*params), LatticeWindow(0, 6, 3, 0, 6))
    lc = laurent_check(store)
    monomial = not lc.failed and not lc.pending
    certs = toda2d_pair_certificates(store, pairs=24, seed=0, trials=4)
    pairs_ok = len(certs) >= 20 and all(c.ok for c in certs)
    ok = monomial and pairs_ok
    record(acceptance, 5, str(params), ok,
           f"{len(lc.passed)} sites with monomial denominators, {len(certs)} sampled pairs coprime={pairs_ok}, "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok


# ------------------------------------------------------------------ 6
@pytest.mark.parametrize("r", [2, 3])
def test_exact_degrees_match_prediction(r, acceptance):
    exact = degree_series_exact(simple_iterate(r, 7))
    predicted = degree_series_predicted(SystemSpec.simple(r), 7)
    ok = exact.entries == predicted.entries
    record(acceptance, 6, f"exact==predicted r={r}", ok, f"n=2..7 d={exact.d_values()}")
    assert ok


@pytest.mark.parametrize("r,target,rel", [(2, 1.0, None), (3, (3 + math.sqrt(5)) / 2, 0.01),
                                          (4, 2 + math.sqrt(3), 0.01)])
def test_entropy_classification(r, target, rel, acceptance):
    series = degree_series_predicted(SystemSpec.simple(r), 40).window(20, 40)
    est = entropy_estimate(series)
    if rel is None:
        ok = abs(est.growth_ratio - target) <= 0.02 and est.entropy == 0.0
    else:
        ok = abs(est.growth_ratio - target) <= rel * target and est.entropy > 0
    record(acceptance, 6, f"entropy r={r}", ok, f"ratio {est.growth_ratio:.5f} vs {target:.5f}, {est.classification}")
    assert ok


# ------------------------------------------------------------------ 7
@pytest.mark.parametrize("r", [2, 3])
def test_oracle_equivalence(r, acceptance):
    g = generic_iterate(f"y[n] = (y[n-1]^{r} + 1)/y[n-2]", N=6)
    s = simple_iterate(r, 6)
    ok = all(associate_equal(g[(n,)].p, s[(n,)].p) and g[(n,)].q == s[(n,)].q for n in range(7))
    record(acceptance, 7, f"r={r}", ok, "n<=6 associate-equal p, identical q")
    assert ok


# ------------------------------------------------------------------ 8
TRIALS = 10_000


def _rand_elem(ring, rng):
    return ring.element([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(ring.degree)])


def test_field_axioms(acceptance):
    rng = random.Random(0)
    bad = 0
    for _ in range(TRIALS):
        ring = cyclo_ring(rng.randint(2, 8))
        a, b, c = (_rand_elem(ring, rng) for _ in range(3))
        good = (a + b == b + a and a * b == b * a and (a + b) + c == a + (b + c)
                and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
                and a + ring.zero() == a and a * ring.one() == a and a - a == ring.zero())
        if not a.is_zero():
            good = good and a * field_inverse(a) == ring.one()
        bad += not good
    record(acceptance, 8, "field axioms", bad == 0, f"{TRIALS} random trials, {bad} failures")
    assert bad == 0


def test_cyclotomic_divisor_product(acceptance):
    rng = random.Random(1)
    bad = 0
    for _ in range(TRIALS):
        n = rng.randint(1, 24)
        x = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        prod = Fraction(1)
        for d in range(1, n + 1):
            if n % d == 0:
                prod *= sum(c * x ** i for i, c in enumerate(cyclotomic_polynomial(d)))
        bad += prod != x ** n - 1
    record(acceptance, 8, "divisor product", bad == 0, f"{TRIALS} random (n<=24, x) trials, {bad} failures")
    assert bad == 0


def test_serialize_round_trip(acceptance):
    rng = random.Random(2)
    table = VariableTable(["a", "b", "c"])
    bad = 0
    for _ in range(500):
        ring = cyclo_ring(rng.randint(2, 5))
        f = LaurentPoly.zero(table, ring)
        for _ in range(rng.randint(0, 6)):
            mono = LaurentPoly.monomial(table, tuple(rng.randint(-3, 3) for _ in range(3)))
            f = f + mono.in_ring(ring).scale(_rand_elem(ring, rng))
        bad += deserialize(serialize(f), table) != f
    st = toda1d_iterate(SystemSpec.toda1d(2, 1, 1, 1), LatticeWindow(-3, 3, 3))
    big = st[(3, 0)].p
    bad += deserialize(serialize(big)) != big
    record(acceptance, 8, "serialize round trip", bad == 0, f"501 polynomials, {bad} mismatches")
    assert bad == 0


def test_reports_byte_identical(tmp_path, capsys, acceptance):
    argvs = [["factor", "--system", "toda1d", "--r", "2", "--m", "1", "--l", "1", "--k", "1",
              "--window", "-3", "3", "--t-max", "3", "--seed", "0"],
             ["entropy", "--system", "simple", "--r", "3", "--n", "20"],
             ["factor", "--system", "simple", "--r", "3", "--n", "6", "--seed", "5"]]
    mismatched = []
    for i, argv in enumerate(argvs):
        outs = [str(tmp_path / f"{i}{tag}") for tag in "ab"]
        for out in outs:
            assert main(argv + ["--out", out]) == 0
        for name in sorted(os.listdir(outs[0])):
            path_a, path_b = (os.path.join(o, name) for o in outs)
            if os.path.isfile(path_a) and open(path_a, "rb").read() != open(path_b, "rb").read():
                mismatched.append(f"{argv[0]}:{name}")
    capsys.readouterr()
    ok = not mismatched
    record(acceptance, 8, "byte-identical reports", ok, f"{len(argvs)} configs rerun, mismatches {mismatched}")
    assert ok
