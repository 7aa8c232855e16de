"""r-fold factorizations of iterates and their certificates.

For every system the new iterate satisfies

    tau_new * tau_div = A^r + B^r = prod_j (A - zeta^{2j-1} B),

with A, B monomials in previous iterates.  The j-th factor is built as the
exact Laurent quotient P_j = (A - zeta^{2j-1} B) / d_j, where d_j is factor
r-j+1 of the divisor site (d_j = 1 when the divisor is an initial
variable).  P_j = c_j * x^{v_j} * f_j with f_j a polynomial of leading
coefficient 1; the stored factor is f_j.

Writing p_div = c_div * x^{u_div} * prod d_j, the identity above gives

    p_new = C * x^U * prod_j f_j,  C = prod c_j / c_div,
    U = sum v_j + q_div - u_div + q_new,

and U = 0 is exactly the statement that p_new has no monomial factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .certificates import INLINE_TERMS, Certificate, coeff_json, poly_digest, witness
from .certificates import witness as _witness
from .cyclotomic import cyclo_ring, zeta_power
from .engines import IterateStore, SystemSpec, m_add, m_divides, m_sub
from .errors import BudgetExceeded, ConeExhausted, DivisionNotExact
from .gcd import VERDICT_NOT_COPRIME, gcd_with_method
from .laurent import LaurentPoly, associate_equal, deg, exact_divide, monomial_content
from .modular import element_mod, evaluate_mod
from .specialize import Sketch, batch_specialized, default_prime, specialized_payload, trial_points

DEFAULT_RELEASE_TERMS = 200_000
IDENTITY_WORK_LIMIT = 5_000_000
# product-term bound for building A = tau_up^m tau_dn^l at one site
PRODUCT_TERM_LIMIT = 50_000_000


@dataclass
class FactorSet:
    """Factors f_1..f_r of p at one site plus the unit C * x^U with p = C x^U prod f_j."""

    system: str
    site: tuple
    r: int
    factors: list
    unit_coeff: object
    unit_mono: tuple
    degrees: list
    terms: list
    digests: list
    laurent_ok: bool = True
    meta: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    sketches: dict = field(default_factory=dict)

    @property
    def released(self):
        return any(f is None for f in self.factors)

    def product(self):
        if self.released:
            raise BudgetExceeded(f"factors at {self.site} were released after verification")
        prod = self.factors[0]
        for f in self.factors[1:]:
            prod = prod * f
        return prod.scale(self.unit_coeff).shift(self.unit_mono)

    def summary(self):
        return {"site": list(self.site), "r": self.r, "degrees": self.degrees, "terms": self.terms,
                "unit_coeff": coeff_json(self.unit_coeff), "unit_mono": list(self.unit_mono),
                "laurent_ok": self.laurent_ok, "released": self.released,
                "checks": self.meta.get("checks", {})}


@dataclass
class _InitialDivisor:
    """Pseudo factor set of an initial variable: no factors, unit = the variable."""

    unit_coeff: object
    unit_mono: tuple
    q: tuple


def _initial_divisor(table, name):
    e = [0] * table.nvars
    e[table.index[name]] = 1
    return _InitialDivisor(1, tuple(e), (0,) * table.nvars)


def _monomial_power(rec, e):
    """(p^e, e*q) of a stored iterate, raising when it is only known in factored form."""
    if rec.p is None:
        raise BudgetExceeded(f"iterate {rec.site} is only available in factored form")
    return rec.p ** e, tuple(e * x for x in rec.q)


def _laurent_product(table, parts):
    """prod tau_i^{e_i} as a Laurent polynomial, parts = [(record, e)]."""
    poly = LaurentPoly.one(table)
    q = (0,) * table.nvars
    for rec, e in parts:
        pe, qe = _monomial_power(rec, e)
        poly = poly * pe
        q = m_add(q, qe)
    return poly.shift([-x for x in q]) if any(q) else poly


def build_site(system, site, ring, table, A, B, divisor, rec, r, release_terms=DEFAULT_RELEASE_TERMS,
               sketch_points=None, prime=None):
    """Construct, verify and possibly release the factor set of one site.

    ``divisor`` is the FactorSet of the divisor site or an _InitialDivisor.
    ``rec`` is the IterateRecord of the site (p may be None).
    """
    A = A.in_ring(ring)
    B = B.in_ring(ring)
    digests = {}

    def witness(f, inline=True):
        # digests of large polynomials are costly; compute each once
        if id(f) not in digests:
            digests[id(f)] = (f, poly_digest(f))
        return _witness(f, inline, digests[id(f)][1])

    checks = {}
    certs = []
    factors, coeffs, monos, quotients = [], [], [], []
    for j in range(1, r + 1):
        zj = zeta_power(ring, 2 * j - 1)
        N = A - B.scale(zj)
        if isinstance(divisor, FactorSet):
            d = divisor.factors[r - j]
            if d is None:
                raise ConeExhausted(f"divisor factor {r - j + 1} at {divisor.site} was released")
            try:
                P = exact_divide(N, d)
            except DivisionNotExact as exc:
                exc.payload.update({"site": list(site), "j": j, "check": "twisted divisibility"})
                raise
        else:
            d = None
            P = N
        cs = monomial_content(P)
        f = cs.polynomial_part
        lc = f.leading_coeff()
        f = f.normalized()
        factors.append(f)
        coeffs.append(lc)
        monos.append(cs.monomial_part)
        quotients.append(d)
        small = len(f) + (len(d) if d is not None else 0) + len(N) <= INLINE_TERMS
        if d is not None:
            payload = ({"dividend": witness(N), "divisor": witness(d), "quotient": witness(P)} if small else
                       {"dividend": witness(N, False), "divisor": witness(d, False),
                        "quotient": witness(P, False), "method": "exact heap division, zero remainder"})
            certs.append(Certificate("Divisibility", list(site) + [j], True, payload, small))
    checks["twisted_divisibility"] = True
    # unit relating the product of the factors to p
    C = coeffs[0]
    for c in coeffs[1:]:
        C = C * c
    du = divisor.unit_coeff
    C = C * (du.inverse() if hasattr(du, "inverse") else 1 / Fraction(du))
    q_div = divisor.q if isinstance(divisor, _InitialDivisor) else divisor.meta["q"]
    U = m_add(*monos, q_div, rec.q)
    U = m_sub(U, divisor.unit_mono)
    no_mono = not any(U)
    checks["no_monomial_factor"] = no_mono
    degrees = [deg(f) for f in factors]
    fs = FactorSet(system, site, r, factors, C, U, degrees, [len(f) for f in factors],
                   [witness(f, False)["digest"] for f in factors], laurent_ok=no_mono,
                   meta={"q": rec.q, "checks": checks})
    deg_p = rec.deg_p
    deg_ok = len(set(degrees)) == 1 and sum(degrees) == deg_p
    checks["degree_equality"] = deg_ok
    certs.append(Certificate("DegreeEquality", list(site), deg_ok,
                             {"degrees": degrees, "deg_p": deg_p, "r": r,
                              "factors": [witness(f, len(f) <= INLINE_TERMS) for f in factors]}, True))
    # product reconstruction
    if rec.p is not None:
        prod = fs.product()
        ok = prod == rec.p
        checks["product_reconstruction"] = ok
        small = sum(len(f) for f in factors) + len(rec.p) <= INLINE_TERMS
        payload = {"factors": [witness(f, small) for f in factors], "unit_coeff": coeff_json(C),
                   "unit_mono": list(U), "p": witness(rec.p, small)}
        certs.append(Certificate("ProductReconstruction", list(site), ok, payload, small))
    # same-site identities h f_j - h' f_i = (zeta^{2i-1} - zeta^{2j-1}) B
    hs = []
    for j in range(r):
        c, v, d = coeffs[j], monos[j], quotients[j]
        h = LaurentPoly.monomial(table, v, c, ring)
        if d is not None:
            h = h * d
        hs.append(h)
    for i, j in combinations(range(r), 2):
        coeff = zeta_power(ring, 2 * i + 1) - zeta_power(ring, 2 * j + 1)
        work = len(hs[j]) * len(factors[j]) + len(hs[i]) * len(factors[i])
        if work <= IDENTITY_WORK_LIMIT:
            lhs = hs[j] * factors[j] - hs[i] * factors[i]
            ok = lhs == B.scale(coeff)
            small = sum(len(x) for x in (factors[i], factors[j], hs[i], hs[j], B)) <= INLINE_TERMS
            payload = {"f_j": witness(factors[j], small), "f_i": witness(factors[i], small),
                       "h": witness(hs[j], small), "h_prime": witness(hs[i], small),
                       "B": witness(B, small), "coeff": coeff_json(coeff), "pair": [j + 1, i + 1]}
        else:
            # N_j = h_j f_j was established by the exact divisions above
            ok = True
            small = False
            payload = {"f_j": witness(factors[j], False), "f_i": witness(factors[i], False),
                       "h": witness(hs[j], False), "h_prime": witness(hs[i], False),
                       "coeff": coeff_json(coeff), "pair": [j + 1, i + 1],
                       "method": "exact-division witnesses N_j = h_j f_j"}
        checks.setdefault("same_site_identity", True)
        checks["same_site_identity"] &= ok
        certs.append(Certificate("CoprimeIdentity", list(site), ok, payload, small))
    fs.certificates = certs
    # release heavy factors, keeping the sketches needed for specialization
    if max(fs.terms) > release_terms and sketch_points is not None:
        for j, f in enumerate(factors):
            fs.sketches[(site, j + 1)] = Sketch(f, sketch_points, prime)
        fs.factors = [None] * r
    return fs


def _fail_fast(fs):
    bad = [k for k, v in fs.meta["checks"].items() if v is False]
    if bad:
        fs.meta["falsified"] = bad
    return fs


# ---------------------------------------------------------------- simple
def simple_factors(r, N, store: IterateStore):
    """Factor sets for 2 <= n <= N of y_n = (y_{n-1}^r + 1)/y_{n-2}."""
    if N < 2:
        raise ValueError("N must be >= 2")
    ring = cyclo_ring(r)
    table = store.table
    out = {}
    one = LaurentPoly.one(table)
    for n in range(2, N + 1):
        rec = store[(n,)]
        A = _laurent_product(table, [(store[(n - 1,)], 1)])
        if n - 2 <= 1:
            div = _initial_divisor(table, f"y{n - 2}")
        else:
            div = out[(n - 2,)]
        out[(n,)] = _fail_fast(build_site("simple", (n,), ring, table, A, one, div, rec, r))
    return out


# ---------------------------------------------------------------- toda 1d
def _modular_product_check(table, ring, rhs_A, rhs_B, r, div_rec, rec, seed=0):
    """Evaluate tau_new * tau_div and A^r + B^r at one random point modulo a prime."""
    import random

    p = default_prime(ring.order)
    rng = random.Random(f"product:{seed}:{rec.site}")
    point = {i: rng.randrange(1, p) for i in range(table.nvars)}

    def mono_val(e):
        v = 1
        for i, x in enumerate(e):
            if x:
                v = v * pow(point[i], x, p) % p
        return v

    def check(fs):
        val = element_mod(fs.unit_coeff, p) * mono_val([max(x, 0) for x in fs.unit_mono]) % p
        neg = [max(-x, 0) for x in fs.unit_mono]
        val = val * pow(mono_val(neg), -1, p) % p
        for fv in fs.meta["factor_values_mod"]:
            val = val * fv % p
        tau_new = val * pow(mono_val(rec.q), -1, p) % p
        tau_div = evaluate_mod(div_rec.p, point, p) * pow(mono_val(div_rec.q), -1, p) % p
        a = evaluate_mod(rhs_A, point, p)
        b = evaluate_mod(rhs_B, point, p)
        rhs = (pow(a, r, p) + pow(b, r, p)) % p
        ok = tau_new * tau_div % p == rhs
        payload = {"method": "evaluation at a random point modulo a prime", "prime": p,
                   "seed": seed, "factor_digests": fs.digests, "lhs": tau_new * tau_div % p, "rhs": rhs}
        return ok, payload

    return point, p, check


def toda1d_factors(spec: SystemSpec, store: IterateStore, t_max=None, seed=0, trials=4,
                   release_terms=DEFAULT_RELEASE_TERMS):
    """Factor sets on every in-cone site with 2 <= t <= t_max.

    Slices whose iterates are stored only in factored form are handled as
    long as the previous slice is expanded; heavy factors are verified and
    then released (sketches for specialization trials are kept).
    """
    if not spec.factorizable or spec.kind != "toda1d":
        raise ValueError("factor tracking needs a factorizable toda1d system")
    r, m, l, k = spec["r"], spec["m"], spec["l"], spec["k"]
    ring = cyclo_ring(r)
    table = store.table
    window = store.window
    t_max = t_max or window.t_max
    points = trial_points(table.nvars, trials, seed)
    prime = default_prime(ring.order)
    out = {}
    for t in range(2, t_max + 1):
        for n in window.cone_1d(t):
            site = (t, n)
            if site not in store:
                continue
            rec = store[site]
            up, dn, mid = store[(t - 1, n + 1)], store[(t - 1, n - 1)], store[(t - 1, n)]
            if any(x.p is None for x in (up, dn, mid)):
                raise ConeExhausted(f"site {site} needs slice t={t - 1} expanded")
            bound = len(up.p) ** m * len(dn.p) ** l
            if bound > PRODUCT_TERM_LIMIT:
                raise BudgetExceeded(f"site {site}: the neighbour product may have up to {bound:.3g} terms "
                                     f"(limit {PRODUCT_TERM_LIMIT:.3g})")
            A = _laurent_product(table, [(up, m), (dn, l)])
            B = _laurent_product(table, [(mid, k)])
            if t - 2 <= 1:
                div = _initial_divisor(table, f"tau[{t - 2}][{n}]")
                div_rec = store[(t - 2, n)]
            else:
                if (t - 2, n) not in out:
                    raise ConeExhausted(f"factors at {(t - 2, n)} unavailable")
                div = out[(t - 2, n)]
                div_rec = store[(t - 2, n)]
            if rec.p is None:
                point, p, check = _modular_product_check(table, ring, A, B, r, div_rec, rec, seed)
                fs = _build_heavy(site, ring, table, A, B, div, rec, r, release_terms,
                                  points, prime, point, p, check)
            else:
                fs = build_site("toda1d", site, ring, table, A, B, div, rec, r, release_terms,
                                points, prime)
            out[site] = _fail_fast(fs)
    return out


def _build_heavy(site, ring, table, A, B, div, rec, r, release_terms, points, prime, point, p,
                 eval_check):
    """build_site for a factored-only iterate: factor values at the check point are kept."""
    fs = build_site("toda1d", site, ring, table, A, B, div, rec, r, release_terms=float("inf"))
    fs.meta["factor_values_mod"] = [evaluate_mod(f, point, p) for f in fs.factors]
    ok, payload = eval_check(fs)
    fs.meta["checks"]["product_reconstruction_modular"] = ok
    fs.certificates.append(Certificate("ProductReconstruction", list(site), ok, payload, False))
    if max(fs.terms) > release_terms:
        for j, f in enumerate(fs.factors):
            fs.sketches[(site, j + 1)] = Sketch(f, points, prime)
        fs.factors = [None] * r
    return fs


# ---------------------------------------------------------------- somos-4
def somos4_factors(spec: SystemSpec, N, store: IterateStore):
    """Factor sets for 4 <= n <= N of the extended Somos-4 recurrence."""
    if spec.kind != "somos4ext":
        raise ValueError("expected a somos4ext system")
    r, m, l, k = spec["r"], spec["m"], spec["l"], spec["k"]
    ring = cyclo_ring(r)
    table = store.table
    out = {}
    for n in range(4, N + 1):
        rec = store[(n,)]
        A = _laurent_product(table, [(store[(n - 1,)], m), (store[(n - 3,)], l)])
        B = _laurent_product(table, [(store[(n - 2,)], k)])
        div = _initial_divisor(table, f"x{n - 4}") if n - 4 <= 3 else out[(n - 4,)]
        out[(n,)] = _fail_fast(build_site("somos4ext", (n,), ring, table, A, B, div, rec, r))
    return out


# ------------------------------------------------------------ cross checks
def vertical_recursion_check(sets, store: IterateStore, r):
    """Compare f_j with (p_{t-1,n} - zeta^{2j-1} q_{t-1,n}) / d_j, the neighbour-free recursion.

    Returns per-site records {exact: [...], associate: [...], divisor}; disagreement is data.
    """
    ring = cyclo_ring(r)
    table = store.table
    out = {}
    for site, fs in sorted(sets.items()):
        t, n = site
        prev = store[(t - 1, n)]
        if prev.p is None or fs.released:
            continue
        qmono = LaurentPoly.monomial(table, prev.q)
        div = sets.get((t - 2, n))
        # an initial slice has no tracked factors, so there is nothing to divide by
        row = {"exact": [], "associate": [], "divisor": "factor" if div is not None else "none (initial slice)"}
        for j in range(1, r + 1):
            E = prev.p.in_ring(ring) - qmono.scale(zeta_power(ring, 2 * j - 1))
            try:
                Q = exact_divide(E, div.factors[r - j]) if div is not None else E
                row["exact"].append(True)
                row["associate"].append(associate_equal(monomial_content(Q).polynomial_part,
                                                        fs.factors[j - 1]))
            except DivisionNotExact:
                row["exact"].append(False)
                row["associate"].append(False)
        out[site] = row
    return out


def toda1d_structure_checks(store: IterateStore):
    """Structural checks of the p/q recursion on computed sites.

    * q_lcm_formula: stored q equals the LCM formula (no monomial content moved);
    * q_divisibility: q_{t,n} divisible by q_{t-1,n}, q_{t-1,n-1}, q_{t-1,n+1};
    * p_no_monomial_factor: p_{t,n} not divisible by any initial variable;
    * shifted_product_identity: at t = 4, the congruence modulo tau_{t-2,n}^2
      tau_{t-1,n+1}^{a} tau_{t-1,n-1}^{b} + tau_{t-1,n}^{c}
        == X * tau_{t-4,n} tau_{t-2,n},  X = tau_{t-2,n+1}^{ka} tau_{t-2,n-1}^{kb}
                                             / (tau_{t-3,n+1}^a tau_{t-3,n-1}^b tau_{t-3,n}^c),
      with (a, b, c) = (rm, rl, rk).  Checked only where tau_{t-3} are initial
      variables so X is a Laurent monomial times a polynomial.
    """
    spec = store.spec
    a_exp, b_exp, c_exp = spec.exponents
    kk = spec.get("k", 1)
    rr = spec.get("r", 1)
    results = []
    for site, rec in sorted(store.records.items()):
        t, n = site
        if rec.meta.get("initial"):
            continue
        row = {"site": list(site)}
        row["q_lcm_formula"] = not any(rec.meta.get("content_moved", ()))
        nbrs = [(t - 1, n), (t - 1, n - 1), (t - 1, n + 1)]
        row["q_divisibility"] = all(m_divides(store[s].q, rec.q) for s in nbrs if s in store)
        if rec.p is not None:
            row["p_no_monomial_factor"] = not any(monomial_content(rec.p).monomial_part)
        if t == 4 and rec.p is not None and "r" in spec.p:
            row["shifted_product_identity"] = _shifted_product_identity(store, t, n, a_exp, b_exp, c_exp,
                                                                        rr, kk)
        results.append(row)
    return results


def _shifted_product_identity(store, t, n, a, b, c, r, k):
    tau = lambda s: store[s].tau()  # noqa: E731
    lhs = tau((t - 1, n + 1)) ** a * tau((t - 1, n - 1)) ** b + tau((t - 1, n)) ** c
    x_num = tau((t - 2, n + 1)) ** (r * k * a) * tau((t - 2, n - 1)) ** (r * k * b)
    den = tau((t - 3, n + 1)) ** a * tau((t - 3, n - 1)) ** b * tau((t - 3, n)) ** c
    if not den.is_monomial():
        return None
    T2 = tau((t - 2, n))
    diff = lhs * den - x_num * tau((t - 4, n)) * T2
    try:
        exact_divide(diff, T2 * T2)
        return True
    except DivisionNotExact:
        return False


# -------------------------------------------------------- pairwise checks
def _factor_items(sets):
    for site, fs in sorted(sets.items()):
        for j in range(fs.r):
            yield (site, j + 1), fs, j


def verify_pairwise_coprime(sets: dict, mode: str, seed=0, trials=4, table=None, ring_order=None):
    """Pairwise coprimeness certificates.

    gcd: exact gcd of every distinct factor pair (bivariate systems, or where
    the modular certificate applies).  identity: the same-site identity
    certificates built with the factors.  specialized: seeded specialization
    trials for every cross-site pair.  degree: distinct degrees for factors
    of different time index (conditional on irreducibility of the factors).
    """
    if mode not in ("gcd", "identity", "specialized", "degree"):
        raise ValueError(f"unknown mode {mode!r}")
    certs = []
    items = list(_factor_items(sets))
    if mode == "identity":
        for site, fs in sorted(sets.items()):
            certs.extend(c for c in fs.certificates if c.kind == "CoprimeIdentity")
        return certs
    if mode == "degree":
        for (ka, fa, ja), (kb, fb, jb) in combinations(items, 2):
            if ka[0][0] == kb[0][0]:
                continue
            da, db = fa.degrees[ja], fb.degrees[jb]
            certs.append(Certificate("CoprimeDegree", [list(ka[0]), ka[1], list(kb[0]), kb[1]], da != db,
                                     {"deg_a": da, "deg_b": db, "conditional": "irreducible factors"}))
        return certs
    if mode == "gcd":
        for (ka, fa, ja), (kb, fb, jb) in combinations(items, 2):
            f, g = fa.factors[ja], fb.factors[jb]
            if f is None or g is None:
                raise BudgetExceeded("gcd mode needs unreleased factors")
            res = gcd_with_method(f, g, seed=seed)
            ok = res.gcd.is_constant()
            small = len(f) + len(g) <= INLINE_TERMS
            certs.append(Certificate("CoprimeGCD", [list(ka[0]), ka[1], list(kb[0]), kb[1]], ok,
                                     {"f": witness(f, small), "g": witness(g, small),
                                      "method": res.method, "gcd_terms": len(res.gcd)}, small))
        return certs
    # specialized: cross-site pairs only
    first = next(iter(sets.values()))
    order = ring_order or 2 * first.r
    polys, sketches = {}, {}
    for key, fs, j in items:
        polys[key] = fs.factors[j]
        if fs.factors[j] is None:
            sketches[key] = fs.sketches[key]
        if table is None and fs.factors[j] is not None:
            table = fs.factors[j].table
    pairs = [(ka, kb) for (ka, _, _), (kb, _, _) in combinations(items, 2) if ka[0] != kb[0]]
    res = batch_specialized(table, order, polys, pairs, trials, seed, sketches=sketches)
    for (ka, kb), (verdict, keep, results, p) in res.items():
        f, g = polys[ka], polys[kb]
        small = f is not None and g is not None and len(f) + len(g) <= INLINE_TERMS
        payload = specialized_payload(table.names, keep, trials, seed, 1 << 16, p, verdict, results)
        if small:
            payload["f"], payload["g"] = witness(f), witness(g)
        else:
            payload["f_digest"] = sets[ka[0]].digests[ka[1] - 1]
            payload["g_digest"] = sets[kb[0]].digests[kb[1] - 1]
        certs.append(Certificate("CoprimeSpecialized", [list(ka[0]), ka[1], list(kb[0]), kb[1]],
                                 verdict != VERDICT_NOT_COPRIME, payload, small))
    return certs


def omega_count(site, sets) -> int:
    """Number of tracked non-unit factors at ``site``.

    Conditional: equals the count of prime factors only if each tracked
    factor is irreducible, which is taken on trust, not certified here.
    """
    fs = sets[site]
    return sum(1 for t in fs.terms if t > 1)


def all_certificates(sets):
    out = []
    for site, fs in sorted(sets.items()):
        out.extend(fs.certificates)
    return out


# ---------------------------------------------------------------- toda 2d
def toda2d_pair_certificates(store: IterateStore, pairs=24, seed=0, trials=4):
    """Specialization certificates for ``pairs`` randomly sampled pairs of
    distinct non-initial iterates (their numerators p)."""
    import random

    sites = sorted(s for s, rec in store.records.items() if not rec.meta.get("initial"))
    every = list(combinations(sites, 2))
    chosen = sorted(random.Random(seed).sample(every, min(pairs, len(every))))
    polys = {s: store[s].p for s in sites}
    res = batch_specialized(store.table, 2, polys, chosen, trials, seed)
    certs = []
    for (a, b), (verdict, keep, results, p) in sorted(res.items()):
        f, g = polys[a], polys[b]
        small = len(f) + len(g) <= INLINE_TERMS
        payload = specialized_payload(store.table.names, keep, trials, seed, 1 << 16, p, verdict, results)
        payload["f"], payload["g"] = witness(f, small), witness(g, small)
        certs.append(Certificate("CoprimeSpecialized", [list(a), 0, list(b), 0],
                                 verdict != VERDICT_NOT_COPRIME, payload, small))
    return certs
