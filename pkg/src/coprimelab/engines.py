"""Closed-form p/q iteration of the four recurrence families.

Every iterate is kept as tau = p / q with p a polynomial and q a monic
monomial (an exponent vector).  One shared step implements the LCM
bookkeeping: for a right-hand side sum_i prod_j tau_ij^e_ij over a divisor
tau_d, the monomial denominators are brought to their LCM, the numerator
is assembled with the balancing monomials h_i, and it is divided exactly
by p_d.  A failed division raises DivisionNotExact and is never caught
here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded, ConfigError, OutOfCone
from .laurent import LaurentPoly, VariableTable, exact_divide, monomial_content

DEFAULT_DEGREE_BUDGET = 2000
DEFAULT_TERM_BUDGET = 100_000_000


# ----------------------------------------------------------------- specs
SYSTEM_KINDS = ("simple", "toda1d", "somos4ext", "toda2d", "dsl")


@dataclass(frozen=True)
class SystemSpec:
    """Recurrence family plus its integer parameters, validated on construction."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(sorted(dict(self.params).items())))
        validate_params(self.kind, self.p)

    @property
    def p(self):
        return dict(self.params)

    def __getitem__(self, key):
        return self.p[key]

    def get(self, key, default=None):
        return self.p.get(key, default)

    @property
    def factorizable(self):
        return self.kind in ("simple", "somos4ext") or (self.kind == "toda1d" and "r" in self.p)

    @property
    def exponents(self):
        """(a, b, c) exponents of the three neighbours in the numerator."""
        p = self.p
        if self.kind == "toda1d" and "r" not in p:
            return p["M"], p["L"], p["K"]
        if self.kind in ("toda1d", "somos4ext"):
            r = p["r"]
            return r * p["m"], r * p["l"], r * p["k"]
        raise ValueError(f"{self.kind} has no three-neighbour exponents")

    def label(self):
        return ",".join(f"{k}={v}" for k, v in self.params)

    @classmethod
    def simple(cls, r):
        return cls("simple", (("r", r),))

    @classmethod
    def toda1d(cls, r, m, l, k):
        return cls("toda1d", (("r", r), ("m", m), ("l", l), ("k", k)))

    @classmethod
    def toda1d_plain(cls, M, L, K):
        return cls("toda1d", (("M", M), ("L", L), ("K", K)))

    @classmethod
    def somos4(cls, r, m, l, k):
        return cls("somos4ext", (("r", r), ("m", m), ("l", l), ("k", k)))

    @classmethod
    def toda2d(cls, k1, k2, l1, l2):
        return cls("toda2d", (("k1", k1), ("k2", k2), ("l1", l1), ("l2", l2)))


def _need_int(params, key, lo, kind):
    if key not in params:
        raise ConfigError(f"{kind} requires parameter {key}", f"/{key}")
    v = params[key]
    if not isinstance(v, int) or isinstance(v, bool) or v < lo:
        raise ConfigError(f"{key} must be an integer >= {lo}, got {v!r}", f"/{key}")
    return v


def validate_params(kind, params):
    if kind not in SYSTEM_KINDS:
        raise ConfigError(f"unknown system {kind!r}", "/system")
    if kind == "simple":
        _need_int(params, "r", 2, kind)
    elif kind in ("toda1d", "somos4ext"):
        if kind == "toda1d" and "r" not in params and {"M", "L", "K"} <= set(params):
            for key in ("M", "L", "K"):
                _need_int(params, key, 1, kind)
            return
        _need_int(params, "r", 2, kind)
        m, l, k = (_need_int(params, key, 1, kind) for key in ("m", "l", "k"))
        if math.gcd(m, l, k) != 1:
            raise ConfigError(f"gcd(m,l,k) must be 1, got gcd({m},{l},{k})", "/m")
    elif kind == "toda2d":
        for key in ("k1", "k2", "l1", "l2"):
            _need_int(params, key, 1, kind)


@dataclass(frozen=True)
class LatticeWindow:
    """Finite initial-data window; for 2D the rectangle [n_min,n_max] x [m_min,m_max]."""

    n_min: int
    n_max: int
    t_max: int
    m_min: int | None = None
    m_max: int | None = None

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ConfigError("empty window", "/window")
        if self.t_max < 1:
            raise ConfigError("t_max must be >= 1", "/t_max")
        if (self.m_min is None) != (self.m_max is None):
            raise ConfigError("2D window needs both m bounds", "/window")
        if self.m_min is not None and self.m_min > self.m_max:
            raise ConfigError("empty window", "/window")

    def cone_1d(self, t):
        """In-cone n range of slice t for the 1D Toda stencil."""
        if t <= 1:
            return range(self.n_min, self.n_max + 1)
        return range(self.n_min + (t - 1), self.n_max - (t - 1) + 1)

    def cone_2d(self, t):
        """In-cone (n, m) sites of slice t for the 2D Toda stencil."""
        if t <= 1:
            return [(a, b) for a in range(self.n_min, self.n_max + 1)
                    for b in range(self.m_min, self.m_max + 1)]
        return [(a, b) for a in range(self.n_min, self.n_max - (t - 1) + 1)
                for b in range(self.m_min + (t - 1), self.m_max + 1)]


@dataclass
class Budget:
    degree: int = DEFAULT_DEGREE_BUDGET
    terms: int = DEFAULT_TERM_BUDGET

    def check_degree(self, predicted, where):
        if predicted > self.degree:
            raise BudgetExceeded(f"{where}: predicted degree {predicted} exceeds budget {self.degree}")


# ----------------------------------------------------------------- store
@dataclass
class IterateRecord:
    site: tuple
    p: LaurentPoly | None
    q: tuple
    deg_p: int
    deg_q: int
    meta: dict = field(default_factory=dict)

    @property
    def expanded(self):
        return self.p is not None

    def tau(self):
        if self.p is None:
            raise BudgetExceeded(f"iterate at {self.site} is only available in factored form")
        if not any(self.q):
            return self.p
        return self.p.shift([-x for x in self.q])


@dataclass
class IterateStore:
    spec: SystemSpec
    table: VariableTable
    window: object = None
    records: dict = field(default_factory=dict)
    events: list = field(default_factory=list)

    def __getitem__(self, site):
        try:
            return self.records[site]
        except KeyError:
            raise OutOfCone(f"site {site} was not computed (outside the light cone or window)")

    def __contains__(self, site):
        return site in self.records

    def sites(self):
        return list(self.records)

    def add(self, rec):
        self.records[rec.site] = rec

    def slice_sites(self, t):
        return [s for s in self.records if s[0] == t]


def site_key(site):
    return "_".join(f"{c}{v}" for c, v in zip("tnm" if len(site) > 1 else "n", site))


# ------------------------------------------------------- monomial helpers
def m_add(*vs):
    return tuple(map(sum, zip(*vs)))


def m_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def m_scale(a, c):
    return tuple(c * x for x in a)


def m_lcm(*vs):
    return tuple(map(max, zip(*vs)))


def m_divides(a, b):
    """True iff the monomial a divides b."""
    return all(x <= y for x, y in zip(a, b))


def estimate_power_terms(f: LaurentPoly, e):
    """Upper bound on the number of terms of f**e."""
    n = len(f)
    if n <= 1 or e <= 1:
        return n if e >= 1 else 1
    multiset = math.comb(n + e - 1, e)
    nv = len(f.occurring())
    lo, hi, tlo, thi = f.span()
    # monomials in nv variables with total degree in [e*tlo, e*thi]
    box = math.comb(e * thi + nv, nv)
    if e * tlo > 0:
        box -= math.comb(e * tlo - 1 + nv, nv)
    return min(multiset, box)


def _power_work(f, e):
    """Rough count of term products spent computing f**e by repeated squaring."""
    if e <= 1 or len(f) <= 1:
        return 0
    work, k, exp_base, exp_acc = 0, e, 1, 0
    while k:
        if k & 1:
            if exp_acc:
                work += estimate_power_terms(f, exp_acc) * estimate_power_terms(f, exp_base)
            exp_acc += exp_base
        k >>= 1
        if k:
            n = estimate_power_terms(f, exp_base)
            work += n * n // 2
            exp_base *= 2
    return work


# ------------------------------------------------------------ the p/q step
@dataclass
class StepResult:
    p: LaurentPoly | None
    q: tuple
    lcm: tuple
    h: list
    q_formula: tuple
    unit_divisor: bool
    content_moved: tuple
    deg_p_predicted: int


def predict_step_degree(terms, divisor_deg_p, tbl_nvars):
    """deg p of the step assuming no cancellation, from exponent data only."""
    qts = [m_add(*(m_scale(q, e) for (_, q, e, _) in term)) if term else (0,) * tbl_nvars
           for term in terms]
    L = m_lcm(*qts)
    best = 0
    for term, qt in zip(terms, qts):
        d = sum(m_sub(L, qt)) + sum(e * dp for (_, _, e, dp) in term)
        best = max(best, d)
    return best - divisor_deg_p


def rational_step(table, ring, terms, divisor, budget: Budget, allow_defer=False, where=""):
    """One application of  tau = (sum_i prod_j tau_ij^e_ij) / tau_d  in p/q form.

    ``terms`` is a list of lists of (p, q, e, deg_p); ``divisor`` is (p_d, q_d, deg_p_d).
    With ``allow_defer`` an over-budget expansion returns p=None instead of raising.
    """
    nv = table.nvars
    pd, qd, dpd = divisor
    qts = []
    for term in terms:
        qts.append(m_add(*(m_scale(q, e) for (_, q, e, _) in term)) if term else (0,) * nv)
    L = m_lcm(*qts)
    hs = [m_sub(L, qt) for qt in qts]
    unit_div = pd is not None and len(pd) == 1
    if unit_div:
        k = pd.leading_key()
        dmono = table.unpack(k)
        dcoef = pd.coeff_at_key(k)
        q_formula = m_sub(m_add(L, dmono), qd)
    else:
        q_formula = m_sub(L, qd)
    pred = predict_step_degree(terms, 0 if unit_div else dpd, nv)
    budget.check_degree(pred, where)
    work = 0
    for term in terms:
        acc_terms = 1
        for (p, _, e, _) in term:
            if p is None:
                work = math.inf
                break
            work += _power_work(p, e)
            est = estimate_power_terms(p, e)
            work += acc_terms * est if acc_terms > 1 else 0
            acc_terms = min(acc_terms * est, 10 ** 30)
    if work > budget.terms:
        if allow_defer:
            return StepResult(None, q_formula, L, hs, q_formula, unit_div, (0,) * nv, pred)
        raise BudgetExceeded(f"{where}: estimated {work:.3g} term products exceed budget {budget.terms}")
    num = LaurentPoly.zero(table, ring)
    for term, h in zip(terms, hs):
        prod = LaurentPoly.one(table, ring)
        for (p, _, e, _) in term:
            prod = prod * (p ** e)
        num = num + prod.shift(h)
    if unit_div:
        p_new = num.scale(1 / Fraction(dcoef))
    else:
        p_new = exact_divide(num, pd, max_terms=budget.terms)
    # split off any monomial factor: positive part stays in p, negative goes to q
    cs = monomial_content(p_new)
    tot = m_sub(cs.monomial_part, q_formula)
    pos = tuple(max(x, 0) for x in tot)
    neg = tuple(max(-x, 0) for x in tot)
    p_final = cs.polynomial_part.shift(pos) if any(pos) else cs.polynomial_part
    return StepResult(p_final, neg, L, hs, q_formula, unit_div, cs.monomial_part, pred)


def _record_from_step(site, step, table, extra=None):
    from .laurent import deg
    meta = {
        "lcm": list(step.lcm),
        "h": [list(h) for h in step.h],
        "q_formula": list(step.q_formula),
        "unit_divisor": step.unit_divisor,
        "content_moved": list(step.content_moved),
        "deg_p_predicted": step.deg_p_predicted,
        "p_form": "expanded" if step.p is not None else "factored",
    }
    if extra:
        meta.update(extra)
    dp = deg(step.p) if step.p is not None else step.deg_p_predicted
    return IterateRecord(site, step.p, step.q, dp, sum(step.q), meta)


def _initial_record(site, table, name):
    p = LaurentPoly.variable(table, name)
    return IterateRecord(site, p, (0,) * table.nvars, 1, 0, {"initial": True, "p_form": "expanded"})


def _deg_of(rec):
    return rec.deg_p


# ---------------------------------------------------------------- simple
def simple_table():
    return VariableTable(["y0", "y1"])


def simple_iterate(r: int, N: int, budget: Budget | None = None) -> IterateStore:
    """p_n, q_n of y_n = (y_{n-1}^r + 1) / y_{n-2} for 0 <= n <= N."""
    spec = SystemSpec.simple(r)
    if N < 2:
        raise ConfigError("N must be >= 2", "/n")
    budget = budget or Budget()
    from .analysis import simple_predicted_degrees
    pred = simple_predicted_degrees(r, N)
    budget.check_degree(pred[N], f"simple r={r} n={N}")
    table = simple_table()
    store = IterateStore(spec, table)
    store.add(_initial_record((0,), table, "y0"))
    store.add(_initial_record((1,), table, "y1"))
    one = LaurentPoly.one(table)
    for n in range(2, N + 1):
        a, d = store[(n - 1,)], store[(n - 2,)]
        terms = [[(a.p, a.q, r, a.deg_p)], [(one, (0,) * 2, 1, 0)]]
        step = rational_step(table, None, terms, (d.p, d.q, d.deg_p), budget, where=f"n={n}")
        rec = _record_from_step((n,), step, table)
        store.add(rec)
        _check_q_chain(store, rec, [(n - 1,)])
    return store


def _check_q_chain(store, rec, prev_sites):
    for s in prev_sites:
        if s in store.records:
            prev = store.records[s]
            ok = m_divides(prev.q, rec.q)
            rec.meta.setdefault("q_divisible_by", {})[site_key(s)] = ok
            if not ok:
                store.events.append({"site": list(rec.site), "check": "q divisibility", "ok": False,
                                     "by": list(s)})


# ---------------------------------------------------------------- toda 1d
def toda1d_table(window: LatticeWindow, name="tau"):
    return VariableTable([f"{name}[{t}][{n}]" for t in (0, 1)
                          for n in range(window.n_min, window.n_max + 1)])


def toda1d_iterate(spec: SystemSpec, window: LatticeWindow, budget: Budget | None = None,
                   allow_defer=True) -> IterateStore:
    """Iterate the 1D Toda-type lattice tau_{t,n} on the light cone of ``window``.

    Slices whose expansion would exceed the term budget are stored with
    p=None (factored form, to be supplied by the factor tracker) when
    ``allow_defer``; a later slice needing them raises BudgetExceeded.
    """
    if spec.kind != "toda1d":
        raise ConfigError("expected a toda1d system", "/system")
    budget = budget or Budget()
    table = toda1d_table(window)
    store = IterateStore(spec, table, window)
    a_exp, b_exp, c_exp = spec.exponents
    for t in (0, 1):
        for n in window.cone_1d(t):
            store.add(_initial_record((t, n), table, f"tau[{t}][{n}]"))
    for t in range(2, window.t_max + 1):
        sites = list(window.cone_1d(t))
        if not sites:
            break
        for n in sites:
            up, dn, mid, d = (store[(t - 1, n + 1)], store[(t - 1, n - 1)],
                              store[(t - 1, n)], store[(t - 2, n)])
            for rec in (up, dn, mid):
                if rec.p is None:
                    raise BudgetExceeded(f"site {(t, n)} needs the factored iterate {rec.site} expanded")
            terms = [[(up.p, up.q, a_exp, up.deg_p), (dn.p, dn.q, b_exp, dn.deg_p)],
                     [(mid.p, mid.q, c_exp, mid.deg_p)]]
            step = rational_step(table, None, terms, (d.p, d.q, d.deg_p), budget,
                                 allow_defer=allow_defer and spec.factorizable,
                                 where=f"t={t} n={n}")
            rec = _record_from_step((t, n), step, table)
            store.add(rec)
            if t >= 2:
                _check_q_chain(store, rec, [(t - 1, n), (t - 1, n - 1), (t - 1, n + 1)])
    return store


# ---------------------------------------------------------------- somos-4
def somos4_table():
    return VariableTable(["x0", "x1", "x2", "x3"])


def somos4_iterate(spec: SystemSpec, N: int, budget: Budget | None = None,
                   allow_defer=False) -> IterateStore:
    """Symbolic p/q iteration of x_n = (x_{n-1}^{rm} x_{n-3}^{rl} + x_{n-2}^{rk}) / x_{n-4}."""
    if spec.kind != "somos4ext":
        raise ConfigError("expected a somos4ext system", "/system")
    if N < 4:
        raise ConfigError("N must be >= 4", "/n")
    budget = budget or Budget()
    table = somos4_table()
    store = IterateStore(spec, table)
    for i in range(4):
        store.add(_initial_record((i,), table, f"x{i}"))
    a_exp, b_exp, c_exp = spec.exponents
    for n in range(4, N + 1):
        x1, x3, x2, x4 = store[(n - 1,)], store[(n - 3,)], store[(n - 2,)], store[(n - 4,)]
        for rec in (x1, x3, x2):
            if rec.p is None:
                raise BudgetExceeded(f"n={n} needs the factored iterate {rec.site} expanded")
        terms = [[(x1.p, x1.q, a_exp, x1.deg_p), (x3.p, x3.q, b_exp, x3.deg_p)],
                 [(x2.p, x2.q, c_exp, x2.deg_p)]]
        step = rational_step(table, None, terms, (x4.p, x4.q, x4.deg_p), budget,
                             allow_defer=allow_defer, where=f"n={n}")
        rec = _record_from_step((n,), step, table)
        store.add(rec)
        _check_q_chain(store, rec, [(n - 1,)])
    return store


def somos4_numeric(terms: int, initial=(1, 1, 1, 1), params=(1, 1, 1, 2)):
    """Numeric sequence of the (extended) Somos-4 recurrence by exact rational evaluation.

    ``params`` = (r, m, l, k); the default (1, 1, 1, 2) is the classical Somos-4.
    """
    r, m, l, k = params
    xs = [Fraction(v) for v in initial]
    if len(xs) != 4:
        raise ValueError("four initial values required")
    while len(xs) < terms:
        n = len(xs)
        den = xs[n - 4]
        if den == 0:
            raise ZeroDivisionError(f"x_{n - 4} = 0")
        xs.append((xs[n - 1] ** (r * m) * xs[n - 3] ** (r * l) + xs[n - 2] ** (r * k)) / den)
    return xs[:terms]


# ---------------------------------------------------------------- toda 2d
def toda2d_table(window: LatticeWindow, name="tau"):
    return VariableTable([f"{name}[{t}][{a}][{b}]" for t in (0, 1)
                          for a in range(window.n_min, window.n_max + 1)
                          for b in range(window.m_min, window.m_max + 1)])


def toda2d_iterate(spec: SystemSpec, window: LatticeWindow, budget: Budget | None = None) -> IterateStore:
    """tau_{t+1,a,b} = (tau_{t,a+1,b-1}^k1 tau_{t,a,b}^k2 + tau_{t,a,b-1}^l1 tau_{t,a+1,b}^l2) / tau_{t-1,a+1,b-1}."""
    if spec.kind != "toda2d":
        raise ConfigError("expected a toda2d system", "/system")
    if window.m_min is None:
        raise ConfigError("toda2d needs a rectangle window", "/window")
    budget = budget or Budget()
    table = toda2d_table(window)
    store = IterateStore(spec, table, window)
    k1, k2, l1, l2 = spec["k1"], spec["k2"], spec["l1"], spec["l2"]
    for t in (0, 1):
        for a, b in window.cone_2d(t):
            store.add(_initial_record((t, a, b), table, f"tau[{t}][{a}][{b}]"))
    for t in range(2, window.t_max + 1):
        for a, b in window.cone_2d(t):
            s = t - 1
            A, B, C, D = (store[(s, a + 1, b - 1)], store[(s, a, b)],
                          store[(s, a, b - 1)], store[(s, a + 1, b)])
            dv = store[(t - 2, a + 1, b - 1)]
            terms = [[(A.p, A.q, k1, A.deg_p), (B.p, B.q, k2, B.deg_p)],
                     [(C.p, C.q, l1, C.deg_p), (D.p, D.q, l2, D.deg_p)]]
            step = rational_step(table, None, terms, (dv.p, dv.q, dv.deg_p), budget,
                                 where=f"t={t} n={a} m={b}")
            store.add(_record_from_step((t, a, b), step, table))
    return store


# ------------------------------------------------------------ laurent check
@dataclass
class LaurentReport:
    passed: list = field(default_factory=list)
    failed: list = field(default_factory=list)
    pending: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failed and not self.pending

    def to_dict(self):
        return {"passed": len(self.passed), "failed": [list(s) for s in self.failed],
                "pending": [list(s) for s in self.pending]}


def laurent_check(store: IterateStore, factor_sets=None) -> LaurentReport:
    """Per site: is the denominator a monic monomial in the initial variables?

    Expanded sites pass when q has nonnegative exponents and p is a
    polynomial.  Factored-only sites pass when a factor set with exact
    Laurent quotients is supplied for them.
    """
    if not store.records:
        raise ValueError("empty store")
    factor_sets = factor_sets or {}
    rep = LaurentReport()
    for site, rec in sorted(store.records.items()):
        if rec.meta.get("initial"):
            rep.passed.append(site)
            continue
        if rec.meta.get("nonmonomial_denominator"):
            rep.failed.append(site)
            continue
        q_ok = all(x >= 0 for x in rec.q)
        if rec.p is not None:
            ok = q_ok and rec.p.is_polynomial()
        else:
            fs = factor_sets.get(site)
            if fs is None:
                rep.pending.append(site)
                continue
            ok = q_ok and fs.laurent_ok
        (rep.passed if ok else rep.failed).append(site)
    return rep
