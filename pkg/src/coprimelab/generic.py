"""GCD-reducing iteration of any recurrence written in the DSL.

This engine knows nothing about the closed forms used by :mod:`engines`.
It evaluates the right-hand side as a rational function in the initial
variables and cancels common factors with exact GCDs, which makes it a
slow but independent oracle for the closed-form engines.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .dsl import Recurrence, evaluate_ast, parse_recurrence
from .engines import Budget, IterateRecord, IterateStore, LatticeWindow, SystemSpec
from .errors import ConfigError, DivisionNotExact, MoreThanTwoVariables
from .laurent import LaurentPoly, VariableTable, deg, exact_divide, monomial_content
from .gcd import gcd_with_method


class RatFunc:
    """num / den with both sides polynomials, den with leading coefficient 1.

    Arithmetic only cancels monomial content; :meth:`reduced` removes the
    full polynomial GCD.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly):
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num, self.den = _cancel_monomials(num, den)

    @classmethod
    def of(cls, f: LaurentPoly):
        return cls(f, LaurentPoly.one(f.table, f.ring))

    def __add__(self, other):
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.num.is_zero():
            raise ZeroDivisionError("division by a zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __pow__(self, k):
        return RatFunc(self.num ** k, self.den ** k)

    def reduced(self, seed=0):
        """(reduced RatFunc, method) where method names how the GCD was found."""
        N, D = self.num, self.den
        if N.is_zero() or D.is_monomial():
            return self, "monomial"
        try:
            res = gcd_with_method(N, D, seed=seed)
            g, method = res.gcd, res.method
        except MoreThanTwoVariables:
            # no exact multivariate gcd here; the denominator may still divide
            try:
                return RatFunc(exact_divide(N, D), LaurentPoly.one(N.table, N.ring)), "trial-division"
            except DivisionNotExact:
                return self, "infeasible"
        if g.is_constant():
            return self, method
        return RatFunc(exact_divide(N, g), exact_divide(D, g)), method


def _cancel_monomials(num, den):
    """Move monomial content so neither side has a negative exponent and
    no variable divides both; scale den to leading coefficient 1."""
    cd = monomial_content(den)
    D = cd.polynomial_part
    lc = D.leading_coeff()
    if lc != 1:
        inv = lc.inverse() if hasattr(lc, "inverse") else 1 / Fraction(lc)
        D = D.scale(inv)
        num = num.scale(inv)
    if num.is_zero():
        return num, LaurentPoly.one(den.table, D.ring)
    cn = monomial_content(num)
    net = [a - b for a, b in zip(cn.monomial_part, cd.monomial_part)]
    pos = [max(x, 0) for x in net]
    neg = [max(-x, 0) for x in net]
    N = cn.polynomial_part
    return (N.shift(pos) if any(pos) else N), (D.shift(neg) if any(neg) else D)


@dataclass
class _Shape:
    name: str
    nidx: int
    lag: int            # largest backward step in the first index
    lhs_offsets: tuple


def _shape(rec: Recurrence):
    offs = rec.relative_offsets()
    lag = max(-o[0] for o in offs) if offs else 1
    return _Shape(rec.lhs.name, len(rec.lhs.indices), lag, tuple(o for _, o in rec.lhs.indices))


def _record(site, rf: RatFunc, method, table):
    num, den = rf.num, rf.den
    meta = {"reduction": method, "p_form": "expanded"}
    if num.is_zero():
        return IterateRecord(site, num, (0,) * table.nvars, 0, 0, meta)
    if den.is_monomial():
        q = tuple(table.unpack(den.leading_key()))
        return IterateRecord(site, num, q, deg(num), sum(q), meta)
    meta["denominator"] = den
    meta["nonmonomial_denominator"] = True
    return IterateRecord(site, num, (0,) * table.nvars, deg(num), deg(den), meta)


def _const(table):
    return lambda v: RatFunc.of(LaurentPoly.constant(table, v))


def generic_iterate(rec, N=None, window: LatticeWindow | None = None, budget: Budget | None = None,
                    seed=0) -> IterateStore:
    """Iterate a parsed (or textual) recurrence from generic symbolic initial data.

    One index: initials ``{name}0 .. {name}{lag-1}``, iterates up to ``N``.
    Two or three indices (time first): initials on the first ``lag`` time
    slices of ``window``; a later site is computed when every reference it
    needs is available.  Reduction failures are recorded in the record's
    meta, never raised.
    """
    if isinstance(rec, str):
        rec = parse_recurrence(rec)
    budget = budget or Budget()
    shape = _shape(rec)
    if shape.nidx == 1:
        if N is None:
            raise ConfigError("one-index recurrences need N", "/n")
        return _iterate_1d(rec, shape, N, budget, seed)
    if window is None:
        raise ConfigError("lattice recurrences need a window", "/window")
    return _iterate_lattice(rec, shape, window, budget, seed)


def _iterate_1d(rec, shape, N, budget, seed):
    table = VariableTable([f"{shape.name}{i}" for i in range(shape.lag)])
    store = IterateStore(SystemSpec("dsl"), table)
    vals = {}
    for i in range(shape.lag):
        vals[i] = RatFunc.of(LaurentPoly.variable(table, f"{shape.name}{i}"))
        store.add(IterateRecord((i,), vals[i].num, (0,) * table.nvars, 1, 0,
                                {"initial": True, "p_form": "expanded"}))
    base = shape.lhs_offsets[0]
    const = _const(table)
    for n in range(shape.lag, N + 1):
        rf = evaluate_ast(rec.rhs, lambda r: vals[n + r.indices[0][1] - base], const)
        rf, method = rf.reduced(seed)
        vals[n] = rf
        out = _record((n,), rf, method, table)
        if out.deg_p > budget.degree:
            store.events.append({"site": [n], "check": "degree budget", "ok": False})
            break
        store.add(out)
    return store


def _spatial_ranges(window, k):
    ranges = [range(window.n_min, window.n_max + 1)]
    if k == 2:
        if window.m_min is None:
            raise ConfigError("three-index recurrences need a rectangle window", "/window")
        ranges.append(range(window.m_min, window.m_max + 1))
    elif k > 2:
        raise ConfigError("at most three indices are supported", "/dsl_text")
    return ranges


def _iterate_lattice(rec, shape, window, budget, seed):
    ranges = _spatial_ranges(window, shape.nidx - 1)
    name = shape.name
    spots = list(itertools.product(*ranges))
    table = VariableTable([name + "".join(f"[{i}]" for i in (t,) + s)
                           for t in range(shape.lag) for s in spots])
    store = IterateStore(SystemSpec("dsl"), table, window)
    vals = {}
    for t in range(shape.lag):
        for s in spots:
            site = (t,) + s
            vals[site] = RatFunc.of(LaurentPoly.variable(table, name + "".join(f"[{i}]" for i in site)))
            store.add(IterateRecord(site, vals[site].num, (0,) * table.nvars, 1, 0,
                                    {"initial": True, "p_form": "expanded"}))
    base = shape.lhs_offsets
    const = _const(table)
    offs = rec.relative_offsets()
    for t in range(shape.lag, window.t_max + 1):
        for s in spots:
            site = (t,) + s
            deps = [tuple(a + b for a, b in zip(site, o)) for o in offs]
            if not all(d in vals for d in deps):
                continue
            look = lambda r, site=site: vals[tuple(x + o - b for x, (_, o), b in zip(site, r.indices, base))]
            rf, method = evaluate_ast(rec.rhs, look, const).reduced(seed)
            vals[site] = rf
            out = _record(site, rf, method, table)
            if out.deg_p > budget.degree:
                store.events.append({"site": list(site), "check": "degree budget", "ok": False})
                return store
            store.add(out)
    return store


__all__ = ["RatFunc", "generic_iterate"]
