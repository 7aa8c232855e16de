"""Sparse multivariate Laurent polynomials over Q or Q(zeta).

Monomials are packed into one Python int per term: a total-degree field
followed by one field per variable, each biased so that integer order on
keys is graded lexicographic order on exponent vectors.  Coefficients over
Q(zeta) are kept split into power-basis coordinates: ``comps[a]`` holds
the integer numerators of the zeta^a coordinate, over one common
denominator ``den``.  Every heavy operation therefore runs on plain
integer dicts.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _sparse as sp
from .cyclotomic import CycloElement, cyclo_ring, element_from_json, zeta_power
from .errors import (
    DivisionNotExact,
    RingMismatch,
    SerializationError,
    TableMismatch,
    ZeroPolynomialError,
)

FIELD_BITS = 16
FIELD_BIAS = 1 << (FIELD_BITS - 1)
# exponents (and total degrees) must stay strictly inside this bound so that
# key arithmetic never borrows across fields
EXP_LIMIT = 1 << (FIELD_BITS - 2)


class VariableTable:
    """Ordered, immutable list of variable names defining the key layout."""

    def __init__(self, names):
        names = tuple(str(n) for n in names)
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        self.names = names
        self.nvars = len(names)
        self.index = {n: i for i, n in enumerate(names)}
        W, B, n = FIELD_BITS, FIELD_BIAS, self.nvars
        self.bias = sum(B << (W * i) for i in range(n + 1))
        self.tops = self.bias  # the bias is exactly the top bit of every field
        self.nbytes = (W // 8) * (n + 1)
        self._shift = [W * (n - 1 - i) for i in range(n)]
        self._unit_keys = [self.bias + (1 << (W * n)) + (1 << s) for s in self._shift]

    def __repr__(self):
        return f"VariableTable({list(self.names)!r})"

    def __eq__(self, other):
        return isinstance(other, VariableTable) and other.names == self.names

    def __hash__(self):
        return hash(self.names)

    def __len__(self):
        return self.nvars

    def pack(self, exps):
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector length {len(exps)} != {self.nvars}")
        total = sum(exps)
        if abs(total) >= EXP_LIMIT or any(abs(e) >= EXP_LIMIT for e in exps):
            raise OverflowError("exponent out of packable range")
        W, B = FIELD_BITS, FIELD_BIAS
        key = total + B
        for e in exps:
            key = (key << W) | (e + B)
        return key

    def unpack(self, key):
        W, B = FIELD_BITS, FIELD_BIAS
        mask = (1 << W) - 1
        return tuple(((key >> s) & mask) - B for s in self._shift)

    def total_of(self, key):
        return (key >> (FIELD_BITS * self.nvars)) - FIELD_BIAS

    def unpack_many(self, keys):
        """Exponent matrix (len(keys) x nvars, int64) via a numpy byte view."""
        keys = list(keys)
        if not keys:
            return np.zeros((0, self.nvars), dtype=np.int64)
        nb = self.nbytes
        buf = b"".join(k.to_bytes(nb, "big") for k in keys)
        arr = np.frombuffer(buf, dtype=">u2").reshape(len(keys), self.nvars + 1)
        return arr[:, 1:].astype(np.int64) - FIELD_BIAS

    def var_key(self, name_or_index, power=1):
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        exps = [0] * self.nvars
        exps[i] = power
        return self.pack(exps)

    def one_key(self):
        return self.bias


@dataclass(frozen=True)
class ContentSplit:
    """f = monomial_part * polynomial_part with monomial_part monic."""

    monomial_part: tuple
    polynomial_part: "LaurentPoly"


def _common_ring(a, b):
    if a is None:
        return b
    if b is None or a == b:
        return a
    raise RingMismatch(f"r={a.r} vs r={b.r}")


def _ncomp(ring):
    return ring.degree if ring is not None else 1


class LaurentPoly:
    """Immutable sparse Laurent polynomial.

    ``ring`` is None for rational coefficients, else a CycloRing.
    """

    __slots__ = ("table", "ring", "comps", "den", "_span")

    def __init__(self, table, ring, comps, den=1, _normalized=False):
        self.table = table
        self.ring = ring
        self.comps = tuple(comps)
        if len(self.comps) != _ncomp(ring):
            raise ValueError("component count does not match coefficient field")
        self.den = den
        self._span = None
        if not _normalized:
            self._normalize()

    def _normalize(self):
        if self.den < 0:
            self.comps = tuple({k: -v for k, v in c.items()} for c in self.comps)
            self.den = -self.den
        if self.den == 0:
            raise ZeroDivisionError("zero denominator")
        if self.den != 1:
            g = self.den
            for c in self.comps:
                for v in c.values():
                    g = math.gcd(g, v)
                    if g == 1:
                        return
            if g != 1:
                self.comps = tuple({k: v // g for k, v in c.items()} for c in self.comps)
                self.den //= g

    # ------------------------------------------------------------------ build
    @classmethod
    def zero(cls, table, ring=None):
        return cls(table, ring, [{} for _ in range(_ncomp(ring))], 1, True)

    @classmethod
    def constant(cls, table, c, ring=None):
        return cls.monomial(table, (0,) * table.nvars, c, ring)

    @classmethod
    def one(cls, table, ring=None):
        return cls.constant(table, 1, ring)

    @classmethod
    def variable(cls, table, name, ring=None):
        return cls._from_key(table, table.var_key(name), 1, ring)

    @classmethod
    def monomial(cls, table, exps, c=1, ring=None):
        return cls._from_key(table, table.pack(exps), c, ring)

    @classmethod
    def _from_key(cls, table, key, c, ring=None):
        return cls._from_keyed(table, {key: c}, ring)

    @classmethod
    def from_terms(cls, table, terms, ring=None):
        """Build from {exponent tuple: coefficient}; coefficients int, Fraction or CycloElement."""
        return cls._from_keyed(table, {table.pack(e): c for e, c in terms.items()}, ring)

    @classmethod
    def _from_keyed(cls, table, keyed, ring=None):
        for c in keyed.values():
            if isinstance(c, CycloElement):
                ring = _common_ring(ring, c.ring)
        nc = _ncomp(ring)
        den = 1
        for c in keyed.values():
            d = c.den if isinstance(c, CycloElement) else Fraction(c).denominator
            den = den * d // math.gcd(den, d)
        comps = [{} for _ in range(nc)]
        for k, c in keyed.items():
            if isinstance(c, CycloElement):
                s = den // c.den
                for a, v in enumerate(c.num):
                    if v:
                        comps[a][k] = v * s
            else:
                c = Fraction(c)
                if c:
                    comps[0][k] = c.numerator * (den // c.denominator)
        return cls(table, ring, comps, den)

    @classmethod
    def _from_fraction_dicts(cls, table, ring, dicts):
        """Build from per-coordinate dicts whose values may be Fractions."""
        den = 1
        for d in dicts:
            for v in d.values():
                if type(v) is not int:
                    q = v.denominator
                    den = den * q // math.gcd(den, q)
        if den == 1:
            return cls(table, ring, [dict(d) for d in dicts], 1, True)
        comps = []
        for d in dicts:
            comps.append({k: (v * den if type(v) is int else v.numerator * (den // v.denominator))
                          for k, v in d.items()})
        return cls(table, ring, comps, den)

    def in_ring(self, ring):
        """Same polynomial viewed over ``ring`` (None or a CycloRing)."""
        if ring == self.ring:
            return self
        if ring is None:
            if not self.is_rational():
                raise RingMismatch("polynomial has irrational coefficients")
            return LaurentPoly(self.table, None, [self.comps[0]], self.den, True)
        if self.ring is not None:
            raise RingMismatch(f"r={self.ring.r} vs r={ring.r}")
        comps = [self.comps[0]] + [{} for _ in range(ring.degree - 1)]
        return LaurentPoly(self.table, ring, comps, self.den, True)

    # -------------------------------------------------------------- inspect
    def keys(self):
        if len(self.comps) == 1:
            return set(self.comps[0])
        ks = set()
        for c in self.comps:
            ks.update(c)
        return ks

    def __len__(self):
        if len(self.comps) == 1 or not any(self.comps[1:]):
            return len(self.comps[0])
        return len(self.keys())

    def is_zero(self):
        return not any(self.comps)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self.comps[1:])

    def coeff_at_key(self, k):
        if self.ring is None:
            v = self.comps[0].get(k, 0)
            return Fraction(v, self.den) if self.den != 1 else v
        return CycloElement(self.ring, tuple(c.get(k, 0) for c in self.comps), self.den)

    def coeff(self, exps):
        return self.coeff_at_key(self.table.pack(exps))

    def sorted_keys(self):
        return sorted(self.keys(), reverse=True)

    def items(self):
        """(exponent tuple, coefficient) pairs in descending graded-lex order."""
        keys = self.sorted_keys()
        mat = self.table.unpack_many(keys)
        for k, row in zip(keys, mat.tolist()):
            yield tuple(row), self.coeff_at_key(k)

    def terms(self):
        return dict(self.items())

    def leading_key(self):
        if self.is_zero():
            raise ZeroPolynomialError("zero polynomial has no leading term")
        return max(self.keys())

    def leading_coeff(self):
        return self.coeff_at_key(self.leading_key())

    def span(self):
        """(min exponents, max exponents, min total, max total) over all terms."""
        if self._span is None:
            if self.is_zero():
                raise ZeroPolynomialError("span of zero polynomial")
            keys = list(self.keys())
            mat = self.table.unpack_many(keys)
            totals = mat.sum(axis=1)
            self._span = (tuple(mat.min(axis=0).tolist()), tuple(mat.max(axis=0).tolist()),
                          int(totals.min()), int(totals.max()))
        return self._span

    def occurring(self):
        """Indices of variables that appear with a nonzero exponent."""
        if self.is_zero():
            return ()
        lo, hi, _, _ = self.span()
        return tuple(i for i in range(self.table.nvars) if lo[i] or hi[i])

    def occurring_names(self):
        return tuple(self.table.names[i] for i in self.occurring())

    def is_polynomial(self):
        return self.is_zero() or min(self.span()[0]) >= 0

    def is_constant(self):
        ks = self.keys()
        return not ks or ks == {self.table.bias}

    def is_monomial(self):
        return len(self) == 1

    # ---------------------------------------------------------- arithmetic
    def _check(self, other):
        if not isinstance(other, LaurentPoly):
            return None
        if other.table is not self.table and other.table != self.table:
            raise TableMismatch("polynomials use different variable tables")
        return _common_ring(self.ring, other.ring)

    def _coerce_scalar(self, c):
        if isinstance(c, LaurentPoly):
            return c
        if isinstance(c, (int, Fraction, CycloElement)):
            return LaurentPoly.constant(self.table, c, self.ring)
        return None

    def __add__(self, other):
        other = self._coerce_scalar(other)
        if other is None:
            return NotImplemented
        ring = self._check(other)
        a, b = self.in_ring(ring), other.in_ring(ring)
        L = a.den * b.den // math.gcd(a.den, b.den)
        sa, sb = L // a.den, L // b.den
        comps = []
        for ca, cb in zip(a.comps, b.comps):
            acc = sp.dscale(ca, sa)
            sp.dadd_into(acc, cb, sb)
            comps.append(acc)
        return LaurentPoly(self.table, ring, comps, L)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.table, self.ring, [{k: -v for k, v in c.items()} for c in self.comps],
                           self.den, True)

    def __sub__(self, other):
        other = self._coerce_scalar(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce_scalar(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def _check_mul_range(self, other):
        lo1, hi1, tlo1, thi1 = self.span()
        lo2, hi2, tlo2, thi2 = other.span()
        if (thi1 + thi2 >= EXP_LIMIT or tlo1 + tlo2 <= -EXP_LIMIT
                or max(a + b for a, b in zip(hi1, hi2)) >= EXP_LIMIT
                or min(a + b for a, b in zip(lo1, lo2)) <= -EXP_LIMIT):
            raise OverflowError("product exponents exceed the packable range")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloElement)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        ring = self._check(other)
        if self.is_zero() or other.is_zero():
            return LaurentPoly.zero(self.table, ring)
        self._check_mul_range(other)
        a, b = self.in_ring(ring), other.in_ring(ring)
        bias = self.table.bias
        if a is b:
            comps = _ring_square(ring, a.comps, bias)
        else:
            comps = _ring_mul(ring, a.comps, b.comps, bias)
        return LaurentPoly(self.table, ring, comps, a.den * b.den)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by a scalar (int, Fraction or CycloElement)."""
        if isinstance(c, CycloElement):
            ring = _common_ring(self.ring, c.ring)
            if c.is_rational():
                return self.in_ring(ring).scale(Fraction(c.num[0], c.den))
            a = self.in_ring(ring)
            cpoly = [dict() for _ in range(ring.degree)]
            for i, v in enumerate(c.num):
                if v:
                    cpoly[i] = {self.table.bias: v}
            comps = _ring_mul(ring, a.comps, cpoly, self.table.bias)
            return LaurentPoly(self.table, ring, comps, a.den * c.den)
        c = Fraction(c)
        if not c:
            return LaurentPoly.zero(self.table, self.ring)
        comps = [sp.dscale(d, c.numerator) for d in self.comps]
        return LaurentPoly(self.table, self.ring, comps, self.den * c.denominator)

    def shift(self, exps):
        """Multiply by the monic monomial with exponent vector ``exps``."""
        return self.shift_key(self.table.pack(exps))

    def shift_key(self, key):
        if key == self.table.bias:
            return self
        off = key - self.table.bias
        if not self.is_zero():
            lo, hi, tlo, thi = self.span()
            e = self.table.unpack(key)
            t = sum(e)
            if (thi + t >= EXP_LIMIT or tlo + t <= -EXP_LIMIT
                    or any(abs(a + b) >= EXP_LIMIT for a, b in zip(hi, e))
                    or any(abs(a + b) >= EXP_LIMIT for a, b in zip(lo, e))):
                raise OverflowError("shift exceeds the packable range")
        return LaurentPoly(self.table, self.ring, [sp.dshift(c, off) for c in self.comps], self.den, True)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if self.is_monomial():
                key = self.leading_key()
                inv = self.coeff_at_key(key)
                inv = inv.inverse() if isinstance(inv, CycloElement) else 1 / Fraction(inv)
                e = self.table.unpack(key)
                return LaurentPoly.monomial(self.table, [-x for x in e], inv, self.ring) ** (-k)
            raise ValueError("negative power of a non-monomial")
        if k == 0:
            return LaurentPoly.one(self.table, self.ring)
        if k == 1:
            return self
        if self.is_monomial():
            key = self.leading_key()
            e = self.table.unpack(key)
            c = self.coeff_at_key(key)
            return LaurentPoly.monomial(self.table, [x * k for x in e], c ** k, self.ring)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycloElement)):
            other = self._coerce_scalar(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if other.table != self.table:
            return False
        try:
            ring = _common_ring(self.ring, other.ring)
        except RingMismatch:
            return False
        try:
            a, b = self.in_ring(ring), other.in_ring(ring)
        except RingMismatch:
            return False
        return a.den == b.den and a.comps == b.comps

    __hash__ = None

    def __repr__(self):
        return f"LaurentPoly({self.to_str()})"

    def to_str(self, max_terms=12):
        if self.is_zero():
            return "0"
        parts = []
        for n, (e, c) in enumerate(self.items()):
            if n >= max_terms:
                parts.append(f"... ({len(self)} terms)")
                break
            mono = "*".join(
                (nm if x == 1 else f"{nm}^{x}") for nm, x in zip(self.table.names, e) if x)
            cs = c.to_str() if isinstance(c, CycloElement) else str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    # ----------------------------------------------------- normalizations
    def normalized(self):
        """Scale so that the graded-lex leading coefficient is 1."""
        lc = self.leading_coeff()
        if lc == 1:
            return self
        inv = lc.inverse() if isinstance(lc, CycloElement) else 1 / Fraction(lc)
        return self.scale(inv)

    def conjugate(self, s):
        """Apply the field automorphism zeta -> zeta^s (s coprime to 2r)."""
        if self.ring is None or self.is_rational():
            return self
        ring = self.ring
        if math.gcd(s, ring.order) != 1:
            raise ValueError("conjugation exponent must be coprime to 2r")
        nc = ring.degree
        out = [{} for _ in range(nc)]
        for a, c in enumerate(self.comps):
            if not c:
                continue
            img = zeta_power(ring, a * s)
            for b, v in enumerate(img.num):
                if v:
                    sp.dadd_into(out[b], c, v)
        return LaurentPoly(self.table, ring, out, self.den)

    def map_keys(self, fn):
        """New polynomial over ``fn``-transformed keys; fn must be injective."""
        return LaurentPoly(self.table, self.ring,
                           [{fn(k): v for k, v in c.items()} for c in self.comps], self.den, True)


def _ring_mul(ring, ca, cb, bias):
    if ring is None or (not any(ca[1:]) and not any(cb[1:])):
        out = [sp.dmul(ca[0], cb[0], bias)]
        if ring is not None:
            out += [{} for _ in range(ring.degree - 1)]
        return out
    n = ring.degree
    acc = [{} for _ in range(2 * n - 1)]
    for i, x in enumerate(ca):
        if not x:
            continue
        for j, y in enumerate(cb):
            if y:
                sp.dadd_into(acc[i + j], sp.dmul(x, y, bias))
    return _reduce_cyclo(ring, acc)


def _ring_square(ring, ca, bias):
    if ring is None or not any(ca[1:]):
        out = [sp.dsqr(ca[0], bias)]
        if ring is not None:
            out += [{} for _ in range(ring.degree - 1)]
        return out
    n = ring.degree
    acc = [{} for _ in range(2 * n - 1)]
    for i, x in enumerate(ca):
        if not x:
            continue
        sp.dadd_into(acc[2 * i], sp.dsqr(x, bias))
        for j in range(i + 1, n):
            y = ca[j]
            if y:
                sp.dadd_into(acc[i + j], sp.dmul(x, y, bias), 2)
    return _reduce_cyclo(ring, acc)


def _reduce_cyclo(ring, acc):
    n = ring.degree
    phi = ring.phi_coeffs
    for e in range(len(acc) - 1, n - 1, -1):
        top = acc[e]
        if not top:
            continue
        base = e - n
        for k in range(n):
            if phi[k]:
                sp.dadd_into(acc[base + k], top, -phi[k])
    return acc[:n]


# ------------------------------------------------------------------ content
def monomial_content(f: LaurentPoly) -> ContentSplit:
    """Split f into a monic monomial times a polynomial with no monomial factor."""
    if f.is_zero():
        raise ZeroPolynomialError("monomial content of zero")
    lo = f.span()[0]
    if not any(lo):
        return ContentSplit(lo, f)
    inv = f.table.pack([-x for x in lo])
    return ContentSplit(tuple(lo), f.shift_key(inv))


def deg(f: LaurentPoly) -> int:
    """Total degree: the largest exponent sum over the terms of f."""
    if f.is_zero():
        raise ZeroPolynomialError("degree of zero")
    return f.table.total_of(f.leading_key())


def deg_L(f: LaurentPoly) -> int:
    """Degree of the polynomial part after removing the monomial content."""
    if f.is_zero():
        raise ZeroPolynomialError("degree of zero")
    lo, hi, tlo, thi = f.span()
    return thi - sum(lo)


def is_unit(f: LaurentPoly) -> bool:
    return len(f) == 1


# ----------------------------------------------------------------- division
def exact_divide(f: LaurentPoly, g: LaurentPoly, max_terms=None) -> LaurentPoly:
    """Exact quotient q with q*g == f; q may carry negative exponents.

    Works on content-normalized polynomial parts.  Over Q(zeta) a non-rational
    divisor is made rational by multiplying through by its conjugates.
    """
    ring = f._check(g)
    if g.is_zero():
        raise ZeroPolynomialError("division by zero polynomial")
    if f.is_zero():
        return LaurentPoly.zero(f.table, ring)
    table = f.table
    bias, tops = table.bias, table.tops
    cf, cg = monomial_content(f), monomial_content(g)
    F, G = cf.polynomial_part.in_ring(ring), cg.polynomial_part.in_ring(ring)
    mono = [a - b for a, b in zip(cf.monomial_part, cg.monomial_part)]
    if G.is_rational():
        gd = G.comps[0]
        try:
            qs = [sp.ddivexact(c, gd, bias, tops, max_terms) if c else {} for c in F.comps]
        except DivisionNotExact as exc:
            exc.payload.setdefault("dividend_terms", len(F))
            exc.payload.setdefault("divisor_terms", len(G))
            raise
        q = LaurentPoly._from_fraction_dicts(table, ring, qs)
        q = q.scale(Fraction(G.den, F.den))
    else:
        lc = G.leading_coeff()
        Gn = G.scale(lc.inverse())
        ents = _mult_entries(ring, Gn)
        nc = ring.degree
        fv = {}
        for a, c in enumerate(F.comps):
            for k, v in c.items():
                row = fv.get(k)
                if row is None:
                    row = fv[k] = [0] * nc
                row[a] = v
        try:
            qv = sp.ddivexact_vec(fv, ents, Gn.den, bias, tops, max_terms)
        except DivisionNotExact as exc:
            exc.payload.setdefault("dividend_terms", len(F))
            exc.payload.setdefault("divisor_terms", len(G))
            raise
        qs = [{} for _ in range(nc)]
        for k, row in qv.items():
            for a, v in enumerate(row):
                if v:
                    qs[a][k] = v
        q = LaurentPoly._from_fraction_dicts(table, ring, qs)
        q = q.scale(Fraction(Gn.den, F.den)).scale(lc.inverse())
    if any(mono):
        q = q.shift(mono)
    return q


def _mult_entries(ring, g):
    """Per-key sparse matrices of x -> x * coefficient over the numerators of g."""
    n = ring.degree
    w = [zeta_power(ring, e).num for e in range(2 * n - 1)]
    out = {}
    for k in g.keys():
        c = [comp.get(k, 0) for comp in g.comps]
        ents = []
        for i in range(n):
            for a in range(n):
                m = 0
                for b in range(n):
                    if c[b]:
                        m += c[b] * w[a + b][i]
                if m:
                    ents.append((i, a, m))
        out[k] = ents
    return out


def divides(g: LaurentPoly, f: LaurentPoly) -> bool:
    try:
        exact_divide(f, g)
        return True
    except DivisionNotExact:
        return False


def associate_equal(f: LaurentPoly, g: LaurentPoly) -> bool:
    """True iff f = unit * g for a unit (nonzero constant times a monomial)."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomialError("associates of zero")
    if len(f) != len(g):
        return False
    try:
        return is_unit(exact_divide(f, g))
    except DivisionNotExact:
        return False


def unit_quotient(f: LaurentPoly, g: LaurentPoly):
    """(coefficient, exponent tuple) with f = coefficient * monomial * g, or None."""
    if len(f) != len(g):
        return None
    try:
        q = exact_divide(f, g)
    except DivisionNotExact:
        return None
    if not is_unit(q):
        return None
    k = q.leading_key()
    return q.coeff_at_key(k), q.table.unpack(k)


# ---------------------------------------------------------------- evaluate
def evaluate(f: LaurentPoly, assignment):
    """Exact value of f at ``assignment`` (name -> int, Fraction or CycloElement)."""
    table = f.table
    occ = f.occurring()
    missing = [table.names[i] for i in occ if table.names[i] not in assignment]
    if missing:
        raise KeyError(f"unassigned variables: {missing}")
    vals = {}
    for i in occ:
        v = assignment[table.names[i]]
        vals[i] = v if isinstance(v, CycloElement) else Fraction(v)
    ring = f.ring
    for v in vals.values():
        if isinstance(v, CycloElement):
            ring = _common_ring(ring, v.ring)
    total = ring.zero() if ring is not None else Fraction(0)
    powcache = {}
    for e, c in f.items():
        term = c
        for i in occ:
            x = e[i]
            if x:
                key = (i, x)
                p = powcache.get(key)
                if p is None:
                    base = vals[i]
                    if x < 0 and not base:
                        raise ZeroDivisionError(f"{table.names[i]} = 0 raised to a negative power")
                    p = base ** x
                    powcache[key] = p
                term = term * p
        total = total + term
    return total


def substitute(f: LaurentPoly, mapping):
    """Replace variables by Laurent polynomials over the same table."""
    table = f.table
    ring = f.ring
    for g in mapping.values():
        ring = _common_ring(ring, g.ring)
    idx = {table.index[n]: g for n, g in mapping.items()}
    result = LaurentPoly.zero(table, ring)
    powcache = {}
    for e, c in f.items():
        rest = [0 if i in idx else x for i, x in enumerate(e)]
        term = LaurentPoly.monomial(table, rest, c, ring)
        for i, g in idx.items():
            x = e[i]
            if x:
                p = powcache.get((i, x))
                if p is None:
                    p = g ** x
                    powcache[(i, x)] = p
                term = term * p
        result = result + term
    return result


# ------------------------------------------------------------ serialization
def _coeff_json(c):
    if isinstance(c, CycloElement):
        return c.to_json()
    c = Fraction(c)
    return [str(c.numerator), str(c.denominator)]


def to_json_obj(f: LaurentPoly):
    terms = [[list(e), _coeff_json(c)] for e, c in f.items()]
    return {"vars": list(f.table.names),
            "ring": {"r": f.ring.r} if f.ring is not None else None,
            "terms": terms}


def digest(f: LaurentPoly) -> str:
    """SHA-256 of a canonical binary form; much cheaper than hashing :func:`serialize`."""
    h = hashlib.sha256()
    h.update(("|".join(f.table.names) + f"#{f.ring.r if f.ring is not None else 0}#").encode())
    g = f.den
    for c in f.comps:
        for v in c.values():
            if g == 1:
                break
            g = math.gcd(g, v)
    h.update(str(f.den // g).encode() + b"#")
    comps = f.comps
    for k in sorted(f.keys(), reverse=True):
        h.update(b"%x:" % k)
        h.update(",".join(str(c.get(k, 0) // g) for c in comps).encode())
        h.update(b";")
    return h.hexdigest()


def serialize(f: LaurentPoly) -> bytes:
    """Canonical byte stream: compact JSON, terms in descending graded-lex order."""
    return json.dumps(to_json_obj(f), separators=(",", ":")).encode("utf-8")


def from_json_obj(obj, table=None):
    try:
        names = obj["vars"]
        ring_obj = obj["ring"]
        terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise SerializationError(f"missing field {exc}") from exc
    if not isinstance(names, list) or not isinstance(terms, list):
        raise SerializationError("vars and terms must be arrays")
    if table is None:
        table = VariableTable(names)
    elif list(table.names) != list(names):
        raise SerializationError("variable list does not match the supplied table")
    ring = None
    if ring_obj is not None:
        try:
            ring = cyclo_ring(int(ring_obj["r"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SerializationError(f"bad ring descriptor {ring_obj!r}") from exc
    keyed = {}
    for pos, item in enumerate(terms):
        if not isinstance(item, list) or len(item) != 2:
            raise SerializationError(f"term {pos}: expected [exponents, coefficient]")
        exps, cj = item
        if not isinstance(exps, list) or len(exps) != table.nvars:
            raise SerializationError(f"term {pos}: exponent vector length mismatch")
        if not all(isinstance(x, int) for x in exps):
            raise SerializationError(f"term {pos}: exponents must be integers")
        if ring is None:
            try:
                n, d = cj
                c = Fraction(int(n), int(d))
            except (TypeError, ValueError, ZeroDivisionError) as exc:
                raise SerializationError(f"term {pos}: bad coefficient {cj!r}") from exc
        else:
            c = element_from_json(ring, cj)
        if not c:
            raise SerializationError(f"term {pos}: zero coefficient stored")
        k = table.pack(exps)
        if k in keyed:
            raise SerializationError(f"term {pos}: duplicate monomial")
        keyed[k] = c
    return LaurentPoly._from_keyed(table, keyed, ring)


def deserialize(data, table=None) -> LaurentPoly:
    try:
        obj = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SerializationError(f"not valid JSON: {exc}") from exc
    return from_json_obj(obj, table)
