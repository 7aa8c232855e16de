"""Exact arithmetic in the cyclotomic field Q(zeta), zeta = exp(i*pi/r).

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(2r)-1) as a
tuple of integer numerators over one positive common denominator.  All
results are reduced modulo the cyclotomic polynomial Phi_{2r}.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

from .errors import RingMismatch, SerializationError, ZeroInverseError


def _int_poly_divmod_monic(num, den):
    """Divide integer coefficient lists (low degree first); ``den`` monic."""
    num = list(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], num
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for k in range(dd + 1):
                num[i - dd + k] -= c * den[k]
    rem = num[:dd] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(order: int) -> tuple:
    """Coefficients (constant term first) of the monic cyclotomic polynomial Phi_order.

    Computed by dividing x^order - 1 by Phi_d for every proper divisor d.
    """
    if not isinstance(order, int) or order < 1:
        raise ValueError(f"cyclotomic order must be a positive integer, got {order!r}")
    poly = [-1] + [0] * (order - 1) + [1]
    for d in range(1, order):
        if order % d == 0:
            poly, rem = _int_poly_divmod_monic(poly, cyclotomic_polynomial(d))
            if any(rem):
                raise ArithmeticError("cyclotomic division left a remainder")
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


class CycloRing:
    """The field Q(zeta_{2r}); one shared instance per r (see :func:`cyclo_ring`)."""

    __slots__ = ("r", "order", "phi_coeffs", "degree", "_zeta_cache")

    def __init__(self, r: int):
        if not isinstance(r, int) or r < 2:
            raise ValueError(f"r must be an integer >= 2, got {r!r}")
        self.r = r
        self.order = 2 * r
        self.phi_coeffs = cyclotomic_polynomial(self.order)
        self.degree = len(self.phi_coeffs) - 1
        self._zeta_cache = {}

    def __repr__(self):
        return f"CycloRing(r={self.r})"

    def __eq__(self, other):
        return isinstance(other, CycloRing) and other.r == self.r

    def __hash__(self):
        return hash(("CycloRing", self.r))

    def __reduce__(self):
        return (cyclo_ring, (self.r,))

    # constructors
    def zero(self):
        return CycloElement(self, (0,) * self.degree, 1, _checked=True)

    def one(self):
        return self.from_rational(1)

    def from_rational(self, c):
        c = Fraction(c)
        num = (c.numerator,) + (0,) * (self.degree - 1)
        return CycloElement(self, num, c.denominator, _checked=True)

    def element(self, coords):
        """Build an element from rational coordinates in the power basis."""
        coords = [Fraction(c) for c in coords]
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        den = 1
        for c in coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = tuple(c.numerator * (den // c.denominator) for c in coords)
        return CycloElement(self, num, den)

    def zeta_power(self, j: int):
        return zeta_power(self, j)

    def reduce_int_poly(self, coeffs):
        """Reduce an integer coefficient list modulo Phi_{2r}; returns a tuple."""
        phi = self.phi_coeffs
        dd = self.degree
        coeffs = list(coeffs)
        for i in range(len(coeffs) - 1, dd - 1, -1):
            c = coeffs[i]
            if c:
                base = i - dd
                for k in range(dd):
                    pk = phi[k]
                    if pk:
                        coeffs[base + k] -= c * pk
        out = coeffs[:dd]
        if len(out) < dd:
            out += [0] * (dd - len(out))
        return tuple(out)


@lru_cache(maxsize=None)
def cyclo_ring(r: int) -> CycloRing:
    return CycloRing(r)


class CycloElement:
    """An element of Q(zeta_{2r}); immutable."""

    __slots__ = ("ring", "num", "den")

    def __init__(self, ring, num, den=1, _checked=False):
        self.ring = ring
        if not _checked:
            num = tuple(int(x) for x in num)
            if len(num) != ring.degree:
                raise ValueError("coordinate length does not match field degree")
            den = int(den)
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            if den < 0:
                num = tuple(-x for x in num)
                den = -den
            if den != 1:
                g = math.gcd(den, *num)
                if g != 1:
                    num = tuple(x // g for x in num)
                    den //= g
        self.num = num
        self.den = den

    @property
    def coords(self):
        """Rational coordinates with respect to 1, zeta, zeta^2, ..."""
        return tuple(Fraction(x, self.den) for x in self.num)

    def __repr__(self):
        return f"CycloElement(r={self.ring.r}, {self.to_str()})"

    def to_str(self, symbol="z"):
        parts = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            cs = str(c)
            if k == 0:
                parts.append(cs)
            else:
                mono = symbol if k == 1 else f"{symbol}^{k}"
                if c == 1:
                    parts.append(mono)
                elif c == -1:
                    parts.append("-" + mono)
                else:
                    if "/" in cs:
                        cs = f"({cs})"
                    parts.append(f"{cs}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    # predicates
    def __bool__(self):
        return any(self.num)

    def is_zero(self):
        return not any(self.num)

    def is_rational(self):
        return not any(self.num[1:])

    def is_one(self):
        return self.den == 1 and self.num[0] == 1 and not any(self.num[1:])

    def __eq__(self, other):
        if isinstance(other, CycloElement):
            return self.ring == other.ring and self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            if any(self.num[1:]):
                return False
            return Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.ring.r, self.num, self.den))

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.ring != self.ring:
                raise RingMismatch(f"r={self.ring.r} vs r={other.ring.r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.from_rational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return CycloElement(self.ring, tuple(a + b for a, b in zip(self.num, o.num)), self.den)
        d1, d2 = self.den, o.den
        return CycloElement(self.ring, tuple(a * d2 + b * d1 for a, b in zip(self.num, o.num)), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.ring, tuple(-a for a in self.num), self.den, _checked=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.ring.zero()
            return CycloElement(self.ring, tuple(a * other for a in self.num), self.den)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.num, o.num
        n = len(a)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        num = self.ring.reduce_int_poly(prod)
        den = self.den * o.den
        if den == 1:
            return CycloElement(self.ring, num, 1, _checked=True)
        return CycloElement(self.ring, num, den)

    __rmul__ = __mul__

    def inverse(self):
        return field_inverse(self)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * field_inverse(o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * field_inverse(self)

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return field_inverse(self) ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def to_complex(self):
        return to_complex_float(self)

    def to_json(self):
        return [[str(c.numerator), str(c.denominator)] for c in self.coords]


def zeta_power(ring: CycloRing, j: int) -> CycloElement:
    """zeta^j reduced modulo Phi_{2r}; j may be any integer."""
    j %= ring.order
    cached = ring._zeta_cache.get(j)
    if cached is not None:
        return cached
    coeffs = [0] * j + [1]
    el = CycloElement(ring, ring.reduce_int_poly(coeffs), 1, _checked=True)
    ring._zeta_cache[j] = el
    return el


def field_add(a, b):
    return a + b


def field_mul(a, b):
    return a * b


def field_neg(a):
    return -a


def field_inverse(a: CycloElement) -> CycloElement:
    """Inverse via the extended Euclidean algorithm against Phi_{2r} over Q."""
    if not a:
        raise ZeroInverseError("inverse of zero in cyclotomic field")
    ring = a.ring
    if a.is_rational():
        return ring.from_rational(Fraction(a.den, a.num[0]))
    # polynomials as Fraction lists, constant first
    def trim(p):
        while len(p) > 1 and p[-1] == 0:
            p.pop()
        return p

    def divmod_(n, d):
        n = list(n)
        q = [Fraction(0)] * max(len(n) - len(d) + 1, 1)
        inv = 1 / d[-1]
        for i in range(len(n) - len(d), -1, -1):
            c = n[i + len(d) - 1] * inv
            q[i] = c
            if c:
                for k in range(len(d)):
                    n[i + k] -= c * d[k]
        return trim(q), trim(n[: len(d) - 1] or [Fraction(0)])

    def sub_mul(x, q, y):
        # x - q*y
        prod = [Fraction(0)] * (len(q) + len(y) - 1)
        for i, qi in enumerate(q):
            if qi:
                for j, yj in enumerate(y):
                    prod[i + j] += qi * yj
        out = [Fraction(0)] * max(len(x), len(prod))
        for i, v in enumerate(x):
            out[i] += v
        for i, v in enumerate(prod):
            out[i] -= v
        return trim(out)

    r0 = [Fraction(c) for c in ring.phi_coeffs]
    r1 = trim([Fraction(c) for c in a.coords])
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while not (len(r1) == 1 and r1[0] == 0):
        q, rem = divmod_(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, sub_mul(s0, q, s1)
    # r0 is a nonzero constant since Phi is irreducible and deg a < deg Phi
    if len(r0) != 1:
        raise ArithmeticError("element shares a factor with the cyclotomic polynomial")
    c = r0[0]
    coords = [x / c for x in s0] + [Fraction(0)] * ring.degree
    return ring.element(coords[: ring.degree])


def to_complex_float(a: CycloElement) -> complex:
    """Floating evaluation at zeta = exp(i*pi/r); diagnostics only."""
    z = cmath.exp(1j * math.pi / a.ring.r)
    total = 0j
    for k, c in enumerate(a.num):
        if c:
            total += c * z ** k
    return total / a.den


def element_from_json(ring: CycloRing, data) -> CycloElement:
    try:
        if len(data) != ring.degree:
            raise SerializationError(f"coefficient vector length {len(data)} != {ring.degree}")
        return ring.element([Fraction(int(n), int(d)) for n, d in data])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SerializationError):
            raise
        raise SerializationError(f"bad cyclotomic coefficient {data!r}: {exc}") from exc
