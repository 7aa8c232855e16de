"""Images of polynomials modulo a prime that splits Phi_{2r}.

For a prime p = 1 (mod 2r) and a root w of Phi_{2r} mod p, zeta -> w is a
ring map from the p-integral part of Q(zeta) onto GF(p).  Specializing all
but one variable at a point keeping deg_v f intact gives a univariate image
whose gcd bounds the v-degree of any common factor.  Checking every shared
variable yields an exact coprimality certificate.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .laurent import LaurentPoly, monomial_content

PRIME_CEILING = 1 << 31


def _is_prime(n):
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n):
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def split_primes(order, count=4):
    """The ``count`` largest primes below 2^31 congruent to 1 mod ``order``."""
    out = []
    n = (PRIME_CEILING - 1) // order * order + 1
    if n >= PRIME_CEILING:
        n -= order
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= order
    return tuple(out)


@lru_cache(maxsize=None)
def primitive_root_of_unity(order, p):
    """An element of exact multiplicative order ``order`` in GF(p)."""
    qs = _prime_factors(order)
    for a in range(2, p):
        w = pow(a, (p - 1) // order, p)
        if all(pow(w, order // q, p) != 1 for q in qs):
            return w
    raise ValueError("no primitive root found")


@dataclass
class ModImage:
    """Coefficients and exponent matrix of a polynomial part reduced mod p."""

    p: int
    coeffs: np.ndarray          # int64 in [0, p)
    exps: np.ndarray            # terms x nvars, int64, all >= 0
    ok: bool = True             # False when a denominator vanished mod p


def reduce_mod(f: LaurentPoly, p: int) -> ModImage:
    """Image of f (not content-split) in GF(p)[x]; requires den invertible mod p."""
    keys = list(f.keys())
    exps = f.table.unpack_many(keys)
    if f.den % p == 0:
        return ModImage(p, np.zeros(0, np.int64), exps, ok=False)
    dinv = pow(f.den, -1, p)
    if f.ring is None or f.is_rational():
        c0 = f.comps[0]
        vals = [c0.get(k, 0) % p for k in keys]
    else:
        w = primitive_root_of_unity(f.ring.order, p)
        wp = [pow(w, a, p) for a in range(f.ring.degree)]
        vals = []
        for k in keys:
            s = 0
            for a, comp in enumerate(f.comps):
                v = comp.get(k)
                if v:
                    s += v * wp[a]
            vals.append(s % p)
    coeffs = np.array(vals, dtype=np.int64) * dinv % p
    return ModImage(p, coeffs, exps)


def _powers(val, emax, p):
    out = np.empty(emax + 1, dtype=np.int64)
    out[0] = 1
    for i in range(1, emax + 1):
        out[i] = out[i - 1] * val % p
    return out


def univariate_image(img: ModImage, v: int, point) -> list:
    """Dense coefficient list (low first) in variable ``v`` after specializing the others.

    ``point`` maps variable index -> residue for every other occurring variable.
    """
    p = img.p
    vals = img.coeffs.copy()
    exps = img.exps
    for i, a in point.items():
        if i == v:
            continue
        col = exps[:, i]
        emax = int(col.max()) if len(col) else 0
        if emax == 0:
            continue
        table = _powers(a % p, emax, p)
        vals = vals * table[col] % p
    col = exps[:, v]
    deg = int(col.max()) if len(col) else 0
    out = np.zeros(deg + 1, dtype=np.int64)
    np.add.at(out, col, vals)
    return [int(x) % p for x in out]


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def upoly_gcd_mod(a, b, p):
    """Monic gcd of dense univariate polynomials over GF(p)."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], -1, p)
        db = len(b) - 1
        while len(a) - 1 >= db and a:
            c = a[-1] * inv % p
            shift = len(a) - 1 - db
            if c:
                for i in range(db + 1):
                    a[shift + i] = (a[shift + i] - c * b[i]) % p
            a.pop()
            _trim(a)
        a, b = b, a
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


@dataclass
class CoprimeCertificate:
    """Outcome of :func:`certify_coprime`; ``proved`` is an exact statement."""

    proved: bool
    prime: int | None = None
    points: dict = field(default_factory=dict)   # variable name -> point used
    reason: str = ""

    def to_dict(self):
        return {"proved": self.proved, "prime": self.prime,
                "points": {k: list(v) for k, v in self.points.items()}, "reason": self.reason}


def _deg_in(img, v):
    col = img.exps[:, v]
    return int(col.max()) if len(col) else 0


def certify_coprime(f: LaurentPoly, g: LaurentPoly, seed=0, attempts=3) -> CoprimeCertificate:
    """Try to prove that the polynomial parts of f and g share no nonconstant factor.

    Sound: ``proved=True`` is a proof.  ``proved=False`` means inconclusive.
    """
    F = monomial_content(f).polynomial_part
    G = monomial_content(g).polynomial_part
    if F.is_constant() or G.is_constant():
        return CoprimeCertificate(True, reason="unit operand")
    common = sorted(set(F.occurring()) & set(G.occurring()))
    if not common:
        return CoprimeCertificate(True, reason="no shared variable")
    order = F.ring.order if F.ring is not None else (G.ring.order if G.ring is not None else 2)
    rng = random.Random(seed)
    for p in split_primes(order):
        fi, gi = reduce_mod(F, p), reduce_mod(G, p)
        if not (fi.ok and gi.ok):
            continue
        occ = sorted(set(F.occurring()) | set(G.occurring()))
        points = {}
        done = True
        for v in common:
            target = _deg_in(fi, v)
            for _ in range(attempts):
                point = {i: rng.randrange(1, p) for i in occ if i != v}
                uf = _trim(univariate_image(fi, v, point))
                if len(uf) - 1 == target:
                    break
            else:
                done = False
                break
            ug = _trim(univariate_image(gi, v, point))
            gcd = upoly_gcd_mod(uf, ug, p)
            if len(gcd) != 1:
                done = False
                break
            name = F.table.names[v]
            points[name] = [point[i] for i in sorted(point)]
        if done:
            return CoprimeCertificate(True, p, points, "univariate images coprime")
        # a nontrivial image gcd is usually a genuine common factor; stop early
        return CoprimeCertificate(False, p, points, "image gcd nontrivial or degree drop")
    return CoprimeCertificate(False, reason="no usable prime")


def evaluate_mod(f: LaurentPoly, point, p):
    """Value of f at ``point`` (variable index -> residue), all residues nonzero."""
    img = reduce_mod(f, p)
    if not img.ok:
        raise ZeroDivisionError("denominator vanishes mod p")
    vals = img.coeffs.copy()
    exps = img.exps
    for i in range(exps.shape[1]):
        col = exps[:, i]
        if not col.any():
            continue
        a = point[i] % p
        lo, hi = int(col.min()), int(col.max())
        if lo < 0:
            a_inv = pow(a, -1, p)
            neg = _powers(a_inv, -lo, p)
        else:
            neg = None
        pos = _powers(a, max(hi, 0), p)
        tab = np.where(col >= 0, pos[np.clip(col, 0, None)],
                       neg[np.clip(-col, 0, None)] if neg is not None else 0)
        vals = vals * tab % p
    return int(vals.sum() % p) if len(vals) else 0


def element_mod(c, p):
    """Image of a rational number or cyclotomic element in GF(p)."""
    from fractions import Fraction

    if hasattr(c, "ring"):
        w = primitive_root_of_unity(c.ring.order, p)
        s = sum(x * pow(w, a, p) for a, x in enumerate(c.num))
        return s * pow(c.den, -1, p) % p
    c = Fraction(c)
    return c.numerator * pow(c.denominator, -1, p) % p
