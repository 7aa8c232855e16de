"""Low-level kernels on sparse coefficient dicts keyed by packed monomials.

A dict maps a packed monomial (a Python int, see :class:`VariableTable`)
to a nonzero int or Fraction.  Multiplying monomials is adding keys and
subtracting the bias, so the kernels only ever touch integers.
"""
from fractions import Fraction
from heapq import heapify, heappop, heappush

from .errors import BudgetExceeded, DivisionNotExact


def dmul(a, b, bias):
    """Product of two coefficient dicts."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    if len(a) == 1:
        (ka, ca), = a.items()
        off = ka - bias
        if ca == 1:
            return {kb + off: cb for kb, cb in b.items()}
        return {kb + off: cb * ca for kb, cb in b.items()}
    acc = {}
    get = acc.get
    bl = list(b.items())
    for ka, ca in a.items():
        off = ka - bias
        for kb, cb in bl:
            k = kb + off
            acc[k] = get(k, 0) + ca * cb
    return {k: v for k, v in acc.items() if v}


def dsqr(a, bias):
    """Square of a coefficient dict; uses the symmetry of the product."""
    items = list(a.items())
    n = len(items)
    if n <= 1:
        return dmul(a, a, bias)
    acc = {}
    get = acc.get
    for i in range(n):
        ka, ca = items[i]
        k = ka + ka - bias
        acc[k] = get(k, 0) + ca * ca
        off = ka - bias
        c2 = 2 * ca
        for j in range(i + 1, n):
            kb, cb = items[j]
            k = kb + off
            acc[k] = get(k, 0) + c2 * cb
    return {k: v for k, v in acc.items() if v}


def dadd_into(acc, a, scale=1):
    """acc += scale * a, in place; zero results are removed."""
    if not scale:
        return acc
    get = acc.get
    pop = acc.pop
    for k, c in a.items():
        v = get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            pop(k, None)
    return acc


def dscale(a, c):
    if c == 1:
        return dict(a)
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def dshift(a, off):
    """Multiply every key by the monomial whose key offset is ``off``."""
    return {k + off: v for k, v in a.items()}


def ddivexact(f, g, bias, tops, max_terms=None):
    """Exact quotient f / g of coefficient dicts, graded-lex leading-term reduction.

    ``tops`` is the mask of field sign bits; a key difference is a valid
    monomial iff all of them are set.  Raises DivisionNotExact as soon as
    the leading remainder term is not divisible by the leading monomial of g.
    """
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    if not f:
        return {}
    lm = max(g)
    lc = g[lm]
    rest = [(k - lm, c) for k, c in g.items() if k != lm]
    if not rest:
        off = bias - lm
        out = {}
        for k, c in f.items():
            d = k + off
            if d & tops != tops:
                raise DivisionNotExact("monomial division leaves a Laurent remainder")
            out[d] = _qdiv(c, lc)
        return out
    rem = dict(f)
    heap = [-k for k in rem]
    heapify(heap)
    quot = {}
    get = rem.get
    lm_off = bias - lm
    int_lc = type(lc) is int
    while heap:
        k = -heappop(heap)
        c = rem.pop(k, 0)
        if not c:
            continue
        d = k + lm_off
        if d & tops != tops:
            raise DivisionNotExact(
                "remainder term not divisible by the leading monomial",
                {"quotient_terms": len(quot), "remaining_terms": len(rem) + 1},
            )
        if lc == 1:
            qc = c
        elif int_lc and type(c) is int and c % lc == 0:
            qc = c // lc
        else:
            qc = Fraction(c) / lc
        quot[d] = qc
        if max_terms is not None and len(quot) > max_terms:
            raise BudgetExceeded(f"quotient exceeds {max_terms} terms")
        for off, gc in rest:
            nk = k + off
            v = get(nk)
            if v is None:
                rem[nk] = -qc * gc
                heappush(heap, -nk)
            else:
                rem[nk] = v - qc * gc
    return quot


def _qdiv(c, lc):
    if lc == 1:
        return c
    if type(c) is int and type(lc) is int and c % lc == 0:
        return c // lc
    return Fraction(c) / lc


def ddivexact_vec(f, g, lc_den, bias, tops, max_terms=None):
    """Exact division with vector coefficients (power-basis coordinates).

    ``f`` maps keys to coordinate lists; ``g`` maps keys to lists of sparse
    multiplication entries (out_index, in_index, value) describing
    x -> x * g_coeff.  The leading coefficient of g must be the rational
    integer ``lc_den`` so that each quotient step is a plain scaling.
    """
    if not f:
        return {}
    lm = max(g)
    rest = [(k - lm, ents) for k, ents in g.items() if k != lm]
    rem = {k: list(v) for k, v in f.items()}
    heap = [-k for k in rem]
    heapify(heap)
    quot = {}
    get = rem.get
    lm_off = bias - lm
    width = len(next(iter(rem.values())))
    while heap:
        k = -heappop(heap)
        c = rem.pop(k, None)
        if c is None or not any(c):
            continue
        d = k + lm_off
        if d & tops != tops:
            raise DivisionNotExact(
                "remainder term not divisible by the leading monomial",
                {"quotient_terms": len(quot), "remaining_terms": len(rem) + 1},
            )
        if lc_den != 1:
            c = [_qdiv(x, lc_den) for x in c]
        quot[d] = c
        if max_terms is not None and len(quot) > max_terms:
            raise BudgetExceeded(f"quotient exceeds {max_terms} terms")
        for off, ents in rest:
            nk = k + off
            v = get(nk)
            if v is None:
                v = [0] * width
                rem[nk] = v
                heappush(heap, -nk)
            for b, a, m in ents:
                x = c[a]
                if x:
                    v[b] -= m * x
    return quot
