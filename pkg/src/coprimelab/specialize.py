"""Seeded specialization trials for many polynomial pairs at once.

All pairs in a batch share the trial points: per trial every variable gets
a random nonzero integer in [-B, B].  For a pair (f, g) two shared
variables are kept; a trial passes when, for each kept variable v, the
univariate images of f and g in v (the other kept variable moved to a
second random value) are coprime modulo a prime splitting Phi_{2r} while
f keeps its full v-degree.  That proves gcd 1 for the specialized
bivariate pair, so "coprime (probabilistic)" is only probabilistic in the
choice of specialization.

Each polynomial is reduced once into a :class:`Sketch`; a pair trial is
then a few vectorized passes over the two term arrays.
"""
from __future__ import annotations

import random

import numpy as np

from .gcd import VERDICT_COPRIME, VERDICT_INCONCLUSIVE, VERDICT_NOT_COPRIME, coprime_specialized
from .laurent import LaurentPoly, monomial_content
from .modular import _powers, _trim, reduce_mod, split_primes, upoly_gcd_mod

DEFAULT_BOUND = 1 << 16


def default_prime(order):
    return split_primes(order)[0]


def trial_points(nvars, trials, seed, bound=DEFAULT_BOUND):
    """Per trial: (main point, alternate point), lists of nonzero ints in [-bound, bound]."""
    rng = random.Random(seed)
    out = []
    for _ in range(trials):
        pts = []
        for _ in range(2):
            pts.append([rng.randint(1, bound) * rng.choice((-1, 1)) for _ in range(nvars)])
        out.append(tuple(pts))
    return out


def choose_keep(shared, names, seed, pair_id):
    """Two shared variables, chosen reproducibly from the pair identity."""
    shared = sorted(shared)
    if len(shared) <= 2:
        return [names[i] for i in shared]
    rng = random.Random(f"{seed}:{pair_id}")
    return [names[i] for i in sorted(rng.sample(shared, 2))]


class Sketch:
    """Term values of one polynomial at every trial point, modulo one prime."""

    def __init__(self, f: LaurentPoly, points, p):
        F = monomial_content(f).polynomial_part
        self.p = p
        self.terms = len(F)
        self.constant = F.is_constant()
        img = reduce_mod(F, p)
        self.ok = img.ok
        occ = F.occurring()
        self.occ = set(occ)
        self.col = {v: i for i, v in enumerate(occ)}
        self.degs = {v: int(img.exps[:, v].max()) for v in occ}
        dtype = np.int16 if max(self.degs.values(), default=0) < 2 ** 15 else np.int64
        self.exps = img.exps[:, occ].astype(dtype)
        self.values = []
        for main, _ in points:
            vals = img.coeffs.copy()
            for v in occ:
                col = img.exps[:, v]
                vals = vals * _powers(main[v] % p, self.degs[v], p)[col] % p
            self.values.append(vals)
        del img

    def univariate(self, trial, v, u, points):
        """Dense image in v: non-kept variables at the main point, u at the alternate point."""
        p = self.p
        main, alt = points[trial]
        vals = self.values[trial]
        if u is not None and u in self.col:
            eu = self.exps[:, self.col[u]].astype(np.int64)
            ratio = alt[u] % p * pow(main[u] % p, -1, p) % p
            vals = vals * _powers(ratio, self.degs[u], p)[eu] % p
        if v not in self.col:
            return [int(vals.sum() % p)]
        ev = self.exps[:, self.col[v]].astype(np.int64)
        inv = pow(main[v] % p, -1, p)
        vals = vals * _powers(inv, self.degs[v], p)[ev] % p
        out = np.zeros(self.degs[v] + 1, dtype=np.int64)
        np.add.at(out, ev, vals)
        return [int(x) % p for x in out]


def pair_trial(sf: Sketch, sg: Sketch, keep_idx, trial, points):
    """True when the trial proves gcd 1 for the specialized pair."""
    p = sf.p
    for v in keep_idx:
        if v not in sf.occ or v not in sg.occ:
            continue
        others = [w for w in keep_idx if w != v]
        u = others[0] if others else None
        uf = _trim(sf.univariate(trial, v, u, points))
        if len(uf) - 1 != sf.degs[v]:
            return False
        ug = _trim(sg.univariate(trial, v, u, points))
        if len(upoly_gcd_mod(uf, ug, p)) != 1:
            return False
    return True


def specialized_verdict(sf, sg, names, keep_idx, points):
    """Verdict plus per-trial outcomes for one sketched pair (no exact fallback)."""
    if sf.constant or sg.constant:
        return VERDICT_COPRIME, ["unit"] * len(points)
    if not (sf.occ & sg.occ):
        return VERDICT_COPRIME, ["no shared variable"] * len(points)
    results = []
    for t in range(len(points)):
        results.append("gcd 1 (modular image)" if pair_trial(sf, sg, keep_idx, t, points)
                       else "image test failed")
    verdict = VERDICT_COPRIME if all(r.startswith("gcd 1") for r in results) else VERDICT_INCONCLUSIVE
    return verdict, results


def specialized_payload(names, keep, trials, seed, bound, p, verdict, results):
    return {"keep": list(keep), "trials": trials, "seed": seed, "bound": bound, "prime": p,
            "verdict": verdict, "trial_results": results, "nvars": len(names)}


def replay_specialized(f: LaurentPoly, g: LaurentPoly, payload) -> str:
    """Recompute the verdict of a specialization certificate from its payload."""
    names = f.table.names
    points = trial_points(len(names), payload["trials"], payload["seed"], payload["bound"])
    p = payload["prime"]
    sf, sg = Sketch(f, points, p), Sketch(g, points, p)
    keep_idx = [f.table.index[k] for k in payload["keep"]]
    verdict, _ = specialized_verdict(sf, sg, names, keep_idx, points)
    if verdict != VERDICT_COPRIME:
        verdict = coprime_specialized(f, g, payload["keep"], payload["trials"], payload["seed"],
                                      payload["bound"]).verdict
    return verdict


def batch_specialized(table, order, polys: dict, pairs, trials=4, seed=0, bound=DEFAULT_BOUND,
                      sketches=None):
    """Specialization verdicts for ``pairs`` of keys into ``polys``.

    ``order`` is 2r (the prime must split Phi_{2r}).  ``sketches`` may supply
    precomputed sketches for polynomials already released from memory
    (``polys[key]`` is then None).  Pairs whose fast trial fails fall back
    to the exact-checking :func:`coprime_specialized` when both polynomials
    are available.  Returns {pair: (verdict, keep, results, prime)}.
    """
    sketches = dict(sketches or {})
    names = table.names
    p = default_prime(order)
    points = trial_points(len(names), trials, seed, bound)
    for key, f in polys.items():
        if key not in sketches and f is not None:
            sketches[key] = Sketch(f, points, p)
    out = {}
    for a, b in pairs:
        sf, sg = sketches[a], sketches[b]
        shared = sf.occ & sg.occ
        keep = choose_keep(shared, names, seed, f"{a}|{b}")
        keep_idx = [table.index[k] for k in keep]
        if not (sf.ok and sg.ok):
            verdict, results = VERDICT_INCONCLUSIVE, ["denominator vanishes mod p"]
        else:
            verdict, results = specialized_verdict(sf, sg, names, keep_idx, points)
        if verdict != VERDICT_COPRIME and polys.get(a) is not None and polys.get(b) is not None and keep:
            v = coprime_specialized(polys[a], polys[b], keep, trials, seed, bound)
            verdict, results = v.verdict, v.trial_results
        out[(a, b)] = (verdict, keep, results, p)
    return out


__all__ = ["Sketch", "batch_specialized", "replay_specialized", "trial_points",
           "VERDICT_COPRIME", "VERDICT_NOT_COPRIME", "VERDICT_INCONCLUSIVE"]
