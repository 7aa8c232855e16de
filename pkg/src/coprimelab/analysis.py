"""Degree series, degree-only recursions and algebraic-entropy estimates."""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field

from .errors import ConfigError

INTEGRABLE_TOLERANCE = 0.02


@dataclass
class DegreeSeries:
    """Rows (t or n, deg p, deg q, d = deg p - deg q) of one run."""

    system: str
    params: str
    entries: list = field(default_factory=list)
    status: str = "exact"          # "exact" or "predicted"
    violations: list = field(default_factory=list)

    def d_values(self):
        return [e[3] for e in self.entries]

    def index(self):
        return [e[0] for e in self.entries]

    def window(self, lo, hi):
        return DegreeSeries(self.system, self.params,
                            [e for e in self.entries if lo <= e[0] <= hi], self.status)

    def as_dict(self):
        return {e[0]: e[1:] for e in self.entries}


@dataclass
class EntropyEstimate:
    growth_ratio: float
    entropy: float
    fit_window: tuple
    residual: float
    classification: str

    def to_dict(self):
        return {"growth_ratio": self.growth_ratio, "entropy": self.entropy,
                "fit_window": list(self.fit_window), "residual": self.residual,
                "classification": self.classification}


# ------------------------------------------------------------ simple system
def simple_predicted_degrees(r, N):
    """deg p_n for 0 <= n <= N: p_2 = r, p_3 = r^2, then d_n = r d_{n-1} - d_{n-2}."""
    out = {0: 1, 1: 1}
    if N >= 2:
        out[2] = r
    if N >= 3:
        out[3] = r * r
    for n in range(4, N + 1):
        out[n] = r * out[n - 1] - out[n - 2]
    return out


def simple_predicted_q(r, N):
    """Exponents (a_n, b_n) of q_n = y0^a y1^b, with a_n = r a_{n-1} - a_{n-2} for n >= 4."""
    out = {0: (0, 0), 1: (0, 0)}
    if N >= 2:
        out[2] = (1, 0)
    if N >= 3:
        out[3] = (r, 1)
    for n in range(4, N + 1):
        a1, b1 = out[n - 1]
        a2, b2 = out[n - 2]
        out[n] = (r * a1 - a2, r * b1 - b2)
    return out


# ------------------------------------------------- degree-only recursions
def _m_add(*vs):
    return tuple(map(sum, zip(*vs)))


def _m_lcm(*vs):
    return tuple(map(max, zip(*vs)))


def _step(terms, divisor, nv):
    """Degree-only p/q step; terms are lists of (deg_p, q, e); divisor (deg_p, q, unit_mono)."""
    qts = [_m_add(*[tuple(e * x for x in q) for (_, q, e) in term]) for term in terms]
    L = _m_lcm(*qts)
    dp = max(sum(L) - sum(qt) + sum(e * d for (d, _, e) in term) for term, qt in zip(terms, qts))
    ddp, dq, unit_mono = divisor
    if unit_mono is not None:
        q = tuple(a + b - c for a, b, c in zip(L, unit_mono, dq))
    else:
        q = tuple(a - c for a, c in zip(L, dq))
        dp -= ddp
    return dp, q


def toda1d_degree_recursion(spec, t_max, half_width=None):
    """Predicted (deg p, q) of the 1D Toda lattice at the window centre, t <= t_max.

    Uses only the monomial LCM bookkeeping of the p/q recurrence plus the
    no-cancellation assumption; values are labelled "predicted".
    """
    a_exp, b_exp, c_exp = spec.exponents
    w = half_width if half_width is not None else t_max + 1
    ns = list(range(-w, w + 1))
    idx = {}
    for t in (0, 1):
        for n in ns:
            idx[(t, n)] = len(idx)
    nv = len(idx)
    zero = (0,) * nv
    rec = {}
    for t in (0, 1):
        for n in ns:
            rec[(t, n)] = (1, zero)
    for t in range(2, t_max + 1):
        for n in ns[t - 1: len(ns) - (t - 1)]:
            up, dn, mid, d = rec[(t - 1, n + 1)], rec[(t - 1, n - 1)], rec[(t - 1, n)], rec[(t - 2, n)]
            unit = None
            if t - 2 <= 1:
                unit = tuple(1 if i == idx[(t - 2, n)] else 0 for i in range(nv))
            rec[(t, n)] = _step([[(up[0], up[1], a_exp), (dn[0], dn[1], b_exp)],
                                 [(mid[0], mid[1], c_exp)]], (d[0], d[1], unit), nv)
    return {t: (rec[(t, 0)][0], sum(rec[(t, 0)][1])) for t in range(2, t_max + 1) if (t, 0) in rec}


def somos4_degree_recursion(spec, N):
    a_exp, b_exp, c_exp = spec.exponents
    nv = 4
    zero = (0,) * nv
    rec = {i: (1, zero) for i in range(4)}
    for n in range(4, N + 1):
        x1, x3, x2, x4 = rec[n - 1], rec[n - 3], rec[n - 2], rec[n - 4]
        unit = tuple(1 if i == n - 4 else 0 for i in range(nv)) if n - 4 <= 3 else None
        rec[n] = _step([[(x1[0], x1[1], a_exp), (x3[0], x3[1], b_exp)], [(x2[0], x2[1], c_exp)]],
                       (x4[0], x4[1], unit), nv)
    return {n: (rec[n][0], sum(rec[n][1])) for n in range(4, N + 1)}


# ----------------------------------------------------------------- series
def degree_series_predicted(spec, N) -> DegreeSeries:
    """Degree series from the degree-only recursions; O(N) for the simple system."""
    kind = spec.kind
    if kind == "simple":
        r = spec["r"]
        dp = simple_predicted_degrees(r, N)
        dq = simple_predicted_q(r, N)
        entries = [(n, dp[n], sum(dq[n]), dp[n] - sum(dq[n])) for n in range(2, N + 1)]
        return DegreeSeries("simple", spec.label(), entries, "exact-recursion")
    if kind == "toda1d":
        vals = toda1d_degree_recursion(spec, N)
        entries = [(t, p, q, p - q) for t, (p, q) in sorted(vals.items())]
        return DegreeSeries("toda1d", spec.label(), entries, "predicted")
    if kind == "somos4ext":
        vals = somos4_degree_recursion(spec, N)
        entries = [(n, p, q, p - q) for n, (p, q) in sorted(vals.items())]
        return DegreeSeries("somos4ext", spec.label(), entries, "predicted")
    raise ConfigError(f"no degree recursion for {kind}", "/system")


def degree_series_exact(store) -> DegreeSeries:
    """Degrees read off computed iterates; monotonicity violations are recorded.

    Lattice slices must have one degree for all sites (recorded otherwise).
    """
    if not store.records:
        raise ValueError("empty store")
    spec = store.spec
    by_t = {}
    for site, rec in store.records.items():
        if rec.meta.get("initial"):
            continue
        by_t.setdefault(site[0], []).append(rec)
    series = DegreeSeries(spec.kind, spec.label())
    for t in sorted(by_t):
        recs = by_t[t]
        dps = {r.deg_p for r in recs}
        dqs = {r.deg_q for r in recs}
        if len(dps) > 1 or len(dqs) > 1:
            series.violations.append({"index": t, "check": "site-independent degree",
                                      "deg_p": sorted(dps), "deg_q": sorted(dqs)})
        dp, dq = max(dps), max(dqs)
        if any(r.p is None for r in recs):
            series.status = "exact+factored"
        series.entries.append((t, dp, dq, dp - dq))
    _record_monotonicity(series, spec.kind)
    return series


def _record_monotonicity(series, kind):
    prev = None
    for e in series.entries:
        idx, dp, dq, d = e
        if not dp > dq:
            series.violations.append({"index": idx, "check": "deg p > deg q"})
        if not dq > 0:
            series.violations.append({"index": idx, "check": "deg q > 0"})
        if prev is not None:
            if not dp > prev[1]:
                series.violations.append({"index": idx, "check": "deg p increasing"})
            if kind == "toda1d" and not d > prev[3]:
                series.violations.append({"index": idx, "check": "d increasing"})
        prev = e


# ----------------------------------------------------------------- entropy
def entropy_estimate(series: DegreeSeries) -> EntropyEstimate:
    """Geometric mean of the last ceil(L/2) successive ratios of d."""
    d = series.d_values()
    if len(d) < 6:
        raise ValueError("series too short for an entropy fit (need >= 6 entries)")
    if any(x <= 0 for x in d):
        raise ValueError("degree differences must be positive")
    ratios = [d[i + 1] / d[i] for i in range(len(d) - 1)]
    k = math.ceil(len(ratios) / 2)
    tail = ratios[-k:]
    growth = math.exp(sum(math.log(x) for x in tail) / k)
    residual = max(abs(x - growth) for x in tail)
    idx = series.index()
    window = (idx[len(idx) - 1 - k], idx[-1])
    integrable = abs(growth - 1.0) <= INTEGRABLE_TOLERANCE
    entropy = 0.0 if integrable else max(math.log(growth), 0.0)
    cls = "integrable (zero entropy)" if integrable else "nonintegrable (positive entropy)"
    return EntropyEstimate(growth, entropy, window, residual, cls)


# ------------------------------------------------------------------ report
CSV_COLUMNS = ("system", "params", "t_or_n", "deg_p", "deg_q", "d", "ratio")


def _fmt_ratio(x):
    return "" if x is None else f"{x:.12f}"


def series_rows(series: DegreeSeries):
    rows = []
    prev = None
    for idx, dp, dq, d in series.entries:
        ratio = None if prev is None or prev == 0 else d / prev
        rows.append((series.system, series.params, idx, dp, dq, d, _fmt_ratio(ratio)))
        prev = d
    return rows


def report_csv(series_list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for s in series_list:
        w.writerows(series_rows(s))
    return buf.getvalue()


def report_json(series_list, estimates=None, certificates=None, config=None) -> str:
    estimates = estimates or {}
    out = []
    for s in series_list:
        key = f"{s.system}[{s.params}]"
        est = estimates.get(key)
        out.append({
            "system": s.system,
            "params": s.params,
            "status": s.status,
            "series": [dict(zip(CSV_COLUMNS[2:], row[2:])) for row in series_rows(s)],
            "violations": s.violations,
            "entropy": est.to_dict() if est is not None else None,
        })
    doc = {"runs": out, "certificates": certificates or {}, "config": config}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report_emit(series_list, estimates=None, certificates=None, out_dir=".", config=None, stem="degrees"):
    """Write ``{stem}.csv`` and ``{stem}.json``; identical inputs give identical bytes."""
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    json_path = os.path.join(out_dir, f"{stem}.json")
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(report_csv(series_list))
    with open(json_path, "w", encoding="utf-8") as fh:
        fh.write(report_json(series_list, estimates, certificates, config))
    return csv_path, json_path


def series_key(series):
    return f"{series.system}[{series.params}]"
