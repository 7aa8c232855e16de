"""Command-line entry point: ``coprimelab {run,factor,verify,entropy,somos,replay}``.

Exit status: 0 when every check and certificate passes, 2 when a
falsification is found (a failed check, a failed or tampered certificate),
1 for operational errors.  Errors are printed to stderr as one JSON object.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from collections import Counter
from fractions import Fraction

from . import analysis
from .cache import IterateCache
from .certificates import verify_log, write_log
from .config import MODES, SYSTEMS, RunConfig, config_from_dict
from .engines import (Budget, simple_iterate, somos4_iterate, somos4_numeric, toda1d_iterate,
                      toda2d_iterate, laurent_check, site_key)
from .errors import BudgetExceeded, CoprimeLabError, DivisionNotExact

EXIT_OK, EXIT_ERROR, EXIT_FALSIFIED = 0, 1, 2


class UsageError(CoprimeLabError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*a, **kw)

    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ config
_FLAG_KEYS = ("r", "m", "l", "k", "M", "L", "K", "k1", "k2", "l1", "l2", "n", "t_max", "seed",
              "degree_budget", "trials")


def _add_config_flags(p):
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--system", choices=SYSTEMS)
    for key in _FLAG_KEYS:
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=int)
    p.add_argument("--window", type=int, nargs="+", help="n_min n_max [m_min m_max]")
    p.add_argument("--modes", nargs="+", choices=MODES)
    p.add_argument("--out", help="output directory (default: out)")
    p.add_argument("--dsl-text", dest="dsl_text", help="recurrence, e.g. 'y[n] = (y[n-1]^2 + 1)/y[n-2]'")


def config_from_args(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            from .errors import ConfigError
            raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "") from exc
        if not isinstance(data, dict):
            from .errors import ConfigError
            raise ConfigError("config must be a JSON object", "")
    for key in _FLAG_KEYS + ("system", "window", "modes", "out", "dsl_text"):
        v = getattr(args, key, None)
        if v is not None:
            data[key] = v
    return config_from_dict(data)


def report_config(cfg: RunConfig):
    """Config as echoed into reports: everything but the output directory."""
    d = cfg.to_dict()
    d.pop("out", None)
    return d


# ------------------------------------------------------------------ output
def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(out_dir, name, text, written):
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    written.append(name)


def _sha(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _write_manifest(cfg, command, out_dir, written, options=None):
    manifest = {"command": command, "config": report_config(cfg), "options": options or {},
                "outputs": {name: _sha(os.path.join(out_dir, name)) for name in sorted(written)}}
    with open(os.path.join(out_dir, f"{command}-manifest.json"), "w", encoding="utf-8") as fh:
        fh.write(_dump(manifest))


# --------------------------------------------------------------- iteration
def _extent(cfg):
    return cfg.t_max if cfg.is_lattice else cfg.n


def _feasible_extent(cfg):
    """Largest n (or t) whose predicted degree fits the degree budget."""
    want = _extent(cfg)
    if cfg.system in ("toda2d", "dsl"):
        return want
    series = analysis.degree_series_predicted(cfg.spec(), want)
    last = None
    for idx, dp, _, _ in series.entries:
        if dp > cfg.degree_budget:
            break
        last = idx
    return last


def iterate(cfg: RunConfig, extent=None):
    budget = Budget(degree=cfg.degree_budget)
    spec = None if cfg.system == "dsl" else cfg.spec()
    extent = extent if extent is not None else _extent(cfg)
    if cfg.system == "simple":
        return simple_iterate(spec["r"], extent, budget)
    if cfg.system == "somos4ext":
        return somos4_iterate(spec, extent, budget)
    if cfg.system == "toda1d":
        w = cfg.lattice_window()
        return toda1d_iterate(spec, type(w)(w.n_min, w.n_max, extent), budget)
    if cfg.system == "toda2d":
        w = cfg.lattice_window()
        return toda2d_iterate(spec, type(w)(w.n_min, w.n_max, extent, w.m_min, w.m_max), budget)
    from .generic import generic_iterate
    if cfg.is_lattice:
        w = cfg.lattice_window()
        return generic_iterate(cfg.dsl_text, window=w, budget=budget, seed=cfg.seed)
    return generic_iterate(cfg.dsl_text, N=extent, budget=budget, seed=cfg.seed)


def _iterate_with_budget(cfg):
    """(store, truncated) -- stops at the last extent within the degree budget."""
    ext = _feasible_extent(cfg)
    if ext is None:
        raise BudgetExceeded(f"degree budget {cfg.degree_budget} is below the first iterate's degree")
    return iterate(cfg, ext), ext < _extent(cfg)


def _store_summary(store, cfg):
    lc = laurent_check(store)
    events = [e for e in store.events if not e.get("ok", True)]
    series = analysis.degree_series_exact(store)
    summary = {"sites": len(store.records), "laurent": lc.to_dict(), "events": events,
               "deferred_sites": sorted(list(s) for s, r in store.records.items() if r.p is None)}
    # monotonicity is a claim only for the named systems
    bad = bool(lc.failed or events)
    if cfg.system == "dsl":
        summary["note"] = "user recurrence: checks are reported, no claim is made"
        bad = False
    return summary, series, bad


# ---------------------------------------------------------------- commands
def cmd_run(args):
    cfg = config_from_args(args)
    out = cfg.out
    store, truncated = _iterate_with_budget(cfg)
    cache_dir = IterateCache(os.path.join(out, "cache")).save(store, config=report_config(cfg))
    summary, series, bad = _store_summary(store, cfg)
    written = []
    report = {"command": "run", "config": report_config(cfg), "summary": summary,
              "degrees": [list(e) for e in series.entries], "violations": series.violations,
              "truncated_by_budget": truncated}
    _write(out, "run.json", _dump(report), written)
    _write_manifest(cfg, "run", out, written)
    print(f"run: {summary['sites']} sites, laurent {summary['laurent']['passed']} passed, "
          f"{len(summary['laurent']['failed'])} failed; cache {cache_dir}")
    if truncated:
        raise BudgetExceeded(f"stopped at extent {_feasible_extent(cfg)} (degree budget "
                             f"{cfg.degree_budget}); partial cache retained in {cache_dir}")
    return EXIT_FALSIFIED if bad else EXIT_OK


def build_factor_certificates(cfg: RunConfig, store):
    """(factor sets, certificates, checks summary) for the configured system."""
    from . import factors as fx
    system = cfg.system
    sets = {}
    certs = []
    if system == "simple":
        sets = fx.simple_factors(cfg.params["r"], cfg.n, store)
    elif system == "somos4ext":
        sets = fx.somos4_factors(cfg.spec(), cfg.n, store)
    elif system == "toda1d":
        if not cfg.spec().factorizable:
            raise UsageError("factor needs the factorizable toda1d form (r, m, l, k)")
        sets = fx.toda1d_factors(cfg.spec(), store, seed=cfg.seed, trials=cfg.trials)
    elif system == "toda2d":
        certs = fx.toda2d_pair_certificates(store, seed=cfg.seed, trials=cfg.trials)
        return sets, certs, {"pairs": len(certs)}
    else:
        raise UsageError(f"factor tracking is not available for system {system}")
    certs.extend(fx.all_certificates(sets))
    for mode in cfg.modes:
        if mode == "identity":
            continue  # already part of every factor set
        certs.extend(fx.verify_pairwise_coprime(sets, mode, seed=cfg.seed, trials=cfg.trials))
    checks = {site_key(s): fs.meta.get("checks", {}) for s, fs in sorted(sets.items())}
    if system == "toda1d":
        # the neighbour-free form of the factor recursion; recorded, never fatal
        rows = fx.vertical_recursion_check(sets, store, cfg.params["r"])
        for s, row in rows.items():
            key = site_key(s)
            checks[key] = dict(checks[key], neighbour_free_recursion=row)
    return sets, certs, checks


def cmd_factor(args):
    cfg = config_from_args(args)
    out = cfg.out
    store, truncated = _iterate_with_budget(cfg)
    sets, certs, checks = build_factor_certificates(cfg, store)
    written = []
    log = os.path.join(out, "certs.jsonl")
    os.makedirs(out, exist_ok=True)
    write_log(certs, log)
    written.append("certs.jsonl")
    falsified = sorted(fs_site for fs_site, fs in sets.items() if fs.meta.get("falsified"))
    failed = [i for i, c in enumerate(certs, 1) if not c.ok]
    lc = laurent_check(store, sets)
    report = {"command": "factor", "config": report_config(cfg),
              "factor_sets": [fs.summary() for _, fs in sorted(sets.items())],
              "checks": checks, "laurent": lc.to_dict(),
              "certificates": {"total": len(certs), "failed_lines": failed,
                               "kinds": dict(sorted(Counter(c.kind for c in certs).items()))},
              "falsified_sites": [list(s) for s in falsified], "truncated_by_budget": truncated}
    _write(out, "factors.json", _dump(report), written)
    _write_manifest(cfg, "factor", out, written)
    print(f"factor: {len(sets)} factor sets, {len(certs)} certificates, {len(failed)} failed; log {log}")
    if truncated:
        raise BudgetExceeded("run truncated by the degree budget")
    return EXIT_FALSIFIED if (failed or falsified or lc.failed) else EXIT_OK


def cmd_verify(args):
    rep = verify_log(args.log)
    print(json.dumps(rep.to_dict(), sort_keys=True))
    return EXIT_FALSIFIED if rep.falsified else EXIT_OK


def cmd_entropy(args):
    cfg = config_from_args(args)
    if cfg.system in ("toda2d", "dsl"):
        raise UsageError("entropy needs a system with a degree-only recursion "
                         "(simple, toda1d, somos4ext)")
    series = analysis.degree_series_predicted(cfg.spec(), _extent(cfg))
    est = analysis.entropy_estimate(series)
    runs = [series]
    if args.exact:
        store, _ = _iterate_with_budget(cfg)
        runs.append(analysis.degree_series_exact(store))
    written = []
    estimates = {analysis.series_key(series): est}
    _write(cfg.out, "degrees.csv", analysis.report_csv(runs), written)
    _write(cfg.out, "degrees.json", analysis.report_json(runs, estimates, None, report_config(cfg)), written)
    _write_manifest(cfg, "entropy", cfg.out, written, {"exact": bool(args.exact)})
    print(json.dumps(est.to_dict(), sort_keys=True))
    return EXIT_OK


def _fmt_number(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def cmd_somos(args):
    if args.terms < 1:
        raise UsageError("--terms must be >= 1")
    params = tuple(args.params) if args.params else (1, 1, 1, 2)
    seq = somos4_numeric(args.terms, tuple(args.initial), params)
    print(",".join(_fmt_number(x) for x in seq))
    return EXIT_OK


_COMMANDS = {"run": cmd_run, "factor": cmd_factor, "entropy": cmd_entropy}


def cmd_replay(args):
    """Re-execute the command recorded in a manifest and compare every output byte for byte."""
    try:
        with open(args.manifest, encoding="utf-8") as fh:
            manifest = json.load(fh)
        command, cfg_dict, outputs = manifest["command"], manifest["config"], manifest["outputs"]
        options = manifest.get("options", {})
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"unreadable manifest: {exc}") from exc
    if command not in _COMMANDS:
        raise UsageError(f"manifest command {command!r} cannot be replayed")
    out = args.out or tempfile.mkdtemp(prefix="coprimelab-replay-")
    cfg_dict = dict(cfg_dict, out=out)
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(cfg_dict, fh)
        cfg_path = fh.name
    try:
        sub = build_parser().parse_args([command, "--config", cfg_path]
                                        + (["--exact"] if options.get("exact") else []))
        status = _COMMANDS[command](sub)
    finally:
        os.unlink(cfg_path)
    mismatched = sorted(name for name, h in outputs.items()
                        if not os.path.exists(os.path.join(out, name)) or _sha(os.path.join(out, name)) != h)
    print(json.dumps({"replayed": command, "out": out, "outputs": len(outputs),
                      "mismatched": mismatched, "status": status}, sort_keys=True))
    if mismatched:
        return EXIT_FALSIFIED
    return status


# ------------------------------------------------------------------ parser
def build_parser():
    p = _Parser(prog="coprimelab", description="Exact iteration, factor tracking and coprimeness "
                                                  "certificates for Laurent recurrences.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("run", help="iterate a system, cache the iterates, write run.json")
    _add_config_flags(s)
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("factor", help="build factor sets and a certificate log")
    _add_config_flags(s)
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("verify", help="check and replay a certificate log")
    s.add_argument("--log", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("entropy", help="degree series and algebraic-entropy estimate")
    _add_config_flags(s)
    s.add_argument("--exact", action="store_true", help="also compute the exact series by iteration")
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("somos", help="numeric (extended) Somos-4 sequence")
    s.add_argument("--terms", type=int, default=12)
    s.add_argument("--initial", type=int, nargs=4, default=[1, 1, 1, 1])
    s.add_argument("--params", type=int, nargs=4, metavar=("R", "M", "L", "K"),
                   help="extended form exponents; default is the classical recurrence")
    s.set_defaults(func=cmd_somos)

    s = sub.add_parser("replay", help="re-execute a run from its manifest and compare outputs")
    s.add_argument("--manifest", required=True)
    s.add_argument("--out", help="directory for the re-executed outputs (default: a temp dir)")
    s.set_defaults(func=cmd_replay)
    return p


def _error(exc, code):
    if isinstance(exc, CoprimeLabError):
        obj = exc.to_dict()
    else:
        obj = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(obj, sort_keys=True, default=str), file=sys.stderr)
    return code


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except DivisionNotExact as exc:
        # an identity that must hold on the iterates failed
        return _error(exc, EXIT_FALSIFIED)
    except CoprimeLabError as exc:
        return _error(exc, EXIT_ERROR)
    except (OSError, ValueError, MemoryError) as exc:
        return _error(exc, EXIT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
