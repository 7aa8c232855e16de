"""Run configuration: JSON schema checks, defaults and conversion to engine inputs."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .engines import DEFAULT_DEGREE_BUDGET, LatticeWindow, SystemSpec
from .errors import ConfigError

SYSTEMS = ("simple", "toda1d", "somos4ext", "toda2d", "dsl")
MODES = ("gcd", "identity", "specialized")
INT_KEYS = ("r", "m", "l", "k", "M", "L", "K", "k1", "k2", "l1", "l2", "n", "t_max", "seed",
            "degree_budget", "trials")

DEFAULT_N = {"simple": 6, "somos4ext": 9, "dsl": 6}
DEFAULT_T_MAX = {"toda1d": 4, "toda2d": 3, "dsl": 3}
DEFAULT_WINDOW = {"toda1d": [-5, 5], "toda2d": [0, 6, 0, 6], "dsl": [-5, 5]}
DEFAULT_MODES = {"simple": ["gcd", "identity"], "somos4ext": ["gcd", "identity"],
                 "toda1d": ["identity", "specialized"], "toda2d": ["specialized"], "dsl": []}


@dataclass
class RunConfig:
    system: str = "simple"
    params: dict = field(default_factory=dict)
    n: int | None = None
    window: list | None = None
    t_max: int | None = None
    seed: int = 0
    degree_budget: int = DEFAULT_DEGREE_BUDGET
    trials: int = 4
    modes: list = field(default_factory=list)
    out: str = "out"
    dsl_text: str | None = None

    def to_dict(self):
        """Flat form matching the config schema; echoed verbatim into reports."""
        d = asdict(self)
        params = d.pop("params")
        d.update(params)
        return {k: v for k, v in sorted(d.items()) if v is not None}

    def spec(self) -> SystemSpec:
        return SystemSpec(self.system, tuple(self.params.items()))

    @property
    def is_lattice(self):
        return self.window is not None

    def lattice_window(self) -> LatticeWindow:
        w = self.window
        if len(w) == 2:
            return LatticeWindow(w[0], w[1], self.t_max)
        return LatticeWindow(w[0], w[1], self.t_max, w[2], w[3])


_PARAM_KEYS = {
    "simple": ("r",),
    "somos4ext": ("r", "m", "l", "k"),
    "toda2d": ("k1", "k2", "l1", "l2"),
}


def _check_int(d, key, lo=None):
    v = d[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ConfigError(f"{key} must be an integer, got {v!r}", f"/{key}")
    if lo is not None and v < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {v}", f"/{key}")


def config_from_dict(d: dict) -> RunConfig:
    """Validate a config mapping and fill defaults; errors carry a JSON pointer."""
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object", "")
    allowed = set(INT_KEYS) | {"system", "window", "modes", "out", "dsl_text"}
    for key in d:
        if key not in allowed:
            raise ConfigError(f"unknown field {key!r}", f"/{key}")
    for key in INT_KEYS:
        if key in d:
            _check_int(d, key)
    if "r" in d:
        _check_int(d, "r", 2)
    for key in ("m", "l", "k", "M", "L", "K", "k1", "k2", "l1", "l2", "trials"):
        if key in d:
            _check_int(d, key, 1)
    if "n" in d:
        _check_int(d, "n", 2)
    if "t_max" in d:
        _check_int(d, "t_max", 1)
    if "degree_budget" in d:
        _check_int(d, "degree_budget", 1)
    system = d.get("system", "simple")
    if system not in SYSTEMS:
        raise ConfigError(f"system must be one of {', '.join(SYSTEMS)}, got {system!r}", "/system")
    if all(key in d for key in ("m", "l", "k")) and math.gcd(d["m"], d["l"], d["k"]) != 1:
        raise ConfigError(f"gcd(m,l,k) must be 1, got gcd({d['m']},{d['l']},{d['k']})", "/m")

    if system == "toda1d":
        keys = ("M", "L", "K") if "r" not in d and "M" in d else ("r", "m", "l", "k")
    elif system == "dsl":
        keys = ()
    else:
        keys = _PARAM_KEYS[system]
    params = {}
    for key in keys:
        if key not in d:
            raise ConfigError(f"{system} requires {key}", f"/{key}")
        params[key] = d[key]

    cfg = RunConfig(system=system, params=params, seed=d.get("seed", 0),
                    degree_budget=d.get("degree_budget", DEFAULT_DEGREE_BUDGET),
                    trials=d.get("trials", 4), out=d.get("out", "out"))
    if "out" in d and not isinstance(d["out"], str):
        raise ConfigError("out must be a path string", "/out")

    modes = d.get("modes", DEFAULT_MODES[system])
    if not isinstance(modes, list):
        raise ConfigError("modes must be a list", "/modes")
    for i, mode in enumerate(modes):
        if mode not in MODES:
            raise ConfigError(f"unknown mode {mode!r}; choose from {', '.join(MODES)}", f"/modes/{i}")
    cfg.modes = list(modes)

    if system == "dsl":
        text = d.get("dsl_text")
        if not isinstance(text, str) or not text.strip():
            raise ConfigError("dsl system requires dsl_text", "/dsl_text")
        cfg.dsl_text = text
        from .dsl import parse_recurrence
        rec = parse_recurrence(text)
        lattice = len(rec.lhs.indices) > 1
    else:
        if "dsl_text" in d:
            raise ConfigError("dsl_text is only valid with system dsl", "/dsl_text")
        lattice = system in ("toda1d", "toda2d")

    if lattice:
        if "n" in d:
            raise ConfigError(f"{system} is indexed by a window and t_max, not n", "/n")
        cfg.t_max = d.get("t_max", DEFAULT_T_MAX[system])
        w = d.get("window", DEFAULT_WINDOW[system])
        want = 4 if system == "toda2d" or (system == "dsl" and len(rec.lhs.indices) == 3) else 2
        if (not isinstance(w, list) or len(w) != want
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in w)):
            raise ConfigError(f"window must be a list of {want} integers", "/window")
        for i in range(0, want, 2):
            if w[i] > w[i + 1]:
                raise ConfigError("window bounds must satisfy lo <= hi", f"/window/{i}")
        cfg.window = list(w)
    else:
        for key in ("window", "t_max"):
            if key in d:
                raise ConfigError(f"{system} is indexed by n, not {key}", f"/{key}")
        cfg.n = d.get("n", DEFAULT_N[system])
    if system != "dsl":
        cfg.spec()  # engine-side validation as well
    return cfg


def config_load(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", "") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", "") from exc
    return config_from_dict(data)


__all__ = ["RunConfig", "config_from_dict", "config_load", "MODES", "SYSTEMS"]
