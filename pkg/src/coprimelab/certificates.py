"""Replayable certificates and the JSON-lines certificate log.

A certificate carries its witnesses inline when they are small and only
their SHA-256 digests otherwise.  Every log line also stores a digest of
its own canonical JSON, so edited lines are detected before replay.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .cyclotomic import cyclo_ring, element_from_json
from .errors import DivisionNotExact, SerializationError
from .laurent import LaurentPoly, deg, digest, from_json_obj, to_json_obj

KINDS = ("Divisibility", "ProductReconstruction", "DegreeEquality", "CoprimeIdentity",
         "CoprimeGCD", "CoprimeSpecialized", "CoprimeDegree")

INLINE_TERMS = 4000


def poly_digest(f: LaurentPoly) -> str:
    return digest(f)


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def witness(f: LaurentPoly, inline=True, known_digest=None):
    """Inline JSON form plus digest, or the digest alone."""
    out = {"digest": known_digest or poly_digest(f), "terms": len(f)}
    if inline:
        out["poly"] = to_json_obj(f)
    return out


def coeff_json(c):
    if hasattr(c, "to_json"):
        return {"r": c.ring.r, "coords": c.to_json()}
    from fractions import Fraction
    c = Fraction(c)
    return {"r": None, "coords": [[str(c.numerator), str(c.denominator)]]}


def coeff_from_json(obj):
    from fractions import Fraction
    if obj["r"] is None:
        n, d = obj["coords"][0]
        return Fraction(int(n), int(d))
    return element_from_json(cyclo_ring(int(obj["r"])), obj["coords"])


@dataclass
class Certificate:
    kind: str
    site: list
    ok: bool
    payload: dict = field(default_factory=dict)
    replayable: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    def body(self):
        return {"kind": self.kind, "site": self.site, "ok": self.ok,
                "payload": self.payload, "replayable": self.replayable}

    def to_line(self) -> str:
        body = self.body()
        body["digest"] = hashlib.sha256(canonical(body).encode()).hexdigest()
        return canonical(body)

    @classmethod
    def from_line(cls, line):
        """Parse a log line; returns (certificate, digest_ok)."""
        try:
            obj = json.loads(line)
            digest = obj.pop("digest")
            cert = cls(obj["kind"], obj["site"], bool(obj["ok"]), obj["payload"], bool(obj["replayable"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise SerializationError(f"malformed certificate line: {exc}") from exc
        good = hashlib.sha256(canonical(obj).encode()).hexdigest() == digest
        return cert, good


def write_log(certs, path):
    with open(path, "w", encoding="utf-8") as fh:
        for c in certs:
            fh.write(c.to_line() + "\n")


def read_log(path):
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                cert, good = Certificate.from_line(line)
                out.append((lineno, cert, good))
    return out


# ------------------------------------------------------------------ replay
def _poly(w):
    if "poly" not in w:
        raise KeyError("witness not inline")
    f = from_json_obj(w["poly"])
    if poly_digest(f) != w["digest"]:
        raise SerializationError("inline witness does not match its digest")
    return f


def _same_table(*polys):
    """Re-express polynomials deserialized separately over one variable table."""
    base = polys[0].table
    out = []
    for f in polys:
        if f.table is base or list(f.table.names) == list(base.names):
            out.append(f if f.table is base else from_json_obj(to_json_obj(f), base))
        else:
            raise SerializationError("witnesses use different variable lists")
    return out


def replay(cert: Certificate) -> bool:
    """Recompute the certificate's claim from its payload alone."""
    from .gcd import gcd_exact
    from .specialize import replay_specialized

    p = cert.payload
    k = cert.kind
    if k == "Divisibility":
        a, b, q = _same_table(_poly(p["dividend"]), _poly(p["divisor"]), _poly(p["quotient"]))
        return q * b == a
    if k == "ProductReconstruction":
        fs = [_poly(w) for w in p["factors"]]
        target = _poly(p["p"])
        fs = _same_table(target, *fs)
        target, fs = fs[0], fs[1:]
        prod = fs[0]
        for f in fs[1:]:
            prod = prod * f
        c = coeff_from_json(p["unit_coeff"])
        return prod.scale(c).shift(p["unit_mono"]) == target
    if k == "DegreeEquality":
        if "factors" in p and all("poly" in w for w in p["factors"]):
            degs = [deg(_poly(w)) for w in p["factors"]]
            if degs != p["degrees"]:
                return False
        degs = p["degrees"]
        return len(set(degs)) == 1 and sum(degs) == p["deg_p"]
    if k == "CoprimeIdentity":
        fj, fi, h, h2, B = _same_table(*(_poly(p[x]) for x in ("f_j", "f_i", "h", "h_prime", "B")))
        c = coeff_from_json(p["coeff"])
        return h * fj - h2 * fi == B.scale(c)
    if k == "CoprimeGCD":
        f, g = _same_table(_poly(p["f"]), _poly(p["g"]))
        return gcd_exact(f, g).is_constant()
    if k == "CoprimeSpecialized":
        f, g = _same_table(_poly(p["f"]), _poly(p["g"]))
        return replay_specialized(f, g, p) == p["verdict"]
    if k == "CoprimeDegree":
        return p["deg_a"] != p["deg_b"]
    raise ValueError(k)


@dataclass
class LogReport:
    checked: int = 0
    replayed: int = 0
    digest_only: int = 0
    tampered: list = field(default_factory=list)
    failed: list = field(default_factory=list)

    @property
    def falsified(self):
        return bool(self.tampered or self.failed)

    def to_dict(self):
        return {"checked": self.checked, "replayed": self.replayed, "digest_only": self.digest_only,
                "tampered_lines": self.tampered, "failed_lines": self.failed}


def verify_log(path) -> LogReport:
    """Digest-check every line, then replay every replayable certificate."""
    rep = LogReport()
    for lineno, cert, good in read_log(path):
        rep.checked += 1
        if not good:
            rep.tampered.append(lineno)
            continue
        if not cert.ok:
            rep.failed.append(lineno)
            continue
        if not cert.replayable:
            rep.digest_only += 1
            continue
        try:
            ok = replay(cert)
        except (KeyError, SerializationError, DivisionNotExact):
            ok = False
        rep.replayed += 1
        if not ok:
            rep.failed.append(lineno)
    return rep
