"""On-disk iterate cache: one canonical JSON file per site plus a manifest.

Layout::

    {root}/{system}/{params-hash}/t{t}_n{n}.json       (lattice sites)
    {root}/{system}/{params-hash}/t0_n{n}.json         (one-index systems)
    {root}/{system}/{params-hash}/manifest.json

The manifest lists the parameters, the window and the SHA-256 of every
site file, so a resumed run can trust (and skip) sites already on disk.
"""
from __future__ import annotations

import hashlib
import json
import os

from .engines import IterateRecord, IterateStore, LatticeWindow, SystemSpec
from .errors import SerializationError
from .laurent import VariableTable, from_json_obj, to_json_obj


def _canonical(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def params_hash(spec: SystemSpec, window=None, extra=None):
    key = {"system": spec.kind, "params": dict(spec.params),
           "window": _window_obj(window), "extra": extra}
    return hashlib.sha256(_canonical(key).encode()).hexdigest()[:16]


def _window_obj(window):
    if window is None:
        return None
    if isinstance(window, LatticeWindow):
        return [window.n_min, window.n_max, window.m_min, window.m_max]
    return list(window)


def site_filename(site):
    if len(site) == 1:
        return f"t0_n{site[0]}.json"
    name = f"t{site[0]}_n{site[1]}"
    if len(site) == 3:
        name += f"_m{site[2]}"
    return name + ".json"


def _json_meta(meta):
    out = {}
    for k, v in meta.items():
        try:
            json.dumps(v)
        except TypeError:
            continue
        out[k] = v
    return out


def record_to_obj(rec: IterateRecord):
    return {"site": list(rec.site), "p": to_json_obj(rec.p) if rec.p is not None else None,
            "q": list(rec.q), "deg_p": rec.deg_p, "deg_q": rec.deg_q, "meta": _json_meta(rec.meta)}


def record_from_obj(obj, table):
    try:
        p = from_json_obj(obj["p"], table) if obj["p"] is not None else None
        return IterateRecord(tuple(obj["site"]), p, tuple(obj["q"]), obj["deg_p"], obj["deg_q"],
                             obj.get("meta", {}))
    except (KeyError, TypeError) as exc:
        raise SerializationError(f"malformed cached iterate: {exc}") from exc


class IterateCache:
    def __init__(self, root):
        self.root = root

    def directory(self, spec, window=None, extra=None):
        return os.path.join(self.root, spec.kind, params_hash(spec, window, extra))

    def save(self, store: IterateStore, extra=None, config=None):
        """Write every record plus the manifest; returns the cache directory."""
        d = self.directory(store.spec, store.window, extra)
        os.makedirs(d, exist_ok=True)
        hashes = {}
        for site in sorted(store.records):
            data = (_canonical(record_to_obj(store.records[site])) + "\n").encode()
            name = site_filename(site)
            with open(os.path.join(d, name), "wb") as fh:
                fh.write(data)
            hashes[name] = hashlib.sha256(data).hexdigest()
        manifest = {"system": store.spec.kind, "params": dict(store.spec.params),
                    "window": _window_obj(store.window), "names": list(store.table.names),
                    "extra": extra, "sites": hashes, "config": config}
        with open(os.path.join(d, "manifest.json"), "w", encoding="utf-8") as fh:
            fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        return d

    def load(self, spec, window=None, extra=None) -> IterateStore:
        """Rebuild a store from disk, checking every file against the manifest."""
        d = self.directory(spec, window, extra)
        path = os.path.join(d, "manifest.json")
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        table = VariableTable(manifest["names"])
        store = IterateStore(spec, table, window)
        for name, want in sorted(manifest["sites"].items()):
            with open(os.path.join(d, name), "rb") as fh:
                data = fh.read()
            if hashlib.sha256(data).hexdigest() != want:
                raise SerializationError(f"cached iterate {name} does not match its manifest hash")
            store.add(record_from_obj(json.loads(data), table))
        return store


__all__ = ["IterateCache", "params_hash", "site_filename"]
