import json

import pytest

from coprimelab.cache import IterateCache, params_hash, site_filename
from coprimelab.config import config_from_dict, config_load
from coprimelab.engines import LatticeWindow, SystemSpec, simple_iterate, toda1d_iterate
from coprimelab.errors import ConfigError, ParseError, SerializationError


def test_minimal_defaults(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"system": "simple", "r": 2, "n": 5}))
    cfg = config_load(path)
    assert cfg.seed == 0 and cfg.degree_budget == 2000 and cfg.n == 5
    d = cfg.to_dict()
    assert d["seed"] == 0 and d["degree_budget"] == 2000 and d["r"] == 2


@pytest.mark.parametrize("data,pointer", [
    ({"r": 1}, "/r"),
    ({"system": "toda1d", "m": 2, "l": 2, "k": 2}, "/m"),
    ({"system": "simple", "r": "3"}, "/r"),
    ({"system": "simple", "r": 2, "colour": 1}, "/colour"),
    ({"system": "wave", "r": 2}, "/system"),
    ({"system": "toda1d", "r": 2, "m": 1, "l": 1}, "/k"),
    ({"system": "toda1d", "r": 2, "m": 1, "l": 1, "k": 1, "window": [3, 1]}, "/window/0"),
    ({"system": "toda1d", "r": 2, "m": 1, "l": 1, "k": 1, "n": 4}, "/n"),
    ({"system": "simple", "r": 2, "modes": ["gcd", "fast"]}, "/modes/1"),
    ({"system": "dsl"}, "/dsl_text"),
])
def test_rejections(data, pointer):
    with pytest.raises(ConfigError) as err:
        config_from_dict(data)
    assert err.value.pointer == pointer
    assert err.value.to_dict()["pointer"] == pointer


def test_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        config_load(path)


def test_dsl_config_parses_text():
    with pytest.raises(ParseError):
        config_from_dict({"system": "dsl", "dsl_text": "y[n] = y[n-1] +"})
    cfg = config_from_dict({"system": "dsl", "dsl_text": "y[n]=(y[n-1]^2+1)/y[n-2]", "n": 4})
    assert cfg.n == 4 and not cfg.is_lattice


def test_lattice_defaults():
    cfg = config_from_dict({"system": "toda2d", "k1": 1, "k2": 1, "l1": 1, "l2": 1})
    w = cfg.lattice_window()
    assert (w.n_min, w.n_max, w.m_min, w.m_max, w.t_max) == (0, 6, 0, 6, 3)


def test_site_filenames():
    assert site_filename((5,)) == "t0_n5.json"
    assert site_filename((3, -1)) == "t3_n-1.json"
    assert site_filename((2, 1, 4)) == "t2_n1_m4.json"


def test_cache_round_trip(tmp_path):
    st = simple_iterate(3, 5)
    cache = IterateCache(tmp_path)
    d = cache.save(st)
    assert d.endswith(params_hash(st.spec))
    back = cache.load(st.spec)
    for site, rec in st.records.items():
        assert back[site].p == rec.p and back[site].q == rec.q


def test_cache_lattice_and_tamper(tmp_path):
    spec = SystemSpec.toda1d(2, 1, 1, 1)
    w = LatticeWindow(-3, 3, 3)
    st = toda1d_iterate(spec, w)
    cache = IterateCache(tmp_path)
    d = cache.save(st)
    back = cache.load(spec, w)
    assert back[(3, 0)].p == st[(3, 0)].p
    target = tmp_path / d / "t3_n0.json"
    target.write_text(target.read_text().replace('"deg_p":', '"deg_p": 1, "x":'))
    with pytest.raises(SerializationError):
        cache.load(spec, w)


def test_params_hash_depends_on_window():
    spec = SystemSpec.toda1d(2, 1, 1, 1)
    assert params_hash(spec, LatticeWindow(-3, 3, 3)) != params_hash(spec, LatticeWindow(-4, 4, 3))
