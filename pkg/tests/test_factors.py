import json

import pytest

from coprimelab.certificates import Certificate, read_log, replay, verify_log, write_log
from coprimelab.cyclotomic import cyclo_ring, zeta_power
from coprimelab.engines import LatticeWindow, SystemSpec, simple_iterate, somos4_iterate, toda1d_iterate
from coprimelab.factors import (all_certificates, omega_count, simple_factors, somos4_factors,
                                toda1d_factors, toda1d_structure_checks, toda2d_pair_certificates,
                                vertical_recursion_check, verify_pairwise_coprime)
from coprimelab.engines import toda2d_iterate
from coprimelab.laurent import LaurentPoly, associate_equal

I = zeta_power(cyclo_ring(2), 1)


@pytest.fixture(scope="module")
def simple2():
    st = simple_iterate(2, 6)
    return st, simple_factors(2, 6, st)


@pytest.fixture(scope="module")
def toda3():
    spec = SystemSpec.toda1d(2, 1, 1, 1)
    st = toda1d_iterate(spec, LatticeWindow(-3, 3, 3))
    return st, toda1d_factors(spec, st)


@pytest.mark.parametrize("r", [2, 3, 5])
def test_simple_base_factors(r):
    st = simple_iterate(r, 3)
    sets = simple_factors(r, 3, st)
    ring = cyclo_ring(r)
    y1 = LaurentPoly.variable(st.table, "y1")
    for j in range(1, r + 1):
        assert associate_equal(sets[(2,)].factors[j - 1], y1 - zeta_power(ring, 2 * j - 1))
    assert omega_count((3,), sets) == r


def test_simple_r2_n4_factor(simple2):
    st, sets = simple2
    y0, y1 = (LaurentPoly.variable(st.table, v) for v in ("y0", "y1"))
    want = (y1 - I) ** 2 * (y1 + I) - I * y0 ** 2
    assert associate_equal(sets[(4,)].factors[0], want)
    assert sets[(4,)].degrees == [3, 3]


def test_simple_checks_and_product(simple2):
    st, sets = simple2
    for site, fs in sets.items():
        assert all(fs.meta["checks"].values()), site
        assert fs.product() == st[site].p
    assert omega_count((5,), sets) == 2


def test_simple_identity_at_n3(simple2):
    st, sets = simple2
    fs = sets[(3,)]
    ident = [c for c in fs.certificates if c.kind == "CoprimeIdentity"]
    assert len(ident) == 1 and ident[0].ok and replay(ident[0])


def test_simple_pairwise_gcd(simple2):
    _, sets = simple2
    certs = verify_pairwise_coprime(sets, "gcd")
    assert len(certs) == 45 and all(c.ok for c in certs)
    assert all(replay(c) for c in certs)


def test_toda_base_case(toda3):
    st, sets = toda3
    v = lambda t, n: LaurentPoly.variable(st.table, f"tau[{t}][{n}]")  # noqa: E731
    f1, f2 = sets[(2, 0)].factors
    assert associate_equal(f1, v(1, 1) * v(1, -1) - v(1, 0).scale(I))
    assert associate_equal(f2, v(1, 1) * v(1, -1) + v(1, 0).scale(I))


def test_toda_checks(toda3):
    st, sets = toda3
    assert not [s for s, fs in sets.items() if fs.meta.get("falsified")]
    for fs in sets.values():
        assert fs.degrees[0] == fs.degrees[1]
    assert omega_count((3, 0), sets) == 2


def test_toda_specialized_and_degree(toda3):
    _, sets = toda3
    spec_certs = verify_pairwise_coprime(sets, "specialized", seed=0)
    assert spec_certs and all(c.ok for c in spec_certs)
    assert all(c.payload["verdict"] == "coprime (probabilistic)" for c in spec_certs)
    deg_certs = verify_pairwise_coprime(sets, "degree")
    assert all(c.ok for c in deg_certs)


def test_toda_structure_checks():
    st = toda1d_iterate(SystemSpec.toda1d(2, 1, 1, 1), LatticeWindow(-4, 4, 4))
    rows = toda1d_structure_checks(st)
    assert rows and all(all(v for k, v in row.items() if k != "site" and v is not None) for row in rows)
    assert any("shifted_product_identity" in row for row in rows)


def test_somos_factors():
    spec = SystemSpec.somos4(2, 1, 1, 1)
    st = somos4_iterate(spec, 7)
    sets = somos4_factors(spec, 7, st)
    x = [LaurentPoly.variable(st.table, f"x{i}") for i in range(4)]
    assert associate_equal(sets[(4,)].factors[0], x[3] * x[1] - x[2].scale(I))
    for site, fs in sets.items():
        assert all(fs.meta["checks"].values())
        assert fs.degrees == [st[site].deg_p // 2] * 2


def test_toda2d_pairs():
    st = toda2d_iterate(SystemSpec.toda2d(1, 1, 1, 1), LatticeWindow(0, 6, 3, 0, 6))
    certs = toda2d_pair_certificates(st, pairs=20, seed=0)
    assert len(certs) == 20 and all(c.ok for c in certs)


def test_certificate_log_round_trip(tmp_path, simple2):
    _, sets = simple2
    certs = all_certificates(sets)
    path = tmp_path / "certs.jsonl"
    write_log(certs, path)
    rows = read_log(path)
    assert len(rows) == len(certs) and all(good for _, _, good in rows)
    rep = verify_log(path)
    assert not rep.falsified and rep.replayed == len(certs)


def test_tampered_log_is_detected(tmp_path, simple2):
    _, sets = simple2
    path = tmp_path / "certs.jsonl"
    write_log(all_certificates(sets), path)
    lines = path.read_text().splitlines()
    obj = json.loads(lines[0])
    obj["site"] = [99]
    lines[0] = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    path.write_text("\n".join(lines) + "\n")
    rep = verify_log(path)
    assert rep.falsified and rep.tampered == [1]


def test_forged_certificate_fails_replay(simple2):
    _, sets = simple2
    cert = next(c for c in sets[(4,)].certificates if c.kind == "Divisibility")
    assert replay(cert)
    bad_digest = Certificate(cert.kind, cert.site, True, json.loads(json.dumps(cert.payload)))
    bad_digest.payload["quotient"]["digest"] = "0" * 64
    assert not _safe_replay(bad_digest)
    wrong = Certificate(cert.kind, cert.site, True, json.loads(json.dumps(cert.payload)))
    wrong.payload["quotient"] = wrong.payload["divisor"]
    assert not _safe_replay(wrong)


def _safe_replay(cert):
    try:
        return replay(cert)
    except Exception:
        return False


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        Certificate("Bogus", [1], True)


def test_neighbour_free_recursion_is_recorded():
    spec = SystemSpec.toda1d(2, 1, 1, 1)
    st = toda1d_iterate(spec, LatticeWindow(-4, 4, 4))
    rows = vertical_recursion_check(toda1d_factors(spec, st), st, 2)
    assert rows[(2, 0)]["divisor"] == "none (initial slice)"
    # first slice with a tracked divisor: the neighbour-free form does not divide there
    assert rows[(4, 0)]["divisor"] == "factor"
    assert rows[(4, 0)]["exact"] == [False, False]
    assert not any(any(row["associate"]) for row in rows.values())
