import json

import pytest

from eiscong.errors import FormatError, NoMinusSign, UnknownLevel
from eiscong.hecke import sturm_bound
from eiscong.newform import NewformData
from eiscong.verifier import (
    FAIL,
    PASS,
    SKIPPED,
    VIOLATION,
    CertificateRequest,
    certify,
    check_hypotheses,
    check_ordinary,
    check_prime_congruences,
    choose_delta,
    cusp_order,
    parse_cusp_table,
    shipped_cusp_table,
    verify_congruence,
)


def _by_name(checks):
    return {c.name: c for c in checks}


def _tamper(f, **changes):
    coeffs = dict(f.coeffs)
    coeffs.update(changes.get("coeffs", {}))
    signs = dict(f.al_signs)
    signs.update(changes.get("al_signs", {}))
    return NewformData(f.level, f.label + "-mod", coeffs, signs, f.bound, "file", f.optimal)


@pytest.mark.parametrize(
    "N, r, square_free, coprime",
    [(11, 5, PASS, PASS), (99, 5, VIOLATION, PASS), (14, 3, PASS, VIOLATION), (26, 13, PASS, VIOLATION)],
)
def test_hypotheses(N, r, square_free, coprime):
    checks = _by_name(check_hypotheses(N, r))
    assert checks["hyp_square_free"].status == square_free
    assert checks["hyp_r_coprime_6N"].status == coprime


def test_prime_congruences_pass(newforms):
    checks = _by_name(check_prime_congruences(newforms["11a1"], 5, 200))
    assert checks["eisenstein_primes"].status == PASS
    assert checks["al_sign_rule"].status == PASS
    assert checks["plus_sign_primes"].witness["plus_primes"] == []
    assert checks["w_r"].status == SKIPPED


def test_prime_congruences_fail_at_2(newforms):
    c = _by_name(check_prime_congruences(newforms["11a1"], 7, 200))["eisenstein_primes"]
    assert c.status == FAIL and c.witness["ell"] == 2


def test_plus_sign_prime(newforms):
    # 26b1 has w_13 = +1 and 13 = -1 mod 7
    checks = _by_name(check_prime_congruences(newforms["26b1"], 7, 200))
    assert checks["plus_sign_primes"].status == PASS
    assert checks["plus_sign_primes"].witness["plus_primes"] == [13]
    # 11 is not -1 mod 5, so flipping its sign must fail
    flipped = _tamper(newforms["11a1"], coeffs={11: -1}, al_signs={11: 1})
    c = _by_name(check_prime_congruences(flipped, 5, 200))["plus_sign_primes"]
    assert c.status == FAIL and c.witness["not_minus_one_mod_r"] == [11]


def test_choose_delta(newforms):
    assert choose_delta(newforms["11a1"], 5).delta == {11: 1}
    assert choose_delta(newforms["26b1"], 7).delta == {2: 1, 13: 13}
    flipped = _tamper(newforms["11a1"], coeffs={11: -1}, al_signs={11: 1})
    with pytest.raises(NoMinusSign):
        choose_delta(flipped, 5)


def test_verify_congruence(newforms):
    f = newforms["11a1"]
    dc = choose_delta(f, 5)
    assert verify_congruence(f, dc, 5, 200).status == PASS
    c = verify_congruence(f, dc, 7, 200)
    assert c.status == FAIL and c.witness["n"] == 2


def test_ordinary(newforms):
    assert check_ordinary(newforms["11a1"], 5).status == PASS  # a_5 = 1
    assert check_ordinary(newforms["26b1"], 7).status == PASS
    # r | N with w_r = -1 means a_r = 1
    assert check_ordinary(newforms["11a1"], 11).status == PASS


def test_cusp_order(tmp_path):
    assert cusp_order(11) == cusp_order(11, None)
    assert (cusp_order(11).order, cusp_order(11).provenance) == (5, "prime-formula")
    assert (cusp_order(37).order, cusp_order(13).order) == (3, 1)
    assert (cusp_order(14).order, cusp_order(14).provenance) == (6, "table")
    with pytest.raises(UnknownLevel):
        cusp_order(30)
    with pytest.raises(ValueError):
        cusp_order(99)
    table = tmp_path / "t.txt"
    table.write_text("# mine\n11 7\n30 24\n")
    assert cusp_order(11, table).provenance == "user-file"
    assert cusp_order(30, table).order == 24
    assert cusp_order(14, table).provenance == "table"


def test_cusp_table_parser():
    assert shipped_cusp_table()[26] == 21
    with pytest.raises(FormatError, match="^2: duplicate"):
        parse_cusp_table("14 6\n14 6\n")
    with pytest.raises(FormatError):
        parse_cusp_table("14\n")


def test_request_validation(newforms):
    f = newforms["11a1"]
    with pytest.raises(ValueError, match="not prime"):
        CertificateRequest(f, 6)
    with pytest.raises(ValueError, match="Sturm"):
        CertificateRequest(f, 5, check_range=sturm_bound(11) - 1)
    with pytest.raises(ValueError, match="bound"):
        CertificateRequest(f, 5, check_range=f.bound + 1)
    with pytest.raises(ValueError, match="curve"):
        CertificateRequest(f, 5, mode="vatsal")


def test_certify_11a1(newforms, curves):
    rep = certify(CertificateRequest(newforms["11a1"], 5, curve=curves["11a1"], verify_oracle=True))
    assert rep.verdict == PASS
    assert all(c.status in (PASS, SKIPPED) for c in rep.checks)
    assert rep.check("cusp_divisibility").witness["cusp_order"] == 5
    assert rep.check("torsion_divisibility").witness["torsion_order"] == 5
    assert rep.check("eisenstein_congruence").witness["range"] >= sturm_bound(11)


def test_failure_skips_downstream(newforms):
    rep = certify(CertificateRequest(newforms["11a1"], 7))
    assert rep.verdict == FAIL
    assert rep.check("eisenstein_congruence").status == SKIPPED
    assert rep.check("ordinary").witness["reason"] == "earlier check failed"


def test_violation_skips_everything(newforms):
    rep = certify(CertificateRequest(newforms["99d1"], 5))
    assert rep.verdict == VIOLATION
    assert rep.check("eisenstein_primes").status == SKIPPED


def test_deterministic_report(newforms, curves):
    req = CertificateRequest(newforms["26b1"], 7, curve=curves["26b1"])
    a, b = certify(req).to_json(), certify(req).to_json()
    assert a == b and "timestamp" not in json.loads(a)
    assert "timestamp" in certify(req, deterministic=False).to_dict()


@pytest.mark.parametrize("label", ["11a1", "14a1", "15a1", "26a1", "26b1"])
@pytest.mark.parametrize("r", [5, 7, 11, 13])
def test_pipeline_soundness(newforms, curves, label, r):
    """A theorem-mode pass implies both divisibility conclusions and ordinarity."""
    f = newforms[label]
    rep = certify(CertificateRequest(f, r, curve=curves[label]))
    if rep.verdict == PASS:
        assert rep.check("ordinary").status == PASS
        assert rep.check("torsion_divisibility").witness["torsion_order"] % r == 0
        cusp = rep.check("cusp_divisibility")
        assert cusp.status == SKIPPED or cusp.witness["cusp_order"] % r == 0


def test_vatsal_mode(newforms, curves):
    for r in (2, 3):
        rep = certify(CertificateRequest(newforms["14a1"], r, mode="vatsal", curve=curves["14a1"]))
        assert rep.verdict == PASS
        assert rep.check("torsion_divisibility").witness["torsion_order"] == 6
        assert all(c.name != "hyp_r_coprime_6N" for c in rep.checks)
