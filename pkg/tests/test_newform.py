import pytest

from eiscong.errors import AdditiveReduction, CurveError, FormatError, MissingPrime
from eiscong.exactnum import primes_up_to
from eiscong.hecke import HeckeOp, check_eigen
from eiscong.newform import (
    FIXTURE_CURVES,
    NewformData,
    WeierstrassCurve,
    ap_from_curve,
    count_points,
    curve_from_source,
    diff_against_oracle,
    dumps_newform,
    extend_coeffs,
    loads_newform,
    lutz_nagell_points,
    newform_from_curve,
    torsion_data,
    torsion_order,
)

SEMISTABLE = [k for k in FIXTURE_CURVES if k != "99d1"]


def brute_count(c, p):
    a1, a2, a3, a4, a6 = c.ainvs
    return 1 + sum(
        (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % p == 0
        for x in range(p)
        for y in range(p)
    )


@pytest.mark.parametrize("label", list(FIXTURE_CURVES))
def test_count_points_matches_brute_force(label, curves):
    c = curves[label]
    for p in primes_up_to(60):
        assert count_points(c, p) == brute_count(c, p)


def test_ap_examples_11a1(curves):
    c = curves["11a1"]
    assert brute_count(c, 2) == 5 and brute_count(c, 3) == 5
    assert ap_from_curve(c, 2) == -2
    assert ap_from_curve(c, 3) == -1
    assert ap_from_curve(c, 11) == 1


def test_newform_from_11a1(newforms):
    f = newforms["11a1"]
    assert (f.coeffs[2], f.coeffs[3], f.al_signs) == (-2, -1, {11: -1})


def test_newform_from_26b1(newforms):
    f = newforms["26b1"]
    assert set(f.al_signs) == {2, 13}
    assert all(f.al_signs[p] == -f.coeffs[p] for p in (2, 13))


def test_non_squarefree_rejected(curves):
    with pytest.raises(CurveError):
        newform_from_curve(curves["99d1"], 50)
    f = newform_from_curve(curves["99d1"], 50, allow_additive=True)
    assert f.coeffs[3] == 0 and 3 not in f.al_signs and f.al_signs[11] == -f.coeffs[11]


def test_additive_reduction_flagged():
    # y^2 = x^3 + 3 has additive reduction at 3; declare it multiplicative there
    c = WeierstrassCurve.from_ainvs((0, 0, 0, 0, 3), 3, "fake")
    with pytest.raises(AdditiveReduction):
        ap_from_curve(c, 3)


def test_curve_validation():
    with pytest.raises(CurveError):
        WeierstrassCurve.from_ainvs((0, 0, 0, 0, 0), 1)
    with pytest.raises(CurveError):
        WeierstrassCurve.from_ainvs((0, -1, 1, -10, -20), 22)  # 2 is a good prime
    c = WeierstrassCurve.from_ainvs((0, -1, 1, -10, -20), 1)
    assert c.flagged_primes == (11,)
    with pytest.raises(CurveError):
        ap_from_curve(c, 11)


def test_extend_coeffs_11a1(newforms):
    g = extend_coeffs(newforms["11a1"], 50)
    assert (g[0], g[1]) == (0, 1)
    assert g[4] == (-2) ** 2 - 2 == 2
    assert g[6] == (-2) * (-1) == 2


def test_extend_coeffs_missing_prime(newforms):
    with pytest.raises(MissingPrime) as exc:
        extend_coeffs(newforms["11a1"], 250)
    assert exc.value.ell == 211


@pytest.mark.parametrize("label", list(FIXTURE_CURVES))
def test_hasse_bound(label, curves):
    c = curves[label]
    for ell in primes_up_to(500):
        if c.conductor % ell:
            a = ap_from_curve(c, ell)
            assert a * a <= 4 * ell


@pytest.mark.parametrize("label", SEMISTABLE)
def test_multiplicative_count_identity(label, curves, newforms):
    c, f = curves[label], newforms[label]
    for p in f.bad_primes:
        assert f.coeffs[p] in (1, -1)
        assert count_points(c, p) == p + 1 - f.coeffs[p]


@pytest.mark.parametrize("label", list(FIXTURE_CURVES))
def test_extended_series_is_hecke_eigenform(label, newforms):
    f = newforms[label]
    g = extend_coeffs(f, 200)
    for ell in (2, 3, 5, 7):
        if f.level % ell:
            assert check_eigen(HeckeOp.T(ell, f.level), g, f.coeffs[ell]) == (True, None)
    for p in f.bad_primes:
        assert check_eigen(HeckeOp.U(p, f.level), g, f.coeffs[p]) == (True, None)


@pytest.mark.parametrize(
    "label, expected", [("11a1", 5), ("14a1", 6), ("15a1", 8), ("26a1", 3), ("26b1", 7)]
)
def test_torsion_orders(label, expected, curves):
    t = torsion_data(curves[label])
    assert t.order == expected
    assert t.count_gcd == expected


def test_99d1_has_no_5_torsion(curves):
    assert torsion_order(curves["99d1"]) % 5 != 0


@pytest.mark.parametrize("label", list(FIXTURE_CURVES))
def test_torsion_in_mazur_list(label, curves):
    assert torsion_order(curves[label]) in {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 16}


def test_lutz_nagell_points_are_on_the_curve(curves):
    c = curves["26b1"]
    c4, c6 = c.c_invariants
    for x, y in lutz_nagell_points(c):
        assert y * y == x**3 - 27 * c4 * x - 54 * c6


# -- file format ---------------------------------------------------------------


def test_newform_file_round_trip(newforms):
    for f in newforms.values():
        text = dumps_newform(f)
        assert loads_newform(text) == f
        assert dumps_newform(loads_newform(text)) == text


HEAD = "level=11\nlabel=t\nsource=test\n"


@pytest.mark.parametrize(
    "body, fragment",
    [
        ("P 11 1 -1\nL 2 -2\nL 2 -2\n", "duplicate prime 2"),
        ("L 2 -2\nL 3 -1\n", "missing bad prime 11"),
        ("P 11 1 1\nL 2 -2\n", "need w_p = -a_p"),
        ("P 11 1 -1\nL 2 1/2\n", "is not an integer"),
        ("P 11 1 -1\nL 2 a\n", "only newforms with rational integer coefficients"),
        ("P 11 1 -1\nL 3 -1\n", "missing coefficient for prime 2"),
        ("P 11 1 -1\nL 4 1\n", "not prime"),
        ("P 11 1 -1\nP 2 1 -1\n", "does not divide level"),
        ("P 11 1 -1\nL 11 1\n", "duplicate prime 11"),
        ("P 11 2 -2\nL 2 1\n", r"must be \+1 or -1"),
        ("P 11 1 -1\nX 2 1\n", "unrecognized line"),
    ],
)
def test_newform_parser_rejects(body, fragment):
    with pytest.raises(FormatError, match=fragment):
        loads_newform(HEAD + body)


def test_newform_parser_reports_line_numbers():
    with pytest.raises(FormatError) as exc:
        loads_newform(HEAD + "# c\nP 11 1 -1\nL 2 -2\nL 2 -2\n", path="x.nf")
    assert exc.value.line == 7 and "x.nf:7:" in str(exc.value)


def test_newform_data_invariants():
    with pytest.raises(ValueError):
        NewformData(11, "t", {11: 1, 2: -2}, {11: 1}, bound=2)
    with pytest.raises(MissingPrime):
        NewformData(11, "t", {11: 1}, {11: -1}, bound=3)


def test_verify_oracle(newforms):
    f = newforms["11a1"]
    c = curve_from_source(f)
    assert c.ainvs == (0, -1, 1, -10, -20)
    assert diff_against_oracle(f, c) == []
    tampered = NewformData(f.level, f.label, {**f.coeffs, 7: 3}, f.al_signs, f.bound, f.source)
    assert diff_against_oracle(tampered, c) == [(7, 3, -2)]
