from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from eiscong.eisenstein import DeltaChoice, build_eisenstein
from eiscong.errors import PrecisionTooSmall
from eiscong.hecke import HeckeOp, apply, check_eigen, sturm_bound
from eiscong.qseries import QExpansion, add, reduce_mod


def E11(prec=60):
    return build_eisenstein(DeltaChoice(11, {11: 1}), prec)


def test_u13_fixes_level_26_series():
    E = build_eisenstein(DeltaChoice(26, {2: 2, 13: 1}), 260)
    assert apply(HeckeOp.U(13, 26), E) == E.truncate(260 // 13)


def test_t2_on_level_11():
    E = E11(60)
    out = apply(HeckeOp.T(2, 11), E)
    assert out.prec == 30
    assert out.coeffs == tuple(3 * c for c in E.coeffs[:31])


def test_t3_on_zero():
    assert apply(HeckeOp.T(3, 11), QExpansion.zero(30)).is_zero()


def test_check_eigen_examples():
    E = E11(60)
    assert check_eigen(HeckeOp.T(2, 11), E, 3) == (True, None)
    assert check_eigen(HeckeOp.U(11, 11), E, 1) == (True, None)
    assert check_eigen(HeckeOp.T(2, 11), E, 4) == (False, 1)


def test_check_eigen_constant_term_only():
    # positive indices agree, only a_0 breaks the eigen relation
    g = QExpansion((Fraction(1),) + (0,) * 20)
    assert check_eigen(HeckeOp.U(11, 11), g, 1) == (True, None)
    assert check_eigen(HeckeOp.T(2, 11), g, 1) == (False, 0)


def test_check_eigen_mod_r():
    E = reduce_mod(E11(60), 5)
    assert check_eigen(HeckeOp.T(7, 11), E, 8) == (True, None)
    assert check_eigen(HeckeOp.T(7, 11), E, 3) == (True, None)  # 8 = 3 mod 5


def test_precision_too_small():
    with pytest.raises(PrecisionTooSmall):
        apply(HeckeOp.T(7, 11), E11(5))


def test_operator_validation():
    with pytest.raises(ValueError):
        HeckeOp.T(11, 11)
    with pytest.raises(ValueError):
        HeckeOp.U(2, 11)
    with pytest.raises(ValueError):
        HeckeOp.T(4, 11)
    assert str(HeckeOp.at(13, 26)) == "U_13"


@pytest.mark.parametrize("N, expected", [(11, 2), (14, 4), (26, 7), (1, 1), (99, 24)])
def test_sturm_bound(N, expected):
    assert sturm_bound(N) == expected


series = st.lists(st.integers(-50, 50), min_size=200, max_size=200).map(
    lambda cs: QExpansion(tuple(cs)))


@given(series, st.sampled_from([(2, 3), (2, 5), (3, 7), (5, 7)]))
def test_t_operators_commute(g, pair):
    l, q = pair
    Tl, Tq = HeckeOp.T(l, 11), HeckeOp.T(q, 11)
    a = apply(Tl, apply(Tq, g))
    b = apply(Tq, apply(Tl, g))
    prec = min(a.prec, b.prec)
    assert a.truncate(prec) == b.truncate(prec)


@given(series, series, st.sampled_from([2, 3, 5]))
def test_apply_linear(g1, g2, ell):
    T = HeckeOp.T(ell, 11)
    assert apply(T, add(g1, g2)) == add(apply(T, g1), apply(T, g2))


@pytest.mark.parametrize("N", [11, 14, 15, 26, 30])
def test_every_delta_choice_is_an_eigenform(N):
    for dc in DeltaChoice.all_for_level(N):
        E = build_eisenstein(dc, 240)
        for ell in (2, 3, 5, 7, 11):
            if N % ell:
                assert check_eigen(HeckeOp.T(ell, N), E, ell + 1)[0]
        for p, d in dc.delta.items():
            assert check_eigen(HeckeOp.U(p, N), E, d)[0]
