"""
Hecke operators: T_n, the multiplicative operator and p T(p^2)
"""
from fractions import Fraction

import pytest

from src.errors import BadLeadingCoefficient, HypothesisViolated, NonPositiveIndex, UnknownName
from src.hecke import (
    WeightedForm,
    eigen_constant,
    half_integral_pTp2,
    hecke_Tn,
    mult_hecke,
    named_form,
)
from src.series import QSeries, faber, standard_series
from src.type.form import PlusForm


def test_j1_hecke_system_small():
    order = 10
    j1 = standard_series("j", 6 * order + 8) - 744
    for n in (2, 3, 4, 6):
        via_hecke = hecke_Tn(WeightedForm(j1, 0), n).truncate(order)
        assert via_hecke.agrees_with(faber(n, order, cross_check=False)[0], order), f"J_1|T_{n} != J_{n}"


def test_delta_is_eigenform():
    # det^(k/2) 정규화: 고전적 고유값 tau(2) = -24 에 2^(1-k/2) 가 곱해진다
    delta = standard_series("delta", 40)
    image = hecke_Tn(WeightedForm(delta, 12), 2).truncate(15)
    assert image.agrees_with(delta.scale(Fraction(-24, 2 ** 5)).truncate(15))


def test_eigen_constant():
    assert eigen_constant(1) == 1
    assert eigen_constant(6) == 12
    assert eigen_constant(12) == 28
    assert eigen_constant(2 ** 5) == 63
    with pytest.raises(NonPositiveIndex):
        eigen_constant(0)


def test_constant_function_eigenvalue():
    one = QSeries.constant(1, 1)
    for n in (2, 9, 30):
        assert hecke_Tn(WeightedForm(one, 0), n).coefficient(0) == eigen_constant(n)


def test_odd_weight_rejected():
    with pytest.raises(HypothesisViolated):
        WeightedForm(standard_series("E4", 5), 3)


def test_named_form():
    f = named_form("E4E6", 6)
    assert f.weight == 10
    assert int(f.series.coefficient(1)) == 240 - 504
    with pytest.raises(UnknownName):
        named_form("E8", 5)


def test_mult_hecke_on_delta():
    order = 20
    for p in (2, 3):
        delta = standard_series("delta", p * order + p + 1)
        lhs = mult_hecke(delta, p).with_order(order)
        assert lhs.lead == p + 1
        assert lhs.agrees_with((delta ** (p + 1)).with_order(order)), f"Delta|T({p}) != Delta^{p + 1}"


def test_mult_hecke_hypotheses():
    delta = standard_series("delta", 20)
    with pytest.raises(HypothesisViolated):
        mult_hecke(delta, 4)
    with pytest.raises(BadLeadingCoefficient):
        mult_hecke(delta.scale(2), 2)


def test_half_integral_theta_eigenvalue():
    # theta | p T(p^2) = (p + 1) theta
    theta = standard_series("theta4", 100)
    for p in (2, 3):
        image = half_integral_pTp2(PlusForm(0, theta), p).series
        prec = image.prec
        assert prec >= 10
        assert image.agrees_with(theta.scale(p + 1).truncate(prec), prec)
