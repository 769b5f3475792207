"""
q-series arithmetic, standard expansions and Faber polynomials
"""
from fractions import Fraction

import pytest

from src.domain import QQ_DOMAIN, cyclotomic
from src.errors import (
    BadConstantTerm,
    DomainMismatch,
    FractionalLeadExponent,
    OrderUnderflow,
    UnknownName,
    ZeroDivide,
)
from src.series import (
    QSeries,
    eta_quotient,
    faber,
    series_arith,
    series_exp_log,
    series_from_dict,
    standard_series,
    theta_operator,
)


def ints(series: QSeries, lo: int, hi: int):
    return [int(c) for c in series.dense(lo, hi)]


def test_standard_expansions():
    assert ints(standard_series("E4", 4), 0, 4) == [1, 240, 2160, 6720]
    assert ints(standard_series("E6", 3), 0, 3) == [1, -504, -16632]
    assert ints(standard_series("E2", 3), 0, 3) == [1, -24, -72]
    assert ints(standard_series("delta", 5), 1, 5) == [1, -24, 252, -1472]
    assert ints(standard_series("theta4", 10), 0, 10) == [1, 2, 0, 0, 2, 0, 0, 0, 0, 2]

    j = standard_series("j", 5)
    assert j.lead == -1
    assert ints(j, -1, 3) == [1, 744, 196884, 21493760]


def test_eta_quotient_matches_delta():
    assert eta_quotient(((1, 24),), 20).agrees_with(standard_series("delta", 20))


def test_eta_quotient_rejects_fractional_offset():
    with pytest.raises(FractionalLeadExponent):
        eta_quotient(((1, 1),), 10)


def test_make_strips_leading_zeros_and_keeps_precision():
    s = QSeries.make(QQ_DOMAIN, 0, [Fraction(0), Fraction(0), Fraction(3), Fraction(1)])
    assert s.lead == 2
    assert s.prec == 4
    assert s.coefficient(0) == 0


def test_precision_propagates_through_product_and_quotient():
    delta = standard_series("delta", 10)
    e4 = standard_series("E4", 10)
    assert (e4 * delta).prec == 11
    j = (e4 ** 3) / delta
    assert j.lead == -1 and j.prec == 9
    with pytest.raises(OrderUnderflow):
        j.coefficient(9)


def test_exp_log_inverse_pair():
    x = QSeries.make(QQ_DOMAIN, 1, [Fraction(1), Fraction(-2), Fraction(5, 3)] + [Fraction(0)] * 6)
    assert series_exp_log(series_exp_log(x, "exp"), "log").agrees_with(x)
    with pytest.raises(UnknownName):
        series_exp_log(x, "sqrt")


def test_exp_rejects_constant_term():
    with pytest.raises(BadConstantTerm):
        series_exp_log(standard_series("E4", 5), "exp")


def test_log_rejects_non_unit_constant():
    with pytest.raises(BadConstantTerm):
        standard_series("E4", 5).scale(2).log()


def test_division_by_zero_series():
    zero = QSeries.constant(0, 5)
    with pytest.raises(ZeroDivide):
        standard_series("E4", 5) / zero


def test_domain_mismatch():
    a = standard_series("E4", 5)
    b = QSeries.constant(1, 5, cyclotomic(5))
    with pytest.raises(DomainMismatch):
        a + b


def test_theta_and_dilate():
    delta = standard_series("delta", 6)
    assert ints(theta_operator(delta), 1, 4) == [1, -48, 756]
    d2 = delta.dilate(2)
    assert d2.lead == 2
    assert ints(d2, 2, 7) == [1, 0, -24, 0, 252]


def test_ramanujan_derivative_of_e4():
    # 3 Theta E4 = E2 E4 - E6
    e2, e4, e6 = (standard_series(name, 12) for name in ("E2", "E4", "E6"))
    lhs = theta_operator(e4).scale(3)
    rhs = series_arith(series_arith(e2, e4, "mul"), e6, "sub")
    assert lhs.agrees_with(rhs, 12)


def test_truncate_below_lead():
    with pytest.raises(OrderUnderflow):
        standard_series("delta", 5).truncate(1)


def test_series_arith_unknown_op():
    a = standard_series("E4", 5)
    with pytest.raises(UnknownName):
        series_arith(a, a, "pow")


def test_series_json_round_trip():
    e6 = standard_series("E6", 6)
    assert series_from_dict(e6.to_dict()).agrees_with(e6)


def test_faber_low_indices():
    j2, poly = faber(2, 4)
    assert poly.coefficients == (159768, -1488, 1)
    assert j2.lead == -2
    assert ints(j2, -2, 2) == [1, 0, 0, 42987520]
    assert poly.evaluate(0) == 159768

    one, poly0 = faber(0, 3)
    assert poly0.coefficients == (1,)
    assert one.coefficient(0) == 1


def test_faber_evaluates_to_series():
    # F_3(j) == J_3 as q-series
    order = 6
    j3, poly = faber(3, order)
    j = standard_series("j", order + 4)
    assert poly.evaluate(j).agrees_with(j3, order)


def test_faber_rejects_negative_index():
    with pytest.raises(UnknownName):
        faber(-1, 5)
