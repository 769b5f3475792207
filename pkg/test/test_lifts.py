"""
Divisor lifting and power-sum divisor recovery
"""
from fractions import Fraction

import pytest

from src.domain import poly_domain
from src.errors import BadLeadingCoefficient, InconsistentPowerSums, OrderUnderflow
from src.hecke import WeightedForm, named_form
from src.lifts import akn_generating, divisor_lift, divisor_solve, dlift_equivariance_check
from src.series import faber, standard_series


def test_divisor_lift_of_e4_and_e6():
    top = 10
    e4 = divisor_lift(named_form("E4", top + 1))
    e6 = divisor_lift(named_form("E6", top + 1))
    assert e4.coefficient(0) == Fraction(1, 3)
    assert e6.coefficient(0) == Fraction(1, 2)
    assert e4.coefficient(1) == -248
    for n in range(1, top + 1):
        assert 3 * e4.coefficient(n) == faber(n, 1)[1].evaluate(0), f"E4 at n={n}"
        assert 2 * e6.coefficient(n) == faber(n, 1)[1].evaluate(1728), f"E6 at n={n}"


def test_divisor_lift_of_delta_vanishes():
    lifted = divisor_lift(WeightedForm(standard_series("delta", 30), 12))
    assert lifted.is_zero()
    assert lifted.prec >= 29


def test_divisor_lift_needs_monic_series():
    with pytest.raises(BadLeadingCoefficient):
        divisor_lift(WeightedForm(standard_series("E4", 10).scale(2), 4))


def test_akn_generating_function():
    dom = poly_domain()
    generating = akn_generating(8)
    for n in range(0, 8):
        assert generating.coefficient(n) == faber(n, 1)[1].evaluate(dom.lam), f"F_{n}(lam)"


def test_akn_rejects_zero_order():
    with pytest.raises(OrderUnderflow):
        akn_generating(0)


def test_divisor_solve_exact():
    lifted = divisor_lift(named_form("E4E6", 12))
    data = divisor_solve([lifted.coefficient(n) for n in range(1, 9)], lifted.coefficient(0))
    assert [(Fraction(v), m) for v, m in data.entries] == [
        (Fraction(0), Fraction(1, 3)),
        (Fraction(1728), Fraction(1, 2)),
    ]
    assert data.total == Fraction(5, 6)


def test_divisor_solve_single_point():
    # f = j - 1000 의 영점 하나: s_n = F_n(1000)
    sums = [faber(n, 1)[1].evaluate(1000) for n in range(1, 5)]
    data = divisor_solve(sums, 1)
    assert [(Fraction(v), m) for v, m in data.entries] == [(Fraction(1000), Fraction(1))]


def test_divisor_solve_rejects_bad_multiplicity():
    sums = [Fraction(2, 7) * faber(n, 1)[1].evaluate(5) for n in range(1, 5)]
    with pytest.raises(InconsistentPowerSums):
        divisor_solve(sums, Fraction(2, 7))


def test_dlift_equivariance_small():
    for name in ("E4", "delta"):
        for p in (2, 3):
            f = named_form(name, p * 12 + 2 * p + 2)
            result = dlift_equivariance_check(f, p, 12)
            assert result.passed, result.details
