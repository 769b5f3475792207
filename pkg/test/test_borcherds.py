"""
Plus-space basis f_d, twisted Borcherds products and the product identities
"""
import pytest

from src.errors import BadDiscriminant, ConvergenceFailure, UnknownName
from src.borcherds import (
    bp_identity_check,
    borcherds_exponents,
    borcherds_product,
    borcherds_trace_series,
    gbhe_check,
    gbhe_combination,
    plus_coefficient,
    zagier_basis,
    zagier_basis_check,
)
from src.series import standard_series


def test_f0_is_theta():
    f0 = zagier_basis(0, 30)
    assert f0.series.agrees_with(standard_series("theta4", 30), 30)


def test_first_basis_forms():
    f3 = zagier_basis(3, 10)
    assert f3.series.lead == -3
    assert [int(f3.coefficient(n)) for n in (-3, 0, 1, 4, 5)] == [1, 0, -248, 26752, -85995]
    f4 = zagier_basis(4, 6)
    assert [int(f4.coefficient(n)) for n in (-4, 0, 1, 4)] == [1, 0, 492, 143376]


def test_plus_coefficient():
    assert plus_coefficient(3, 1) == -248
    assert plus_coefficient(4, 1) == 492
    assert plus_coefficient(3, 5) == -85995


def test_basis_rejects_bad_index():
    with pytest.raises(BadDiscriminant):
        zagier_basis(2, 10)
    with pytest.raises(UnknownName):
        zagier_basis(3, 10, spanning="u")


def test_zagier_basis_check():
    result = zagier_basis_check(3, 30)
    assert result.passed, result.details
    assert zagier_basis_check(0, 30).details["equals_theta"]


def test_borcherds_exponents():
    exponents = borcherds_exponents(5, 3, 2)
    # (5|b) A(5, 3), A(5, 3) = -85995
    assert exponents == {(1, 1): -85995, (1, 2): 85995, (1, 3): 85995, (1, 4): -85995}
    with pytest.raises(BadDiscriminant):
        borcherds_exponents(4, 3, 2)


def test_borcherds_product_first_coefficient(ctx):
    mp = ctx.mp
    data = borcherds_product(5, 3, 3)
    series = data.series
    assert series.coefficient(0) == series.domain.one
    # [q^1] = -A(5, 3) * Gauss sum = 85995 sqrt(5)
    value = series.domain.to_ball(series.coefficient(1), ctx)
    assert abs(value.mid - 85995 * mp.sqrt(5)) < mp.mpf("1e-35")


def test_borcherds_product_ball_mode(ctx):
    mp = ctx.mp
    exact = borcherds_product(5, 3, 4)
    ball = borcherds_product(5, 3, 4, mode="ball", ctx=ctx)
    for n in range(4):
        expected = exact.series.domain.to_ball(exact.series.coefficient(n), ctx)
        assert abs(ball.series.coefficient(n).mid - expected.mid) < mp.mpf("1e-30") * max(1, abs(expected.mid))
    with pytest.raises(UnknownName):
        borcherds_product(5, 3, 4, mode="float")


def test_gbhe_combination():
    assert gbhe_combination(3, 2) == {12: 1, 3: -1}
    assert gbhe_combination(4, 3) == {36: 1, 4: -1}
    # theta | p T(p^2) = (p + 1) theta
    assert gbhe_combination(0, 2) == {0: 3}


@pytest.mark.slow
def test_bp_identity(ctx):
    result = bp_identity_check(5, 3, None, ctx)
    assert result.passed, result.details


@pytest.mark.slow
def test_gbhe(ctx):
    result = gbhe_check(5, 3, 2, order=4)
    assert result.passed, result.details
    assert result.details["half_integral_hecke_agrees"]


@pytest.mark.slow
def test_trace_series(ctx):
    result = borcherds_trace_series(5, 3, 3, ctx)
    assert result.passed, result.details
    assert result.details["sign"] == 1


def test_bp_rejects_tau_below_cm_points(ctx):
    # (5,4): max Im alpha_Q = sqrt(20)/2 > 2
    with pytest.raises(ConvergenceFailure):
        bp_identity_check(5, 4, ctx.ball(0, 2), ctx)


@pytest.mark.slow
def test_bp_identity_near_convergence_edge(ctx):
    result = bp_identity_check(5, 3, ctx.ball(0, 2), ctx)
    assert result.passed, result.details
    assert result.details["truncated"]
    assert result.details["terms_needed"] > result.details["terms"]
    assert result.details["tail"] == "heuristic"


def test_gbhe_reports_run_order():
    result = gbhe_check(5, 3, 2, order=2)
    assert result.passed, result.details
    assert result.details["requested_order"] == 30
    assert result.details["run_order"] == 2


def test_trace_series_requires_positive_sign(ctx):
    result = borcherds_trace_series(5, 3, 2, ctx)
    assert result.passed, result.details
    assert result.details["sign"] == result.details["expected_sign"] == 1
