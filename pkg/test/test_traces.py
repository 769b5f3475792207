"""
Twisted traces and the Hecke relations between them
"""
from fractions import Fraction

import pytest

from src.errors import BadDiscriminant, HypothesisViolated, UnknownName
from src.traces import (
    check_trace_indices,
    kronecker_limit_check,
    parse_traceable,
    prop_cong_relation,
    trace_hecke_relation,
    trace_ratio_check,
    twisted_trace,
    weighted_classes,
)
from src.type.form import J, BinaryQF, FrakF, J0Bold, One


def test_parse_traceable():
    assert parse_traceable("one") == One()
    assert parse_traceable("J", 3) == J(3)
    assert parse_traceable("J0bold") == J0Bold()
    assert parse_traceable("frak_f") == FrakF()
    with pytest.raises(UnknownName):
        parse_traceable("J")
    with pytest.raises(UnknownName):
        parse_traceable("E4")


def test_check_trace_indices():
    check_trace_indices(1, 3)
    check_trace_indices(5, 4)
    with pytest.raises(BadDiscriminant):
        check_trace_indices(6, 4)
    with pytest.raises(BadDiscriminant):
        check_trace_indices(5, 2)


def test_weighted_classes():
    assert weighted_classes(5, 4) == [(BinaryQF(1, 0, 5), Fraction(1)), (BinaryQF(2, 2, 3), Fraction(-1))]
    assert weighted_classes(1, 3) == [(BinaryQF(1, 1, 1), Fraction(1, 3))]


def test_untwisted_traces_of_j1(ctx):
    mp = ctx.mp
    # J_1(rho) = -744 를 3 으로 나눈 값, (1728 - 744) / 2
    assert abs(twisted_trace(1, 3, J(1), ctx).mid - (-248)) < mp.mpf("1e-35")
    assert abs(twisted_trace(1, 4, J(1), ctx).mid - 492) < mp.mpf("1e-35")


def test_twisted_trace_of_constants(ctx):
    mp = ctx.mp
    assert twisted_trace(5, 4, One(), ctx).contains_zero()
    value = twisted_trace(5, 4, FrakF(), ctx)
    assert abs(value.mid - mp.log((1 + mp.sqrt(5)) / 2)) < mp.mpf("1e-40")
    assert value.is_real()


def test_prop_cong_relation_structure():
    relation = prop_cong_relation(5, 4, 3, 1, 0, FrakF())
    assert [(t.coeff, t.d) for t in relation.lhs] == [(1, 4), (3, 4)]
    assert [(t.coeff, t.d) for t in relation.rhs] == [(-1, 4), (1, 36)]
    assert all(t.traceable == FrakF() for t in relation.lhs + relation.rhs)
    assert "u=0" in relation.note


def test_prop_cong_relation_hypotheses():
    with pytest.raises(HypothesisViolated):
        prop_cong_relation(5, 4, 5, 1, 0, FrakF())
    with pytest.raises(HypothesisViolated):
        prop_cong_relation(5, 4, 4, 1, 0, FrakF())
    with pytest.raises(HypothesisViolated):
        prop_cong_relation(5, 4, 3, 1, 0, J(1))


def test_trace_hecke_relation_for_j1(ctx):
    relation, check = trace_hecke_relation(1, 3, 2, 1, 1, None, ctx)
    assert [t.traceable for t in relation.lhs] == [J(2)]
    assert check.passed, check.details


def test_trace_ratio(ctx):
    result = trace_ratio_check(5, 4, 3, ctx)
    assert result.passed, result.details
    assert result.details["factor"] == 5


def test_trace_ratio_rejects_divisor(ctx):
    with pytest.raises(HypothesisViolated):
        trace_ratio_check(5, 3, 3, ctx)


@pytest.mark.slow
def test_kronecker_limit(ctx):
    result = kronecker_limit_check(5, 4, ctx)
    assert result.passed, result.details
    assert "narrow_pair" in result.details["ratio_one_conventions"]
    assert abs(float(result.details["ratios"]["wide"]) - 2) < 1e-12
