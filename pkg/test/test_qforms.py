"""
Reduced forms, CM points, genus characters, fundamental-domain reduction
"""
import pytest

from src.errors import BadDiscriminant, HypothesisViolated, PrecisionLoss
from src.numeval import point
from src.qforms import (
    cm_point,
    enumerate_forms,
    genus_character,
    primitive_forms,
    reduce_to_fundamental_domain,
)
from src.type.form import BinaryQF, HeegnerPointExact


def test_enumerate_small_discriminants():
    assert enumerate_forms(-3) == [(BinaryQF(1, 1, 1), 3)]
    assert enumerate_forms(-4) == [(BinaryQF(1, 0, 1), 2)]
    assert enumerate_forms(-20) == [(BinaryQF(1, 0, 5), 1), (BinaryQF(2, 2, 3), 1)]
    assert [tuple(q) for q, _ in enumerate_forms(-23)] == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]


def test_enumerate_includes_imprimitive_forms():
    forms = [q for q, _ in enumerate_forms(-60)]
    assert forms == [BinaryQF(1, 0, 15), BinaryQF(2, 2, 8), BinaryQF(3, 0, 5), BinaryQF(4, 2, 4)]
    assert primitive_forms(-60) == [BinaryQF(1, 0, 15), BinaryQF(3, 0, 5)]


def test_every_enumerated_form_is_reduced():
    for D in (-3, -15, -47, -84, -180):
        for q, _ in enumerate_forms(D):
            assert q.disc == D
            assert q.is_reduced(), q


def test_bad_discriminant():
    for D in (-5, 0, 8):
        with pytest.raises(BadDiscriminant):
            enumerate_forms(D)


def test_cm_point():
    assert cm_point(BinaryQF(2, 2, 3)) == HeegnerPointExact(a=2, b=2, D=-20)


def test_genus_character():
    assert genus_character(5, BinaryQF(1, 0, 5)) == 1
    assert genus_character(5, BinaryQF(2, 2, 3)) == -1
    assert genus_character(1, BinaryQF(2, 2, 3)) == 1
    # 내용이 Delta 와 서로소가 아니면 0
    assert genus_character(5, BinaryQF(5, 5, 5)) == 0


def test_genus_character_needs_divisor():
    with pytest.raises(HypothesisViolated):
        genus_character(8, BinaryQF(2, 2, 3))


def test_genus_character_is_class_invariant():
    q = BinaryQF(2, 2, 3)
    moved = q.transform((2, 1, 1, 1))
    assert moved.disc == q.disc
    assert genus_character(5, moved) == genus_character(5, q)


def test_reduce_to_fundamental_domain(ctx):
    tau, gamma = reduce_to_fundamental_domain(point("0", "1/2", ctx))
    assert abs(tau.mid - 2j) < 1e-40
    assert gamma == (0, -1, 1, 0)

    tau, gamma = reduce_to_fundamental_domain(point("7/3", "1", ctx))
    assert abs(tau.mid.real) <= 0.5
    assert abs(tau.mid) >= 1


def test_reduce_rejects_lower_half_plane(ctx):
    with pytest.raises(HypothesisViolated):
        reduce_to_fundamental_domain(point("0", "-1", ctx))


def test_reduce_rejects_wide_ball(ctx):
    tau = ctx.ball(0, 1, rad="0.01")
    with pytest.raises(PrecisionLoss):
        reduce_to_fundamental_domain(tau)
