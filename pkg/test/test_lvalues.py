"""
Discriminants, class numbers, units, L(1, chi_D) and regulators
"""
import pytest

from src.errors import BadDiscriminant
from src.lvalues import (
    class_number,
    dirichlet_L1,
    discriminant_decompose,
    fundamental_unit,
    is_fundamental,
    kronecker_symbol,
    narrow_class_number,
    regulator_product,
)


def test_kronecker_symbol():
    assert kronecker_symbol(5, 2) == -1
    assert kronecker_symbol(-4, 3) == -1
    assert kronecker_symbol(-20, 3) == 1
    assert kronecker_symbol(8, 7) == 1


def test_is_fundamental():
    assert [D for D in range(-24, 25) if is_fundamental(D)] == [
        -24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 5, 8, 12, 13, 17, 21, 24,
    ]


def test_discriminant_decompose():
    assert discriminant_decompose(-60) == (-15, 2)
    assert discriminant_decompose(-36) == (-4, 3)
    assert discriminant_decompose(-12) == (-3, 2)
    assert discriminant_decompose(-3) == (-3, 1)
    assert discriminant_decompose(45) == (5, 3)
    with pytest.raises(BadDiscriminant):
        discriminant_decompose(-5)


def test_class_numbers():
    assert [class_number(D) for D in (-3, -4, -20, -23, -47, -84)] == [1, 1, 2, 3, 5, 4]
    assert [class_number(D) for D in (5, 8, 12, 21, 24)] == [1, 1, 1, 1, 1]
    assert [narrow_class_number(D) for D in (5, 8, 12, 21, 24)] == [1, 1, 2, 2, 2]


def test_fundamental_units():
    u5, u8, u12 = fundamental_unit(5), fundamental_unit(8), fundamental_unit(12)
    assert (u5.x, u5.y, u5.norm) == (1, 1, -1)
    assert (u8.x, u8.y, u8.norm) == (2, 1, -1)
    assert (u12.x, u12.y, u12.norm) == (4, 1, 1)
    u13 = fundamental_unit(13)
    assert (u13.x, u13.y) == (3, 1)


def test_fundamental_unit_rejects_squares():
    with pytest.raises(BadDiscriminant):
        fundamental_unit(9)


def test_L1_imaginary(ctx):
    mp = ctx.mp
    result = dirichlet_L1(-4, ctx)
    assert set(result.per_method) == {"direct_series", "closed_form", "character_sum"}
    assert result.value.overlaps(ctx.pi() / 4)
    assert abs(dirichlet_L1(-3, ctx).value.mid - mp.pi / (3 * mp.sqrt(3))) < mp.mpf("1e-45")


def test_L1_real(ctx):
    mp = ctx.mp
    result = dirichlet_L1(5, ctx)
    expected = 2 * mp.log((1 + mp.sqrt(5)) / 2) / mp.sqrt(5)
    assert abs(result.value.mid - expected) < mp.mpf("1e-45")
    assert "class_number_formula" in result.per_method


def test_L1_needs_fundamental(ctx):
    with pytest.raises(BadDiscriminant):
        dirichlet_L1(-12, ctx)


def test_regulator_conventions(ctx):
    mp = ctx.mp
    reg = regulator_product(12, ctx)
    log_eps = mp.log(2 + mp.sqrt(3))
    assert reg.convention == "wide"
    assert (reg.class_number, reg.narrow_class_number, reg.factor) == (1, 2, 2)
    assert abs(reg.value.mid - log_eps) < mp.mpf("1e-45")
    assert abs(reg.alternatives["narrow_ordinary"].mid - 2 * log_eps) < mp.mpf("1e-45")
    assert abs(reg.alternatives["narrow_pair"].mid - 2 * log_eps) < mp.mpf("1e-45")

    reg5 = regulator_product(5, ctx)
    golden = mp.log((1 + mp.sqrt(5)) / 2)
    assert reg5.factor == 1
    assert abs(reg5.alternatives["narrow_pair"].mid - 2 * golden) < mp.mpf("1e-45")
