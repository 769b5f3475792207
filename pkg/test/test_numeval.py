"""
Certified evaluation of eta, j, J_n, J0bold and frak_f
"""
import pytest

from src.errors import HypothesisViolated, NotInvariant, StepTooLarge, UnknownName
from src.numeval import (
    cm_ball,
    eta,
    eval_modular,
    j_invariant,
    laplacian0_fd,
    point,
    pointwise_hecke,
)
from src.type.form import HeegnerPointExact


def eta_at_i(mp):
    # eta(i) = Gamma(1/4) / (2 pi^(3/4))
    return mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** (mp.mpf(3) / 4))


def test_eta_at_i(ctx):
    mp = ctx.mp
    value = eta(point(0, 1, ctx))
    assert abs(value.mid - eta_at_i(mp)) < mp.mpf("1e-45")
    assert value.rad < mp.mpf("1e-40")
    assert abs(value.mid.real - mp.mpf("0.768225422326056659")) < mp.mpf("1e-17")


def test_eta_needs_upper_half_plane(ctx):
    with pytest.raises(HypothesisViolated):
        eta(point(0, -1, ctx))


def test_j_special_values(ctx):
    mp = ctx.mp
    tol = mp.mpf("1e-35")
    assert abs(j_invariant(point(0, 1, ctx)).mid - 1728) < tol
    assert abs(j_invariant(point(0, 2, ctx)).mid - 287496) < tol
    # Gamma 불변성: i + 1, i / 2 로도 같은 값
    assert abs(j_invariant(point(1, 1, ctx)).mid - 1728) < tol
    assert abs(j_invariant(point(0, "1/2", ctx)).mid - 287496) < tol
    rho = cm_ball(HeegnerPointExact(a=1, b=1, D=-3), ctx)
    assert abs(j_invariant(rho).mid) < tol


def test_eval_modular_dispatch(ctx):
    mp = ctx.mp
    tau = point(0, 1, ctx)
    assert abs(eval_modular("Jn", tau, n=1).mid - 984) < mp.mpf("1e-35")
    assert abs(eval_modular("Jn", tau, n=0).mid - 1) == 0
    assert eval_modular("one", tau).mid == 1

    expected = 1 + 4 * mp.log(eta_at_i(mp))
    assert abs(eval_modular("J0bold", tau).mid - expected) < mp.mpf("1e-40")
    assert abs(eval_modular("frak_f", tau).mid + 4 * mp.log(eta_at_i(mp))) < mp.mpf("1e-40")


def test_eval_modular_errors(ctx):
    tau = point(0, 1, ctx)
    with pytest.raises(NotInvariant):
        eval_modular("eta", tau, reduce=True)
    with pytest.raises(UnknownName):
        eval_modular("E12", tau)
    with pytest.raises(UnknownName):
        eval_modular("Jn", tau)


def test_j0bold_is_invariant(ctx):
    mp = ctx.mp
    a = eval_modular("J0bold", point("1/5", "3/2", ctx))
    b = eval_modular("J0bold", point("6/5", "3/2", ctx))
    assert abs(a.mid - b.mid) < mp.mpf("1e-40")


def test_pointwise_hecke_matches_series(ctx80):
    mp = ctx80.mp
    for x, y in (("0", "2"), ("1/3", "1")):
        tau = point(x, y, ctx80)
        for p in (2, 3):
            lhs = pointwise_hecke("Jn", 0, p, tau, n=1)
            rhs = eval_modular("Jn", tau, n=p)
            assert abs(lhs.mid - rhs.mid) < mp.mpf("1e-40"), (x, y, p)


def test_pointwise_hecke_odd_weight(ctx):
    with pytest.raises(HypothesisViolated):
        pointwise_hecke("j", 1, 2, point(0, 1, ctx))


def test_laplacian_of_j0bold(ctx):
    value = laplacian0_fd("J0bold", point("1/10", "13/10", ctx), "1/1000")
    assert abs(value.mid - 1) < 1e-6


def test_laplacian_of_holomorphic_function(ctx):
    value = laplacian0_fd("Jn", point("1/10", "13/10", ctx), "1/1000", n=1)
    assert abs(value.mid) < 1e-6


def test_laplacian_step_too_large(ctx):
    with pytest.raises(StepTooLarge):
        laplacian0_fd("J0bold", point(0, 1, ctx), "1/2")
    with pytest.raises(StepTooLarge):
        laplacian0_fd("J0bold", point(0, 1, ctx), 0)
