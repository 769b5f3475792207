"""
Certified evaluation on the upper half-plane

eta 는 q-곱으로 직접, 나머지 (Gamma-불변) 함수는 기본 영역으로 옮긴 뒤 계산한다.
모든 급수 절단 오차는 기하 꼬리 한계로 rad 에 더해진다.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

from src.ball import ComplexBall, PrecisionCtx
from src.const import SUPPORTED_EVAL_NAMES
from src.errors import (
    HypothesisViolated,
    NotInvariant,
    PrecisionLoss,
    StepTooLarge,
    UnknownName,
)
from src.qforms import reduce_to_fundamental_domain
from src.series import FaberPoly, QSeries, faber
from src.type.form import HeegnerPointExact

logger = logging.getLogger(__name__)

Number = Union[int, str, Fraction]


def point(x: Number, y: Number, ctx: PrecisionCtx) -> ComplexBall:
    """'1/3', '0.3', 2 같은 입력에서 tau = x + iy"""
    re = ctx.exact(Fraction(x))
    im = ctx.exact(Fraction(y))
    return re + im * ctx.ball(0, 1)


def cm_ball(H: HeegnerPointExact, ctx: PrecisionCtx) -> ComplexBall:
    """alpha = (-b + i sqrt|D|) / (2a)"""
    root = ctx.exact(-H.D).sqrt()
    return (ctx.exact(-H.b) + root * ctx.ball(0, 1)) / ctx.exact(2 * H.a)


@lru_cache(maxsize=None)
def faber_poly(n: int) -> FaberPoly:
    return faber(n, 1)[1]


# ==================================================================
# q 와 꼬리 한계
# ==================================================================

def _nome(tau: ComplexBall, fraction: int = 1):
    """e^(2 pi i tau / fraction) 와 |q| 의 상한"""
    ctx = tau.ctx
    mp = ctx.mp
    y_low = tau.mid.imag - tau.rad
    if y_low <= 0:
        raise HypothesisViolated("point is not in the upper half-plane", tau=tau.encode())
    two_pi_i = ctx.pi() * ctx.ball(0, 2)
    q = (two_pi_i * tau / ctx.exact(fraction)).exp()
    return q, mp.exp(-2 * mp.pi * y_low / fraction)


def _term_count(q_abs, ctx: PrecisionCtx) -> int:
    mp = ctx.mp
    if q_abs >= 1:
        raise PrecisionLoss("|q| >= 1")
    n = int(mp.ceil(mp.log(ctx.eps) / mp.log(q_abs)))
    if n > ctx.max_terms:
        raise PrecisionLoss(f"{n} q-terms needed, max_terms is {ctx.max_terms}", terms=n)
    return max(n, 1)


def _widen(ball: ComplexBall, extra) -> ComplexBall:
    return ComplexBall(ball.mid, ball.rad + extra, ball.ctx)


def _euler_product(q: ComplexBall, q_abs, ctx: PrecisionCtx) -> ComplexBall:
    """prod_(n>=1) (1 - q^n), 꼬리는 exp(|q|^(N+1)/(1-|q|)^2) - 1 로 한정"""
    mp = ctx.mp
    terms = _term_count(q_abs, ctx)
    prod = ctx.exact(1)
    qn = ctx.exact(1)
    for _ in range(terms):
        qn = qn * q
        prod = prod * (1 - qn)
    tail = q_abs ** (terms + 1) / (1 - q_abs) ** 2
    return _widen(prod, prod.upper() * mp.expm1(tail))


# ==================================================================
# eta, E4, j
# ==================================================================

def eta(tau: ComplexBall) -> ComplexBall:
    ctx = tau.ctx
    q, q_abs = _nome(tau)
    q24, _ = _nome(tau, 24)
    return q24 * _euler_product(q, q_abs, ctx)


def _eisenstein4(q: ComplexBall, q_abs, ctx: PrecisionCtx) -> ComplexBall:
    """1 + 240 sum n^3 q^n / (1 - q^n)"""
    terms = _term_count(q_abs, ctx)
    acc = ctx.exact(0)
    qn = ctx.exact(1)
    for n in range(1, terms + 1):
        qn = qn * q
        acc = acc + qn * (n ** 3) / (1 - qn)
    ratio = ((terms + 2) / (terms + 1)) ** 3 * q_abs
    if ratio >= 1:
        raise PrecisionLoss("Lambert series tail does not contract", ratio=ratio)
    tail = (terms + 1) ** 3 * q_abs ** (terms + 1) / ((1 - q_abs) * (1 - ratio))
    return 1 + _widen(acc, tail) * 240


def j_invariant(tau: ComplexBall) -> ComplexBall:
    ctx = tau.ctx
    reduced, _ = reduce_to_fundamental_domain(tau)
    q, q_abs = _nome(reduced)
    e4 = _eisenstein4(q, q_abs, ctx)
    disc = q * _euler_product(q, q_abs, ctx) ** 24
    return e4 ** 3 / disc


# ==================================================================
# J0bold, frak_f, user series
# ==================================================================

def _log_y_eta4(tau: ComplexBall) -> ComplexBall:
    """log(y |eta(tau)|^4), 기본 영역에서 계산"""
    reduced, _ = reduce_to_fundamental_domain(tau)
    y = reduced.imag
    return y.log() + eta(reduced).abs().log() * 4


def j0_bold(tau: ComplexBall) -> ComplexBall:
    return (_log_y_eta4(tau) + 1).real


def frak_f(tau: ComplexBall) -> ComplexBall:
    return (-_log_y_eta4(tau)).real


def _user_series(series: QSeries, tau: ComplexBall) -> ComplexBall:
    """
    주어진 계수까지의 합

    남은 꼬리는 알 수 없으므로 max|c_n| |q|^prec / (1 - |q|) 를 추정치로 더한다.
    """
    ctx = tau.ctx
    reduced, _ = reduce_to_fundamental_domain(tau)
    q, q_abs = _nome(reduced)
    total = ctx.exact(0)
    for i, c in enumerate(series.coeffs):
        if c:
            total = total + (q ** (series.lead + i)) * ctx.exact(Fraction(c))
    biggest = max((abs(Fraction(c)) for c in series.coeffs), default=Fraction(0))
    tail = ctx.to_mpf(biggest) * q_abs ** series.prec / (1 - q_abs)
    return _widen(total, tail)


# ==================================================================
# 이름 기반 디스패치
# ==================================================================

def eval_modular(
    name: str,
    tau: ComplexBall,
    n: Optional[int] = None,
    series: Optional[QSeries] = None,
    reduce: Optional[bool] = None,
) -> ComplexBall:
    if name not in SUPPORTED_EVAL_NAMES:
        raise UnknownName(f"unknown function: {name}", supported=sorted(SUPPORTED_EVAL_NAMES))
    if name == "eta":
        if reduce:
            raise NotInvariant("eta is not Gamma-invariant; it is never reduced to the fundamental domain")
        return eta(tau)
    if reduce is False:
        logger.debug(f"🔧 {name}: reduction is always applied to invariant functions")
    if name == "one":
        return tau.ctx.exact(1)
    if name == "j":
        return j_invariant(tau)
    if name == "Jn":
        if n is None or n < 0:
            raise UnknownName("Jn needs an index n >= 0", n=n)
        if n == 0:
            return tau.ctx.exact(1)
        return faber_poly(n).evaluate(j_invariant(tau))
    if name == "J0bold":
        return j0_bold(tau)
    if name == "frak_f":
        return frak_f(tau)
    if series is None:
        raise UnknownName("user_series needs a series")
    return _user_series(series, tau)


def evaluator(name: str, n: Optional[int] = None, series: Optional[QSeries] = None) -> Callable[[ComplexBall], ComplexBall]:
    return lambda tau: eval_modular(name, tau, n=n, series=series)


def pointwise_hecke(
    name: str,
    k: int,
    p: int,
    tau: ComplexBall,
    n: Optional[int] = None,
    series: Optional[QSeries] = None,
) -> ComplexBall:
    """p^(-k/2) sum_i g((tau+i)/p) + p^(k/2) g(p tau)"""
    if k % 2:
        raise HypothesisViolated(f"weight must be even, got {k}", weight=k)
    ctx = tau.ctx
    g = evaluator(name, n, series)
    down = ctx.exact(Fraction(p) ** (-(k // 2)))
    up = ctx.exact(Fraction(p) ** (k // 2))
    shifted = [g((tau + i) / ctx.exact(p)) for i in range(p)]
    total = ctx.exact(0)
    for value in shifted:
        total = total + value
    return total * down + g(tau * ctx.exact(p)) * up


# ==================================================================
# 쌍곡 라플라시안 (가중치 0)
# ==================================================================

def _stencil(values, center, h2):
    """(-f(2h) + 16 f(h) - 30 f(0) + 16 f(-h) - f(-2h)) / (12 h^2)"""
    m2, m1, p1, p2 = values
    return (-m2 + m1 * 16 - center * 30 + p1 * 16 - p2) / h2


def laplacian0_fd(
    name: str,
    tau: ComplexBall,
    h: Number,
    n: Optional[int] = None,
    series: Optional[QSeries] = None,
) -> ComplexBall:
    """
    -y^2 (f_xx + f_yy), 5점 중심차분

    step h 와 2h 의 Richardson 차이 |L(h) - L(2h)| / 15 를 반경에 더한다.
    """
    ctx = tau.ctx
    mp = ctx.mp
    step = Fraction(h)
    y = tau.mid.imag
    if step <= 0 or ctx.to_mpf(step) >= y / 4:
        raise StepTooLarge(f"step {h} must be positive and below Im(tau)/4", step=str(h), y=y)
    g = evaluator(name, n, series)
    center = g(tau)
    i_ball = ctx.ball(0, 1)
    cache = {}

    def at(dx: int, dy: int) -> ComplexBall:
        key = (dx, dy)
        if key not in cache:
            shift = ctx.exact(step * dx) + ctx.exact(step * dy) * i_ball
            cache[key] = g(tau + shift)
        return cache[key]

    def laplace(s: int) -> ComplexBall:
        h2 = ctx.exact(12 * (step * s) ** 2)
        xx = _stencil([at(-2 * s, 0), at(-s, 0), at(s, 0), at(2 * s, 0)], center, h2)
        yy = _stencil([at(0, -2 * s), at(0, -s), at(0, s), at(0, 2 * s)], center, h2)
        return xx + yy

    fine, coarse = laplace(1), laplace(2)
    y2 = tau.imag * tau.imag
    estimate = abs(fine.mid - coarse.mid) / 15
    result = -(y2 * _widen(fine, estimate))
    if result.rad > mp.mpf("1e-3"):
        raise PrecisionLoss("finite-difference error dominates the result", rad=result.rad)
    logger.debug(f"🧮 Laplacian of {name} at {tau.encode()}: {result.encode()}")
    return result
