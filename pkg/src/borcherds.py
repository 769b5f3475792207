"""
Plus-space basis f_d, twisted Borcherds products and their checks

- zagier_basis: f_d = q^(-d) + sum A(n, d) q^n, 선형대수로 구성
- borcherds_product: prod_n prod_b (1 - zeta^b q^n)^((Delta|b) A(Delta n^2, d))
- bp / gbhe / trace-series 검증
"""
import logging
import threading
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.ball import ComplexBall, PrecisionCtx, ball_sum
from src.const import BP_MAX_TERMS, DEFAULT_BP_TAU_IM, DEFAULT_GBHE_ORDER, GBHE_NOMINAL_ORDER
from src.domain import QQ_DOMAIN, CoeffDomain, ball_domain, cyclotomic, fraction_of
from src.errors import (
    BadDiscriminant,
    ConvergenceFailure,
    HypothesisViolated,
    NonIntegralSolution,
    NonRealCoefficient,
    OrderUnderflow,
    RankDeficient,
    UniquenessFailure,
    UnknownName,
)
from src.hecke import WeightedForm, half_integral_pTp2, mult_hecke
from src.lifts import divisor_lift
from src.lvalues import is_fundamental, kronecker_symbol
from src.numeval import cm_ball, j_invariant
from src.qforms import cm_point
from src.series import QSeries, eta_quotient, standard_series
from src.traces import twisted_trace, weighted_classes
from src.type.form import BorcherdsProductData, J, J0Bold, PlusForm
from src.type.report import CheckResult

logger = logging.getLogger(__name__)

ZAGIER_ANCHOR = "found by Zagier are given"
BP_ANCHOR = "is the stabilizer of"
GBHE_ANCHOR = "Borcherds isomorphism is Hecke equivariant"
TRACE_SERIES_ANCHOR = "generating function of the twisted trace"
TRACE_SERIES_SIGN = 1

Exponents = Dict[Tuple[int, int], int]


# ==================================================================
# Kohnen plus space 기저
# ==================================================================

def _t_power(a: int):
    # t = eta(tau)^8 / eta(4 tau)^8 = q^-1 - 8 + ...
    return ((1, 8 * a), (4, -8 * a))


def _s_power(a: int):
    # s = eta(2 tau)^24 / (eta(tau)^8 eta(4 tau)^16) = t + 16
    return ((2, 24 * a), (1, -8 * a), (4, -16 * a))


def _spanning_specs(d: int, spanning: str) -> List[Tuple[Tuple[int, int], ...]]:
    """theta * R 의 R 목록: 다항식 부분 (t 또는 s) + 다른 첨점의 극"""
    if spanning not in ("t", "s"):
        raise UnknownName(f"unknown spanning set: {spanning}", supported=["t", "s"])
    poly = _t_power if spanning == "t" else _s_power
    specs = [poly(a) for a in range(d + 1)]
    cusp_order = (d + 1) // 4 + 1
    specs += [_t_power(-b) for b in range(1, cusp_order + 1)]
    specs += [_s_power(-b) for b in range(1, cusp_order + 1)]
    return specs


def _column(spec, prec: int) -> QSeries:
    """theta * eta_quotient(spec), q^(prec-1) 까지"""
    lead = sum(m * r for m, r in spec) // 24
    order = prec - lead
    theta = standard_series("theta4", order)
    return theta * eta_quotient(spec, order) if spec else theta


def _target(n: int, d: int) -> Optional[int]:
    """q^n 계수에 대한 조건 (None 이면 자유)"""
    if n < 0:
        return 1 if n == -d else 0
    if n == 0:
        return 1 if d == 0 else 0
    return 0 if n % 4 in (2, 3) else None


def _solve(columns: List[QSeries], d: int, prec: int) -> List[Fraction]:
    lo = min(c.lead for c in columns)
    rows = []
    for n in range(lo, prec):
        want = _target(n, d)
        if want is None:
            continue
        rows.append([QQ(int(c.coefficient(n))) for c in columns] + [QQ(want)])
    width = len(columns)
    aug = DomainMatrix(rows, (len(rows), width + 1), QQ)
    rref, pivots = aug.rref()
    if width in pivots:
        raise RankDeficient(f"f_{d}: spanning set does not reach the plus-space conditions", d=d, columns=width)
    if len(pivots) < width:
        raise UniquenessFailure(f"f_{d}: {width - len(pivots)} free directions through q^{prec - 1}", d=d)
    dense = rref.to_Matrix()
    return [fraction_of(dense[i, width]) for i in range(width)]


_BASIS_LOCK = threading.Lock()
_BASIS_CACHE: Dict[Tuple[int, str], PlusForm] = {}


def _check_basis_indices(d: int):
    if d < 0 or (-d) % 4 not in (0, 1):
        raise BadDiscriminant(f"-{d} is not 0 or a negative discriminant", d=d)


def zagier_basis(d: int, prec: int, spanning: str = "t") -> PlusForm:
    """
    f_d 를 q^(prec-1) 까지

    작은 창에서 연립방정식을 풀고, 해를 전체 정밀도로 펼친 뒤 plus 조건과
    정수성을 다시 확인한다.
    """
    _check_basis_indices(d)
    if prec < 1:
        raise OrderUnderflow("f_d needs prec >= 1", prec=prec)
    key = (d, spanning)
    with _BASIS_LOCK:
        hit = _BASIS_CACHE.get(key)
    if hit is not None and hit.series.prec >= prec:
        return PlusForm(d, hit.series.truncate(prec))

    specs = _spanning_specs(d, spanning)
    # 창 크기는 요청 정밀도와 무관하게 정한다
    window = d + 8 + 4 * len(specs)
    limit = 8 * window
    while True:
        try:
            weights = _solve([_column(s, window) for s in specs], d, window)
            break
        except UniquenessFailure:
            if window >= limit:
                raise
            window *= 2
    full = max(prec, window)
    total = None
    for spec, w in zip(specs, weights):
        if w:
            term = _column(spec, full).scale(w)
            total = term if total is None else total + term
    series = total.truncate(full)
    for c in series.coeffs:
        if Fraction(c).denominator != 1:
            raise NonIntegralSolution(f"f_{d} has a non-integral coefficient {c}", d=d)
    form = PlusForm(d, series)
    form.check_support()
    for n in range(series.lead, 1):
        if Fraction(series.coefficient(n)) != (_target(n, d) or 0):
            raise UniquenessFailure(f"f_{d}: principal part is wrong at q^{n}", d=d, n=n)
    logger.debug(f"🧮 f_{d} through q^{full - 1} ({spanning}-spanning, {len(specs)} columns, window {window})")
    with _BASIS_LOCK:
        current = _BASIS_CACHE.get(key)
        if current is None or current.series.prec < series.prec:
            _BASIS_CACHE[key] = form
    return PlusForm(d, series.truncate(prec))


def plus_coefficient(d: int, n: int) -> int:
    """A(n, d)"""
    return int(zagier_basis(d, n + 1).coefficient(n))


def zagier_basis_check(d: int, prec: int) -> CheckResult:
    """두 spanning set 의 결과가 같은지, 그리고 plus/정수/주부분 조건"""
    first = zagier_basis(d, prec, "t")
    second = zagier_basis(d, prec, "s")
    passed = first.series.agrees_with(second.series, prec)
    details = {"head": QSeries.make(QQ_DOMAIN, first.series.lead, first.series.coeffs[: d + 12]).to_dict()}
    if d == 0:
        theta = standard_series("theta4", prec)
        details["equals_theta"] = first.series.agrees_with(theta, prec)
        passed = passed and details["equals_theta"]
    logger.info(f"{'✅' if passed else '❌'} f_{d}: spanning sets agree through q^{prec - 1}")
    return CheckResult(
        name=f"zagier-basis(d={d}, prec={prec})",
        anchor=ZAGIER_ANCHOR,
        passed=passed,
        residual="0" if passed else "mismatch",
        details=details,
    )


# ==================================================================
# Borcherds 곱
# ==================================================================

def _check_product_indices(delta: int, d: int):
    if delta <= 1 or not is_fundamental(delta):
        raise BadDiscriminant(f"{delta} is not a fundamental discriminant > 1", D=delta)
    _check_basis_indices(d)


def borcherds_exponents(delta: int, d: int, order: int, combination: Dict[int, int] = None) -> Exponents:
    """
    (n, b) -> (Delta|b) sum_e c_e A(Delta n^2, e),  1 <= n < order

    combination 은 {e: c_e}; 기본값은 {d: 1}.
    """
    _check_product_indices(delta, d)
    combination = combination or {d: 1}
    top = delta * (order - 1) ** 2 + 1
    forms = {e: zagier_basis(e, top) for e, c in combination.items() if c}
    chi = [kronecker_symbol(delta, b) for b in range(delta)]
    out = {}
    for n in range(1, order):
        a = sum(c * int(forms[e].coefficient(delta * n * n)) for e, c in combination.items() if c)
        for b in range(delta):
            if chi[b]:
                out[(n, b)] = chi[b] * a
    return out


def _root_powers(delta: int, dom: CoeffDomain, ctx: Optional[PrecisionCtx]):
    if ctx is None:
        return [dom.power(e) for e in range(delta)]
    return [ctx.root_of_unity(e, delta) for e in range(delta)]


def log_product(delta: int, exponents: Exponents, order: int, dom: CoeffDomain, ctx: PrecisionCtx = None) -> QSeries:
    """log prod (1 - zeta^b q^n)^c = -sum c zeta^(bk) q^(nk) / k"""
    powers = _root_powers(delta, dom, ctx)
    logs = [dom.zero] * order
    by_n: Dict[int, List[Tuple[int, int]]] = {}
    for (n, b), c in sorted(exponents.items()):
        if c and n < order:
            by_n.setdefault(n, []).append((b, c))
    for n, terms in sorted(by_n.items()):
        for k in range(1, (order - 1) // n + 1):
            acc = dom.zero
            for b, c in terms:
                acc = dom.add(acc, dom.scale(powers[(b * k) % delta], Fraction(c)))
            logs[n * k] = dom.sub(logs[n * k], dom.scale(acc, Fraction(1, k)))
    return QSeries.make(dom, 0, logs)


def _product_domain(delta: int, mode: str, ctx: Optional[PrecisionCtx]):
    if mode == "exact":
        return cyclotomic(delta), None
    if mode == "ball":
        if ctx is None:
            raise UnknownName("ball mode needs a precision context")
        return ball_domain(ctx), ctx
    raise UnknownName(f"unknown product mode: {mode}", supported=["exact", "ball"])


def _check_real(series: QSeries, delta: int, d: int):
    dom = series.domain
    for i, c in enumerate(series.coeffs):
        real = c.is_real() if isinstance(c, ComplexBall) else dom.is_real(c)
        if not real:
            raise NonRealCoefficient(f"Psi_{delta}(f_{d}) has a non-real coefficient at q^{series.lead + i}", n=series.lead + i)


def product_from_exponents(delta: int, exponents: Exponents, order: int, mode: str = "exact", ctx: PrecisionCtx = None) -> QSeries:
    dom, ball_ctx = _product_domain(delta, mode, ctx)
    return log_product(delta, exponents, order, dom, ball_ctx).exp()


def borcherds_product(delta: int, d: int, order: int, mode: str = "exact", ctx: PrecisionCtx = None) -> BorcherdsProductData:
    if order < 1:
        raise OrderUnderflow("order must be >= 1", order=order)
    exponents = borcherds_exponents(delta, d, order)
    series = product_from_exponents(delta, exponents, order, mode, ctx)
    _check_real(series, delta, d)
    logger.debug(f"🧮 Psi_{delta}(f_{d}) through q^{order - 1} ({mode})")
    return BorcherdsProductData(delta=delta, d=d, exponents=exponents, series=series, mode=mode)


def _to_ball(c, dom: CoeffDomain, ctx: PrecisionCtx) -> ComplexBall:
    return c if isinstance(c, ComplexBall) else dom.to_ball(c, ctx)


# ==================================================================
# CM 값 곱 공식
# ==================================================================

def bp_identity_check(delta: int, d: int, tau: Optional[ComplexBall], ctx: PrecisionCtx) -> CheckResult:
    """
    Psi_Delta(tau, f_d) == prod_Q (j(tau) - j(alpha_Q))^(chi(Q)/omega_Q)

    log Psi 의 q-전개는 Im tau > max Im alpha_Q 에서만 수렴한다.
    """
    _check_product_indices(delta, d)
    mp = ctx.mp
    tau = tau or ctx.ball(0, DEFAULT_BP_TAU_IM)
    classes = weighted_classes(delta, d)
    y = tau.mid.imag - tau.rad
    top = max(mp.sqrt(d * delta) / (2 * q.a) for q, _ in classes)
    if y <= top:
        raise ConvergenceFailure(f"Im tau must exceed {mp.nstr(top, 8)} for the product to converge", top=top)
    gap = 2 * mp.pi * (y - top)
    needed = int(mp.ceil((ctx.digits + 5) * mp.log(10) / gap)) + 2
    terms = min(needed, BP_MAX_TERMS)
    if needed > terms:
        logger.warning(f"⚠️  bp({delta},{d}): {needed} terms for full precision, summing {terms} and widening by the tail")

    # 좌변: log Psi(tau) = sum l_m q^m
    exponents = borcherds_exponents(delta, d, terms)
    logs = log_product(delta, exponents, terms, ball_domain(ctx), ctx)
    q = (ctx.pi() * ctx.ball(0, 2) * tau).exp()
    q_abs = abs(q.mid)
    pieces = [logs.coefficient(m) * q ** m for m in range(1, terms)]
    last = max(p.upper() for p in pieces[-3:])
    ratio = q_abs * mp.exp(2 * mp.pi * top)
    log_lhs = ball_sum(pieces, ctx)
    log_lhs = ComplexBall(log_lhs.mid, log_lhs.rad + 2 * last * ratio / (1 - ratio), ctx)

    # 우변: sum chi/omega log(j(tau) - j(alpha_Q))
    j_tau = j_invariant(tau)
    log_rhs = ball_sum(
        [(j_tau - j_invariant(cm_ball(cm_point(q_form), ctx))).log() * ctx.exact(w) for q_form, w in classes],
        ctx,
    )
    lhs, rhs = log_lhs.exp(), log_rhs.exp()
    modulus_ok = lhs.abs().overlaps(rhs.abs())
    full_ok = lhs.overlaps(rhs)
    phase = (log_lhs - log_rhs).imag
    logger.info(
        f"{'✅' if modulus_ok else '❌'} CM product ({delta},{d}) at {tau.encode()}: "
        f"|LHS|-|RHS| = {mp.nstr(abs(abs(lhs.mid) - abs(rhs.mid)), 5)}, phase {'ok' if full_ok else 'differs'}"
    )
    return CheckResult(
        name=f"bp({delta},{d})",
        anchor=BP_ANCHOR,
        passed=modulus_ok,
        residual=mp.nstr(abs(lhs.mid - rhs.mid), 5),
        details={
            "tau": tau.to_dict(),
            "terms": terms,
            "terms_needed": needed,
            "truncated": needed > terms,
            # 꼬리 반지름은 마지막 항들로부터의 기하급수 추정
            "tail": "heuristic",
            "lhs": lhs.to_dict(),
            "rhs": rhs.to_dict(),
            "modulus_residual": mp.nstr(abs(abs(lhs.mid) - abs(rhs.mid)), 5),
            "full_value_agrees": full_ok,
            "phase_difference": phase.to_dict(),
        },
    )


# ==================================================================
# Hecke 동변성
# ==================================================================

def gbhe_combination(d: int, p: int) -> Dict[int, int]:
    """pT(p^2) f_d = f_(p^2 d) + (-d|p) f_d + p f_(d/p^2)"""
    out = {p * p * d: 1}
    chi = kronecker_symbol(-d, p) if d else 0
    if chi:
        out[d] = out.get(d, 0) + chi
    if d % (p * p) == 0 and (-(d // (p * p))) % 4 in (0, 1):
        out[d // (p * p)] = out.get(d // (p * p), 0) + p
    return out


def _pTp2_agrees(d: int, p: int, prec: int) -> bool:
    image = half_integral_pTp2(zagier_basis(d, p * p * prec + 1), p).series.truncate(prec)
    expected = None
    for e, c in sorted(gbhe_combination(d, p).items()):
        term = zagier_basis(e, prec).series.scale(c)
        expected = term if expected is None else expected + term
    return image.agrees_with(expected, prec)


def gbhe_check(delta: int, d: int, p: int, order: Optional[int] = None, mode: str = "exact", ctx: PrecisionCtx = None) -> CheckResult:
    """Psi(f_d)|T(p) == Psi(pT(p^2) f_d), 지수의 선형성으로 우변을 만든다"""
    _check_product_indices(delta, d)
    if delta % p == 0:
        raise HypothesisViolated(f"{p} divides Delta = {delta}", p=p, delta=delta)
    order = order or DEFAULT_GBHE_ORDER.get(p, 6)
    psi = borcherds_product(delta, d, p * order, mode, ctx).series
    lhs = mult_hecke(psi, p).truncate(order)
    combination = gbhe_combination(d, p)
    rhs = product_from_exponents(delta, borcherds_exponents(delta, d, order, combination), order, mode, ctx)
    if lhs.prec < order:
        raise OrderUnderflow(f"multiplicative Hecke image trusted only through q^{lhs.prec - 1}", order=order)
    if mode == "exact":
        diff = lhs - rhs
        passed = diff.is_zero()
        residual = "0" if passed else "non-zero"
    else:
        passed = lhs.agrees_with(rhs, order)
        residual = ctx.mp.nstr(max(abs(a.mid - b.mid) for a, b in zip(lhs.dense(0, order), rhs.dense(0, order))), 5)
    half_ok = _pTp2_agrees(d, p, 24)
    passed = passed and half_ok
    logger.info(f"{'✅' if passed else '❌'} Psi_{delta}(f_{d})|T({p}) vs product of {combination} through q^{order - 1}")
    return CheckResult(
        name=f"gbhe({delta},{d},{p})",
        anchor=GBHE_ANCHOR,
        passed=passed,
        residual=residual,
        details={
            "requested_order": GBHE_NOMINAL_ORDER,
            "run_order": order,
            "mode": mode,
            "combination": {str(e): c for e, c in sorted(combination.items())},
            "half_integral_hecke_agrees": half_ok,
            "lhs": lhs.to_dict(),
            "rhs": rhs.to_dict(),
        },
    )


# ==================================================================
# 트레이스 생성함수
# ==================================================================

def borcherds_trace_series(delta: int, d: int, top: int, ctx: PrecisionCtx, tolerance: str = "1e-12") -> CheckResult:
    """
    [q^n] D(Psi_Delta(f_d)) 와 Tr_{Delta,d}(J_n), 1 <= n <= top

    부호는 n = 1 에서 정하고 모든 n 에 같은 부호가 맞아야 통과한다.
    """
    mp = ctx.mp
    psi = borcherds_product(delta, d, top + 1, "exact").series
    lifted = divisor_lift(WeightedForm(psi, 0))
    dom = lifted.domain
    tol = mp.mpf(tolerance)
    coefficients = [_to_ball(lifted.coefficient(n), dom, ctx) for n in range(top + 1)]
    traces = [twisted_trace(delta, d, J(n), ctx) for n in range(1, top + 1)]

    def close(a: ComplexBall, b: ComplexBall) -> bool:
        return abs(a.mid - b.mid) <= tol * max(1, abs(b.mid)) + a.rad + b.rad

    sign = 1 if close(coefficients[1], traces[0]) else -1
    rows = []
    passed = True
    for n, trace in enumerate(traces, start=1):
        ok = close(coefficients[n] * sign, trace)
        passed = passed and ok
        rows.append({"n": n, "coefficient": coefficients[n].to_dict(), "trace": trace.to_dict(), "agrees": ok})
    constant_zero = coefficients[0].contains_zero()
    shadow = -twisted_trace(delta, d, J0Bold(), ctx)
    # D(Psi) = +sum Tr(J_n) q^n; 전체 부호가 뒤집힌 급수는 실패로 본다
    passed = passed and constant_zero and sign == TRACE_SERIES_SIGN
    logger.info(f"{'✅' if passed else '❌'} D(Psi_{delta}(f_{d})) = {'+' if sign > 0 else '-'}sum Tr(J_n) q^n for n <= {top}")
    return CheckResult(
        name=f"trace-series({delta},{d})",
        anchor=TRACE_SERIES_ANCHOR,
        passed=passed,
        residual=mp.nstr(max(abs(coefficients[n].mid * sign - traces[n - 1].mid) for n in range(1, top + 1)), 5),
        details={
            "sign": sign,
            "expected_sign": TRACE_SERIES_SIGN,
            "rows": rows,
            "constant_term": coefficients[0].to_dict(),
            "j0bold_shadow": shadow.to_dict(),
        },
    )
