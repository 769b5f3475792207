"""
Twisted traces over CM points and the relations they satisfy
"""
import logging
import threading
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple

from sympy import factorint, isprime, multiplicity, primefactors

from src.ball import ComplexBall, PrecisionCtx, ball_sum
from src.errors import (
    BadDiscriminant,
    HypothesisViolated,
    InternalInconsistency,
    NonRealResult,
    UnknownName,
)
from src.lvalues import (
    discriminant_decompose,
    dirichlet_L1,
    is_fundamental,
    kronecker_symbol,
    regulator_product,
)
from src.numeval import cm_ball, eval_modular
from src.qforms import cm_point, enumerate_forms, genus_character
from src.type.form import (
    J,
    FrakF,
    J0Bold,
    One,
    TraceRelation,
    TraceTerm,
    Traceable,
    UserSeries,
    traceable_label,
)
from src.type.report import CheckResult

logger = logging.getLogger(__name__)

TRACE_RATIO_ANCHOR = "prime p not dividing d"
KRONECKER_ANCHOR = "established a representation for the twisted trace"
PROP_CONG_ANCHOR = "prime not dividing a discriminant"
# 자료에 실린 Tr_{5,4}(frak_f) 의 예시 값
PUBLISHED_EXAMPLE = {(5, 4): "log(1+sqrt(2))"}


def parse_traceable(kind: str, n: Optional[int] = None) -> Traceable:
    kind = kind.lower().replace("_", "")
    if kind == "one":
        return One()
    if kind == "j":
        if n is None or n < 0:
            raise UnknownName("J needs an index n >= 0", n=n)
        return J(n)
    if kind in ("j0bold", "j0"):
        return J0Bold()
    if kind in ("frakf", "f"):
        return FrakF()
    raise UnknownName(f"unknown traceable: {kind}", supported=["one", "J", "J0bold", "frakf"])


def _evaluate(f: Traceable, tau: ComplexBall) -> ComplexBall:
    if isinstance(f, One):
        return tau.ctx.exact(1)
    if isinstance(f, J):
        return eval_modular("Jn", tau, n=f.n)
    if isinstance(f, J0Bold):
        return eval_modular("J0bold", tau)
    if isinstance(f, FrakF):
        return eval_modular("frak_f", tau)
    if isinstance(f, UserSeries):
        return eval_modular("user_series", tau, series=f.series)
    raise UnknownName(f"unknown traceable: {f!r}")


def check_trace_indices(delta: int, d: int):
    if delta < 1 or (delta > 1 and not is_fundamental(delta)):
        raise BadDiscriminant(f"{delta} is not 1 or a positive fundamental discriminant", D=delta)
    if d < 1 or (-d) % 4 not in (0, 1):
        raise BadDiscriminant(f"-{d} is not a negative discriminant", D=-d)


def weighted_classes(delta: int, d: int) -> List[Tuple[object, Fraction]]:
    """(form, chi_Delta(Q)/omega_Q), chi = 0 인 항은 제외"""
    check_trace_indices(delta, d)
    out = []
    for q, omega in enumerate_forms(-d * delta):
        chi = genus_character(delta, q)
        if chi:
            out.append((q, Fraction(chi, omega)))
    return out


# ==================================================================
# Tr_{Delta,d}(f)
# ==================================================================

_TRACE_LOCK = threading.Lock()
_TRACE_CACHE: Dict[tuple, ComplexBall] = {}


def twisted_trace(delta: int, d: int, f: Traceable, ctx: PrecisionCtx) -> ComplexBall:
    """sum_Q chi_Delta(Q)/omega_Q f(alpha_Q)"""
    key = (delta, d, f, ctx) if not isinstance(f, UserSeries) else None
    if key is not None:
        with _TRACE_LOCK:
            hit = _TRACE_CACHE.get(key)
        if hit is not None:
            return hit

    classes = weighted_classes(delta, d)
    if delta > 1:
        # 상수는 기여하지 않는다
        constant = sum((w for _, w in classes), Fraction(0))
        if constant:
            raise InternalInconsistency(f"Tr_{{{delta},{d}}}(1) = {constant} != 0", delta=delta, d=d)
    terms = [_evaluate(f, cm_ball(cm_point(q), ctx)) * ctx.exact(w) for q, w in classes]
    total = ball_sum(terms, ctx)
    if not total.is_real():
        raise NonRealResult(f"Tr_{{{delta},{d}}}({traceable_label(f)}) is not real", value=total.encode())
    total = total.real
    logger.debug(f"🧮 Tr_{{{delta},{d}}}({traceable_label(f)}) = {total.encode()}")
    if key is not None:
        with _TRACE_LOCK:
            _TRACE_CACHE[key] = total
    return total


# ==================================================================
# Hecke 관계
# ==================================================================

def _split_square_part(d: int, p: int) -> Tuple[int, int]:
    """d = p^(2u) d', p^2 가 d' 를 나누지 않음"""
    u = 0
    while d % (p * p) == 0:
        d //= p * p
        u += 1
    return u, d


def _substitute(index: int, n: int, f: Traceable) -> Traceable:
    # n = 0 이면 J_0 자리에 f (J0bold, frak_f, one) 를 넣는다
    if n == 0:
        return f
    return J(index)


def prop_cong_relation(delta: int, d: int, p: int, m: int, n: int, f: Optional[Traceable] = None) -> TraceRelation:
    """
    d = p^(2u) d' 일 때

    sum_(t<=l) p^t Tr_d(J_(p^m n / p^(2t)))
      = sum_(t<=m) p^(m-t) Tr_(p^(2u-2m+4t) d')(J_n)                            (m < u)
      = sum_(t<=m-u) (-d'|p)^(m-u-t) p^u Tr_(p^(2t) d')(J_n)
        + sum_(1<=t<=u) p^(u-t) Tr_(p^(2m-2u+4t) d')(J_n)                       (m >= u)
    """
    if not isprime(p):
        raise HypothesisViolated(f"{p} is not prime", p=p)
    if delta % p == 0:
        raise HypothesisViolated(f"{p} divides Delta = {delta}", p=p, delta=delta)
    if m < 0 or n < 0:
        raise HypothesisViolated("m and n must be non-negative", m=m, n=n)
    check_trace_indices(delta, d)
    u, d0 = _split_square_part(d, p)
    if (-d0) % 4 not in (0, 1):
        raise HypothesisViolated(f"-{d0} is not a discriminant", d=d, p=p)
    if n > 0:
        f = J(n)
    elif f is None or isinstance(f, J):
        raise HypothesisViolated("n = 0 needs one of one, J0bold, frak_f", n=n)

    ell = m if n == 0 else min(int(multiplicity(p, n)), m)
    lhs = [
        TraceTerm(Fraction(p ** t), delta, d, _substitute(p ** m * n // p ** (2 * t), n, f))
        for t in range(ell + 1)
    ]
    rhs = []
    if m < u:
        for t in range(m + 1):
            rhs.append(TraceTerm(Fraction(p ** (m - t)), delta, p ** (2 * u - 2 * m + 4 * t) * d0, f))
        note = "m < u"
    else:
        chi = kronecker_symbol(-d0, p)
        for t in range(m - u + 1):
            coeff = Fraction(chi) ** (m - u - t) * p ** u
            if coeff:
                rhs.append(TraceTerm(coeff, delta, p ** (2 * t) * d0, f))
        for t in range(1, u + 1):
            rhs.append(TraceTerm(Fraction(p ** (u - t)), delta, p ** (2 * m - 2 * u + 4 * t) * d0, f))
        note = "m >= u"
    return TraceRelation(lhs=lhs, rhs=rhs, note=f"p={p}, u={u}, d'={d0}, {note}")


def evaluate_relation(relation: TraceRelation, ctx: PrecisionCtx) -> Tuple[ComplexBall, ComplexBall]:
    def side(terms):
        return ball_sum([twisted_trace(t.delta, t.d, t.traceable, ctx) * ctx.exact(t.coeff) for t in terms], ctx)

    return side(relation.lhs), side(relation.rhs)


def trace_hecke_relation(
    delta: int, d: int, p: int, m: int, n: int, f: Optional[Traceable], ctx: PrecisionCtx,
) -> Tuple[TraceRelation, Optional[CheckResult]]:
    relation = prop_cong_relation(delta, d, p, m, n, f)
    if any(isinstance(t.traceable, UserSeries) for t in relation.lhs + relation.rhs):
        return relation, None
    lhs, rhs = evaluate_relation(relation, ctx)
    passed = lhs.overlaps(rhs)
    residual = ctx.mp.nstr(abs(lhs.mid - rhs.mid), 5)
    logger.info(f"{'✅' if passed else '❌'} trace relation Delta={delta} d={d} p={p} m={m} n={n}: residual {residual}")
    return relation, CheckResult(
        name=f"trace-relation({delta},{d},p={p},m={m},n={n})",
        anchor=PROP_CONG_ANCHOR,
        passed=passed,
        residual=residual,
        details={"relation": relation.to_dict(), "lhs": lhs.to_dict(), "rhs": rhs.to_dict()},
    )


def trace_ratio_check(delta: int, d: int, p: int, ctx: PrecisionCtx) -> CheckResult:
    """Tr_{Delta,p^2 d}(frak_f) == (p + 1 - (-d|p)) Tr_{Delta,d}(frak_f)"""
    if d % p == 0:
        raise HypothesisViolated(f"{p} divides d = {d}", p=p, d=d)
    factor = p + 1 - kronecker_symbol(-d, p)
    relation, check = trace_hecke_relation(delta, d, p, 1, 0, FrakF(), ctx)
    small = twisted_trace(delta, d, FrakF(), ctx)
    big = twisted_trace(delta, p * p * d, FrakF(), ctx)
    predicted = small * ctx.exact(factor)
    passed = big.overlaps(predicted) and check.passed
    ratio = big.mid.real / small.mid.real
    logger.info(f"{'✅' if passed else '❌'} Tr_{{{delta},{p * p * d}}}/Tr_{{{delta},{d}}} = {ctx.mp.nstr(ratio, 15)} (expect {factor})")
    return CheckResult(
        name=f"trace-ratio({delta},{d},{p})",
        anchor=TRACE_RATIO_ANCHOR,
        passed=passed,
        residual=ctx.mp.nstr(abs(big.mid - predicted.mid), 5),
        details={
            "factor": factor,
            "ratio": ctx.mp.nstr(ratio, 20),
            "small": small.to_dict(),
            "big": big.to_dict(),
            "relation": relation.to_dict(),
        },
    )


# ==================================================================
# Kronecker 극한 공식
# ==================================================================

def _euler_factor(D: int, f: int) -> int:
    out = 1
    for p in primefactors(f):
        out *= p + 1 - kronecker_symbol(D, p)
    return out


def kronecker_limit_check(delta: int, d: int, ctx: PrecisionCtx) -> CheckResult:
    """
    Tr_{Delta,d}(frak_f) 와 sqrt(d) L_(-d)(1) h(Delta) log eps_Delta / pi 비교

    양변을 각각 두 방법으로 계산하고, 규약별 (wide / narrow) 비율을 보고한다.
    -d 가 기본 판별식이 아니면 Euler 인수 prod (p + 1 - (D|p)) 를 곱해서 예측한다.
    """
    if delta <= 1 or not is_fundamental(delta):
        raise HypothesisViolated(f"Delta = {delta} must be a fundamental discriminant > 1", delta=delta)
    mp = ctx.mp
    D, cond = discriminant_decompose(-d)
    if cond > 1:
        if any(e > 1 for e in factorint(cond).values()) or gcd(D, cond) > 1 or gcd(delta, cond) > 1:
            raise HypothesisViolated(f"-{d} = {D}*{cond}^2 needs a squarefree conductor coprime to {D} and {delta}", d=d)

    via_frak = twisted_trace(delta, d, FrakF(), ctx)
    via_j0 = -twisted_trace(delta, d, J0Bold(), ctx)
    lhs_agree = via_frak.overlaps(via_j0)

    L = dirichlet_L1(D, ctx)
    reg = regulator_product(delta, ctx)
    euler = _euler_factor(D, cond)
    scale = ctx.exact(-D).sqrt() * ctx.exact(euler) / ctx.pi()
    rhs_by_method = {
        f"{l_name}*{r_name}": L.per_method[l_name] * reg.per_method[r_name] * scale
        for l_name in sorted(L.per_method)
        for r_name in sorted(reg.per_method)
    }
    rhs_values = list(rhs_by_method.values())
    rhs_agree = all(rhs_values[0].overlaps(v) for v in rhs_values[1:])
    rhs = min(rhs_values, key=lambda ball: ball.rad)

    ratios = {"wide": via_frak.mid.real / rhs.mid.real}
    for name, alt in reg.alternatives.items():
        ratios[name] = via_frak.mid.real / (L.value * alt * scale).mid.real
    tolerance = mp.mpf("1e-20")
    unit_conventions = sorted(name for name, r in ratios.items() if abs(r - 1) < tolerance)

    passed = lhs_agree and rhs_agree
    logger.info(
        f"{'✅' if passed else '❌'} Kronecker limit ({delta},{d}): ratio wide={mp.nstr(ratios['wide'], 15)}, "
        f"ratio 1 under {unit_conventions or 'no convention'}"
    )
    details = {
        "lhs": {"frak_f": via_frak.to_dict(), "minus_J0bold": via_j0.to_dict()},
        "rhs": {k: v.to_dict() for k, v in rhs_by_method.items()},
        "ratios": {k: mp.nstr(v, 20) for k, v in ratios.items()},
        "ratio_one_conventions": unit_conventions,
        "class_number": reg.class_number,
        "narrow_class_number": reg.narrow_class_number,
        "unit": reg.unit.to_dict(),
        "fundamental_part": D,
        "conductor": cond,
        "euler_factor": euler,
    }
    if (delta, d) in PUBLISHED_EXAMPLE:
        details["published_value"] = {
            "expression": PUBLISHED_EXAMPLE[(delta, d)],
            "value": mp.nstr(mp.log(1 + mp.sqrt(2)), 20),
        }
    return CheckResult(
        name=f"kronecker-limit({delta},{d})",
        anchor=KRONECKER_ANCHOR,
        passed=passed,
        residual=mp.nstr(abs(via_frak.mid - via_j0.mid), 5),
        details=details,
    )

