"""
Kronecker symbols, quadratic discriminants, L(1, chi_D), units and regulators
"""
import logging
from functools import lru_cache
from math import gcd, isqrt
from typing import Dict, List, Tuple

import sympy

from src.ball import ComplexBall, PrecisionCtx
from src.errors import BadDiscriminant, MethodDisagreement
from src.qforms import primitive_forms
from src.type.form import BinaryQF, LValueResult, QuadUnit, RegulatorResult

logger = logging.getLogger(__name__)


def kronecker_symbol(a: int, n: int) -> int:
    return int(sympy.kronecker_symbol(a, n))


def _squarefree(m: int) -> bool:
    return all(e == 1 for e in sympy.factorint(abs(m)).values())


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        return (D // 4) % 4 in (2, 3) and _squarefree(D // 4)
    return False


def discriminant_decompose(disc: int) -> Tuple[int, int]:
    """disc = D f^2, D 는 기본 판별식"""
    if disc == 0 or disc % 4 not in (0, 1):
        raise BadDiscriminant(f"{disc} is not a discriminant", D=disc)
    f = 1
    for p, e in sympy.factorint(abs(disc)).items():
        f *= int(p) ** (e // 2)
    core = disc // (f * f)
    if core % 4 != 1:
        core *= 4
        f //= 2
    if not is_fundamental(core):
        raise BadDiscriminant(f"{disc} has no fundamental part", D=disc)
    return core, f


def _require_fundamental(D: int):
    if not is_fundamental(D):
        raise BadDiscriminant(f"{D} is not a fundamental discriminant", D=D)


def unit_count(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


# ==================================================================
# 실이차체: 단위, 협의 유수
# ==================================================================

@lru_cache(maxsize=256)
def fundamental_unit(delta: int) -> QuadUnit:
    """(P0 + sqrt(Delta))/2 의 연분수 주기로 x^2 - Delta y^2 = ±4 의 최소해"""
    if delta <= 0 or delta % 4 not in (0, 1) or isqrt(delta) ** 2 == delta:
        raise BadDiscriminant(f"{delta} is not a positive non-square discriminant", D=delta)
    s = isqrt(delta)
    P, Q = delta % 2, 2
    G_prev, G = -P, Q
    B_prev, B = 1, 0
    while True:
        a = (P + s) // Q if Q > 0 else (P + s + 1) // Q
        G_prev, G = G, a * G + G_prev
        B_prev, B = B, a * B + B_prev
        P = a * Q - P
        Q = (delta - P * P) // Q
        if Q == 2:
            return QuadUnit(x=G, y=B, delta=delta)


def _zagier_reduced(delta: int) -> List[BinaryQF]:
    """a > 0, c > 0, b > a + c 인 판별식 Delta 의 원시형"""
    s = isqrt(delta)
    out = []
    for b in range(s + 1, (delta + 1) // 2 + 1):
        if (b - delta) % 2:
            continue
        ac = (b * b - delta) // 4
        for a in sympy.divisors(ac):
            c = ac // a
            if a + c < b and gcd(gcd(a, b), c) == 1:
                out.append(BinaryQF(a, b, c))
    return out


def _zagier_step(q: BinaryQF, s: int) -> BinaryQF:
    n = (q.b + s) // (2 * q.a) + 1
    return BinaryQF(q.a * n * n - q.b * n + q.c, 2 * q.a * n - q.b, q.a)


@lru_cache(maxsize=256)
def narrow_class_number(delta: int) -> int:
    """Zagier 축약형의 주기 개수"""
    if delta <= 0 or delta % 4 not in (0, 1) or isqrt(delta) ** 2 == delta:
        raise BadDiscriminant(f"{delta} is not a positive non-square discriminant", D=delta)
    s = isqrt(delta)
    remaining = set(_zagier_reduced(delta))
    cycles = 0
    while remaining:
        start = min(remaining)
        q = start
        while True:
            remaining.discard(q)
            q = _zagier_step(q, s)
            if q == start:
                break
        cycles += 1
    return cycles


def class_number(D: int) -> int:
    if D < 0:
        return len(primitive_forms(D))
    h_plus = narrow_class_number(D)
    return h_plus if fundamental_unit(D).norm == -1 else h_plus // 2


# ==================================================================
# L(1, chi_D)
# ==================================================================

def _ball(ctx: PrecisionCtx, value, terms: int = 1) -> ComplexBall:
    mp = ctx.mp
    rad = 16 * (terms + 1) * ctx.eps * max(abs(value), mp.mpf(1))
    return ComplexBall(mp.mpc(value), rad, ctx)


def _agree(per_method: Dict[str, ComplexBall], what: str):
    names = list(per_method)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if not per_method[a].overlaps(per_method[b]):
                raise MethodDisagreement(
                    f"{what}: {a} and {b} disagree",
                    **{a: per_method[a].encode(), b: per_method[b].encode()},
                )


def _tightest(per_method: Dict[str, ComplexBall]) -> ComplexBall:
    return min(per_method.values(), key=lambda ball: ball.rad)


def dirichlet_L1(D: int, ctx: PrecisionCtx) -> LValueResult:
    _require_fundamental(D)
    mp = ctx.mp
    k = abs(D)
    chi = [kronecker_symbol(D, a) for a in range(k)]
    per_method = {}

    # L(1, chi) = -(1/k) sum chi(a) psi(a/k)
    direct = -sum(chi[a] * mp.digamma(mp.mpf(a) / k) for a in range(1, k) if chi[a]) / k
    per_method["direct_series"] = _ball(ctx, direct, k)

    if D < 0:
        h, w = class_number(D), unit_count(D)
        per_method["closed_form"] = _ball(ctx, 2 * mp.pi * h / (w * mp.sqrt(k)))
        # -(pi / |D|^(3/2)) sum chi(a) a
        weighted = sum(chi[a] * a for a in range(1, k))
        per_method["character_sum"] = _ball(ctx, -mp.pi * weighted / (k * mp.sqrt(k)), k)
    else:
        log_sum = -sum(chi[a] * mp.log(mp.sin(mp.pi * a / k)) for a in range(1, k) if chi[a]) / mp.sqrt(k)
        per_method["character_log_sum"] = _ball(ctx, log_sum, k)
        unit = fundamental_unit(D)
        eps = (unit.x + unit.y * mp.sqrt(D)) / 2
        per_method["class_number_formula"] = _ball(ctx, 2 * class_number(D) * mp.log(eps) / mp.sqrt(D))

    _agree(per_method, f"L(1, chi_{D})")
    logger.debug(f"🧮 L(1, chi_{D}) methods agree: {sorted(per_method)}")
    return LValueResult(value=_tightest(per_method), per_method=per_method)


# ==================================================================
# h(Delta) log(eps_Delta)
# ==================================================================

def regulator_product(delta: int, ctx: PrecisionCtx) -> RegulatorResult:
    """
    h(Delta) log eps_Delta 를 두 경로로 계산

    (i) sqrt(Delta) L(1, chi_Delta) / 2  (문자합)
    (ii) 연분수로 구한 단위의 log 와 따로 센 유수의 곱
    반환값은 좁은 의미가 아닌 (h, eps) 규약이고 나머지는 alternatives 에 둔다.
    """
    if delta <= 1:
        raise BadDiscriminant(f"{delta} is not a real quadratic discriminant", D=delta)
    _require_fundamental(delta)
    mp = ctx.mp
    k = delta
    chi = [kronecker_symbol(delta, a) for a in range(k)]
    log_sum = -sum(chi[a] * mp.log(mp.sin(mp.pi * a / k)) for a in range(1, k) if chi[a])
    via_character = _ball(ctx, log_sum / 2, k)

    unit = fundamental_unit(delta)
    h_plus = narrow_class_number(delta)
    h = h_plus if unit.norm == -1 else h_plus // 2
    log_eps = mp.log((unit.x + unit.y * mp.sqrt(delta)) / 2)
    via_unit = _ball(ctx, h * log_eps)

    # h+/h in {1, 2}
    factor = h_plus // h
    if not via_character.overlaps(via_unit):
        raise MethodDisagreement(
            f"regulator product for {delta}: character sum and unit route disagree",
            character=via_character.encode(), unit=via_unit.encode(),
        )
    log_eps_plus = log_eps if unit.norm == 1 else 2 * log_eps
    result = RegulatorResult(
        value=via_unit,
        convention="wide",
        class_number=h,
        narrow_class_number=h_plus,
        unit=unit,
        per_method={"character_sum": via_character, "unit_times_class_number": via_unit},
        alternatives={
            "narrow_ordinary": _ball(ctx, h_plus * log_eps),
            "narrow_pair": _ball(ctx, h_plus * log_eps_plus),
        },
        factor=factor,
    )
    logger.debug(f"🧮 h({delta}) log eps = {via_unit.encode()} (h={h}, h+={h_plus}, N(eps)={unit.norm})")
    return result
