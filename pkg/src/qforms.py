"""
Positive definite binary quadratic forms, CM points and genus characters
"""
import logging
from math import gcd, isqrt
from typing import List, Tuple

from sympy import kronecker_symbol

from src.ball import ComplexBall
from src.const import GENUS_SEARCH_FACTOR
from src.errors import (
    BadDiscriminant,
    HypothesisViolated,
    InternalInconsistency,
    NoCoprimeRepresentationFound,
    PrecisionLoss,
)
from src.type.form import BinaryQF, HeegnerPointExact

logger = logging.getLogger(__name__)

Matrix = Tuple[int, int, int, int]


def check_discriminant(D: int, negative: bool = True):
    if (negative and D >= 0) or (not negative and D <= 0) or D % 4 not in (0, 1):
        raise BadDiscriminant(f"{D} is not a {'negative' if negative else 'positive'} discriminant", D=D)


def enumerate_forms(D: int) -> List[Tuple[BinaryQF, int]]:
    """축약형 대표 (비원시형 포함) 와 안정자 크기 omega"""
    check_discriminant(D)
    forms = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c):
                continue
            q = BinaryQF(a, b, c)
            forms.append((q, q.omega))
    forms.sort(key=lambda item: tuple(item[0]))
    return forms


def primitive_forms(D: int) -> List[BinaryQF]:
    return [q for q, _ in enumerate_forms(D) if q.content == 1]


def cm_point(Q: BinaryQF) -> HeegnerPointExact:
    if Q.a <= 0 or Q.disc >= 0:
        raise BadDiscriminant("CM points need a positive definite form", form=Q)
    return HeegnerPointExact(a=Q.a, b=Q.b, D=Q.disc)


# ==================================================================
# Genus character
# ==================================================================

def _shell(radius: int):
    """max(|x|,|y|) == radius 인 원시 벡터 (y >= 0 반평면)"""
    for x in range(-radius, radius + 1):
        for y in (radius,) if abs(x) < radius else range(0, radius + 1):
            if (y > 0 or x > 0) and gcd(x, y) == 1:
                yield x, y


def genus_character(delta: int, Q: BinaryQF, witnesses: int = 3) -> int:
    """
    chi_Delta(Q) = (Delta | n), n 은 Q 가 표현하는 Delta 와 서로소인 정수

    서로 다른 n 을 최소 witnesses 개 찾아서 값이 같은지 확인한다.
    """
    D = Q.disc
    if delta < 1 or D % delta:
        raise HypothesisViolated(f"{delta} does not divide disc {D}", delta=delta, disc=D)
    if delta == 1:
        return 1
    if gcd(Q.content, delta) > 1:
        return 0
    seen = {}
    bound = GENUS_SEARCH_FACTOR * delta
    for radius in range(1, bound + 1):
        for x, y in _shell(radius):
            n = Q.evaluate(x, y)
            if n > 0 and gcd(n, delta) == 1 and n not in seen:
                seen[n] = int(kronecker_symbol(delta, n))
        if len(seen) >= witnesses:
            break
    if not seen:
        raise NoCoprimeRepresentationFound(f"no value of {Q} coprime to {delta} within |x|,|y| <= {bound}", form=Q)
    values = set(seen.values())
    if len(values) != 1:
        raise InternalInconsistency(f"genus character of {Q} is not well defined", form=Q, values=seen)
    if len(seen) < witnesses:
        logger.warning(f"⚠️  genus character of {tuple(Q)} checked on only {len(seen)} representations")
    return values.pop()


# ==================================================================
# Fundamental domain
# ==================================================================

def _compose(left: Matrix, right: Matrix) -> Matrix:
    a, b, c, d = left
    e, f, g, h = right
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def reduce_to_fundamental_domain(tau: ComplexBall, max_steps: int = 10_000) -> Tuple[ComplexBall, Matrix]:
    """tau' = gamma tau 이고 |Re tau'| <= 1/2, |tau'| >= 1"""
    mp = tau.ctx.mp
    if tau.mid.imag <= tau.rad:
        raise HypothesisViolated("point is not in the upper half-plane", tau=tau.encode())
    if tau.rad > mp.mpf("1e-5") * max(1, abs(tau.mid)):
        raise PrecisionLoss("ball too wide to decide fundamental-domain boundaries", rad=tau.rad)
    gamma: Matrix = (1, 0, 0, 1)
    for _ in range(max_steps):
        n = int(mp.nint(tau.mid.real))
        if n:
            tau = tau - n
            gamma = _compose((1, -n, 0, 1), gamma)
        if abs(tau.mid) < 1 - tau.rad:
            tau = -tau.inv()
            gamma = _compose((0, -1, 1, 0), gamma)
            continue
        return tau, gamma
    raise PrecisionLoss("fundamental-domain reduction did not terminate", steps=max_steps)
