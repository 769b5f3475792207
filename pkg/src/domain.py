"""
Coefficient domains for truncated q-series

A domain is a small object that knows how to add, multiply and encode its
elements. QSeries never touches the elements directly.
"""
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import List, Sequence

import sympy
from sympy import QQ, ring

from src.ball import ComplexBall, PrecisionCtx
from src.errors import NonInvertibleLeading


class CoeffDomain:
    name = "abstract"
    is_exact = True

    zero = None
    one = None

    def coerce(self, value):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def scale(self, a, r: Fraction):
        return a * self.coerce(r)

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def eq(self, a, b) -> bool:
        return a == b

    def encode(self, a) -> str:
        return str(a)

    # -----------------------------
    # 급수 커널 (도메인별로 재정의 가능)
    # -----------------------------
    def convolve(self, a: Sequence, b: Sequence, n: int) -> List:
        """c[k] = sum_{i+j=k} a[i] b[j], k < n"""
        out = [self.zero] * n
        nz_a = [(i, x) for i, x in enumerate(a[:n]) if not self.is_zero(x)]
        for j, y in enumerate(b[:n]):
            if self.is_zero(y):
                continue
            for i, x in nz_a:
                k = i + j
                if k >= n:
                    break
                out[k] = self.add(out[k], self.mul(x, y))
        return out

    def divide(self, num: Sequence, den: Sequence, n: int) -> List:
        """num / den 의 처음 n 개 계수 (den[0] 가역)"""
        inv0 = self.inv(den[0])
        nz_den = [(k, den[k]) for k in range(1, min(n, len(den))) if not self.is_zero(den[k])]
        out = []
        for m in range(n):
            acc = num[m] if m < len(num) else self.zero
            for k, d in nz_den:
                if k > m:
                    break
                acc = self.sub(acc, self.mul(d, out[m - k]))
            out.append(self.mul(acc, inv0))
        return out

    def __eq__(self, other):
        return isinstance(other, CoeffDomain) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


# ==================================================================
# 유리수
# ==================================================================

class ExactRational(CoeffDomain):
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        return Fraction(value)

    def scale(self, a, r):
        return a * r

    def inv(self, a):
        if a == 0:
            raise NonInvertibleLeading("zero is not invertible")
        return 1 / a

    def encode(self, a) -> str:
        return str(a)

    @staticmethod
    def _integral(seq: Sequence[Fraction]):
        den = lcm(*(x.denominator for x in seq)) if seq else 1
        return [x.numerator * (den // x.denominator) for x in seq], den

    def convolve(self, a, b, n):
        # 공통 분모로 올려서 정수 합성곱
        ia, da = self._integral(a[:n])
        ib, db = self._integral(b[:n])
        if sum(1 for x in ia if x) > sum(1 for y in ib if y):
            ia, ib = ib, ia
        out = [0] * n
        nz = [(i, x) for i, x in enumerate(ia) if x]
        for j, y in enumerate(ib):
            if not y:
                continue
            for i, x in nz:
                k = i + j
                if k >= n:
                    break
                out[k] += x * y
        den = da * db
        return [Fraction(c, den) for c in out]

    def divide(self, num, den, n):
        inum, dn = self._integral(num[:n])
        iden, dd = self._integral(den[:n])
        if abs(iden[0]) != 1:
            return super().divide(num, den, n)
        # den[0] = ±1 이면 정수 점화식으로 충분
        lead = iden[0]
        nz = [(k, iden[k]) for k in range(1, len(iden)) if iden[k]]
        out = []
        for m in range(n):
            acc = inum[m] if m < len(inum) else 0
            for k, d in nz:
                if k > m:
                    break
                acc -= d * out[m - k]
            out.append(acc * lead)
        return [Fraction(c * dd, dn) for c in out]


# ==================================================================
# Q[lam] : (akn) 생성함수의 형식 변수
# ==================================================================

class PolyRational(CoeffDomain):
    name = "QQ[lam]"

    def __init__(self):
        self.ring, self.lam = ring("lam", QQ)
        self.zero = self.ring.zero
        self.one = self.ring.one

    def coerce(self, value):
        if isinstance(value, Fraction):
            return self.ring.ground_new(QQ(value.numerator, value.denominator))
        if isinstance(value, int):
            return self.ring(value)
        return value

    def scale(self, a, r):
        return a.mul_ground(QQ(Fraction(r).numerator, Fraction(r).denominator))

    def inv(self, a):
        if not a or not a.is_ground:
            raise NonInvertibleLeading("only non-zero constants are invertible in QQ[lam]", value=a)
        return self.ring.ground_new(1 / a.LC)

    def is_zero(self, a) -> bool:
        return not a

    def encode(self, a) -> str:
        return str(a.as_expr())


# ==================================================================
# Q(zeta_N) : Borcherds 곱의 1의 거듭제곱근
# ==================================================================

class Cyclotomic(CoeffDomain):

    def __init__(self, n: int):
        self.n = n
        self.name = f"QQ(zeta_{n})"
        self.ring, self.zeta = ring("zeta", QQ)
        x = sympy.Symbol("x")
        coeffs = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()
        degree = len(coeffs) - 1
        self.phi = sum((int(c) * self.zeta ** (degree - i) for i, c in enumerate(coeffs)), self.ring.zero)
        self.degree = degree
        self.zero = self.ring.zero
        self.one = self.ring.one
        self._powers = [self._reduce(self.zeta ** e) for e in range(n)]

    def _reduce(self, a):
        return a.rem(self.phi)

    def power(self, e: int):
        """zeta^e (e mod n)"""
        return self._powers[e % self.n]

    def coerce(self, value):
        if isinstance(value, Fraction):
            return self.ring.ground_new(QQ(value.numerator, value.denominator))
        if isinstance(value, int):
            return self.ring(value)
        return value

    def mul(self, a, b):
        return self._reduce(a * b)

    def scale(self, a, r):
        r = Fraction(r)
        return a.mul_ground(QQ(r.numerator, r.denominator))

    def inv(self, a):
        if not a:
            raise NonInvertibleLeading("zero is not invertible")
        if a.is_ground:
            return self.ring.ground_new(1 / a.LC)
        x = sympy.Symbol("zeta")
        inverse = sympy.Poly(a.as_expr(), x, domain="QQ").invert(sympy.Poly(self.phi.as_expr(), x, domain="QQ"))
        return self.ring(inverse.as_expr())

    def is_zero(self, a) -> bool:
        return not a

    def conjugate(self, a):
        """복소켤레: zeta -> zeta^(n-1)"""
        out = self.ring.zero
        for (e,), c in a.terms():
            out += self._powers[(-e) % self.n].mul_ground(c)
        return out

    def is_real(self, a) -> bool:
        return self.conjugate(a) == a

    def to_ball(self, a, ctx: PrecisionCtx) -> ComplexBall:
        total = ctx.exact(0)
        for (e,), c in a.terms():
            total = total + ctx.root_of_unity(e, self.n) * ctx.exact(Fraction(int(c.numerator), int(c.denominator)))
        return total

    def encode(self, a) -> str:
        return str(a.as_expr())


# ==================================================================
# 복소 볼
# ==================================================================

class BallDomain(CoeffDomain):
    is_exact = False

    def __init__(self, ctx: PrecisionCtx):
        self.ctx = ctx
        self.name = f"ball({ctx.digits})"
        self.zero = ctx.exact(0)
        self.one = ctx.exact(1)

    def coerce(self, value):
        if isinstance(value, ComplexBall):
            return value
        return self.ctx.exact(value)

    def scale(self, a, r):
        return a * self.ctx.exact(Fraction(r))

    def inv(self, a):
        try:
            return a.inv()
        except Exception as exc:
            raise NonInvertibleLeading("leading ball contains zero", value=a) from exc

    def is_zero(self, a) -> bool:
        return a.mid == 0 and a.rad == 0

    def eq(self, a, b) -> bool:
        return a.overlaps(b)

    def encode(self, a) -> str:
        return a.encode()


QQ_DOMAIN = ExactRational()


@lru_cache(maxsize=None)
def poly_domain() -> PolyRational:
    return PolyRational()


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Cyclotomic:
    return Cyclotomic(n)


@lru_cache(maxsize=32)
def ball_domain(ctx: PrecisionCtx) -> BallDomain:
    return BallDomain(ctx)


def fraction_of(value) -> Fraction:
    """sympy/QQ 원소를 Fraction 으로"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))
