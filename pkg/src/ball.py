"""
Midpoint-radius complex balls on top of mpmath

Each PrecisionCtx owns a private mpmath context, so concurrent evaluations at
different precisions never touch the global ``mpmath.mp`` state.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Union

import mpmath

from src.const import DEFAULT_DIGITS, DEFAULT_GUARD, DEFAULT_MAX_TERMS
from src.errors import PrecisionLoss, ZeroDivide


@dataclass(frozen=True)
class PrecisionCtx:
    digits: int = DEFAULT_DIGITS
    guard: int = DEFAULT_GUARD
    max_terms: int = DEFAULT_MAX_TERMS
    mp: Any = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.digits < 20:
            raise PrecisionLoss(f"digits must be >= 20, got {self.digits}")
        mp = mpmath.MPContext()
        mp.dps = self.digits + self.guard
        object.__setattr__(self, "mp", mp)

    @property
    def eps(self):
        """상대 반올림 오차 한계 (2^(1-prec))"""
        return self.mp.ldexp(self.mp.mpf(1), 1 - self.mp.prec)

    @property
    def target_radius(self):
        return self.mp.mpf(10) ** (-self.digits)

    def ball(self, re=0, im=0, rad=0) -> "ComplexBall":
        return ComplexBall(self.mp.mpc(self.to_mpf(re), self.to_mpf(im)), self.mp.mpf(rad), self)

    def exact(self, value: Union[int, Fraction]) -> "ComplexBall":
        """정수/유리수를 반올림 반경까지 포함한 볼로 변환"""
        if isinstance(value, int):
            mid = self.mp.mpf(value)
            return ComplexBall(self.mp.mpc(mid), self.mp.mpf(0) if abs(value) < 2 ** self.mp.prec else abs(mid) * self.eps, self)
        value = Fraction(value)
        mid = self.mp.mpf(value.numerator) / value.denominator
        return ComplexBall(self.mp.mpc(mid), abs(mid) * self.eps, self)

    def to_mpf(self, x):
        if isinstance(x, Fraction):
            return self.mp.mpf(x.numerator) / x.denominator
        return self.mp.mpf(x)

    def pi(self) -> "ComplexBall":
        value = +self.mp.pi
        return ComplexBall(self.mp.mpc(value), value * self.eps, self)

    def root_of_unity(self, k: int, n: int) -> "ComplexBall":
        value = self.mp.expjpi(self.mp.mpf(2 * k) / n)
        return ComplexBall(value, 2 * self.eps, self)


class ComplexBall:
    """
    mid ± rad 형태의 복소수 구간

    rad 는 모든 반올림 오차와 급수 절단 오차를 포함한다.
    """
    __slots__ = ("mid", "rad", "ctx")

    def __init__(self, mid, rad, ctx: PrecisionCtx):
        self.mid = mid
        self.rad = rad
        self.ctx = ctx

    # -----------------------------
    # 변환
    # -----------------------------
    def _coerce(self, other) -> "ComplexBall":
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.exact(other)
        mp = self.ctx.mp
        return ComplexBall(mp.mpc(other), mp.mpf(0), self.ctx)

    def _round(self, mid, rad) -> "ComplexBall":
        return ComplexBall(mid, rad + abs(mid) * self.ctx.eps, self.ctx)

    @property
    def real(self) -> "ComplexBall":
        return ComplexBall(self.ctx.mp.mpc(self.mid.real), self.rad, self.ctx)

    @property
    def imag(self) -> "ComplexBall":
        return ComplexBall(self.ctx.mp.mpc(self.mid.imag), self.rad, self.ctx)

    def conjugate(self) -> "ComplexBall":
        return ComplexBall(self.ctx.mp.conj(self.mid), self.rad, self.ctx)

    # -----------------------------
    # 산술
    # -----------------------------
    def __add__(self, other):
        other = self._coerce(other)
        return self._round(self.mid + other.mid, self.rad + other.rad)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return self._round(self.mid - other.mid, self.rad + other.rad)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return ComplexBall(-self.mid, self.rad, self.ctx)

    def __mul__(self, other):
        other = self._coerce(other)
        rad = abs(self.mid) * other.rad + abs(other.mid) * self.rad + self.rad * other.rad
        return self._round(self.mid * other.mid, rad)

    __rmul__ = __mul__

    def inv(self) -> "ComplexBall":
        size = abs(self.mid)
        if size <= self.rad:
            raise ZeroDivide("ball contains zero", mid=self.mid, rad=self.rad)
        mid = 1 / self.mid
        return self._round(mid, self.rad / (size * (size - self.rad)))

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("ComplexBall only supports integer powers")
        if e < 0:
            return self.inv() ** (-e)
        result = self.ctx.exact(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -----------------------------
    # 초월 함수
    # -----------------------------
    def exp(self) -> "ComplexBall":
        mp = self.ctx.mp
        mid = mp.exp(self.mid)
        return self._round(mid, abs(mid) * mp.expm1(self.rad))

    def log(self) -> "ComplexBall":
        mp = self.ctx.mp
        size = abs(self.mid)
        if size <= self.rad:
            raise PrecisionLoss("log of a ball containing zero")
        if self.mid.real < 0 and abs(self.mid.imag) <= self.rad:
            raise PrecisionLoss("log of a ball straddling the branch cut")
        return self._round(mp.log(self.mid), -mp.log1p(-self.rad / size))

    def sqrt(self) -> "ComplexBall":
        mp = self.ctx.mp
        size = abs(self.mid)
        if size <= self.rad:
            raise PrecisionLoss("sqrt of a ball containing zero")
        return self._round(mp.sqrt(self.mid), self.rad / mp.sqrt(size - self.rad))

    def abs(self) -> "ComplexBall":
        mp = self.ctx.mp
        return self._round(mp.mpc(abs(self.mid)), self.rad)

    # -----------------------------
    # 비교
    # -----------------------------
    def upper(self):
        return abs(self.mid) + self.rad

    def contains_zero(self) -> bool:
        return abs(self.mid) <= self.rad

    def overlaps(self, other) -> bool:
        other = self._coerce(other)
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def is_real(self) -> bool:
        return abs(self.mid.imag) <= self.rad

    def encode(self) -> str:
        mp = self.ctx.mp
        digits = self.ctx.digits
        return f"{mp.nstr(self.mid.real, digits)}{'+' if self.mid.imag >= 0 else '-'}{mp.nstr(abs(self.mid.imag), digits)}i ± {mp.nstr(self.rad, 5)}"

    def to_dict(self) -> dict:
        mp = self.ctx.mp
        digits = self.ctx.digits
        return {
            "re": mp.nstr(self.mid.real, digits),
            "im": mp.nstr(self.mid.imag, digits),
            "rad": mp.nstr(self.rad, 5),
        }

    def __repr__(self):
        return f"ComplexBall({self.encode()})"


def ball_sum(terms, ctx: PrecisionCtx) -> ComplexBall:
    """고정된 순서로 합산 (스레드 수와 무관하게 동일한 결과)"""
    total = ctx.exact(0)
    for term in terms:
        total = total + term
    return total
