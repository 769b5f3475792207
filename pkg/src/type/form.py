from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Tuple, Union

from src.errors import PlusSpaceViolation
from src.series import QSeries

# ==================================================================
# Binary quadratic forms / CM points
# ==================================================================

@dataclass(frozen=True, order=True)
class BinaryQF:
    a: int
    b: int
    c: int

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def evaluate(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def transform(self, gamma: Tuple[int, int, int, int]) -> "BinaryQF":
        """Q o gamma, gamma = (alpha, beta, gamma, delta)"""
        al, be, ga, de = gamma
        a, b, c = self.a, self.b, self.c
        return BinaryQF(
            a * al * al + b * al * ga + c * ga * ga,
            2 * a * al * be + b * (al * de + be * ga) + 2 * c * ga * de,
            a * be * be + b * be * de + c * de * de,
        )

    def normalize(self) -> "BinaryQF":
        a, b, c = self.a, self.b, self.c
        r = (a - b) // (2 * a)
        return BinaryQF(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> "BinaryQF":
        nf = self.normalize()
        a, b, c = nf.a, nf.b, nf.c
        while not (a < c or (a == c and b >= 0)):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return BinaryQF(a, b, c)

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    @property
    def omega(self) -> int:
        """PSL2(Z) 안정자 크기 (축약형에서만 의미 있음)"""
        if self.a == self.b == self.c:
            return 3
        if self.b == 0 and self.a == self.c:
            return 2
        return 1

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}


@dataclass(frozen=True)
class HeegnerPointExact:
    """alpha = (-b + i sqrt|D|) / (2a)"""
    a: int
    b: int
    D: int

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "D": self.D, "alpha": f"(-({self.b}) + i*sqrt({-self.D}))/{2 * self.a}"}


# ==================================================================
# Units / L-values
# ==================================================================

@dataclass(frozen=True)
class QuadUnit:
    """(x + y sqrt(Delta)) / 2"""
    x: int
    y: int
    delta: int

    @property
    def norm(self) -> int:
        return (self.x * self.x - self.delta * self.y * self.y) // 4

    def to_dict(self) -> dict:
        return {"x": str(self.x), "y": str(self.y), "delta": self.delta, "norm": self.norm}


@dataclass
class LValueResult:
    value: object
    per_method: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value.to_dict(),
            "per_method": {k: v.to_dict() for k, v in self.per_method.items()},
        }


@dataclass
class RegulatorResult:
    value: object
    convention: str
    class_number: int
    narrow_class_number: int
    unit: QuadUnit
    per_method: Dict[str, object] = field(default_factory=dict)
    alternatives: Dict[str, object] = field(default_factory=dict)
    factor: int = 1

    def to_dict(self) -> dict:
        return {
            "value": self.value.to_dict(),
            "convention": self.convention,
            "class_number": self.class_number,
            "narrow_class_number": self.narrow_class_number,
            "unit": self.unit.to_dict(),
            "factor": self.factor,
            "per_method": {k: v.to_dict() for k, v in self.per_method.items()},
            "alternatives": {k: v.to_dict() for k, v in self.alternatives.items()},
        }


# ==================================================================
# Divisors
# ==================================================================

@dataclass
class DivisorData:
    """(j 값, ord_z / omega_z) 목록"""
    entries: List[Tuple[object, Fraction]] = field(default_factory=list)

    @property
    def total(self) -> Fraction:
        return sum((m for _, m in self.entries), Fraction(0))

    def to_dict(self) -> dict:
        return {"entries": [{"jvalue": str(v), "multiplicity": str(m)} for v, m in self.entries]}


# ==================================================================
# Plus space
# ==================================================================

@dataclass(frozen=True)
class PlusForm:
    """가중치 1/2 Kohnen plus space 원소. 기저 f_d 는 주부분이 정확히 q^(-d)"""
    d: int
    series: QSeries

    def coefficient(self, n: int):
        return self.series.coefficient(n)

    def check_support(self):
        for i, c in enumerate(self.series.coeffs):
            n = self.series.lead + i
            if n % 4 in (2, 3) and not self.series.domain.is_zero(c):
                raise PlusSpaceViolation(f"non-zero coefficient at q^{n}", n=n)

    def to_dict(self) -> dict:
        return {"d": self.d, "series": self.series.to_dict()}


# ==================================================================
# Traces
# ==================================================================

@dataclass(frozen=True)
class One:
    kind: str = "one"


@dataclass(frozen=True)
class J:
    n: int
    kind: str = "J"


@dataclass(frozen=True)
class J0Bold:
    kind: str = "J0bold"


@dataclass(frozen=True)
class FrakF:
    kind: str = "frak_f"


@dataclass(frozen=True)
class UserSeries:
    series: QSeries
    kind: str = "user_series"


Traceable = Union[One, J, J0Bold, FrakF, UserSeries]


def traceable_label(f: Traceable) -> str:
    if isinstance(f, J):
        return f"J_{f.n}"
    return f.kind


@dataclass(frozen=True)
class TraceTerm:
    coeff: Fraction
    delta: int
    d: int
    traceable: Traceable

    def label(self) -> str:
        return f"{self.coeff}*Tr_{{{self.delta},{self.d}}}({traceable_label(self.traceable)})"


@dataclass
class TraceRelation:
    lhs: List[TraceTerm] = field(default_factory=list)
    rhs: List[TraceTerm] = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "lhs": " + ".join(t.label() for t in self.lhs) or "0",
            "rhs": " + ".join(t.label() for t in self.rhs) or "0",
            "note": self.note,
        }


# ==================================================================
# Borcherds
# ==================================================================

@dataclass
class BorcherdsProductData:
    delta: int
    d: int
    exponents: Dict[Tuple[int, int], int]
    series: Optional[QSeries]
    mode: str = "exact"

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "d": self.d,
            "mode": self.mode,
            "exponents": {f"{n},{b}": str(e) for (n, b), e in sorted(self.exponents.items()) if e},
            "series": self.series.to_dict() if self.series is not None else None,
        }
