"""
Truncated Laurent q-series over pluggable coefficient domains

A QSeries stores coeffs[i] = [q^(lead+i)] and is trusted through the exponent
lead+order-1. The absolute precision ``prec = lead + order`` is what every
operation propagates.
"""
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, List, Sequence, Tuple

from sympy import ZZ, divisor_sigma, ring

from src.domain import QQ_DOMAIN, CoeffDomain
from src.errors import (
    BadConstantTerm,
    DomainMismatch,
    FractionalLeadExponent,
    InternalInconsistency,
    OrderUnderflow,
    UnknownName,
    ZeroDivide,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QSeries:
    domain: CoeffDomain
    lead: int
    coeffs: Tuple
    order: int

    # -----------------------------
    # 생성
    # -----------------------------
    @classmethod
    def make(cls, domain: CoeffDomain, lead: int, coeffs: Sequence) -> "QSeries":
        """leading zero 를 제거한 정규형 (절대 정밀도는 유지)"""
        coeffs = list(coeffs)
        if not coeffs:
            raise OrderUnderflow("series with order < 1", lead=lead)
        skip = 0
        while skip < len(coeffs) - 1 and domain.is_zero(coeffs[skip]):
            skip += 1
        if skip == len(coeffs) - 1 and domain.is_zero(coeffs[skip]):
            skip = 0
        coeffs = coeffs[skip:]
        return cls(domain, lead + skip, tuple(coeffs), len(coeffs))

    @classmethod
    def from_dense(cls, domain: CoeffDomain, lead: int, prec: int, coeff: Callable[[int], object]) -> "QSeries":
        if prec <= lead:
            raise OrderUnderflow("empty precision window", lead=lead, prec=prec)
        return cls.make(domain, lead, [coeff(m) for m in range(lead, prec)])

    @classmethod
    def constant(cls, value, order: int, domain: CoeffDomain = QQ_DOMAIN) -> "QSeries":
        v = domain.coerce(value)
        return cls.make(domain, 0, [v] + [domain.zero] * (order - 1))

    @classmethod
    def monomial(cls, e: int, order: int, domain: CoeffDomain = QQ_DOMAIN, value=1) -> "QSeries":
        return cls.make(domain, e, [domain.coerce(value)] + [domain.zero] * (order - 1))

    # -----------------------------
    # 조회
    # -----------------------------
    @property
    def prec(self) -> int:
        return self.lead + self.order

    def is_zero(self) -> bool:
        return all(self.domain.is_zero(c) for c in self.coeffs)

    def coefficient(self, m: int):
        if m >= self.prec:
            raise OrderUnderflow(f"coefficient of q^{m} beyond precision {self.prec}", m=m, prec=self.prec)
        if m < self.lead:
            return self.domain.zero
        return self.coeffs[m - self.lead]

    def __getitem__(self, m: int):
        return self.coefficient(m)

    def dense(self, lo: int, hi: int) -> List:
        """[q^lo .. q^(hi-1)] 계수 목록"""
        if hi > self.prec:
            raise OrderUnderflow(f"need coefficients through q^{hi - 1}, have {self.prec - 1}", hi=hi, prec=self.prec)
        zero = self.domain.zero
        return [self.coeffs[m - self.lead] if m >= self.lead else zero for m in range(lo, hi)]

    def leading_coefficient(self):
        return self.coeffs[0]

    def truncate(self, prec: int) -> "QSeries":
        """절대 정밀도를 prec 으로 낮춤"""
        if prec >= self.prec:
            return self
        if prec <= self.lead:
            raise OrderUnderflow("truncation below the leading exponent", lead=self.lead, prec=prec)
        return QSeries.make(self.domain, self.lead, self.coeffs[: prec - self.lead])

    def with_order(self, order: int) -> "QSeries":
        return self.truncate(self.lead + order)

    def change_domain(self, domain: CoeffDomain, convert: Callable = None) -> "QSeries":
        convert = convert or domain.coerce
        return QSeries.make(domain, self.lead, [convert(c) for c in self.coeffs])

    def map(self, fn: Callable) -> "QSeries":
        return QSeries.make(self.domain, self.lead, [fn(c) for c in self.coeffs])

    def agrees_with(self, other: "QSeries", prec: int = None) -> bool:
        prec = min(self.prec, other.prec) if prec is None else prec
        lo = min(self.lead, other.lead)
        eq = self.domain.eq
        return all(eq(a, b) for a, b in zip(self.dense(lo, prec), other.dense(lo, prec)))

    # -----------------------------
    # 산술
    # -----------------------------
    def _check(self, other: "QSeries"):
        if not isinstance(other, QSeries):
            raise TypeError(f"expected QSeries, got {type(other).__name__}")
        if self.domain != other.domain:
            raise DomainMismatch(f"{self.domain.name} vs {other.domain.name}")

    def _linear(self, other: "QSeries", sign: int) -> "QSeries":
        self._check(other)
        lo = min(self.lead, other.lead)
        prec = min(self.prec, other.prec)
        if prec <= lo:
            raise OrderUnderflow("sum has no trusted coefficients", lo=lo, prec=prec)
        dom = self.domain
        op = dom.add if sign > 0 else dom.sub
        return QSeries.make(dom, lo, [op(a, b) for a, b in zip(self.dense(lo, prec), other.dense(lo, prec))])

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, max(self.prec, 1), self.domain)
        return self._linear(other, 1)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries.constant(other, max(self.prec, 1), self.domain)
        return self._linear(other, -1)

    def __neg__(self):
        return QSeries(self.domain, self.lead, tuple(self.domain.neg(c) for c in self.coeffs), self.order)

    def scale(self, r) -> "QSeries":
        dom = self.domain
        if isinstance(r, (int, Fraction)):
            return QSeries.make(dom, self.lead, [dom.scale(c, Fraction(r)) for c in self.coeffs])
        return QSeries.make(dom, self.lead, [dom.mul(c, r) for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        self._check(other)
        order = min(self.order, other.order)
        coeffs = self.domain.convolve(self.coeffs, other.coeffs, order)
        return QSeries.make(self.domain, self.lead + other.lead, coeffs)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(1 / Fraction(other))
        self._check(other)
        if other.is_zero():
            raise ZeroDivide("division by a series that vanishes through its order")
        order = min(self.order, other.order)
        coeffs = self.domain.divide(self.coeffs, other.coeffs, order)
        return QSeries.make(self.domain, self.lead - other.lead, coeffs)

    def inverse(self) -> "QSeries":
        return QSeries.constant(1, self.order, self.domain) / self

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.inverse() ** (-e)
        result = QSeries.constant(1, self.order, self.domain)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -----------------------------
    # 연산자
    # -----------------------------
    def theta(self) -> "QSeries":
        """Θ = q d/dq"""
        dom = self.domain
        return QSeries.make(dom, self.lead, [dom.scale(c, Fraction(self.lead + i)) for i, c in enumerate(self.coeffs)])

    def dilate(self, p: int) -> "QSeries":
        """f(q) -> f(q^p)"""
        zero = self.domain.zero
        coeffs = []
        for i, c in enumerate(self.coeffs):
            coeffs.append(c)
            if i < self.order - 1:
                coeffs.extend([zero] * (p - 1))
        coeffs.extend([zero] * (p - 1))
        return QSeries.make(self.domain, p * self.lead, coeffs)

    def shift(self, e: int) -> "QSeries":
        """q^e * f"""
        return QSeries(self.domain, self.lead + e, self.coeffs, self.order)

    def exp(self) -> "QSeries":
        dom = self.domain
        prec = self.prec
        if prec < 1:
            raise OrderUnderflow("exp needs a trusted constant term", prec=prec)
        if self.lead < 0 or (self.lead == 0 and not dom.is_zero(self.coeffs[0])):
            raise BadConstantTerm("exp needs a series without constant term", lead=self.lead)
        a = self.dense(0, prec)
        weighted = [(k, dom.scale(a[k], Fraction(k))) for k in range(1, prec) if not dom.is_zero(a[k])]
        g = [dom.one]
        for n in range(1, prec):
            acc = dom.zero
            for k, ka in weighted:
                if k > n:
                    break
                acc = dom.add(acc, dom.mul(ka, g[n - k]))
            g.append(dom.scale(acc, Fraction(1, n)))
        return QSeries.make(dom, 0, g)

    def log(self) -> "QSeries":
        dom = self.domain
        if self.lead != 0 or not dom.eq(self.coeffs[0], dom.one):
            raise BadConstantTerm("log needs lead 0 and constant term 1", lead=self.lead)
        prec = self.prec
        a = self.dense(0, prec)
        kl = [dom.zero]
        logs = [dom.zero]
        for n in range(1, prec):
            acc = dom.scale(a[n], Fraction(n))
            for k in range(1, n):
                if dom.is_zero(kl[k]):
                    continue
                if dom.is_zero(a[n - k]):
                    continue
                acc = dom.sub(acc, dom.mul(kl[k], a[n - k]))
            kl.append(acc)
            logs.append(dom.scale(acc, Fraction(1, n)))
        return QSeries.make(dom, 0, logs)

    # -----------------------------
    # 직렬화
    # -----------------------------
    def to_dict(self) -> dict:
        return {
            "domain": self.domain.name,
            "lead": self.lead,
            "order": self.order,
            "coeffs": [self.domain.encode(c) for c in self.coeffs],
        }

    def __repr__(self):
        head = ", ".join(self.domain.encode(c) for c in self.coeffs[:4])
        return f"QSeries({self.domain.name}, lead={self.lead}, order={self.order}, [{head}{', …' if self.order > 4 else ''}])"


def series_from_dict(data: dict) -> QSeries:
    """JSON 으로 받은 유리수 급수를 복원"""
    if data.get("domain", "QQ") != "QQ":
        raise DomainMismatch("only QQ series can be read back from JSON", domain=data.get("domain"))
    coeffs = [Fraction(c) for c in data["coeffs"]]
    order = int(data.get("order", len(coeffs)))
    if order != len(coeffs):
        raise OrderUnderflow("order does not match the number of coefficients", order=order)
    return QSeries.make(QQ_DOMAIN, int(data["lead"]), coeffs)


# ==================================================================
# 이름 붙은 연산
# ==================================================================

def series_arith(a: QSeries, b: QSeries, op: str, e: int = None) -> QSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "int_pow":
        return a ** e
    raise UnknownName(f"unknown series operation: {op}")


def series_exp_log(a: QSeries, op: str) -> QSeries:
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    raise UnknownName(f"unknown series operation: {op}")


def theta_operator(a: QSeries) -> QSeries:
    return a.theta()


# ==================================================================
# 표준 급수
# ==================================================================

_CACHE_LOCK = threading.Lock()
_SERIES_CACHE: Dict[object, QSeries] = {}


def _cached(key, order: int, build: Callable[[int], QSeries]) -> QSeries:
    """가장 긴 전개만 보관하고 잘라서 돌려준다"""
    with _CACHE_LOCK:
        hit = _SERIES_CACHE.get(key)
    if hit is not None and hit.order >= order:
        return hit.with_order(order)
    built = build(order)
    with _CACHE_LOCK:
        current = _SERIES_CACHE.get(key)
        if current is None or current.order < built.order:
            _SERIES_CACHE[key] = built
    return built.with_order(order)


def _eisenstein(k: int, factor: int, order: int) -> QSeries:
    return QSeries.make(
        QQ_DOMAIN, 0,
        [Fraction(1)] + [Fraction(factor * int(divisor_sigma(n, k - 1))) for n in range(1, order)],
    )


def eta_quotient(spec: Sequence[Tuple[int, int]], order: int) -> QSeries:
    """
    prod_(m, r) eta(m tau)^r 의 q-전개

    전체 지수 오프셋 sum(m r)/24 가 정수가 아니면 거부한다.
    """
    spec = tuple(sorted((int(m), int(r)) for m, r in spec if r))
    offset = sum(m * r for m, r in spec)
    if offset % 24:
        raise FractionalLeadExponent(f"eta quotient offset {offset}/24 is not an integer", spec=spec)
    if any(m < 1 for m, _ in spec):
        raise UnknownName("eta quotient scales must be positive", spec=spec)
    return _cached(("eta", spec), order, lambda n: _eta_product(spec, offset // 24, n))


def _eta_product(spec: Tuple[Tuple[int, int], ...], lead: int, order: int) -> QSeries:
    # Θ log prod(1 - q^(mn))^r = sum_K c_K q^K, c_K = -sum_{m | K} r m sigma(K/m)
    logger.debug(f"🧮 eta quotient {spec} through order {order}")
    c = [0] * order
    for m, r in spec:
        for t in range(1, (order - 1) // m + 1):
            c[m * t] -= r * m * int(divisor_sigma(t))
    nz = [(k, c[k]) for k in range(1, order) if c[k]]
    g = [1]
    for n in range(1, order):
        acc = 0
        for k, ck in nz:
            if k > n:
                break
            acc += ck * g[n - k]
        g.append(acc // n)
    return QSeries.make(QQ_DOMAIN, lead, [Fraction(x) for x in g])


def _theta_series(order: int) -> QSeries:
    coeffs = [0] * order
    for n in range(-isqrt(order), isqrt(order) + 1):
        if n * n < order:
            coeffs[n * n] += 1
    return QSeries.make(QQ_DOMAIN, 0, [Fraction(x) for x in coeffs])


def _j_series(order: int) -> QSeries:
    e4 = standard_series("E4", order + 1)
    delta = standard_series("delta", order + 1)
    return ((e4 ** 3) / delta).with_order(order)


_BUILDERS = {
    "E2": lambda n: _eisenstein(2, -24, n),
    "E4": lambda n: _eisenstein(4, 240, n),
    "E6": lambda n: _eisenstein(6, -504, n),
    "delta": lambda n: eta_quotient(((1, 24),), n),
    "theta4": _theta_series,
    "j": _j_series,
}


def standard_series(name: str, order: int, spec: Sequence[Tuple[int, int]] = None) -> QSeries:
    """E2, E4, E6, delta, j, theta4, eta_quotient 의 정확한 유리수 전개"""
    if order < 1:
        raise OrderUnderflow("order must be >= 1", order=order)
    if name == "eta_quotient":
        return eta_quotient(spec or (), order)
    build = _BUILDERS.get(name)
    if build is None:
        raise UnknownName(f"unknown series name: {name}")
    return _cached(name, order, build)


# ==================================================================
# Faber 다항식
# ==================================================================

_ZZ_LAM, _LAM = ring("lam", ZZ)


@dataclass(frozen=True)
class FaberPoly:
    n: int
    coefficients: Tuple[int, ...]

    def evaluate(self, x):
        """Horner: int, Fraction, 다항식 원소, ComplexBall 모두 지원"""
        acc = self.coefficients[-1]
        for c in reversed(self.coefficients[:-1]):
            acc = acc * x + c
        return acc

    def to_dict(self) -> dict:
        return {"n": self.n, "coefficients": [str(c) for c in self.coefficients]}


def _as_faber(n: int, poly) -> FaberPoly:
    return FaberPoly(n, tuple(int(poly.get((i,), 0)) for i in range(n + 1)))


_FABER_LOCK = threading.Lock()
_FABER_TABLE: Dict[int, Tuple[List[QSeries], List]] = {}


def _faber_recursion(n: int, prec: int) -> Tuple[QSeries, FaberPoly]:
    """J_(k+1) = J_k J_1 - (주부분 보정), 단계마다 정밀도 1 감소"""
    with _FABER_LOCK:
        table = _FABER_TABLE.get(prec)
    if table is not None and len(table[0]) > n:
        return table[0][n], _as_faber(n, table[1][n])

    j1_prec = prec + max(n, 1)
    j1 = standard_series("j", j1_prec + 1) - 744
    one = QSeries.constant(1, prec, QQ_DOMAIN)
    series = [one, j1]
    polys = [_ZZ_LAM.one, _LAM - 744]
    for k in range(1, n):
        prod = series[k] * j1
        nxt, poly = prod, polys[k] * polys[1]
        for e in range(k, 0, -1):
            c = prod.coefficient(-e)
            if c:
                nxt = nxt - series[e].scale(c)
                poly -= int(c) * polys[e]
        c0 = prod.coefficient(0)
        nxt = nxt - c0
        poly -= int(c0)
        series.append(nxt)
        polys.append(poly)
    trimmed = [s.truncate(prec) for s in series]
    with _FABER_LOCK:
        current = _FABER_TABLE.get(prec)
        if current is None or len(current[0]) < len(trimmed):
            _FABER_TABLE[prec] = (trimmed, polys)
    return trimmed[n], _as_faber(n, polys[n])


def faber(n: int, order: int, cross_check: bool = True) -> Tuple[QSeries, FaberPoly]:
    """
    J_n = q^(-n) + O(q) 와 F_n(j) = J_n

    j 곱셈 점화식과 J_1|T_n 두 방법으로 계산하고 일치를 확인한다.
    """
    from src.hecke import WeightedForm, hecke_Tn

    if n < 0:
        raise UnknownName("faber index must be non-negative", n=n)
    if order < 1:
        raise OrderUnderflow("order must be >= 1", order=order)
    if n == 0:
        return QSeries.constant(1, order), FaberPoly(0, (1,))

    series, poly = _faber_recursion(n, order)
    if cross_check and n > 1:
        j1 = standard_series("j", n * order + n + 1) - 744
        via_hecke = hecke_Tn(WeightedForm(j1, 0), n).truncate(order)
        if not via_hecke.agrees_with(series, order):
            raise InternalInconsistency(f"J_{n}: Hecke and recursion constructions disagree", n=n, order=order)
        logger.debug(f"✅ J_{n} constructions agree through q^{order - 1}")
    return series, poly
