"""
Hecke actions on q-expansions

- hecke_Tn: normalized integer-weight T_n (det^(k/2) slash convention)
- mult_hecke: multiplicative operator, normalized to leading coefficient 1
- half_integral_pTp2: p*T_(1/2)(p^2) on the Kohnen plus space
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from sympy import divisor_sigma, factorint, isprime, kronecker_symbol

from src.errors import (
    BadLeadingCoefficient,
    HypothesisViolated,
    NonPositiveIndex,
    OrderUnderflow,
    UnknownName,
)
from src.series import QSeries, standard_series
from src.type.form import PlusForm

logger = logging.getLogger(__name__)


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class WeightedForm:
    series: QSeries
    weight: int

    def __post_init__(self):
        if self.weight % 2:
            raise HypothesisViolated(f"weight must be even, got {self.weight}", weight=self.weight)


# 이름으로 부를 수 있는 정칙 형식과 가중치
FORM_WEIGHTS = {"delta": 12, "E4": 4, "E6": 6, "E4E6": 10, "j": 0}


def named_form(name: str, order: int) -> WeightedForm:
    if name not in FORM_WEIGHTS:
        raise UnknownName(f"unknown form: {name}", supported=sorted(FORM_WEIGHTS))
    if name == "E4E6":
        series = standard_series("E4", order) * standard_series("E6", order)
    else:
        series = standard_series(name, order)
    return WeightedForm(series, FORM_WEIGHTS[name])


# ==================================================================
# T_n
# ==================================================================

def _hecke_prime(f: QSeries, k: int, p: int) -> QSeries:
    """b(m) = p^(1-k/2) a(pm) + p^(k/2) a(m/p)"""
    lead, prec = f.lead, f.prec
    lo = min(p * lead, _ceil_div(lead, p))
    hi = min(_ceil_div(prec, p), p * prec)
    if hi <= lo:
        raise OrderUnderflow(f"T_{p} leaves no trusted coefficients", lead=lead, prec=prec)
    dom = f.domain
    up = Fraction(p) ** (1 - k // 2)
    down = Fraction(p) ** (k // 2)
    out = []
    for m in range(lo, hi):
        acc = dom.zero
        if lead <= p * m < prec:
            acc = dom.scale(f.coeffs[p * m - lead], up)
        if m % p == 0 and lead <= m // p:
            acc = dom.add(acc, dom.scale(f.coeffs[m // p - lead], down))
        out.append(acc)
    return QSeries.make(dom, lo, out)


def _hecke_prime_power(f: QSeries, k: int, p: int, r: int) -> QSeries:
    # T_(p^(j+1)) = T_p T_(p^j) - p T_(p^(j-1))
    prev, cur = f, _hecke_prime(f, k, p)
    for _ in range(1, r):
        prev, cur = cur, _hecke_prime(cur, k, p) - prev.scale(p)
    return cur


def hecke_Tn(f: WeightedForm, n: int) -> QSeries:
    if n < 1:
        raise NonPositiveIndex(f"Hecke index must be positive, got {n}", n=n)
    series = f.series
    for p, r in sorted(factorint(n).items()):
        series = _hecke_prime_power(series, f.weight, int(p), int(r))
    return series


def eigen_constant(n: int) -> int:
    """1|T_n = sigma(n)"""
    if n < 1:
        raise NonPositiveIndex(f"Hecke index must be positive, got {n}", n=n)
    return int(divisor_sigma(n))


# ==================================================================
# 곱셈형 Hecke 연산자
# ==================================================================

def _require_prime(p: int):
    if not isprime(p):
        raise HypothesisViolated(f"{p} is not prime", p=p)


def mult_hecke(f: QSeries, p: int) -> QSeries:
    """
    q^((p+1)h) u(q^p) exp(p sum_m b(pm) q^m),  log u = sum b(m) q^m

    f = q^h u, u 의 상수항은 정확히 1 이어야 한다.
    """
    _require_prime(p)
    dom = f.domain
    if not dom.eq(f.leading_coefficient(), dom.one):
        raise BadLeadingCoefficient("multiplicative Hecke operator needs leading coefficient 1")
    h = f.lead
    u = f.shift(-h)
    log_u = u.log()
    hi = _ceil_div(u.prec, p)
    if hi < 1:
        raise OrderUnderflow("not enough coefficients for the multiplicative Hecke operator", p=p)
    coeffs = [dom.zero] + [dom.scale(log_u.coefficient(p * m), Fraction(p)) for m in range(1, hi)]
    tail = QSeries.make(dom, 0, coeffs).exp()
    return (u.dilate(p) * tail).shift((p + 1) * h)


# ==================================================================
# 반정수 가중치 p T(p^2)
# ==================================================================

def half_integral_pTp2(f: PlusForm, p: int) -> PlusForm:
    """b(n) = p a(p^2 n) + (n|p) a(n) + a(n/p^2)"""
    _require_prime(p)
    f.check_support()
    s = f.series
    p2 = p * p
    lead, prec = s.lead, s.prec
    lo = min(_ceil_div(lead, p2), lead, p2 * lead)
    hi = min(_ceil_div(prec, p2), prec, p2 * prec)
    if hi <= lo:
        raise OrderUnderflow("pT(p^2) leaves no trusted coefficients", lead=lead, prec=prec)
    dom = s.domain
    out = []
    for n in range(lo, hi):
        acc = dom.zero
        if lead <= p2 * n:
            acc = dom.scale(s.coeffs[p2 * n - lead], Fraction(p))
        if lead <= n:
            chi = int(kronecker_symbol(n, p))
            if chi:
                acc = dom.add(acc, dom.scale(s.coeffs[n - lead], Fraction(chi)))
        if n % p2 == 0 and lead <= n // p2:
            acc = dom.add(acc, s.coeffs[n // p2 - lead])
        out.append(acc)
    series = QSeries.make(dom, lo, out)
    result = PlusForm(d=0 if series.is_zero() else -series.lead, series=series)
    result.check_support()
    return result
