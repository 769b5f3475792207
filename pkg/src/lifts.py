"""
Divisor lifting D(f) = -Θf/f + (k/12) E2 and its consumers
"""
import logging
from fractions import Fraction
from typing import List, Sequence

import sympy
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from src.ball import ComplexBall, PrecisionCtx
from src.domain import QQ_DOMAIN, fraction_of, poly_domain
from src.errors import (
    BadLeadingCoefficient,
    InconsistentPowerSums,
    OrderUnderflow,
    RankDeficient,
)
from src.hecke import WeightedForm, hecke_Tn, mult_hecke
from src.series import QSeries, faber, standard_series
from src.type.form import DivisorData
from src.type.report import CheckResult

logger = logging.getLogger(__name__)

DLIFT_ANCHOR = "constant term one in its"


def divisor_lift(f: WeightedForm) -> QSeries:
    s = f.series
    dom = s.domain
    if not dom.eq(s.leading_coefficient(), dom.one):
        raise BadLeadingCoefficient("divisor lift needs leading coefficient 1")
    log_derivative = s.theta() / s
    if log_derivative.prec < 1:
        raise OrderUnderflow("divisor lift has no trusted constant term", prec=log_derivative.prec)
    lifted = -log_derivative
    if f.weight:
        e2 = standard_series("E2", log_derivative.prec)
        if dom != QQ_DOMAIN:
            e2 = e2.change_domain(dom)
        lifted = lifted + e2.scale(Fraction(f.weight, 12))
    return lifted


def akn_generating(order: int) -> QSeries:
    """-Θj / (j - lam) in QQ[lam][[q]]"""
    if order < 1:
        raise OrderUnderflow("order must be >= 1", order=order)
    dom = poly_domain()
    j = standard_series("j", order + 1).change_domain(dom)
    shifted = j - QSeries.constant(dom.lam, j.prec, dom)
    return (-(j.theta() / shifted)).with_order(order)


# ==================================================================
# 멱합 -> 인자
# ==================================================================

def _power_sums(s: Sequence, total, faber_polys) -> List:
    """sum m_z F_n(j_z) -> sum m_z j_z^n (F_n 은 모닉)"""
    sums = [total]
    for n in range(1, len(s) + 1):
        coeffs = faber_polys[n].coefficients
        acc = s[n - 1]
        for i in range(n):
            if coeffs[i]:
                acc = acc - coeffs[i] * sums[i]
        sums.append(acc)
    return sums


def _qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _exact_recurrence(sums: List[Fraction], r: int):
    """모닉 점화식 x^r + sum a_i x^i 의 계수 (없으면 None)"""
    m = len(sums) - 1
    rows = [[_qq(sums[i + l]) for i in range(r)] + [_qq(-sums[r + l])] for l in range(m - r + 1)]
    aug = DomainMatrix(rows, (len(rows), r + 1), QQ)
    rref, pivots = aug.rref()
    if r in pivots:
        return None
    if len(pivots) < r:
        return None
    dense = rref.to_Matrix()
    return [fraction_of(dense[i, r]) for i in range(r)]


def _vandermonde_exact(roots: List[Fraction], sums: List[Fraction]) -> List[Fraction]:
    r = len(roots)
    mat = DomainMatrix([[_qq(x ** i) for x in roots] for i in range(r)], (r, r), QQ)
    rhs = DomainMatrix([[_qq(sums[i])] for i in range(r)], (r, 1), QQ)
    sol = mat.lu_solve(rhs).to_Matrix()
    return [fraction_of(sol[i, 0]) for i in range(r)]


def _check_multiplicities(weights) -> List[Fraction]:
    out = []
    for w in weights:
        w = Fraction(w)
        if w == 0 or 6 % w.denominator:
            raise InconsistentPowerSums(f"multiplicity {w} is not a non-zero multiple of 1/6", multiplicity=w)
        out.append(w)
    return out


def divisor_solve(s: Sequence, total, ctx: PrecisionCtx = None) -> DivisorData:
    """
    가중 Faber 멱합 s[n-1] = sum m_z F_n(j_z) 에서 (j_z, m_z) 복원

    s 가 정확(유리수)이면 정확한 결과, ComplexBall 이면 수치 결과를 준다.
    """
    numeric = any(isinstance(x, ComplexBall) for x in list(s) + [total])
    m = len(s)
    faber_polys = {n: faber(n, 1)[1] for n in range(1, m + 1)}
    if numeric:
        return _divisor_solve_numeric(s, total, faber_polys, ctx or s[0].ctx)

    sums = _power_sums([Fraction(x) for x in s], Fraction(total), faber_polys)
    for r in range(0, m // 2 + 1):
        if r == 0:
            if all(x == 0 for x in sums):
                return DivisorData([])
            continue
        rec = _exact_recurrence(sums, r)
        if rec is None:
            continue
        x = sympy.Symbol("x")
        poly = sympy.Poly([1] + [sympy.Rational(c.numerator, c.denominator) for c in reversed(rec)], x, domain="QQ")
        found = poly.ground_roots()
        if sum(found.values()) != r or any(k != 1 for k in found.values()):
            raise InconsistentPowerSums("support is not rational or has repeated points", degree=r)
        roots = sorted(fraction_of(sympy.Rational(z)) for z in found)
        weights = _check_multiplicities(_vandermonde_exact(roots, sums))
        data = DivisorData(list(zip(roots, weights)))
        logger.debug(f"🧮 divisor recovered: {data.to_dict()}")
        return data
    raise RankDeficient(f"support is not identifiable from {m} power sums", depth=m)


def _divisor_solve_numeric(s, total, faber_polys, ctx: PrecisionCtx) -> DivisorData:
    mp = ctx.mp
    tol = mp.mpf(10) ** (-(ctx.digits // 2))
    mids = [x.mid if isinstance(x, ComplexBall) else mp.mpf(fraction_of(x).numerator) / fraction_of(x).denominator for x in s]
    tot = total.mid if isinstance(total, ComplexBall) else mp.mpf(Fraction(total).numerator) / Fraction(total).denominator
    sums = _power_sums(mids, tot, faber_polys)
    m = len(s)
    scale = max([abs(x) for x in sums] + [mp.mpf(1)])
    for r in range(0, m // 2 + 1):
        if r == 0:
            if all(abs(x) <= tol * scale for x in sums):
                return DivisorData([])
            continue
        hankel = mp.matrix([[sums[i + l] for i in range(r)] for l in range(r)])
        try:
            coeffs = mp.lu_solve(hankel, mp.matrix([-sums[r + l] for l in range(r)]))
        except ZeroDivisionError:
            continue
        residual = max(abs(sum(coeffs[i] * sums[i + l] for i in range(r)) + sums[r + l]) for l in range(m - r + 1))
        if residual > tol * scale:
            continue
        roots = mp.polyroots([1] + [coeffs[i] for i in reversed(range(r))], maxsteps=200, extraprec=2 * mp.prec)
        vander = mp.matrix([[z ** i for z in roots] for i in range(r)])
        weights = mp.lu_solve(vander, mp.matrix([sums[i] for i in range(r)]))
        entries = []
        for z, w in zip(roots, weights):
            approx = Fraction(round(float(mp.re(w)) * 6), 6)
            if abs(w - mp.mpf(approx.numerator) / approx.denominator) > tol:
                raise InconsistentPowerSums("numeric multiplicity is not a multiple of 1/6", multiplicity=w)
            entries.append((ComplexBall(mp.mpc(z), tol, ctx), approx))
        _check_multiplicities([w for _, w in entries])
        return DivisorData(entries)
    raise RankDeficient(f"support is not identifiable from {m} power sums", depth=m)


# ==================================================================
# Hecke equivariance
# ==================================================================

def dlift_equivariance_check(f: WeightedForm, p: int, order: int) -> CheckResult:
    """D(f|T(p)) == D(f)|T_p, 좌변은 가중치 (p+1)k, 우변은 가중치 2 규칙"""
    if order < 2:
        raise OrderUnderflow("equivariance check needs order >= 2", order=order)
    h = f.series.lead
    g, k = f.series, f.weight
    if h:
        # 극점/영점을 Δ^h 로 제거
        delta = standard_series("delta", g.order)
        g = g * delta ** (-h) if h < 0 else g / delta ** h
        k -= 12 * h
    lhs = divisor_lift(WeightedForm(mult_hecke(g, p), (p + 1) * k)).truncate(order)
    rhs = hecke_Tn(WeightedForm(divisor_lift(WeightedForm(g, k)), 2), p).truncate(order)
    if lhs.prec < order or rhs.prec < order:
        raise OrderUnderflow(f"equivariance sides trusted only through q^{min(lhs.prec, rhs.prec) - 1}", order=order)
    diff = lhs - rhs
    passed = diff.is_zero()
    residual = "0" if passed else max((str(abs(Fraction(c))) for c in diff.coeffs), key=lambda v: Fraction(v))
    logger.info(f"{'✅' if passed else '❌'} D(f|T({p})) vs D(f)|T_{p} through q^{order - 1}")
    return CheckResult(
        name=f"dlift-equivariance(k={f.weight}, h={h}, p={p})",
        anchor=DLIFT_ANCHOR,
        passed=passed,
        residual=residual,
        details={"lhs": lhs.to_dict(), "rhs": rhs.to_dict(), "diff": diff.to_dict()},
    )
