# trace-tool/app/calculators/circle_diag.py
"""
Numerical checks of the circle-method machinery for T_n(zeta).

Contents:
    - Farey dissection of the unit period into arcs around h/k
    - the saddle parameter t_n and the error terms
          E_{h,k}(z; t) = Log PP(z; zeta_k^h e^{-t}) - Li_3(z^k)/(k^3 t^2)
    - the regrouped series for E_{h,k} in terms of g_{j,k}, and the
      closed forms of its j-sums
    - the limits of E on the dominant arc (four cases) at theta = 0
    - twisted harmonic partial sums G_M(theta)
    - quadrature of the dominant arc integral

Every infinite sum is truncated with an explicit geometric tail bound.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import mpmath
import numpy as np

from app.calculators.exact_qseries import RootOfUnity
from app.calculators.polylog_unit import (
    DEFAULT_PREC,
    PrecisionSpec,
    cbrt,
    constants,
    hurwitz_zeta,
    li3_rational,
    solve_theta12,
)
from app.errors import ResourceError
from app.settings import SETTINGS
from app.validators.inputs import validate_in_set, validate_int_at_least, validate_range, validate_type

logger = logging.getLogger(__name__)

# -----------------------------
# 1. FAREY DISSECTION
# -----------------------------

@dataclass(frozen=True)
class FareyArc:
    """h/k with mediant gaps: the arc is [h/k - theta_lo, h/k + theta_hi)."""
    h: int
    k: int
    theta_lo: Fraction
    theta_hi: Fraction

    @property
    def center(self) -> Fraction:
        return Fraction(self.h, self.k)


def farey(N: int) -> List[FareyArc]:
    """
    F_N in increasing order, 0/1 through 1/1, with mediant gaps.

    For consecutive h'/k', h/k, h''/k'' the gaps are 1/(k(k + k')) and
    1/(k(k + k'')). 0/1 and 1/1 take their outer neighbour from the next
    period, so both get 1/(N + 1) on the outside.
    """
    validate_int_at_least(N, "N", 1, "Farey sequence")
    fracs = [(0, 1), (1, N)]
    while fracs[-1] != (1, 1):
        (a, b), (c, d) = fracs[-2], fracs[-1]
        m = (N + b) // d
        fracs.append((m * c - a, m * d - b))
    arcs = []
    for i, (h, k) in enumerate(fracs):
        k_prev = fracs[i - 1][1] if i > 0 else N
        k_next = fracs[i + 1][1] if i + 1 < len(fracs) else N
        arcs.append(FareyArc(h, k, Fraction(1, k * (k + k_prev)), Fraction(1, k * (k + k_next))))
    return arcs


def arc_intervals(arcs: Sequence[FareyArc]) -> List[Tuple[Fraction, Fraction]]:
    """Half-open [lo, hi) for every arc except 1/1, which is 0/1 shifted by a period."""
    return [(a.center - a.theta_lo, a.center + a.theta_hi) for a in arcs if not (a.h == a.k == 1)]


def tiling_defect(arcs: Sequence[FareyArc]) -> Fraction:
    """
    Total gap plus overlap between consecutive arc intervals, and the deviation
    of the summed lengths from one full period. Zero for an exact tiling.
    """
    intervals = sorted(arc_intervals(arcs))
    defect = abs(1 - sum(hi - lo for lo, hi in intervals))
    for (_, hi), (lo, _) in zip(intervals, intervals[1:]):
        defect += abs(lo - hi)
    wrap = intervals[0][0] + 1
    defect += abs(wrap - intervals[-1][1])
    return defect


# -----------------------------
# 2. SADDLE PARAMETER AND ERROR TERMS
# -----------------------------

@dataclass(frozen=True)
class SaddleParam:
    t: mpmath.mpc

    def __post_init__(self):
        object.__setattr__(self, "t", mpmath.mpc(self.t))
        if not self.t.real > 0:
            raise ValueError(f"saddle parameter needs Re(t) > 0, got t={self.t}")


def _validate_hk(h: int, k: int) -> None:
    validate_int_at_least(k, "k", 1, "Farey fraction")
    validate_range(h, "h", 0, k, context="Farey fraction")
    if math.gcd(h, k) != 1:
        raise ValueError(f"h/k={h}/{k} is not reduced")


def _uses_double_arc(z: RootOfUnity) -> bool:
    # True when the dominant arc sits at 1/2 rather than 0/1
    x = min(z.fraction, 1 - z.fraction)
    if x == 0:
        return False
    if x == Fraction(1, 2):
        return True
    theta12 = solve_theta12(PrecisionSpec(1e-12))
    x = mpmath.mpmathify(x)
    if abs(x - theta12) < SETTINGS.theta_band:
        raise ValueError(f"a/b={z} lies within {SETTINGS.theta_band} of theta_12")
    return x > theta12


def t_n_trace(z: RootOfUnity, n: int, p: PrecisionSpec = DEFAULT_PREC) -> SaddleParam:
    validate_int_at_least(n, "n", 1, "saddle parameter")
    with mpmath.workdps(p.dps):
        nn = mpmath.cbrt(mpmath.mpf(n))
        if _uses_double_arc(z):
            t = cbrt(li3_rational(z.power(2), p)) / (mpmath.cbrt(4) * nn)
        else:
            t = mpmath.cbrt(2) * cbrt(li3_rational(z, p)) / nn
        return SaddleParam(+t)


def _direct_dps(t, p: PrecisionSpec) -> int:
    # the log grows like 1/|t|^2, so keep abs_err digits on top of its magnitude
    magnitude = max(0, int(mpmath.log10(1 / abs(t) ** 2 + 1))) + 2
    return p.dps + magnitude


def log_pp_direct(z: RootOfUnity, h: int, k: int, t: SaddleParam, p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpc:
    """
    Log PP(z; zeta_k^h e^{-t}) = -sum_nu nu Log(1 - z zeta_k^{h nu} e^{-nu t}).

    With r = e^{-Re t}, the tail after V terms is at most
        r^{V+1} ((V+1) - V r) / ((1 - r)^2 (1 - r^{V+1})).

    Raises:
        ResourceError: the tail does not fall below abs_err within the series cap
    """
    _validate_hk(h, k)
    with mpmath.workdps(_direct_dps(t.t, p)):
        base = RootOfUnity.of(h, k).value() * mpmath.exp(-t.t)
        w = z.value() * base
        r = mpmath.exp(-mpmath.re(t.t))
        rv = r
        total = mpmath.mpc(0)
        stop = mpmath.mpf(p.abs_err) / 2
        for v in range(1, SETTINGS.series_cap):
            total -= v * mpmath.log(1 - w)
            w *= base
            rv *= r
            if v % 16 == 0:
                tail = rv * ((v + 1) - v * r) / ((1 - r) ** 2 * (1 - rv))
                if tail < stop:
                    logger.debug("log_pp_direct: %d terms, tail <= %s", v, mpmath.nstr(tail, 3))
                    return total
        raise ResourceError(f"log series did not converge within {SETTINGS.series_cap} terms (Re t = {mpmath.re(t.t)})")


def error_term_E(z: RootOfUnity, h: int, k: int, t: SaddleParam, p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpc:
    log_pp = log_pp_direct(z, h, k, t, p)
    # the Li_3 error is scaled by 1/(k^3 |t|^2)
    li3_prec = PrecisionSpec(p.abs_err * float(min(1, k ** 3 * abs(t.t) ** 2)) / 10)
    with mpmath.workdps(_direct_dps(t.t, p)):
        return log_pp - li3_rational(z.power(k), li3_prec) / (k ** 3 * t.t ** 2)


# -----------------------------
# 3. REGROUPED SERIES AND ITS j-SUMS
# -----------------------------

def _check_regular(w) -> mpmath.mpc:
    w = mpmath.mpc(w)
    if w == 0:
        raise ValueError("w = 0 is a pole; use the Laurent data instead")
    m = w.imag / (2 * mpmath.pi)
    if abs(w.real) < mpmath.eps * 10 and abs(m - mpmath.nint(m)) < mpmath.eps * 10:
        raise ValueError(f"w={w} is a nonzero multiple of 2 pi i, where e^{{-w}} = 1")
    return w


def g_residue(j: int, k: int) -> Fraction:
    """Coefficient of w^{-1} in g_{j,k}: -j^2/(2k^2) - 1/12 + j/(2k)."""
    a = Fraction(j, k)
    return -a * a / 2 - Fraction(1, 12) + a / 2


def _g_exp(j: int, k: int, w) -> mpmath.mpc:
    e = mpmath.exp(-w)
    ej = mpmath.exp(-mpmath.mpf(j) / k * w)
    return e * ej / (w * (1 - e) ** 2) + mpmath.mpf(j) / k * ej / (w * (1 - e))


def g_jk(j: int, k: int, w) -> mpmath.mpc:
    validate_int_at_least(k, "k", 1, "g_jk")
    validate_range(j, "j", 1, k, context="g_jk")
    w = _check_regular(w)
    return _g_exp(j, k, w) - 1 / w ** 3


def f1(k: int, w) -> mpmath.mpc:
    """sum_{j<=k} g_{j,k}(w) = -k/w^3 + e^{-w/k}/(k w (1 - e^{-w/k})^2)."""
    validate_int_at_least(k, "k", 1, "f1")
    w = _check_regular(w)
    u = mpmath.exp(-w / k)
    return -k / w ** 3 + u / (k * w * (1 - u) ** 2)


def f2(k: int, mh_residue: int, w) -> mpmath.mpc:
    """sum_{j<=k} zeta_k^{j mh} g_{j,k}(w) for k not dividing mh."""
    validate_int_at_least(k, "k", 2, "f2")
    if mh_residue % k == 0:
        raise ValueError(f"f2 needs k not dividing mh, got mh={mh_residue}, k={k}")
    w = _check_regular(w)
    y = RootOfUnity.of(mh_residue, k).value() * mpmath.exp(-w / k)
    return y / (k * w * (1 - y) ** 2)


def phi(a, w) -> mpmath.mpc:
    """
    phi_a(w) = e^{-w-aw}/(1-e^{-w})^2 + a e^{-aw}/(1-e^{-w}) - 1/w^2, 0 <= a <= 1.
    Holomorphic at 0 with phi_a(0) = -a^2/2 + a/2 - 1/12.
    """
    validate_range(float(a), "a", 0, 1, context="phi")
    a = mpmath.mpf(a) if not isinstance(a, Fraction) else mpmath.mpf(a.numerator) / a.denominator
    w = mpmath.mpc(w)
    if w == 0:
        return mpmath.mpc(-a * a / 2 + a / 2 - mpmath.mpf(1) / 12)
    # the three terms cancel down from |w|^-2
    guard = 3 * max(0, int(-mpmath.log10(abs(w)))) + 5
    with mpmath.extradps(guard):
        e = mpmath.exp(-w)
        value = mpmath.exp(-w - a * w) / (1 - e) ** 2 + a * mpmath.exp(-a * w) / (1 - e) - 1 / w ** 2
    return +value


def lemma42_identity_residual(z: RootOfUnity, h: int, k: int, t: SaddleParam,
                              truncation: int = None, p: PrecisionSpec = PrecisionSpec(1e-14)) -> mpmath.mpf:
    """
    Certified bound on |E_{h,k}(z; t) - regrouped series|.

    The regrouped side is
        sum_{j<=k, m<=bk} z^m zeta_k^{mjh} k^2 t sum_{l>=0} g_{j,k}(t(b k^2 l + k m)).
    The -1/w^3 part of each l-sum is zeta(3, m/(bk))/(t^3 (b k^2)^3) exactly; the
    rest is summed until a geometric tail bound is below the budget, or for
    ``truncation`` terms. Tail bounds are added to the returned residual.
    """
    _validate_hk(h, k)
    if truncation is not None:
        validate_int_at_least(truncation, "truncation", 1, "regrouped series")
    b = z.b
    lhs = error_term_E(z, h, k, t, p)
    with mpmath.workdps(_direct_dps(t.t, p) + 5):
        tt = t.t
        step = tt * b * k * k
        re_step = mpmath.re(step)
        budget = mpmath.mpf(p.abs_err) / (b * k * k * k * k * abs(tt))
        rhs = mpmath.mpc(0)
        tail_total = mpmath.mpf(0)
        for j in range(1, k + 1):
            a_j = mpmath.mpf(j) / k
            q = mpmath.exp(-re_step * a_j)
            for m in range(1, b * k + 1):
                coeff = RootOfUnity.of(z.a * m, b).value() * RootOfUnity.of(m * j * h, k).value()
                w = tt * k * m
                inner = mpmath.mpc(0)
                for ell in range(SETTINGS.series_cap):
                    inner += _g_exp(j, k, w)
                    w += step
                    rw = mpmath.re(w)
                    em = mpmath.exp(-rw)
                    bound = (mpmath.exp(-(1 + a_j) * rw) / (1 - em) ** 2 + a_j * mpmath.exp(-a_j * rw) / (1 - em)) / abs(w)
                    tail = bound / (1 - q)
                    if (truncation is not None and ell + 1 >= truncation) or (truncation is None and tail < budget):
                        break
                else:
                    raise ResourceError("regrouped series did not converge")
                inner -= hurwitz_zeta(3, mpmath.mpf(m) / (b * k), PrecisionSpec(p.abs_err / 100)) / (tt ** 3 * (b * k * k) ** 3)
                rhs += coeff * k * k * tt * inner
                tail_total += k * k * abs(tt) * tail
        residual = abs(lhs - rhs) + tail_total
        logger.debug("regrouped series for z=%s h/k=%d/%d: residual %s", z, h, k, mpmath.nstr(residual, 3))
        return residual


# (a, b, h, k, t) cases for the regrouped-series check, k <= 6, b <= 6
LEMMA42_GRID = [
    (1, 2, 1, 1, 0.3), (1, 3, 1, 2, 0.2 + 0.1j), (0, 1, 0, 1, 0.25), (0, 1, 1, 2, 0.2),
    (1, 2, 1, 2, 0.15), (1, 3, 0, 1, 0.3 - 0.1j), (2, 3, 1, 3, 0.2), (1, 4, 1, 3, 0.25 + 0.05j),
    (3, 4, 2, 3, 0.2), (1, 5, 1, 4, 0.3), (2, 5, 3, 4, 0.2 + 0.1j), (1, 6, 1, 5, 0.25),
    (5, 6, 2, 5, 0.3), (1, 5, 1, 6, 0.2), (3, 5, 5, 6, 0.3 - 0.05j), (1, 4, 1, 1, 0.1),
    (1, 6, 0, 1, 0.12), (1, 2, 1, 3, 0.1 + 0.05j), (2, 3, 1, 4, 0.15), (1, 3, 3, 5, 0.2),
]


# -----------------------------
# 4. LIMITS ON THE DOMINANT ARC
# -----------------------------

def lemma41_form(case: int, z: RootOfUnity, t) -> mpmath.mpc:
    """Limit of E on the dominant arc in each of the four cases, as a function of t."""
    validate_in_set(case, "case", {1, 2, 3, 4}, "dominant arc limit")
    c = constants(mpmath.mp.dps)
    zeta = z.value()
    if case == 1:
        return mpmath.log(1 - zeta) / 12
    if case == 2:
        return mpmath.log(t) / 12 + c.zeta_prime_minus1
    if case == 3:
        return mpmath.log(1 - zeta) / 6 - mpmath.log(1 + zeta) / 12
    return -mpmath.log(t) / 12 - c.zeta_prime_minus1


def _case_arc(case: int, z: RootOfUnity) -> Tuple[int, int]:
    if case == 1:
        if z.a == 0 or _uses_double_arc(z):
            raise ValueError(f"case 1 needs 0 < a/b < theta_12 (up to reflection), got {z}")
        return 0, 1
    if case == 2:
        if z.a != 0:
            raise ValueError(f"case 2 is zeta = 1 only, got {z}")
        return 0, 1
    if case == 3:
        if z.b == 2 or not _uses_double_arc(z):
            raise ValueError(f"case 3 needs theta_12 < a/b < 1/2 (up to reflection), got {z}")
        return 1, 2
    if z != RootOfUnity(1, 2):
        raise ValueError(f"case 4 is zeta = -1 only, got {z}")
    return 1, 2


def lemma41_deviation(case: int, z: RootOfUnity, n: int,
                      p: PrecisionSpec = DEFAULT_PREC) -> Tuple[mpmath.mpc, mpmath.mpc, mpmath.mpf]:
    """(E, predicted limit, |E - predicted|) at theta = 0 and t = t_n."""
    validate_in_set(case, "case", {1, 2, 3, 4}, "dominant arc limit")
    h, k = _case_arc(case, z)
    t = t_n_trace(z, n, p)
    E = error_term_E(z, h, k, t, p)
    with mpmath.workdps(p.dps):
        predicted = lemma41_form(case, z, t.t)
        return E, predicted, abs(E - predicted)


def loglog_slope(ns: Sequence[int], deviations: Sequence) -> float:
    """Least-squares slope of log(deviation) against log(n)."""
    x = np.log(np.asarray([float(n) for n in ns]))
    y = np.log(np.asarray([float(d) for d in deviations]))
    return float(np.polyfit(x, y, 1)[0])


# -----------------------------
# 5. TWISTED HARMONIC SUMS
# -----------------------------

def twisted_harmonic_partial_sums(M: int, theta: float) -> np.ndarray:
    """[G_1(theta), ..., G_M(theta)] with G_m = sum_{l<=m} e^{2 pi i theta l}/l."""
    validate_int_at_least(M, "M", 1, "twisted harmonic sum")
    validate_type(theta, "theta", (int, float, Fraction, mpmath.mpf), "twisted harmonic sum")
    validate_range(theta, "theta", 0, 1, inclusive=False, context="twisted harmonic sum")
    m = np.arange(1, M + 1, dtype=np.float64)
    return np.cumsum(np.exp(2j * np.pi * float(theta) * m) / m)


def twisted_harmonic_G(M: int, theta: float) -> complex:
    return complex(twisted_harmonic_partial_sums(M, theta)[-1])


# -----------------------------
# 6. DOMINANT ARC QUADRATURE
# -----------------------------

# largest accepted error estimate, relative to the value
QUADRATURE_REL_ERR = 1e-6


def major_arc_quadrature(z: RootOfUnity, n: int, p: PrecisionSpec = PrecisionSpec(1e-10),
                         N: int = None, exact_integrand: bool = False) -> mpmath.mpc:
    """
    zeta_k^{-nh} * integral over the dominant arc of
        exp(Li_3(z^k)/(k^3 t^2) + E + n t),  t = t_n - 2 pi i theta,
    with E replaced by its limit form, or computed exactly when
    ``exact_integrand`` is set. N defaults to floor(n^{1/3}).

    The returned value carries relative error at most ``QUADRATURE_REL_ERR``.

    Raises:
        ResourceError: the quadrature error estimate is not small
    """
    validate_int_at_least(n, "n", 1, "quadrature")
    if z.fraction > Fraction(1, 2):
        return mpmath.conj(major_arc_quadrature(z.conjugate(), n, p, N, exact_integrand))
    double = _uses_double_arc(z)
    if z.a == 0:
        case = 2
    elif z == RootOfUnity(1, 2):
        case = 4
    else:
        case = 3 if double else 1
    h, k = (1, 2) if double else (0, 1)
    if N is None:
        N = max(1, int(mpmath.floor(mpmath.cbrt(n))))
    N = max(N, k)
    arc = next(a for a in farey(N) if (a.h, a.k) == (h, k))

    with mpmath.workdps(p.dps):
        t_n = t_n_trace(z, n, p).t
        li3 = li3_rational(z.power(k), p)

        def integrand(theta):
            t = t_n - 2j * mpmath.pi * theta
            if exact_integrand:
                log_pp = log_pp_direct(z, h, k, SaddleParam(t), p)
            else:
                log_pp = li3 / (k ** 3 * t ** 2) + lemma41_form(case, z, t)
            return mpmath.exp(log_pp + n * t)

        lo, hi = -mpmath.mpf(arc.theta_lo.numerator) / arc.theta_lo.denominator, mpmath.mpf(arc.theta_hi.numerator) / arc.theta_hi.denominator
        width = abs(t_n) ** 2
        points = [lo] + [x for x in (-4 * width, -width, 0, width, 4 * width) if lo < x < hi] + [hi]
        value, err = mpmath.quad(integrand, points, error=True, maxdegree=7)
        if err > QUADRATURE_REL_ERR * abs(value):
            raise ResourceError(f"quadrature did not settle: estimate {mpmath.nstr(value, 8)}, error {mpmath.nstr(err, 3)}")
        logger.debug("arc %d/%d quadrature for z=%s, n=%d: error %s", h, k, z, n, mpmath.nstr(err, 3))
        return RootOfUnity.of(-n * h, k).value() * value
