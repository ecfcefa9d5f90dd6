# trace-tool/app/calculators/polylog_unit.py
"""
Polylogarithms on the unit circle and the phase analysis built on them.

Angles are rotations: theta in [0, 1) stands for z = e^{2 pi i theta}. The only
place radians appear is ``solve_theta1``, whose root is reported in radians.

Precision:
    Functions that take a ``PrecisionSpec`` set their own working precision.
    The others evaluate at the caller's mpmath precision (``mpmath.workdps``)
    with a few guard digits, so scans can run at low precision cheaply.

Two evaluation paths for Li_3 exist:
    - fast: ``mpmath.polylog`` for any rotation, and ``li3_rational`` for roots
      of unity through Hurwitz zeta values
    - slow: ``li``, a float64 direct sum with an explicit tail bound, kept as
      an independent oracle
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Tuple, Union

import mpmath
import numpy as np

from app.calculators.exact_qseries import RootOfUnity
from app.errors import PrecisionError, ResourceError
from app.settings import SETTINGS
from app.validators.inputs import (
    validate_in_set,
    validate_int_at_least,
    validate_precision_bits,
    validate_tolerance,
    validate_type,
)

logger = logging.getLogger(__name__)

Angle = Union[Fraction, float, mpmath.mpf]

# float64 direct sums cannot certify anything finer than this
_FLOAT_FLOOR = 1e-13
_CHUNK = 1_000_000

# -----------------------------
# 1. TYPES AND CONSTANTS
# -----------------------------

@dataclass(frozen=True)
class Rotation:
    """z = e^{2 pi i theta}, 0 <= theta < 1. Fractions stay exact."""
    theta: Angle

    def __post_init__(self):
        validate_type(self.theta, "theta", (Fraction, float, int, mpmath.mpf), "rotation")
        if not 0 <= self.theta < 1:
            raise ValueError(f"theta must lie in [0, 1), got {self.theta}")

    @classmethod
    def of(cls, z: RootOfUnity) -> "Rotation":
        return cls(z.fraction)

    def multiple(self, k: int) -> "Rotation":
        """The rotation of z^k."""
        if isinstance(self.theta, (Fraction, int)):
            return Rotation(Fraction(self.theta) * k % 1)
        return Rotation(mpmath.frac(k * mpmath.mpf(self.theta)))

    def point(self) -> mpmath.mpc:
        if isinstance(self.theta, (Fraction, int)):
            x = 2 * mpmath.mpf(Fraction(self.theta).numerator) / Fraction(self.theta).denominator
        else:
            x = 2 * mpmath.mpf(self.theta)
        return mpmath.mpc(mpmath.cospi(x), mpmath.sinpi(x))


@dataclass(frozen=True)
class PrecisionSpec:
    abs_err: float

    def __post_init__(self):
        validate_tolerance(self.abs_err, "abs_err")

    @classmethod
    def from_bits(cls, bits: int) -> "PrecisionSpec":
        """Absolute error 2^-bits, the budget a --precision of ``bits`` promises."""
        validate_precision_bits(bits)
        return cls(2.0 ** -bits)

    @property
    def dps(self) -> int:
        """Working digits: enough for abs_err plus ten guard digits."""
        return max(20, int(-math.log10(self.abs_err)) + 10)


DEFAULT_PREC = PrecisionSpec(SETTINGS.default_tol)


@dataclass(frozen=True)
class Constants:
    zeta3: mpmath.mpf
    zeta2: mpmath.mpf
    zeta_prime_minus1: mpmath.mpf


@lru_cache(maxsize=None)
def constants(dps: int = 50) -> Constants:
    """zeta(3), zeta(2) and zeta'(-1) = 1/12 - log A (A = Glaisher's constant)."""
    with mpmath.workdps(dps + 10):
        return Constants(
            zeta3=mpmath.zeta(3),
            zeta2=mpmath.pi ** 2 / 6,
            zeta_prime_minus1=mpmath.mpf(1) / 12 - mpmath.log(mpmath.glaisher),
        )


def cbrt(z) -> mpmath.mpc:
    """Principal cube root, Arg in (-pi/3, pi/3]."""
    return mpmath.mpc(z) ** (mpmath.mpf(1) / 3)


# -----------------------------
# 2. EVALUATION OF Li_s
# -----------------------------

def li(s: int, r: Rotation, p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpc:
    """
    Slow oracle: sum_{n<=N} e^{2 pi i n theta}/n^s in float64.

    N is the smallest integer with tail bound N^{1-s}/(s-1) <= abs_err/2. The
    other half of the budget must cover float roundoff, bounded per term by

        eps * n^{-s} * (2 pi (1 + n |theta|) + 4 + log2(chunk))

    (phase error, cos/sin and the product, pairwise summation inside a chunk;
    chunks are added with fsum).

    Raises:
        ValueError: s < 2
        PrecisionError: abs_err below what float64 can certify, or the roundoff
            bound above abs_err/2
        ResourceError: N above the direct-sum cap
    """
    validate_int_at_least(s, "s", 2, "direct polylog")
    if p.abs_err < _FLOAT_FLOOR:
        raise PrecisionError(f"direct sum cannot certify abs_err={p.abs_err} (floor {_FLOAT_FLOOR})")
    N = math.ceil(((s - 1) * p.abs_err / 2) ** (-1.0 / (s - 1)))
    if N > SETTINGS.direct_sum_cap:
        raise ResourceError(f"direct sum needs {N} terms, cap is {SETTINGS.direct_sum_cap}")

    exact = isinstance(r.theta, (Fraction, int))
    if exact:
        num, den = Fraction(r.theta).numerator, Fraction(r.theta).denominator
    eps = np.finfo(np.float64).eps
    re_parts, im_parts = [], []
    roundoff = 0.0
    # smallest terms first
    for hi in range(N, 0, -_CHUNK):
        n = np.arange(max(1, hi - _CHUNK + 1), hi + 1, dtype=np.int64)[::-1]
        if exact:
            phase = 2 * np.pi * ((n * num) % den) / den
            phase_err = 2 * np.pi * eps
        else:
            phase = 2 * np.pi * np.mod(n * float(r.theta), 1.0)
            phase_err = 2 * np.pi * eps * (1 + n * abs(float(r.theta)))
        weight = n.astype(np.float64) ** (-s)
        re_parts.append(np.sum(np.cos(phase) * weight))
        im_parts.append(np.sum(np.sin(phase) * weight))
        roundoff += float(np.sum(weight * (phase_err + (4 + math.log2(len(n))) * eps)))
    logger.debug("direct Li_%d sum: %d terms, tail <= %.3g, roundoff <= %.3g",
                 s, N, N ** (1 - s) / (s - 1), roundoff)
    if roundoff > p.abs_err / 2:
        raise PrecisionError(f"float roundoff bound {roundoff:.3g} exceeds abs_err/2 for abs_err={p.abs_err}")
    return mpmath.mpc(math.fsum(re_parts), math.fsum(im_parts))


def hurwitz_zeta(s, a, p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpf:
    """
    zeta(s, a) = sum_{k>=0} (k + a)^{-s} for real s > 1, a > 0.

    Euler-Maclaurin: the first M terms are summed directly, the rest replaced by
    the integral, the half-term and Bernoulli corrections
        B_{2j}/(2j)! * s(s+1)...(s+2j-2) * (M + a)^{-s-2j+1}
    added until a correction drops below abs_err/1000.
    """
    with mpmath.workdps(p.dps):
        s, a = mpmath.mpf(s), mpmath.mpf(a)
        if s <= 1 or a <= 0:
            raise ValueError(f"hurwitz_zeta needs s > 1 and a > 0, got s={s}, a={a}")
        M = max(20, p.dps)
        head = mpmath.fsum((k + a) ** (-s) for k in range(M))
        x = M + a
        total = head + x ** (1 - s) / (s - 1) + x ** (-s) / 2
        stop = mpmath.mpf(p.abs_err) / 1000
        for j in range(1, SETTINGS.series_cap):
            term = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * mpmath.rf(s, 2 * j - 1) * x ** (-s - 2 * j + 1)
            total += term
            if abs(term) < stop:
                break
        else:
            raise ResourceError("Euler-Maclaurin corrections did not fall below tolerance")
        return +total


def li3_rational(z: RootOfUnity, p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpc:
    """Li_3(zeta_b^a) = b^{-3} sum_{r=1}^{b} zeta_b^{ar} zeta(3, r/b)."""
    inner = PrecisionSpec(p.abs_err / (10 * z.b))
    with mpmath.workdps(inner.dps):
        total = mpmath.mpc(0)
        for r in range(1, z.b + 1):
            total += RootOfUnity.of(z.a * r, z.b).value() * hurwitz_zeta(3, mpmath.mpf(r) / z.b, inner)
        return +(total / mpmath.mpf(z.b) ** 3)


def li3_unit(r: Rotation) -> mpmath.mpc:
    """Fast Li_3(e^{2 pi i theta}) at the current working precision."""
    with mpmath.extradps(10):
        value = mpmath.mpc(mpmath.polylog(3, r.point()))
    return +value


def abs_li_unit(s: int, r: Rotation) -> mpmath.mpf:
    """|Li_s(e^{2 pi i theta})| for s in {2, 3}."""
    validate_in_set(s, "s", {2, 3}, "abs_li_unit")
    with mpmath.extradps(10):
        value = abs(mpmath.polylog(s, r.point()))
    return +value


# -----------------------------
# 3. DOMINANCE FUNCTIONS
# -----------------------------

def re_cbrt_li3(r: Rotation) -> mpmath.mpf:
    return cbrt(li3_unit(r)).real


def f_k(k: int, r: Rotation) -> mpmath.mpf:
    """Re(Li_3(z^k)^{1/3})/k."""
    return re_cbrt_li3(r.multiple(k)) / k


def _argmax(values: Sequence) -> Tuple[mpmath.mpf, int]:
    best = 0
    for i in range(1, len(values)):
        if values[i] > values[best]:
            best = i
    return values[best], best + 1


def dominance_L(r: Rotation, k_max: int = 20) -> Tuple[mpmath.mpf, int]:
    """max_{k <= k_max} f_k(theta) and the smallest k attaining it."""
    validate_int_at_least(k_max, "k_max", 2, "dominance")
    return _argmax([f_k(k, r) for k in range(1, k_max + 1)])


def re_cbrt_gap(r: Rotation) -> mpmath.mpf:
    """Re((zeta(3) - Li_3(z))^{1/3}); zero at theta = 0."""
    if r.theta == 0:
        return mpmath.mpf(0)
    gap = constants(mpmath.mp.dps).zeta3 - li3_unit(r)
    return cbrt(gap).real


def arg_gap(r: Rotation) -> mpmath.mpf:
    if r.theta == 0:
        raise ValueError("arg_gap is undefined at theta = 0 (the gap vanishes)")
    return mpmath.arg(constants(mpmath.mp.dps).zeta3 - li3_unit(r))


def over_dominance(r: Rotation, k_max: int = 20) -> Tuple[mpmath.mpf, int]:
    """max_{k <= k_max} Re((zeta(3) - Li_3(z^k))^{1/3})/k and its argmax."""
    validate_int_at_least(k_max, "k_max", 1, "dominance")
    return _argmax([re_cbrt_gap(r.multiple(k)) / k for k in range(1, k_max + 1)])


# -----------------------------
# 4. ROOT SOLVES
# -----------------------------

def _bisect(f: Callable, lo, hi, x_tol) -> mpmath.mpf:
    f_lo, f_hi = f(lo), f(hi)
    if not f_lo * f_hi < 0:
        raise ResourceError(f"root not bracketed on [{lo}, {hi}]: f={f_lo}, {f_hi}")
    rising = f_hi > 0
    while hi - lo > x_tol:
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            raise PrecisionError("bisection ran out of working precision")
        f_mid = f(mid)
        if f_mid == 0:
            return mid
        if (f_mid < 0) == rising:
            lo = mid
        else:
            hi = mid
        logger.debug("bisect bracket [%s, %s]", mpmath.nstr(lo, 12), mpmath.nstr(hi, 12))
    return (lo + hi) / 2


@lru_cache(maxsize=32)
def solve_theta12(p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpf:
    """The rotation in (1/4, 1/2) where f_1 and f_2 cross."""
    with mpmath.workdps(p.dps):
        return _bisect(
            lambda x: f_k(1, Rotation(x)) - f_k(2, Rotation(x)),
            mpmath.mpf(1) / 4, mpmath.mpf(1) / 2, p.abs_err,
        )


def theta1_target() -> mpmath.mpf:
    """(7 zeta(3))^{1/3}/2^{5/3}."""
    return mpmath.cbrt(7 * constants(mpmath.mp.dps).zeta3) / mpmath.mpf(2) ** (mpmath.mpf(5) / 3)


@lru_cache(maxsize=32)
def solve_theta1(p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpf:
    """
    Root of Re((zeta(3) - Li_3(e^{i theta}))^{1/3}) = (7 zeta(3))^{1/3}/2^{5/3}
    in radians on (0, pi). Bisection runs in rotations.
    """
    with mpmath.workdps(p.dps):
        target = theta1_target()
        rot = _bisect(
            lambda x: re_cbrt_gap(Rotation(x)) - target,
            mpmath.mpf("1e-6"), mpmath.mpf(1) / 2, p.abs_err / (2 * mpmath.pi),
        )
        return 2 * mpmath.pi * rot


def dominance_ratio_bound(k: int) -> mpmath.mpf:
    """k^{2/3} (|Li_2(e^{i theta_1})|/(pi^2/6))^{1/3}."""
    validate_int_at_least(k, "k", 1, "dominance ratio")
    theta1 = solve_theta1(PrecisionSpec(1e-10))
    li2 = abs_li_unit(2, Rotation(theta1 / (2 * mpmath.pi)))
    return mpmath.mpf(k) ** (mpmath.mpf(2) / 3) * mpmath.cbrt(li2 / constants(mpmath.mp.dps).zeta2)


# -----------------------------
# 5. FORWARD DIFFERENCES
# -----------------------------

def forward_difference(seq: Callable[[int], object], m: int, n: int):
    """Delta^m(a)_n = sum_j binom(m, j) (-1)^j a_{n+j}. Exact for Fraction-valued seq."""
    validate_int_at_least(m, "m", 0, "forward difference")
    validate_int_at_least(n, "n", 1, "forward difference")
    return sum((-1) ** j * math.comb(m, j) * seq(n + j) for j in range(m + 1))


def certify_forward_difference(seq: Callable[[int], object], m: int, n: int,
                               tail: Callable[[int], object]) -> Tuple[object, object]:
    """
    Delta^m(a)_n together with sum_j binom(m, j) tail(n+j), where tail(k)
    bounds the error of seq(k). The sign is certified when |value| > err.
    """
    value = forward_difference(seq, m, n)
    err = sum(math.comb(m, j) * tail(n + j) for j in range(m + 1))
    return value, err


def prop_sequence_A(n: int, p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpf:
    """
    zeta(3)/n^3 - sum_{k>=1} 1/(k^3 (k+n)^3).

    Partial fractions turn the k-sum into
        n^{-3} [H_n^(3) - 3(2 zeta(2) - H_n^(2))/n + 6 H_n/n^2]
    with H_n^(s) = zeta(s) - zeta(s, n+1), so there is no truncated tail.
    """
    validate_int_at_least(n, "n", 1, "sequence A")
    fine = PrecisionSpec(min(p.abs_err, 1e-50))
    with mpmath.workdps(fine.dps):
        c = constants(fine.dps)
        h1 = mpmath.harmonic(n)
        h2 = c.zeta2 - hurwitz_zeta(2, n + 1, fine)
        h3 = c.zeta3 - hurwitz_zeta(3, n + 1, fine)
        nn = mpmath.mpf(n)
        s_n = (h3 - 3 * (2 * c.zeta2 - h2) / nn + 6 * h1 / nn ** 2) / nn ** 3
        return c.zeta3 / nn ** 3 - s_n


def prop_sequence_bound(n: int, p: PrecisionSpec = DEFAULT_PREC) -> mpmath.mpf:
    """Roundoff bound for prop_sequence_A(n, p)."""
    fine = PrecisionSpec(min(p.abs_err, 1e-50))
    return mpmath.mpf(10) ** (-fine.dps + 15) / mpmath.mpf(n) ** 3
