# trace-tool/app/calculators/asymptotics.py
"""
Closed-form main terms and comparison against exact values.

Every main term has the shape

    prefactor * n^{n_power} * (-1)^{n * parity} * exp(exp_coeff * n^{2/3})

and is stored decomposed in a ``MainTermEstimate``. Covered:
    - T_n(zeta) for zeta = e^{2 pi i a/b}, three cases split at theta_12 and 1/2
    - pp(n) (Wright's formula, the zeta = 1 case)
    - A_n(zeta) for zeta != 1 and its zeta = -1 specialisation (plane overpartitions)
    - the cosine model for pp(a1, b, n) - pp(a2, b, n)

Fractional powers use the principal branch throughout.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Sequence, Tuple

import mpmath

from app.calculators.exact_qseries import RootOfUnity, TraceTable, difference_series
from app.calculators.polylog_unit import (
    DEFAULT_PREC,
    PrecisionSpec,
    constants,
    li3_rational,
    solve_theta12,
)
from app.settings import SETTINGS
from app.validators.inputs import validate_distinct_classes, validate_int_at_least

logger = logging.getLogger(__name__)

TWO_THIRDS = Fraction(2, 3)


def _c() -> mpmath.mpf:
    # 3 * 2^{-2/3}
    return 3 / mpmath.cbrt(4)


def _pow(z, e) -> mpmath.mpc:
    return mpmath.mpc(z) ** mpmath.mpmathify(e)


@dataclass(frozen=True)
class MainTermEstimate:
    prefactor: mpmath.mpc
    exp_coeff: mpmath.mpc
    n_power: Fraction
    parity_sign: bool = False

    def __post_init__(self):
        if not mpmath.re(self.exp_coeff) > 0:
            raise ValueError(f"exp_coeff must have positive real part, got {self.exp_coeff}")

    def evaluate(self, n: int) -> mpmath.mpc:
        validate_int_at_least(n, "n", 1, "main term")
        nn = mpmath.mpf(n)
        sign = -1 if self.parity_sign and n % 2 else 1
        return sign * self.prefactor * nn ** mpmath.mpmathify(self.n_power) * mpmath.exp(self.exp_coeff * nn ** (mpmath.mpf(2) / 3))

    def conjugate(self) -> "MainTermEstimate":
        return MainTermEstimate(mpmath.conj(self.prefactor), mpmath.conj(self.exp_coeff), self.n_power, self.parity_sign)


@dataclass(frozen=True)
class OscillationModel:
    """B e^{i alpha} and lambda_1 + i lambda_2 = Li_3(zeta_b)^{1/3}."""
    B: mpmath.mpf
    alpha: mpmath.mpf
    lambda1: mpmath.mpf
    lambda2: mpmath.mpf

    def envelope(self, n: int) -> mpmath.mpf:
        """B n^{-2/3} exp(3 2^{-2/3} lambda_1 n^{2/3})."""
        return self.envelope_with(n, Fraction(-2, 3))

    def envelope_with(self, n: int, power: Fraction) -> mpmath.mpf:
        n23 = mpmath.mpf(n) ** (mpmath.mpf(2) / 3)
        return self.B * mpmath.mpf(n) ** mpmath.mpmathify(power) * mpmath.exp(_c() * self.lambda1 * n23)

    def cos_prediction(self, n: int) -> mpmath.mpf:
        n23 = mpmath.mpf(n) ** (mpmath.mpf(2) / 3)
        return mpmath.cos(self.alpha + _c() * self.lambda2 * n23)


# -----------------------------
# 1. T_n(zeta)
# -----------------------------

def trace_case(z: RootOfUnity) -> int:
    """
    1 if a/b < theta_12, 2 if theta_12 < a/b < 1/2, 3 if a/b = 1/2.
    Fractions above 1/2 are classified by their reflection (b - a)/b.

    Raises:
        ValueError: a/b = 0, or a/b within the rejection band of theta_12
    """
    if z.a == 0:
        raise ValueError("a/b = 0 is the plane partition count itself; use wright_pp_main_term")
    x = min(z.fraction, 1 - z.fraction)
    if x == Fraction(1, 2):
        return 3
    theta12 = solve_theta12(PrecisionSpec(1e-12))
    x = mpmath.mpmathify(x)
    if abs(x - theta12) < SETTINGS.theta_band:
        raise ValueError(f"a/b={z} lies within {SETTINGS.theta_band} of theta_12; no main term covers it")
    return 1 if x < theta12 else 2


def trace_main_term(z: RootOfUnity, prec: PrecisionSpec = DEFAULT_PREC) -> MainTermEstimate:
    case = trace_case(z)
    if z.fraction > Fraction(1, 2):
        return trace_main_term(z.conjugate(), prec).conjugate()
    logger.debug("trace main term for %s: case %d", z, case)
    with mpmath.workdps(prec.dps):
        root = mpmath.sqrt(3 * mpmath.pi)
        c = constants(prec.dps)
        if case == 1:
            li3 = li3_rational(z, prec)
            zeta = z.value()
            return MainTermEstimate(
                prefactor=_pow(1 - zeta, Fraction(1, 12)) * _pow(li3, Fraction(1, 6)) / (mpmath.cbrt(2) * root),
                exp_coeff=_c() * _pow(li3, Fraction(1, 3)),
                n_power=-TWO_THIRDS,
            )
        if case == 2:
            li3 = li3_rational(z.power(2), prec)
            zeta = z.value()
            return MainTermEstimate(
                prefactor=_pow(1 - zeta, Fraction(1, 6)) * _pow(li3, Fraction(1, 6))
                / (_pow(1 + zeta, Fraction(1, 12)) * mpmath.mpf(2) ** (mpmath.mpf(5) / 6) * root),
                exp_coeff=3 / mpmath.mpf(2) ** (mpmath.mpf(5) / 3) * _pow(li3, Fraction(1, 3)),
                n_power=-TWO_THIRDS,
                parity_sign=True,
            )
        return MainTermEstimate(
            prefactor=mpmath.mpc(
                mpmath.exp(-c.zeta_prime_minus1) * c.zeta3 ** (mpmath.mpf(5) / 36)
                / (mpmath.mpf(2) ** (mpmath.mpf(3) / 4) * root)
            ),
            exp_coeff=mpmath.mpc(3 / mpmath.mpf(2) ** (mpmath.mpf(5) / 3) * mpmath.cbrt(c.zeta3)),
            n_power=Fraction(-23, 36),
            parity_sign=True,
        )


def wright_pp_main_term(prec: PrecisionSpec = DEFAULT_PREC) -> MainTermEstimate:
    """Wright's formula for pp(n)."""
    with mpmath.workdps(prec.dps):
        c = constants(prec.dps)
        return MainTermEstimate(
            prefactor=mpmath.mpc(
                c.zeta3 ** (mpmath.mpf(7) / 36) * mpmath.exp(c.zeta_prime_minus1)
                / (mpmath.mpf(2) ** (mpmath.mpf(11) / 36) * mpmath.sqrt(3 * mpmath.pi))
            ),
            exp_coeff=mpmath.mpc(_c() * mpmath.cbrt(c.zeta3)),
            n_power=Fraction(-25, 36),
        )


# -----------------------------
# 2. A_n(zeta)
# -----------------------------

def over_main_term(z: RootOfUnity, prec: PrecisionSpec = DEFAULT_PREC) -> MainTermEstimate:
    if z.a == 0:
        raise ValueError("the overpartition product collapses at zeta = 1; a/b must not be 0")
    with mpmath.workdps(prec.dps):
        c = constants(prec.dps)
        gap = c.zeta3 - li3_rational(z, prec)
        return MainTermEstimate(
            prefactor=_pow(1 - z.value(), Fraction(-1, 12)) * mpmath.exp(c.zeta_prime_minus1) * _pow(gap, Fraction(7, 36))
            / (mpmath.mpf(2) ** (mpmath.mpf(11) / 36) * mpmath.sqrt(3 * mpmath.pi)),
            exp_coeff=_c() * _pow(gap, Fraction(1, 3)),
            n_power=Fraction(-25, 36),
        )


def overpp_main_term(prec: PrecisionSpec = DEFAULT_PREC) -> MainTermEstimate:
    """Number of plane overpartitions, A_n(-1)."""
    with mpmath.workdps(prec.dps):
        c = constants(prec.dps)
        seven = 7 * c.zeta3
        return MainTermEstimate(
            prefactor=mpmath.mpc(
                mpmath.exp(c.zeta_prime_minus1) * seven ** (mpmath.mpf(7) / 36)
                / (mpmath.mpf(2) ** (mpmath.mpf(7) / 9) * mpmath.sqrt(3 * mpmath.pi))
            ),
            exp_coeff=mpmath.mpc(3 * mpmath.cbrt(seven) / mpmath.mpf(2) ** (mpmath.mpf(4) / 3)),
            n_power=Fraction(-25, 36),
        )


# -----------------------------
# 3. OSCILLATION OF RESIDUE CLASS DIFFERENCES
# -----------------------------

def oscillation_model(a1: int, a2: int, b: int, prec: PrecisionSpec = DEFAULT_PREC) -> OscillationModel:
    validate_distinct_classes(a1, a2, b, min_b=3)
    with mpmath.workdps(prec.dps):
        lam = _pow(li3_rational(RootOfUnity(1, b), prec), Fraction(1, 3))
        product = (
            mpmath.mpf(2) ** (mpmath.mpf(2) / 3) / (b * mpmath.sqrt(3 * mpmath.pi))
            * (RootOfUnity.of(-a1, b).value() - RootOfUnity.of(-a2, b).value())
            * _pow(1 - RootOfUnity(1, b).value(), Fraction(1, 12))
            * mpmath.sqrt(lam)
        )
        alpha = mpmath.arg(product) % (2 * mpmath.pi)
        return OscillationModel(B=abs(product), alpha=alpha, lambda1=lam.real, lambda2=lam.imag)


def predicted_difference(m: OscillationModel, n: int) -> mpmath.mpf:
    validate_int_at_least(n, "n", 1, "predicted difference")
    return m.envelope(n) * m.cos_prediction(n)


def normalized_differences(t: TraceTable, a1: int, a2: int, b: int, n_range: Sequence[int],
                           model: OscillationModel = None,
                           prec: PrecisionSpec = DEFAULT_PREC) -> List[Tuple[int, int, mpmath.mpf, mpmath.mpf]]:
    """Rows (n, exact difference, difference / envelope, cosine prediction)."""
    model = model or oscillation_model(a1, a2, b, prec)
    exact = difference_series(t, a1, a2, b, n_range)
    with mpmath.workdps(prec.dps):
        return [(n, d, d / model.envelope(n), model.cos_prediction(n)) for n, d in zip(n_range, exact)]


def normalization_residuals(t: TraceTable, a1: int, a2: int, b: int, n_range: Sequence[int],
                            powers: Sequence[Fraction] = (Fraction(-2, 3), Fraction(-3, 4)),
                            prec: PrecisionSpec = DEFAULT_PREC) -> dict:
    """sup_n |difference / envelope - cos| for each candidate power of n in the envelope."""
    model = oscillation_model(a1, a2, b, prec)
    exact = difference_series(t, a1, a2, b, n_range)
    out = {}
    with mpmath.workdps(prec.dps):
        for power in powers:
            out[power] = max(
                (abs(d / model.envelope_with(n, power) - model.cos_prediction(n)) for n, d in zip(n_range, exact)),
                default=mpmath.mpf(0),
            )
    return out


# -----------------------------
# 4. COMPARISON HARNESS
# -----------------------------

def ratio_report(exact: Callable[[int], object], est: MainTermEstimate, n_grid: Sequence[int],
                 prec: PrecisionSpec = DEFAULT_PREC) -> List[Tuple[int, mpmath.mpc, mpmath.mpf]]:
    """Rows (n, exact/estimate, |exact/estimate - 1|). Parity is part of ``est.evaluate``."""
    rows = []
    with mpmath.workdps(prec.dps):
        for n in n_grid:
            ratio = mpmath.mpc(exact(n)) / est.evaluate(n)
            rows.append((n, ratio, abs(ratio - 1)))
    return rows
