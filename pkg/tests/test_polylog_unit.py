# tests/test_polylog_unit.py
import math
from fractions import Fraction
from functools import lru_cache

import mpmath
import pytest

from app.calculators import polylog_unit
from app.calculators.exact_qseries import RootOfUnity
from app.calculators.polylog_unit import (
    PrecisionSpec,
    Rotation,
    abs_li_unit,
    arg_gap,
    cbrt,
    certify_forward_difference,
    constants,
    dominance_L,
    dominance_ratio_bound,
    f_k,
    forward_difference,
    hurwitz_zeta,
    li,
    li3_rational,
    li3_unit,
    over_dominance,
    prop_sequence_A,
    prop_sequence_bound,
    re_cbrt_gap,
    re_cbrt_li3,
    solve_theta1,
    solve_theta12,
    theta1_target,
)
from app.errors import PrecisionError, ResourceError

ZETA3 = mpmath.zeta(3)

# 10^4 interior points of (0, 1/2)
GRID = [Fraction(i, 20000) for i in range(1, 10000)]


def _strictly_increasing(values):
    return all(x < y for x, y in zip(values, values[1:]))


def _strictly_decreasing(values):
    return all(x > y for x, y in zip(values, values[1:]))


# ------------------------
# Types and constants
# ------------------------

def test_rotation_validation():
    assert Rotation(Fraction(1, 3)).theta == Fraction(1, 3)
    assert Rotation(0.25).theta == 0.25
    with pytest.raises(ValueError, match=r"\[0, 1\)"):
        Rotation(1)
    with pytest.raises(ValueError, match="bool is not allowed"):
        Rotation(True)
    with pytest.raises(ValueError, match="must be of type"):
        Rotation("0.5")


def test_rotation_multiple_and_point():
    r = Rotation(Fraction(3, 4))
    assert r.multiple(2) == Rotation(Fraction(1, 2))
    assert Rotation.of(RootOfUnity(2, 5)) == Rotation(Fraction(2, 5))
    assert abs(r.point() - mpmath.mpc(0, -1)) < 1e-15


def test_precision_spec():
    assert PrecisionSpec(1e-12).dps >= 22
    assert PrecisionSpec(0.5).dps == 20
    with pytest.raises(ValueError, match="must be positive"):
        PrecisionSpec(0)


def test_constants():
    c = constants()
    with mpmath.workdps(50):
        assert abs(c.zeta3 - mpmath.zeta(3)) < 1e-45
        assert abs(c.zeta2 - mpmath.pi ** 2 / 6) < 1e-45
    assert c.zeta_prime_minus1 < 0
    assert abs(c.zeta_prime_minus1 - mpmath.zeta(-1, derivative=1)) < 1e-14
    assert abs(c.zeta_prime_minus1 - mpmath.mpf("-0.16542114370045092")) < 1e-15


def test_cbrt_principal_branch():
    assert abs(cbrt(-8) - mpmath.mpc(1, mpmath.sqrt(3))) < 1e-14
    assert abs(cbrt(27) - 3) < 1e-14


# ------------------------
# Li_s evaluation
# ------------------------

def test_li_at_one():
    assert abs(li(3, Rotation(0)) - ZETA3) < 1e-12


def test_li_at_minus_one():
    assert abs(li(3, Rotation(Fraction(1, 2))) + 0.75 * ZETA3) < 1e-12


def test_li_conjugate_rotation():
    a = li(3, Rotation(Fraction(1, 5)))
    b = li(3, Rotation(Fraction(4, 5)))
    assert abs(a - mpmath.conj(b)) < 1e-12


def test_li_float_rotation_matches_polylog():
    assert abs(li(3, Rotation(0.3), PrecisionSpec(1e-9)) - li3_unit(Rotation(0.3))) < 1e-9


def test_li_rejects():
    with pytest.raises(ValueError, match="s in direct polylog must be >= 2"):
        li(1, Rotation(0))
    with pytest.raises(PrecisionError, match="cannot certify"):
        li(3, Rotation(0), PrecisionSpec(1e-14))
    with pytest.raises(ResourceError, match="direct sum needs"):
        li(2, Rotation(0), PrecisionSpec(1e-12))


def test_li_roundoff_bound_enforced(monkeypatch):
    # with the floor lifted, a few terms at s = 30 meet the tail budget but not the roundoff one
    monkeypatch.setattr(polylog_unit, "_FLOAT_FLOOR", 0.0)
    with pytest.raises(PrecisionError, match="roundoff bound"):
        li(30, Rotation(Fraction(1, 3)), PrecisionSpec(1e-17))
    assert abs(li(30, Rotation(Fraction(1, 3)), PrecisionSpec(1e-12)) - mpmath.polylog(30, mpmath.expjpi(mpmath.mpf(2) / 3))) < 1e-12


def test_hurwitz_zeta():
    assert abs(hurwitz_zeta(3, 1) - ZETA3) < 1e-12
    assert abs(hurwitz_zeta(2, 0.5) - mpmath.pi ** 2 / 2) < 1e-12
    with mpmath.workdps(30):
        expected = mpmath.zeta(3, 0.25)
    assert abs(hurwitz_zeta(3, 0.25, PrecisionSpec(1e-20)) - expected) < 1e-20
    with pytest.raises(ValueError, match="s > 1 and a > 0"):
        hurwitz_zeta(1, 1)


def test_li3_rational_special_values():
    assert abs(li3_rational(RootOfUnity(0, 1)) - ZETA3) < 1e-12
    assert abs(li3_rational(RootOfUnity(1, 2)) + 0.75 * ZETA3) < 1e-12


def test_li3_rational_matches_polylog():
    z = RootOfUnity(1, 5)
    assert abs(li3_rational(z) - li3_unit(Rotation.of(z))) < 1e-13


@pytest.mark.parametrize("b", range(1, 25))
def test_li3_rational_matches_direct_sum(b):
    for a in range(b):
        if math.gcd(a, b) != 1:
            continue
        z = RootOfUnity(a, b)
        assert abs(li3_rational(z) - li(3, Rotation.of(z))) < 1e-12


def test_abs_li_unit_rejects_s():
    with pytest.raises(ValueError, match="s in abs_li_unit must be one of 2, 3; got 4"):
        abs_li_unit(4, Rotation(0.1))


# ------------------------
# Dominance functions
# ------------------------

def test_re_cbrt_li3_values():
    assert abs(re_cbrt_li3(Rotation(Fraction(1, 4))) - 0.8391145) < 5e-4
    assert abs(re_cbrt_li3(Rotation(0)) - mpmath.cbrt(ZETA3)) < 1e-14
    expected = mpmath.cbrt(0.75 * ZETA3) * mpmath.cos(mpmath.pi / 3)
    assert abs(re_cbrt_li3(Rotation(Fraction(1, 2))) - expected) < 1e-14


def test_f_k_values():
    assert abs(f_k(2, Rotation(0)) - 0.531632) < 5e-4
    assert abs(f_k(3, Rotation(0)) - 0.3544) < 5e-4


@pytest.mark.parametrize("theta, value, k", [
    (Fraction(1, 3), 0.7304, 1),
    (Fraction(1, 2), 0.5316, 2),
])
def test_dominance_L_values(theta, value, k):
    L, argmax = dominance_L(Rotation(theta))
    assert abs(L - value) < 5e-4
    assert argmax == k


def test_dominance_L_past_theta12():
    assert dominance_L(Rotation(0.49))[1] == 2


def test_dominance_L_argmax_switches_at_theta12():
    theta12 = solve_theta12(PrecisionSpec(1e-8))
    for i in range(0, 51):
        if abs(i / 100 - theta12) < 1e-4:
            continue
        expected = 1 if i / 100 < theta12 else 2
        assert dominance_L(Rotation(Fraction(i, 100)), k_max=20)[1] == expected, i


def test_dominance_L_rejects_small_k_max():
    with pytest.raises(ValueError, match="k_max in dominance must be >= 2"):
        dominance_L(Rotation(0.1), k_max=1)


def test_over_dominance_argmax_is_one():
    for b in range(2, 13):
        for a in range(1, b):
            if math.gcd(a, b) == 1:
                assert over_dominance(Rotation(Fraction(a, b)))[1] == 1


# ------------------------
# Gap functions
# ------------------------

def test_re_cbrt_gap_values():
    expected = mpmath.cbrt(7 * ZETA3) / mpmath.mpf(2) ** (mpmath.mpf(2) / 3)
    assert abs(re_cbrt_gap(Rotation(Fraction(1, 2))) - expected) < 1e-14
    assert re_cbrt_gap(Rotation(0)) == 0
    assert re_cbrt_gap(Rotation(1e-9)) < 1e-2


def test_arg_gap_limits():
    assert -mpmath.pi / 2 < arg_gap(Rotation(1e-6)) < -mpmath.pi / 2 + 1e-3
    assert -1e-2 < arg_gap(Rotation(0.4999)) < 0
    with pytest.raises(ValueError, match="undefined at theta = 0"):
        arg_gap(Rotation(0))


def test_abs_li3_decreasing():
    assert _strictly_decreasing([abs_li_unit(3, Rotation(x)) for x in GRID])


def test_abs_li2_decreasing():
    assert _strictly_decreasing([abs_li_unit(2, Rotation(x)) for x in GRID[::10]])


def test_re_cbrt_li3_decreasing():
    assert _strictly_decreasing([re_cbrt_li3(Rotation(x)) for x in GRID])


def test_arg_li3_increasing():
    assert _strictly_increasing([mpmath.arg(li3_unit(Rotation(x))) for x in GRID])


def test_arg_gap_increasing():
    values = [arg_gap(Rotation(x)) for x in GRID]
    assert _strictly_increasing(values)
    assert all(-mpmath.pi / 2 < v < 0 for v in values)


def test_re_cbrt_gap_increasing():
    assert _strictly_increasing([re_cbrt_gap(Rotation(x)) for x in GRID])


# ------------------------
# Root solves
# ------------------------

def test_solve_theta12():
    theta12 = solve_theta12(PrecisionSpec(1e-6))
    assert abs(theta12 - 0.47585) < 1e-5
    r = Rotation(theta12)
    assert abs(f_k(1, r) - f_k(2, r)) < 1e-5
    assert abs(f_k(1, r) - 0.5212) < 5e-4


def test_solve_theta1():
    theta1 = solve_theta1(PrecisionSpec(1e-6))
    assert abs(theta1 - 0.23792) < 1e-5
    assert theta1 < mpmath.pi / 2
    assert abs(re_cbrt_gap(Rotation(theta1 / (2 * mpmath.pi))) - theta1_target()) < 1e-5


def test_dominance_ratio_bound():
    assert dominance_ratio_bound(1) < dominance_ratio_bound(2)
    for k in range(2, 11):
        assert dominance_ratio_bound(k) >= 1.5


# ------------------------
# Forward differences
# ------------------------

def test_forward_difference_small():
    seq = lambda n: Fraction(n * n)
    assert forward_difference(seq, 0, 3) == 9
    assert forward_difference(seq, 1, 3) == 9 - 16
    assert forward_difference(seq, 2, 3) == 2
    with pytest.raises(ValueError, match="must be >= 1"):
        forward_difference(seq, 1, 0)


@pytest.mark.parametrize("power", [2, 3])
def test_inverse_powers_four_fold_monotone(power):
    seq = lru_cache(maxsize=None)(lambda n: Fraction(1, n ** power))
    for n in range(1, 1001):
        for m in range(5):
            assert forward_difference(seq, m, n) > 0


def test_prop_sequence_matches_direct_sum():
    with mpmath.workdps(40):
        direct = mpmath.zeta(3) - mpmath.nsum(lambda k: 1 / (k ** 3 * (k + 1) ** 3), [1, mpmath.inf])
    assert abs(prop_sequence_A(1) - direct) < 1e-30
    with mpmath.workdps(40):
        direct = mpmath.zeta(3) / 125 - mpmath.nsum(lambda k: 1 / (k ** 3 * (k + 5) ** 3), [1, mpmath.inf])
    assert abs(prop_sequence_A(5) - direct) < 1e-30


def test_prop_sequence_four_fold_monotone():
    seq = lru_cache(maxsize=None)(prop_sequence_A)
    with mpmath.workdps(60):
        for n in range(1, 1001):
            for m in range(5):
                value, err = certify_forward_difference(seq, m, n, prop_sequence_bound)
                assert value > err, (m, n)
