# tests/test_circle_diag.py
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from app.calculators.circle_diag import (
    LEMMA42_GRID,
    SaddleParam,
    arc_intervals,
    error_term_E,
    f1,
    f2,
    farey,
    g_jk,
    g_residue,
    lemma41_deviation,
    lemma42_identity_residual,
    log_pp_direct,
    loglog_slope,
    major_arc_quadrature,
    phi,
    t_n_trace,
    tiling_defect,
    twisted_harmonic_G,
    twisted_harmonic_partial_sums,
)
from app.calculators.asymptotics import trace_main_term
from app.calculators.exact_qseries import RootOfUnity, eval_trace_poly
from app.calculators.polylog_unit import li3_rational

LEMMA41_NS = [1000, 10000, 100000]


def _random_w(rng):
    # Re w > 0 keeps every e^{-w} factor inside the unit disc
    while True:
        w = mpmath.mpc(rng.uniform(0.05, 3), rng.uniform(-3, 3))
        if abs(w) >= 0.2:
            return w


# -----------------------------
# Farey dissection
# -----------------------------

def test_farey_one():
    arcs = farey(1)
    assert [(a.h, a.k) for a in arcs] == [(0, 1), (1, 1)]
    assert arcs[0].theta_lo == arcs[0].theta_hi == Fraction(1, 2)
    assert arc_intervals(arcs) == [(Fraction(-1, 2), Fraction(1, 2))]


def test_farey_two():
    arcs = farey(2)
    assert [(a.h, a.k) for a in arcs] == [(0, 1), (1, 2), (1, 1)]
    assert arcs[1].theta_lo == arcs[1].theta_hi == Fraction(1, 6)
    assert arcs[0].theta_lo == Fraction(1, 3)


def test_farey_five():
    arcs = farey(5)
    expected = [(0, 1), (1, 5), (1, 4), (1, 3), (2, 5), (1, 2), (3, 5), (2, 3), (3, 4), (4, 5), (1, 1)]
    assert [(a.h, a.k) for a in arcs] == expected
    assert arcs[1].theta_lo == Fraction(1, 30)
    assert arcs[1].theta_hi == Fraction(1, 45)


@pytest.mark.parametrize("N", range(1, 31))
def test_farey_gap_bounds(N):
    for arc in farey(N):
        for gap in (arc.theta_lo, arc.theta_hi):
            assert Fraction(1, 2 * arc.k * N) <= gap < Fraction(1, arc.k * N)


@pytest.mark.parametrize("N", [1, 2, 3, 5, 10, 50, 200])
def test_farey_arcs_tile_the_period(N):
    assert tiling_defect(farey(N)) == 0


def test_arc_intervals_skip_one():
    arcs = farey(4)
    assert len(arc_intervals(arcs)) == len(arcs) - 1
    assert arc_intervals(arcs)[0][0] == Fraction(-1, 5)


def test_farey_rejects_zero():
    with pytest.raises(ValueError, match="must be >= 1"):
        farey(0)


# -----------------------------
# Saddle parameter
# -----------------------------

@pytest.mark.parametrize("t", [0, -1 + 1j, 2j])
def test_saddle_param_rejects(t):
    with pytest.raises(ValueError, match=r"Re\(t\) > 0"):
        SaddleParam(t)


def test_t_n_at_one():
    t = t_n_trace(RootOfUnity(0, 1), 1000).t
    assert abs(t - mpmath.cbrt(2 * mpmath.zeta(3)) / 10) < 1e-12


def test_t_n_at_minus_one_uses_double_arc():
    t = t_n_trace(RootOfUnity(1, 2), 1000).t
    assert abs(t - mpmath.cbrt(mpmath.zeta(3)) / (mpmath.cbrt(4) * 10)) < 1e-12


def test_t_n_argument_is_a_third_of_li3():
    z = RootOfUnity(1, 5)
    t = t_n_trace(z, 1000).t
    assert t.real > 0
    assert abs(abs(mpmath.arg(t)) - abs(mpmath.arg(li3_rational(z))) / 3) < 1e-12


def test_t_n_at_minus_one_is_real():
    t = t_n_trace(RootOfUnity(1, 2), 500).t
    assert t.real > 0
    assert abs(t.imag) < 1e-15


def test_t_n_rejects_n_zero():
    with pytest.raises(ValueError, match="must be >= 1"):
        t_n_trace(RootOfUnity(1, 3), 0)


# -----------------------------
# Log PP on the arcs
# -----------------------------

def test_log_pp_direct_matches_generating_function(trace_table_400):
    q = mpmath.exp(-0.5)
    series = mpmath.fsum(trace_table_400.pp(n) * q ** n for n in range(401))
    value = log_pp_direct(RootOfUnity(0, 1), 0, 1, SaddleParam(0.5))
    assert abs(value - mpmath.log(series)) < 1e-10


def test_log_pp_direct_at_minus_one(trace_table_400):
    z = RootOfUnity(1, 2)
    q = mpmath.exp(-1)
    series = mpmath.fsum(eval_trace_poly(trace_table_400, n, z) * q ** n for n in range(401))
    value = log_pp_direct(z, 0, 1, SaddleParam(1))
    assert abs(value - mpmath.log(series)) < 1e-10


def test_log_pp_direct_on_half_arc(trace_table_400):
    q = -mpmath.exp(-1)
    series = mpmath.fsum(trace_table_400.pp(n) * q ** n for n in range(401))
    value = log_pp_direct(RootOfUnity(0, 1), 1, 2, SaddleParam(1))
    assert abs(value - mpmath.log(series)) < 1e-10


def test_log_pp_direct_conjugation():
    t = mpmath.mpc(0.3, 0.1)
    value = log_pp_direct(RootOfUnity(2, 3), 1, 2, SaddleParam(t))
    mirror = log_pp_direct(RootOfUnity(1, 3), 1, 2, SaddleParam(mpmath.conj(t)))
    assert abs(value - mpmath.conj(mirror)) < 1e-10


def test_error_term_is_lower_order_at_one():
    t = SaddleParam(0.1)
    z = RootOfUnity(0, 1)
    E = error_term_E(z, 0, 1, t)
    main = li3_rational(z) / t.t ** 2
    assert abs(mpmath.im(E)) < 1e-15
    assert abs(E) < 1
    assert abs(E + main - log_pp_direct(z, 0, 1, t)) < 1e-12 * abs(main)


def test_log_pp_direct_rejects_unreduced_arc():
    with pytest.raises(ValueError, match="not reduced"):
        log_pp_direct(RootOfUnity(1, 3), 2, 4, SaddleParam(0.5))


# -----------------------------
# Limits on the dominant arc
# -----------------------------

@pytest.mark.parametrize("case, z", [
    (1, RootOfUnity(1, 3)),
    (2, RootOfUnity(0, 1)),
    (3, RootOfUnity(10, 21)),
    (4, RootOfUnity(1, 2)),
])
def test_lemma41_deviation_decays(case, z):
    devs = [lemma41_deviation(case, z, n)[2] for n in LEMMA41_NS]
    assert all(x > y for x, y in zip(devs, devs[1:]))
    assert -1.0 <= loglog_slope(LEMMA41_NS, devs) <= -0.4


@pytest.mark.parametrize("case, z, msg", [
    (1, RootOfUnity(0, 1), "case 1 needs"),
    (1, RootOfUnity(10, 21), "case 1 needs"),
    (2, RootOfUnity(1, 3), "case 2 is zeta = 1 only"),
    (3, RootOfUnity(1, 5), "case 3 needs"),
    (3, RootOfUnity(1, 2), "case 3 needs"),
    (4, RootOfUnity(1, 3), "case 4 is zeta = -1 only"),
    (5, RootOfUnity(1, 3), "case in dominant arc limit must be one of 1, 2, 3, 4"),
])
def test_lemma41_rejects_wrong_case(case, z, msg):
    with pytest.raises(ValueError, match=msg):
        lemma41_deviation(case, z, 100)


def test_loglog_slope_exact_power():
    ns = [10, 100, 1000]
    assert abs(loglog_slope(ns, [n ** -0.5 for n in ns]) + 0.5) < 1e-12


# -----------------------------
# Regrouped series and its j-sums
# -----------------------------

@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_f1_is_sum_of_g(k):
    rng = random.Random(1000 + k)
    with mpmath.workdps(30):
        for _ in range(20):
            w = _random_w(rng)
            total = mpmath.fsum(g_jk(j, k, w) for j in range(1, k + 1))
            value = f1(k, w)
            assert abs(value - total) < 1e-10 * max(1, abs(value))


@pytest.mark.parametrize("k, mh", [(2, 1), (3, 1), (3, 2), (4, 3), (5, 7), (6, 5)])
def test_f2_is_twisted_sum_of_g(k, mh):
    rng = random.Random(7 * k + mh)
    with mpmath.workdps(30):
        for _ in range(20):
            w = _random_w(rng)
            total = mpmath.fsum(RootOfUnity.of(j * mh, k).value() * g_jk(j, k, w) for j in range(1, k + 1))
            value = f2(k, mh, w)
            assert abs(value - total) < 1e-10 * max(1, abs(value))


def test_phi_is_w_times_g():
    rng = random.Random(42)
    with mpmath.workdps(30):
        for k in (1, 2, 4):
            for j in range(1, k + 1):
                w = _random_w(rng)
                assert abs(phi(Fraction(j, k), w) - w * g_jk(j, k, w)) < 1e-10


@pytest.mark.parametrize("j, k", [(1, 1), (1, 2), (1, 3), (2, 3), (3, 4)])
def test_phi_at_zero_is_residue(j, k):
    residue = g_residue(j, k)
    value = phi(Fraction(j, k), 0)
    assert abs(value - mpmath.mpf(residue.numerator) / residue.denominator) < 1e-15
    assert abs(phi(Fraction(j, k), mpmath.mpc(1e-8, 1e-8)) - value) < 1e-6


def test_g_residue_values():
    assert g_residue(1, 1) == Fraction(-1, 12)
    assert g_residue(1, 2) == Fraction(1, 24)


def test_g_rejects_poles():
    with pytest.raises(ValueError, match="pole"):
        g_jk(1, 2, 0)
    with pytest.raises(ValueError, match="multiple of 2 pi i"):
        g_jk(1, 2, 2j * mpmath.pi)
    with pytest.raises(ValueError, match="out of range"):
        g_jk(3, 2, 1)


def test_f2_rejects_divisible_twist():
    with pytest.raises(ValueError, match="k not dividing mh"):
        f2(3, 6, 1)
    with pytest.raises(ValueError, match="must be >= 2"):
        f2(1, 1, 1)


def test_phi_rejects_a_outside_unit_interval():
    with pytest.raises(ValueError, match="out of range"):
        phi(Fraction(3, 2), 1)


@pytest.mark.parametrize("a, b, h, k, t", LEMMA42_GRID)
def test_regrouped_series_matches_error_term(a, b, h, k, t):
    assert lemma42_identity_residual(RootOfUnity(a, b), h, k, SaddleParam(t)) < 1e-8


def test_regrouped_series_rejects_zero_truncation():
    with pytest.raises(ValueError, match="must be >= 1"):
        lemma42_identity_residual(RootOfUnity(1, 2), 0, 1, SaddleParam(0.3), truncation=0)


# -----------------------------
# Twisted harmonic sums
# -----------------------------

def test_twisted_harmonic_at_half():
    assert abs(twisted_harmonic_G(4, 0.5) - (-7 / 12)) < 1e-14
    sums = twisted_harmonic_partial_sums(3, 0.5)
    assert np.allclose(sums, [-1, -0.5, -0.5 - 1 / 3])


def test_twisted_harmonic_log_bound():
    thetas = [i / 100 for i in range(1, 100)]
    worst = 0.0
    for theta in thetas:
        sums = twisted_harmonic_partial_sums(1000, theta)
        bound = np.log(1 / theta) + np.log(1 / (1 - theta))
        worst = max(worst, float(np.max(np.abs(sums))) / bound)
    assert worst <= 3


def test_twisted_harmonic_doubling_stays_bounded():
    for theta in (0.1, 0.37, 0.5, 0.9):
        values = [abs(twisted_harmonic_G(M, theta)) for M in (500, 1000, 2000, 4000)]
        assert max(values) - min(values) < 0.05


def test_twisted_harmonic_rejects_m_zero():
    with pytest.raises(ValueError, match="must be >= 1"):
        twisted_harmonic_G(0, 0.3)


@pytest.mark.parametrize("theta", [0, 1, -0.25, 1.5, float("nan")])
def test_twisted_harmonic_rejects_theta_outside_unit_interval(theta):
    with pytest.raises(ValueError, match="theta in twisted harmonic sum"):
        twisted_harmonic_G(10, theta)


def test_twisted_harmonic_takes_fraction():
    assert abs(twisted_harmonic_G(4, Fraction(1, 2)) - (-7 / 12)) < 1e-14


# -----------------------------
# Dominant arc quadrature
# -----------------------------

def test_quadrature_fifth_root(trace_table_400):
    z = RootOfUnity(1, 5)
    exact = eval_trace_poly(trace_table_400, 200, z)
    quad = major_arc_quadrature(z, 200)
    main = trace_main_term(z).evaluate(200)
    assert abs(quad - exact) < 0.05 * abs(exact)
    assert abs(quad - exact) < abs(main - exact)


def test_quadrature_exact_integrand(trace_table_400):
    z = RootOfUnity(1, 5)
    exact = eval_trace_poly(trace_table_400, 200, z)
    quad = major_arc_quadrature(z, 200, exact_integrand=True)
    assert abs(quad - exact) < 1e-4 * abs(exact)


def test_quadrature_at_one(trace_table_400):
    quad = major_arc_quadrature(RootOfUnity(0, 1), 200)
    pp = trace_table_400.pp(200)
    assert abs(quad - pp) < 1e-3 * pp
    assert abs(quad.imag) < 1e-6 * pp


def test_quadrature_at_minus_one_is_real():
    quad = major_arc_quadrature(RootOfUnity(1, 2), 200)
    assert abs(quad.imag) < 1e-6 * abs(quad)


def test_quadrature_conjugate_root():
    upper = major_arc_quadrature(RootOfUnity(1, 5), 100)
    lower = major_arc_quadrature(RootOfUnity(4, 5), 100)
    assert abs(upper - mpmath.conj(lower)) < 1e-10 * abs(upper)
