# tests/test_utils.py
from fractions import Fraction

import mpmath
import pytest

from utils import Measured, format_real, format_value, render_report, significant_digits


# -----------------------------
# Digits of reals
# -----------------------------

def test_format_real_uses_working_precision():
    assert format_real(mpmath.mpf(1) / 3, 53) == "3.33333333333333e-1"


@pytest.mark.parametrize("x, abs_err, want", [
    ("0.4758512", 1e-4, "4.76e-1"),
    ("-0.4758512", 1e-3, "-4.8e-1"),
    ("1e-25", 2.0 ** -64, "0.0"),
])
def test_format_real_cuts_to_error(x, abs_err, want):
    assert format_real(mpmath.mpf(x), 128, abs_err) == want


def test_significant_digits_capped():
    """Never more than the cap, never fewer than one."""
    assert significant_digits(1, 1e-40, 19) == 19
    assert significant_digits(0.5, 0.4, 19) == 1


def test_format_value_types():
    assert format_value(True, 64) == "true"
    assert format_value(10 ** 30, 64) == str(10 ** 30)
    assert format_value(Fraction(-2, 3), 64) == "-2/3"
    assert format_value(Measured(mpmath.mpf("0.4758512"), 1e-4), 64) == "4.76e-1"


# -----------------------------
# Reports
# -----------------------------

def test_render_csv_with_measured_and_meta():
    text = render_report(["n", "x"], [(1, Measured(mpmath.mpf("0.4758512"), 1e-4))], "csv", 64, {"tol": "0.0001"})
    assert text == "# tol=0.0001\nn,x\n1,4.76e-1\n"


def test_render_json_keeps_big_integers_exact():
    text = render_report(["n", "pp"], [(0, 10 ** 40)], "json", 64)
    assert f'"pp": "{10 ** 40}"' in text
    assert '"meta": {}' in text
