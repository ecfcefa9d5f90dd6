# trace-tool/app/validators/inputs.py
from math import gcd
from typing import Any, Iterable

from app.settings import SETTINGS

# -----------------------------
# GENERAL HELPERS
# -----------------------------
def validate_type(value, field, expected_type, context=""):
    # bool is an int subclass; never accept it where a number is expected
    if isinstance(value, bool) and expected_type is not bool:
        raise ValueError(f"{field} must be a number, but bool is not allowed")
    if not isinstance(value, expected_type):
        names = (
            "/".join(t.__name__ for t in expected_type)
            if isinstance(expected_type, tuple)
            else expected_type.__name__
        )
        ctx = f" for {context}" if context else ""
        raise ValueError(f"{field} must be of type {names}{ctx}, got {type(value).__name__}: {value!r}")

def validate_range(value, field: str, min_val, max_val, inclusive: bool = True, context: str = "") -> None:
    """
    Check that ``value`` lies in [min_val, max_val], or (min_val, max_val) when not inclusive.

    Works for int, float, Fraction and mpf alike; bounds are quoted in interval notation.
    """
    ctx = f" in {context}" if context else ""
    if value != value:
        raise ValueError(f"{field}{ctx} is NaN")
    if inclusive:
        ok, interval = min_val <= value <= max_val, f"[{min_val}, {max_val}]"
    else:
        ok, interval = min_val < value < max_val, f"({min_val}, {max_val})"
    if not ok:
        raise ValueError(f"{field}{ctx} out of range: {value} (expected in {interval})")

def validate_in_set(value: Any, field: str, valid_set: Iterable, context: str = "") -> None:
    choices = sorted(valid_set, key=str)
    if value not in choices:
        ctx = f" in {context}" if context else ""
        raise ValueError(f"{field}{ctx} must be one of {', '.join(map(str, choices))}; got {value!r}")

def validate_int_at_least(value: Any, field: str, minimum: int, context: str = "") -> None:
    validate_type(value, field, int, context)
    if value < minimum:
        ctx = f" in {context}" if context else ""
        raise ValueError(f"{field}{ctx} must be >= {minimum}, got {value}")


# -----------------------------
# ROOTS OF UNITY AND CLASSES
# -----------------------------
def validate_root_of_unity(a: int, b: int) -> None:
    """
    Check that a/b is a reduced fraction in [0, 1) encoding e^{2 pi i a/b}.

    Raises:
        ValueError: If b < 1, a is outside [0, b) or gcd(a, b) != 1
    """
    validate_int_at_least(b, "b", 1, "root of unity")
    validate_type(a, "a", int, "root of unity")
    validate_range(a, "a", 0, b - 1, context="root of unity")
    if gcd(a, b) != 1:
        raise ValueError(f"root of unity {a}/{b} is not reduced (gcd(a, b) = {gcd(a, b)})")

def validate_distinct_classes(a1: int, a2: int, b: int, min_b: int = 1) -> None:
    validate_int_at_least(b, "b", min_b, "residue classes")
    validate_type(a1, "a1", int, "residue classes")
    validate_type(a2, "a2", int, "residue classes")
    if (a1 - a2) % b == 0:
        raise ValueError(f"a1 and a2 must be distinct classes mod {b}, got a1={a1}, a2={a2}")


# -----------------------------
# PRECISION AND TABLE RANGES
# -----------------------------
def validate_tolerance(tol: float, field: str = "tol") -> None:
    validate_type(tol, field, (int, float), "precision")
    if not tol > 0:
        raise ValueError(f"{field} must be positive, got {tol}")

def validate_precision_bits(bits: int) -> None:
    validate_int_at_least(bits, "precision_bits", 53, "output")
    if bits > SETTINGS.max_precision_bits:
        raise ValueError(f"precision_bits in output must be <= {SETTINGS.max_precision_bits}, got {bits}")

def validate_table_index(n: int, max_n: int, field: str = "n") -> None:
    validate_type(n, field, int, "table lookup")
    validate_range(n, field, 0, max_n, context="table lookup")
