# trace-tool/utils.py
"""
Report rendering for the command line.

Every report is a list of rows with named columns plus optional metadata.
Values are converted to strings before they reach pandas, so big integers stay
exact. Plain reals carry the digits of the working precision; a ``Measured``
value is cut to the digits its absolute error leaves.

CSV: header row, comma delimiter, LF line ends; metadata as leading
``# key=value`` lines.
JSON: {"meta": {...}, "columns": [...], "rows": [{column: string}, ...]}.
"""

import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import mpmath
import pandas as pd

from app.settings import bits_to_dps


@dataclass(frozen=True)
class Measured:
    """A real value known to within ``abs_err``."""
    value: Any
    abs_err: Any


def significant_digits(x: Any, abs_err: Any, cap: int) -> int:
    """Digits of ``x`` that an absolute error ``abs_err`` leaves intact, between 1 and ``cap``."""
    x = abs(mpmath.mpf(x))
    return max(1, min(cap, int(mpmath.floor(mpmath.log10(x / mpmath.mpf(abs_err))))))


def format_real(x: Any, bits: int, abs_err: Any = None) -> str:
    """
    Scientific notation with the decimal digits of ``bits`` binary digits, or
    fewer when ``abs_err`` says they are not all correct. Values within
    ``abs_err`` of zero print as 0.0.
    """
    x = mpmath.mpf(x)
    digits = bits_to_dps(bits)
    if abs_err is not None:
        if abs(x) <= abs_err:
            return "0.0"
        digits = significant_digits(x, abs_err, digits)
    return mpmath.nstr(x, digits, min_fixed=0, max_fixed=0, show_zero_exponent=True)


def format_value(x: Any, bits: int) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, str):
        return x
    if isinstance(x, Measured):
        return format_real(x.value, bits, x.abs_err)
    return format_real(x, bits)


def render_report(columns: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str = "csv",
                  bits: int = 128, meta: Optional[Dict[str, Any]] = None) -> str:
    """
    Render rows as CSV or JSON text.

    Args:
        columns: column names, one per entry of each row
        rows: row values (int, Fraction, str, Measured or real)
        fmt: "csv" or "json"
        bits: working precision, caps the digits of reals
        meta: extra key/value pairs (written as comments in CSV)
    """
    table: List[List[str]] = [[format_value(v, bits) for v in row] for row in rows]
    meta_text = {k: format_value(v, bits) for k, v in (meta or {}).items()}
    if fmt == "json":
        body = {
            "meta": meta_text,
            "columns": list(columns),
            "rows": [dict(zip(columns, row)) for row in table],
        }
        return json.dumps(body, indent=2) + "\n"
    df = pd.DataFrame(table, columns=list(columns), dtype=str)
    header = "".join(f"# {k}={v}\n" for k, v in meta_text.items())
    return header + df.to_csv(index=False, lineterminator="\n")


def write_report(text: str, out: Optional[Path]) -> None:
    """Write to ``out``, or to stdout when out is None."""
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
