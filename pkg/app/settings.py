# trace-tool/app/settings.py
from dataclasses import dataclass


@dataclass(frozen=True)
class Settings:
    precision_bits: int = 128         # default working precision (CLI --precision)
    max_precision_bits: int = 1000    # keeps 2^-bits a normal float64
    enumeration_cap: int = 12         # largest n the brute-force enumerator accepts
    rounding_slack: float = 0.25      # max distance to the nearest integer when rounding
    theta_band: float = 1e-9          # rejection band around theta_12
    direct_sum_cap: int = 50_000_000  # terms allowed in the direct polylog oracle
    series_cap: int = 1_000_000       # iterations allowed in any other series
    default_tol: float = 1e-12


SETTINGS = Settings()


def bits_to_dps(bits: int) -> int:
    """Decimal digits carried by ``bits`` binary digits (at least 15)."""
    return max(15, int(bits * 0.30103))
