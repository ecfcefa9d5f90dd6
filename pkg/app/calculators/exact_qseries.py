# trace-tool/app/calculators/exact_qseries.py
"""
Exact coefficients of the two MacMahon-type products.

    PP(z; q)  = prod_{k>=1} (1 - z q^k)^{-k}           = sum pp(m, n) z^m q^n
    PPbar(z; q) = prod_{k>=1} ((1 - z q^k)/(1 - q^k))^k = sum A_n(z) q^n

Everything here is exact integer arithmetic; floating point only enters when a
trace polynomial is evaluated at a root of unity, and then only after the
coefficients have been folded into residue classes mod b.

A brute-force plane-partition enumerator is included as an independent oracle
for small n.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd
from typing import Iterator, List, Sequence, Tuple, Union

import mpmath
import numpy as np

from app.errors import PrecisionError, ResourceError
from app.settings import SETTINGS
from app.validators.inputs import (
    validate_distinct_classes,
    validate_int_at_least,
    validate_root_of_unity,
    validate_table_index,
    validate_tolerance,
)

logger = logging.getLogger(__name__)

# -----------------------------
# 1. DOMAIN TYPES
# -----------------------------

@dataclass(frozen=True)
class RootOfUnity:
    """The root of unity e^{2 pi i a/b}, stored as a reduced fraction a/b in [0, 1)."""
    a: int
    b: int

    def __post_init__(self):
        validate_root_of_unity(self.a, self.b)

    @classmethod
    def of(cls, a: int, b: int) -> "RootOfUnity":
        """Reduce an arbitrary a/b (any integer a, b >= 1) to canonical form."""
        validate_int_at_least(b, "b", 1, "root of unity")
        a %= b
        g = gcd(a, b)
        return cls(a // g, b // g)

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        num, sep, den = text.strip().partition("/")
        try:
            a, b = int(num), int(den) if sep else 1
        except ValueError:
            raise ValueError(f"root of unity must be written a/b, got {text!r}") from None
        return cls(a, b)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.a, self.b)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity.of(-self.a, self.b)

    def power(self, k: int) -> "RootOfUnity":
        return RootOfUnity.of(self.a * k, self.b)

    def value(self) -> mpmath.mpc:
        """e^{2 pi i a/b} at the current mpmath precision."""
        if self.b == 1:
            return mpmath.mpc(1)
        x = mpmath.mpf(2 * self.a) / self.b
        return mpmath.mpc(mpmath.cospi(x), mpmath.sinpi(x))

    def __str__(self) -> str:
        return f"{self.a}/{self.b}"


@dataclass(frozen=True)
class PlanePartition:
    """Rows of positive entries, weakly decreasing along rows and down columns."""
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        prev = None
        for i, row in enumerate(self.rows):
            if not row:
                raise ValueError(f"row {i} is empty (canonical form has no trailing zero rows)")
            if any(v <= 0 for v in row):
                raise ValueError(f"row {i} has a non-positive entry: {row}")
            if any(row[j] < row[j + 1] for j in range(len(row) - 1)):
                raise ValueError(f"row {i} is not weakly decreasing: {row}")
            if prev is not None:
                if len(row) > len(prev) or any(row[j] > prev[j] for j in range(len(row))):
                    raise ValueError(f"row {i} is not dominated by row {i - 1}: {row} vs {prev}")
            prev = row

    @property
    def size(self) -> int:
        return sum(sum(row) for row in self.rows)

    @property
    def trace(self) -> int:
        return sum(row[j] for j, row in enumerate(self.rows) if j < len(row))


@dataclass(frozen=True, eq=False)
class TraceTable:
    """pp(m, n) for 0 <= m <= n <= max_n, dense (n, m) array of Python ints."""
    max_n: int
    coeffs: np.ndarray = field(repr=False)

    def coeff(self, m: int, n: int) -> int:
        validate_table_index(n, self.max_n)
        if m < 0 or m > n:
            return 0
        return int(self.coeffs[n, m])

    def row(self, n: int) -> List[int]:
        validate_table_index(n, self.max_n)
        return [int(c) for c in self.coeffs[n, : n + 1]]

    def pp(self, n: int) -> int:
        return sum(self.row(n))

    def pp_sequence(self) -> List[int]:
        return [int(s) for s in self.coeffs.sum(axis=1)]


@dataclass(frozen=True, eq=False)
class OverTable:
    """Signed coefficients d(m, n) of A_n(z) = sum_m d(m, n) z^m."""
    max_n: int
    coeffs: np.ndarray = field(repr=False)

    def coeff(self, m: int, n: int) -> int:
        validate_table_index(n, self.max_n)
        if m < 0 or m > n:
            return 0
        return int(self.coeffs[n, m])

    def row(self, n: int) -> List[int]:
        validate_table_index(n, self.max_n)
        return [int(c) for c in self.coeffs[n, : n + 1]]

    def at_minus_one(self, n: int) -> int:
        """Number of plane overpartitions of n."""
        return sum(c if m % 2 == 0 else -c for m, c in enumerate(self.row(n)))


@dataclass(frozen=True)
class ResidueCounts:
    """counts[n][a] = pp(a, b, n)."""
    b: int
    max_n: int
    counts: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def count(self, a: int, n: int) -> int:
        validate_table_index(n, self.max_n)
        return self.counts[n][a % self.b]


# -----------------------------
# 2. BRUTE-FORCE ENUMERATION
# -----------------------------

def _bounded_rows(bound: Sequence[int], total: int, pos: int = 0, cap: int = None) -> Iterator[Tuple[int, ...]]:
    # weakly decreasing positive rows with row[i] <= bound[i] summing to total
    if total == 0:
        yield ()
        return
    if pos == len(bound):
        return
    top = min(bound[pos], total, cap if cap is not None else total)
    for v in range(top, 0, -1):
        for rest in _bounded_rows(bound, total - v, pos + 1, v):
            yield (v,) + rest


def _stack_rows(rows: Tuple[Tuple[int, ...], ...], bound: Sequence[int], left: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    if left == 0:
        yield rows
        return
    for s in range(left, 0, -1):
        for row in _bounded_rows(bound, s):
            yield from _stack_rows(rows + (row,), row, left - s)


def enumerate_plane_partitions(n: int) -> List[PlanePartition]:
    """
    Every plane partition of n, each exactly once.

    Rows are generated largest-first, each row entrywise dominated by the one
    above it, so the order is deterministic.

    Raises:
        ValueError: n negative or not an int
        ResourceError: n above the enumeration cap
    """
    validate_int_at_least(n, "n", 0, "enumeration")
    if n > SETTINGS.enumeration_cap:
        raise ResourceError(f"enumeration cap is {SETTINGS.enumeration_cap}, got n={n}")
    return [PlanePartition(rows) for rows in _stack_rows((), (n,) * n, n)]


def trace_histogram(partitions: Sequence[PlanePartition]) -> List[int]:
    """hist[m] = number of partitions in the list with trace m."""
    size = max((p.size for p in partitions), default=0)
    hist = [0] * (size + 1)
    for p in partitions:
        hist[p.trace] += 1
    return hist


# -----------------------------
# 3. EXACT PRODUCT EXPANSION
# -----------------------------

def _multiply_factors(max_n: int, factor_coeffs) -> np.ndarray:
    # table[n, m]; factor k contributes c_j z^j q^{kj} for j >= 0 (c_0 = 1)
    table = np.zeros((max_n + 1, max_n + 1), dtype=object)
    table[0, 0] = 1
    for k in range(1, max_n + 1):
        acc = table.copy()
        for j in range(1, max_n // k + 1):
            c = factor_coeffs(k, j)
            if c == 0:
                break
            shift = k * j
            acc[shift:, j:] += c * table[: max_n + 1 - shift, : max_n + 1 - j]
        table = acc
        if k % 50 == 0:
            logger.debug("multiplied %d of %d factors", k, max_n)
    return table


def build_trace_table(N: int) -> TraceTable:
    """
    Coefficients of z^m q^n in prod_{k<=N} (1 - z q^k)^{-k}, exact.

    Factor k is expanded as sum_j binom(k+j-1, j) z^j q^{kj}; since it first
    contributes at q^k, truncating the product at k = N is exact for q^{<=N}.
    """
    validate_int_at_least(N, "N", 0, "trace table")
    try:
        coeffs = _multiply_factors(N, lambda k, j: comb(k + j - 1, j))
    except MemoryError as e:
        raise ResourceError(f"trace table of order {N} does not fit in memory") from e
    logger.debug("trace table built up to n=%d", N)
    return TraceTable(N, coeffs)


def build_over_table(N: int, trace: TraceTable = None) -> OverTable:
    """
    Coefficients of prod_{k<=N} ((1 - z q^k)/(1 - q^k))^k, exact.

    The numerator is expanded binomially; the denominator is the plane
    partition series sum pp(n) q^n, read off the trace table.
    """
    validate_int_at_least(N, "N", 0, "over table")
    if trace is None or trace.max_n < N:
        trace = build_trace_table(N)
    pp = trace.pp_sequence()
    try:
        numerator = _multiply_factors(N, lambda k, j: (-1) ** j * comb(k, j))
        coeffs = np.zeros((N + 1, N + 1), dtype=object)
        for r in range(N + 1):
            coeffs[r:, :] += pp[r] * numerator[: N + 1 - r, :]
    except MemoryError as e:
        raise ResourceError(f"over table of order {N} does not fit in memory") from e
    return OverTable(N, coeffs)


def trace_polynomial(t: TraceTable, n: int) -> List[int]:
    """Coefficients [pp(0, n), ..., pp(n, n)] of T_n(z)."""
    return t.row(n)


def over_polynomial(o: OverTable, n: int) -> List[int]:
    return o.row(n)


# -----------------------------
# 4. EVALUATION AND RESIDUE CLASSES
# -----------------------------

def _class_sums(row: Sequence[int], b: int) -> List[int]:
    sums = [0] * b
    for m, c in enumerate(row):
        sums[m % b] += c
    return sums


def _digits(x: int) -> int:
    return len(str(abs(x))) if x else 1


def eval_trace_poly(t: TraceTable, n: int, z: RootOfUnity, prec: float = SETTINGS.default_tol) -> mpmath.mpc:
    """
    T_n(e^{2 pi i a/b}) to absolute error ``prec``.

    Coefficients are summed exactly within each class of m mod b first, so the
    cancellation between classes happens in integers; only b products with
    cos/sin values remain.
    """
    validate_table_index(n, t.max_n)
    return _eval_row(t.row(n), z, prec)


def eval_over_poly(o: OverTable, n: int, z: RootOfUnity, prec: float = SETTINGS.default_tol) -> mpmath.mpc:
    """A_n(e^{2 pi i a/b}), same scheme as ``eval_trace_poly``."""
    validate_table_index(n, o.max_n)
    return _eval_row(o.row(n), z, prec)


def _sums_dps(sums: Sequence[int], prec: float) -> int:
    return max(_digits(sum(abs(s) for s in sums)) + int(-mpmath.log10(prec)) + 10, 20)


def evaluation_dps(table: Union[TraceTable, OverTable], n: int, b: int, prec: float = SETTINGS.default_tol) -> int:
    """
    Decimal digits under which row ``n`` evaluated at a b-th root keeps absolute error ``prec``.

    Values are returned at this precision, but any arithmetic on them runs at the
    caller's context; absolute comparisons must happen inside ``mpmath.workdps`` of it.
    """
    validate_table_index(n, table.max_n)
    validate_int_at_least(b, "b", 1, "root of unity")
    validate_tolerance(prec, "prec")
    return _sums_dps(_class_sums(table.row(n), b), prec)


def _eval_row(row: Sequence[int], z: RootOfUnity, prec: float) -> mpmath.mpc:
    validate_tolerance(prec, "prec")
    sums = _class_sums(row, z.b)
    with mpmath.workdps(_sums_dps(sums, prec)):
        total = mpmath.mpc(0)
        for r, s in enumerate(sums):
            if s:
                total += s * RootOfUnity.of(z.a * r, z.b).value()
        return +total


def residue_counts_direct(t: TraceTable, b: int) -> ResidueCounts:
    """pp(a, b, n) summed straight from the table."""
    validate_int_at_least(b, "b", 1, "residue counts")
    counts = tuple(tuple(_class_sums(t.row(n), b)) for n in range(t.max_n + 1))
    return ResidueCounts(b, t.max_n, counts)


def _round_checked(x: mpmath.mpc, where: str) -> int:
    nearest = int(mpmath.nint(x.real))
    slack = SETTINGS.rounding_slack
    if abs(x.real - nearest) > slack or abs(x.imag) > slack:
        raise PrecisionError(f"{where}: value {mpmath.nstr(x, 12)} is not within {slack} of an integer")
    return nearest


def residue_counts_via_roots(t: TraceTable, b: int, prec: float = 1e-6) -> ResidueCounts:
    """
    pp(a, b, n) through the orthogonality relation

        pp(a, b, n) = pp(n)/b + (1/b) sum_{1<=v<b} zeta_b^{-a v} T_n(zeta_b^v),

    evaluated in complex arithmetic and rounded to the nearest integer.

    Raises:
        PrecisionError: a result lies more than the rounding slack from an integer
    """
    validate_int_at_least(b, "b", 1, "residue counts")
    validate_tolerance(prec, "prec")
    rows = []
    for n in range(t.max_n + 1):
        pp_n = t.pp(n)
        values = [eval_trace_poly(t, n, RootOfUnity.of(v, b), prec) for v in range(1, b)]
        dps = _digits(pp_n) + int(-mpmath.log10(prec)) + 10
        with mpmath.workdps(max(dps, 20)):
            row = []
            for a in range(b):
                acc = mpmath.mpc(pp_n)
                for v, value in enumerate(values, start=1):
                    acc += RootOfUnity.of(-a * v, b).value() * value
                row.append(_round_checked(acc / b, f"pp({a},{b},{n})"))
        rows.append(tuple(row))
    return ResidueCounts(b, t.max_n, tuple(rows))


def difference_series(t: TraceTable, a1: int, a2: int, b: int, n_range: Sequence[int]) -> List[int]:
    """Exact pp(a1, b, n) - pp(a2, b, n) for each n in ``n_range``."""
    validate_distinct_classes(a1, a2, b)
    out = []
    for n in n_range:
        sums = _class_sums(t.row(n), b)
        out.append(sums[a1 % b] - sums[a2 % b])
    return out


def equidistribution_ratios(t: TraceTable, b: int, n: int) -> List[Fraction]:
    """pp(a, b, n)/pp(n) for a = 0..b-1; each tends to 1/b."""
    validate_int_at_least(b, "b", 1, "residue counts")
    sums = _class_sums(t.row(n), b)
    total = sum(sums)
    return [Fraction(s, total) for s in sums]
