# trace_cli.py
"""
Command-line front end.

    PYTHONPATH=. python trace_cli.py table --max-n 20
    PYTHONPATH=. python trace_cli.py residue --b 5 --max-n 100 --format json
    PYTHONPATH=. python trace_cli.py theta --which theta12 --tol 1e-8
    PYTHONPATH=. python trace_cli.py figure2 --a1 1 --a2 4 --b 5 --n-lo 50 --n-hi 400
    PYTHONPATH=. python trace_cli.py diag farey --n 5

Exit codes: 0 success, 2 invalid arguments, 3 resource or precision failure.
"""

import logging
from functools import wraps
from pathlib import Path
from typing import List, Optional

import mpmath
import typer

from app.calculators.asymptotics import (
    normalization_residuals,
    normalized_differences,
    oscillation_model,
    over_main_term,
    overpp_main_term,
    ratio_report,
    trace_main_term,
    wright_pp_main_term,
)
from app.calculators.circle_diag import (
    LEMMA42_GRID,
    QUADRATURE_REL_ERR,
    SaddleParam,
    farey,
    lemma41_deviation,
    lemma42_identity_residual,
    loglog_slope,
    major_arc_quadrature,
)
from app.calculators.exact_qseries import (
    RootOfUnity,
    build_over_table,
    build_trace_table,
    eval_over_poly,
    eval_trace_poly,
    residue_counts_direct,
)
from app.calculators.polylog_unit import PrecisionSpec, solve_theta1, solve_theta12
from app.errors import PrecisionError, ResourceError
from app.settings import SETTINGS
from app.validators.inputs import (
    validate_distinct_classes,
    validate_in_set,
    validate_int_at_least,
    validate_precision_bits,
    validate_tolerance,
)
from utils import Measured, render_report, write_report

logger = logging.getLogger(__name__)

app = typer.Typer(help="Exact and asymptotic computations for plane-partition traces.", add_completion=False)
diag_app = typer.Typer(help="Circle-method diagnostics.", add_completion=False)
app.add_typer(diag_app, name="diag")

FORMATS = {"csv", "json"}


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        force=True,
    )


def _guarded(fn):
    """Map library failures to exit codes: ValueError -> 2, resource/precision -> 3."""
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValueError as e:
            typer.echo(f"error: {e}", err=True)
            raise typer.Exit(code=2)
        except (ResourceError, PrecisionError, MemoryError) as e:
            typer.echo(f"failed: {e}", err=True)
            raise typer.Exit(code=3)
    return wrapper


def _setup(fmt: str, precision: int, verbose: bool) -> None:
    _configure_logging(verbose)
    validate_in_set(fmt, "format", FORMATS, "output")
    validate_precision_bits(precision)


def _parse_grid(text: str) -> List[int]:
    try:
        grid = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"n-grid must be a comma-separated list of integers, got {text!r}") from None
    for n in grid:
        validate_int_at_least(n, "n-grid entry", 1, "grid")
    return grid


def _emit(columns, rows, fmt, precision, out, meta=None) -> None:
    write_report(render_report(columns, rows, fmt, precision, meta), out)


def _amplified(p: PrecisionSpec, n_max: int) -> PrecisionSpec:
    """Budget for terms whose exponent scales like n^{2/3}, so their output keeps p.abs_err."""
    return PrecisionSpec(p.abs_err / (10 * max(n_max, 1)))


FormatOpt = typer.Option("csv", "--format", help="csv or json")
PrecisionOpt = typer.Option(SETTINGS.precision_bits, "--precision", help="working precision in bits (>= 53)")
OutOpt = typer.Option(None, "--out", help="output file (default stdout)")
VerboseOpt = typer.Option(False, "--verbose", help="debug logging to stderr")


# -----------------------------
# Exact tables
# -----------------------------

@app.command()
@_guarded
def table(max_n: int = typer.Option(..., "--max-n"), fmt: str = FormatOpt, precision: int = PrecisionOpt,
          out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Rows (n, pp(n))."""
    _setup(fmt, precision, verbose)
    t = build_trace_table(max_n)
    _emit(["n", "pp"], [(n, p) for n, p in enumerate(t.pp_sequence())], fmt, precision, out)


@app.command()
@_guarded
def residue(b: int = typer.Option(..., "--b"), max_n: int = typer.Option(..., "--max-n"),
            fmt: str = FormatOpt, precision: int = PrecisionOpt,
            out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Rows (n, pp(0,b,n), ..., pp(b-1,b,n))."""
    _setup(fmt, precision, verbose)
    validate_int_at_least(b, "b", 1, "residue classes")
    counts = residue_counts_direct(build_trace_table(max_n), b)
    columns = ["n"] + [f"class_{a}" for a in range(b)]
    _emit(columns, [(n,) + counts.counts[n] for n in range(max_n + 1)], fmt, precision, out)


@app.command("over-table")
@_guarded
def over_table(max_n: int = typer.Option(..., "--max-n"), fmt: str = FormatOpt, precision: int = PrecisionOpt,
               out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Rows (n, A_n(-1)), the number of plane overpartitions of n."""
    _setup(fmt, precision, verbose)
    o = build_over_table(max_n)
    _emit(["n", "overpp"], [(n, o.at_minus_one(n)) for n in range(max_n + 1)], fmt, precision, out)


# -----------------------------
# Root solves and asymptotics
# -----------------------------

@app.command()
@_guarded
def theta(which: str = typer.Option("theta12", "--which", help="theta12 (rotations) or theta1 (radians)"),
          tol: float = typer.Option(1e-10, "--tol"), fmt: str = FormatOpt, precision: int = PrecisionOpt,
          out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Solve for theta_12 or theta_1; the value is printed to the digits tol leaves."""
    _setup(fmt, precision, verbose)
    validate_in_set(which, "which", {"theta12", "theta1"}, "theta")
    validate_tolerance(tol, "tol")
    if tol < 2.0 ** -precision:
        raise ValueError(f"tol={tol} is finer than --precision {precision} bits can resolve")
    p = PrecisionSpec(tol)
    with mpmath.workdps(p.dps):
        value = solve_theta12(p) if which == "theta12" else solve_theta1(p)
        unit = "rotations" if which == "theta12" else "radians"
        _emit(["name", "value", "unit", "tol"], [(which, Measured(value, tol), unit, str(tol))], fmt, precision, out)


@app.command()
@_guarded
def figure2(a1: int = typer.Option(1, "--a1"), a2: int = typer.Option(4, "--a2"), b: int = typer.Option(5, "--b"),
            n_lo: int = typer.Option(1, "--n-lo"), n_hi: int = typer.Option(400, "--n-hi"),
            fmt: str = FormatOpt, precision: int = PrecisionOpt,
            out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Rows (n, exact difference, normalized difference, cosine prediction)."""
    _setup(fmt, precision, verbose)
    validate_distinct_classes(a1, a2, b, min_b=3)
    validate_int_at_least(n_lo, "n-lo", 1, "figure2")
    validate_int_at_least(n_hi, "n-hi", n_lo, "figure2")
    p = PrecisionSpec.from_bits(precision)
    fine = _amplified(p, n_hi)
    with mpmath.workdps(fine.dps):
        model = oscillation_model(a1, a2, b, fine)
        t = build_trace_table(n_hi)
        n_range = range(n_lo, n_hi + 1)
        rows = [
            (n, d, Measured(x, p.abs_err), Measured(c, p.abs_err))
            for n, d, x, c in normalized_differences(t, a1, a2, b, n_range, model, fine)
        ]
        sups = normalization_residuals(t, a1, a2, b, n_range, prec=fine)
        meta = {
            "B": mpmath.nstr(model.B, 6),
            "alpha": mpmath.nstr(model.alpha, 6),
            "lambda1": mpmath.nstr(model.lambda1, 6),
            "lambda2": mpmath.nstr(model.lambda2, 6),
        }
        for power, sup in sups.items():
            meta[f"sup_residual_n^{power}"] = mpmath.nstr(sup, 6)
        _emit(["n", "exact_diff", "normalized", "cos_prediction"], rows, fmt, precision, out, meta)


@app.command()
@_guarded
def asymptotic(kind: str = typer.Option("trace", "--kind", help="trace, wright, over or overpp"),
               a: int = typer.Option(1, "--a"), b: int = typer.Option(5, "--b"),
               n_grid: str = typer.Option("50,100,200,400", "--n-grid"),
               fmt: str = FormatOpt, precision: int = PrecisionOpt,
               out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Rows (n, Re ratio, Im ratio, |ratio - 1|) of exact value over main term."""
    _setup(fmt, precision, verbose)
    validate_in_set(kind, "kind", {"trace", "wright", "over", "overpp"}, "asymptotic")
    grid = _parse_grid(n_grid)
    top = max(grid, default=0)
    p = PrecisionSpec.from_bits(precision)
    fine = _amplified(p, top)
    with mpmath.workdps(fine.dps):
        if kind in ("trace", "wright"):
            t = build_trace_table(top)
            if kind == "trace":
                z = RootOfUnity(a, b)
                est, exact = trace_main_term(z, fine), (lambda n: eval_trace_poly(t, n, z, fine.abs_err))
            else:
                est, exact = wright_pp_main_term(fine), t.pp
        else:
            o = build_over_table(top)
            if kind == "over":
                z = RootOfUnity(a, b)
                est, exact = over_main_term(z, fine), (lambda n: eval_over_poly(o, n, z, fine.abs_err))
            else:
                est, exact = overpp_main_term(fine), o.at_minus_one
        rows = [
            (n, Measured(r.real, p.abs_err), Measured(r.imag, p.abs_err), Measured(d, p.abs_err))
            for n, r, d in ratio_report(exact, est, grid, fine)
        ]
        _emit(["n", "ratio_re", "ratio_im", "abs_ratio_minus_1"], rows, fmt, precision, out)


# -----------------------------
# Circle-method diagnostics
# -----------------------------

@diag_app.command("farey")
@_guarded
def diag_farey(n: int = typer.Option(..., "--n"), fmt: str = FormatOpt, precision: int = PrecisionOpt,
               out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Rows (h, k, theta_lo, theta_hi) of F_N."""
    _setup(fmt, precision, verbose)
    rows = [(arc.h, arc.k, arc.theta_lo, arc.theta_hi) for arc in farey(n)]
    _emit(["h", "k", "theta_lo", "theta_hi"], rows, fmt, precision, out)


@diag_app.command("lemma41")
@_guarded
def diag_lemma41(case: int = typer.Option(1, "--case"), a: int = typer.Option(1, "--a"), b: int = typer.Option(3, "--b"),
                 n_grid: str = typer.Option("1000,10000,100000", "--n-grid"),
                 fmt: str = FormatOpt, precision: int = PrecisionOpt,
                 out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Rows (n, E, limit, deviation) on the dominant arc at theta = 0."""
    _setup(fmt, precision, verbose)
    grid = _parse_grid(n_grid)
    z = RootOfUnity(a, b)
    p = PrecisionSpec.from_bits(precision)
    with mpmath.workdps(p.dps):
        rows, devs = [], []
        for n in grid:
            E, predicted, dev = lemma41_deviation(case, z, n, p)
            values = (E.real, E.imag, predicted.real, predicted.imag, dev)
            rows.append((n,) + tuple(Measured(v, p.abs_err) for v in values))
            devs.append(dev)
        meta = {"slope": mpmath.nstr(loglog_slope(grid, devs), 6)} if len(grid) > 1 else {}
        _emit(["n", "E_re", "E_im", "limit_re", "limit_im", "deviation"], rows, fmt, precision, out, meta)


@diag_app.command("lemma42")
@_guarded
def diag_lemma42(fmt: str = FormatOpt, precision: int = PrecisionOpt,
                 out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Certified residual of the regrouped error-term series on the built-in case grid."""
    _setup(fmt, precision, verbose)
    p = PrecisionSpec.from_bits(precision)
    with mpmath.workdps(p.dps):
        rows = []
        for a, b, h, k, t in LEMMA42_GRID:
            residual = lemma42_identity_residual(RootOfUnity(a, b), h, k, SaddleParam(t), p=p)
            rows.append((a, b, h, k, repr(complex(t).real), repr(complex(t).imag), Measured(residual, p.abs_err)))
        meta = {"max_residual": Measured(max(r[-1].value for r in rows), p.abs_err)}
        _emit(["a", "b", "h", "k", "t_re", "t_im", "residual"], rows, fmt, precision, out, meta)


@diag_app.command("arc")
@_guarded
def diag_arc(a: int = typer.Option(1, "--a"), b: int = typer.Option(5, "--b"), n: int = typer.Option(200, "--n"),
             exact_integrand: bool = typer.Option(False, "--exact-integrand"),
             fmt: str = FormatOpt, precision: int = PrecisionOpt,
             out: Optional[Path] = OutOpt, verbose: bool = VerboseOpt):
    """Dominant-arc quadrature against the exact T_n and the main term."""
    _setup(fmt, precision, verbose)
    z = RootOfUnity(a, b)
    p = PrecisionSpec.from_bits(precision)
    with mpmath.workdps(p.dps):
        quad = major_arc_quadrature(z, n, p, exact_integrand=exact_integrand)
        quad_err = QUADRATURE_REL_ERR * abs(quad)
        exact = eval_trace_poly(build_trace_table(n), n, z, p.abs_err)
        fine = _amplified(p, n)
        main = (wright_pp_main_term(fine) if z.a == 0 else trace_main_term(z, fine)).evaluate(n)
        main_err = abs(main) * p.abs_err
        rows = [(
            n,
            Measured(quad.real, quad_err), Measured(quad.imag, quad_err),
            Measured(exact.real, p.abs_err), Measured(exact.imag, p.abs_err),
            Measured(main.real, main_err), Measured(main.imag, main_err),
        )]
        _emit(["n", "quad_re", "quad_im", "exact_re", "exact_im", "main_re", "main_im"], rows, fmt, precision, out)


if __name__ == "__main__":
    app()
