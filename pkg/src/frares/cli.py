"""Command-line front end.

Subcommands: kernels | coeffs | resolvent | verify | solve | compare-ml.

Exit codes: 0 success, 1 numerical-tolerance failure, 2 usage or validation
error, 3 I/O error.  CSV output uses headers on the first line and scientific
notation with 17 significant digits so identical configurations produce
byte-identical files.  The environment variable FRARES_TOL overrides the
built-in default tolerances; explicit flags win over both.
"""

from __future__ import annotations

import csv
import os
import sys
from pathlib import Path

import click
import numpy as np

from .kernels import ConvergenceError, kernel_seq
from .operator import ResolventSetError, op_from_descriptor, laplacian_1d, scalar_op
from .resolvent import (
    check_functional_equation,
    check_ztransform,
    coeff_table,
    compare_mittag_leffler,
    family_explicit,
    family_max_relative_difference,
    family_recursive,
    family_series,
    kernel_ztransform_check,
    resolvent_equation_residual,
    save_family,
    save_table,
    subordinate_exponential,
)
from .solver import load_problem, save_solution, solve_direct, solve_vop

IO_ERROR = 3
VALIDATION_ERROR = 2
TOLERANCE_FAILURE = 1


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _env_tol(fallback: float) -> float:
    text = os.environ.get("FRARES_TOL")
    if text is None:
        return fallback
    try:
        return float(text)
    except ValueError:
        raise click.UsageError(f"FRARES_TOL must be a float, got {text!r}")


def _positive(_ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter(f"{param.name} must be positive, got {value}")
    return value


def _write_csv(path: str | None, header: list[str], rows) -> None:
    try:
        if path is None:
            writer = csv.writer(sys.stdout)
            writer.writerow(header)
            writer.writerows(rows)
        else:
            with Path(path).open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(header)
                writer.writerows(rows)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(IO_ERROR)


@click.group()
def main() -> None:
    """Discrete fractional resolvent families: kernels, coefficient tables,
    family construction, identity verification, and IVP solving."""


@main.command()
@click.option("--alpha", type=float, required=True, callback=_positive)
@click.option("--tau", type=float, required=True, callback=_positive)
@click.option("--n", "n", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def kernels(alpha: float, tau: float, n: int, out: str | None) -> None:
    """Write the kernel sequence k(alpha, tau, 0..N)."""
    if n < 0:
        raise click.BadParameter("n must be nonnegative")
    seq = kernel_seq(alpha, tau, n)
    _write_csv(out, ["n", "k"], ([i, _fmt(v)] for i, v in enumerate(seq.values)))


@main.command()
@click.option("--alpha", type=float, required=True, callback=_positive)
@click.option("--beta", type=float, required=True, callback=_positive)
@click.option("--tau", type=float, required=True, callback=_positive)
@click.option("--n", "n", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def coeffs(alpha: float, beta: float, tau: float, n: int, out: str) -> None:
    """Write the coefficient table a(n, l) in long form."""
    if n < 0:
        raise click.BadParameter("n must be nonnegative")
    table = coeff_table(alpha, beta, tau, n)
    try:
        save_table(table, out)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(IO_ERROR)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--op", "op_text", type=str, required=True, help="scalar:L | diag:V,… | laplacian:D:H | file:PATH")
@click.option("--alpha", type=float, required=True, callback=_positive)
@click.option("--beta", type=float, required=True, callback=_positive)
@click.option("--tau", type=float, required=True, callback=_positive)
@click.option("--n", "n", type=int, required=True)
@click.option(
    "--method",
    type=click.Choice(["explicit", "recursive", "series", "all"]),
    default="recursive",
    show_default=True,
)
@click.option("--series-tol", type=float, default=1e-12, show_default=True)
@click.option("--tol", type=float, default=None, help="pairwise difference gate for --method all")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def resolvent(op_text, alpha, beta, tau, n, method, series_tol, tol, out) -> None:
    """Construct a family and write it (one CSV per requested method).

    With --method all, pairwise maximum relative differences between the
    constructions are also written and gated against the tolerance.
    """
    if n < 0:
        raise click.BadParameter("n must be nonnegative")
    tol = tol if tol is not None else _env_tol(1e-8)
    try:
        op = op_from_descriptor(op_text)
    except (ValueError, OSError) as exc:
        raise click.BadParameter(str(exc))

    def build(name: str):
        if name == "explicit":
            return family_explicit(op, coeff_table(alpha, beta, tau, n))
        if name == "recursive":
            return family_recursive(op, alpha, beta, tau, n)
        return family_series(op, alpha, beta, tau, n, tol=series_tol)

    names = ["explicit", "recursive", "series"] if method == "all" else [method]
    families = {}
    for name in names:
        try:
            families[name] = build(name)
        except ResolventSetError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(VALIDATION_ERROR)
        except (ValueError, ConvergenceError) as exc:
            if method == "all" and name == "series":
                # The bounded-operator series only applies under its norm
                # hypotheses; the other constructions still cross-check.
                click.echo(f"series construction skipped: {exc}")
                continue
            click.echo(f"error ({name}): {exc}", err=True)
            sys.exit(VALIDATION_ERROR)

    out_path = Path(out)
    try:
        if len(families) == 1:
            family = next(iter(families.values()))
            save_family(family, out_path)
            click.echo(f"wrote {out_path}")
            worst = float(np.max(resolvent_equation_residual(family)))
            click.echo(f"max resolvent-equation residual: {worst:.3e}")
            return
        for name, family in families.items():
            target = out_path.with_stem(out_path.stem + f"_{name}")
            save_family(family, target)
            click.echo(f"wrote {target}")
        diff_rows = []
        worst_diff = 0.0
        built = sorted(families)
        pairs = [(a, b) for i, a in enumerate(built) for b in built[i + 1 :]]
        for a, b in pairs:
            diff = family_max_relative_difference(families[a], families[b])
            worst_diff = max(worst_diff, diff)
            diff_rows.append([a, b, _fmt(diff)])
        diff_path = out_path.with_stem(out_path.stem + "_diffs")
        with diff_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method_a", "method_b", "max_relative_difference"])
            writer.writerows(diff_rows)
        click.echo(f"wrote {diff_path}")
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(IO_ERROR)
    for a, b, text in diff_rows:
        click.echo(f"{a} vs {b}: max relative difference {text}")
    if worst_diff > tol:
        click.echo(f"FAIL: construction difference {worst_diff:.3e} above {tol:.1e}", err=True)
        sys.exit(TOLERANCE_FAILURE)


@main.command()
@click.option(
    "--suite",
    type=click.Choice(["functional", "ztransform", "subordination", "all"]),
    default="all",
    show_default=True,
)
@click.option("--tol", type=float, default=None, help="override every identity tolerance")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="CSV report path")
def verify(suite: str, tol: float | None, out: str | None) -> None:
    """Run the identity suites and report residual, tolerance, and status."""
    checks: list[tuple[str, float, float, bool]] = []

    def gate(name: str, residual: float, default_tol: float, ok: bool = True) -> None:
        limit = tol if tol is not None else _env_tol(default_tol)
        checks.append((name, residual, limit, ok and residual <= limit))

    if suite in ("functional", "all"):
        for label, op in (
            ("functional-equation scalar(-1)", scalar_op(-1.0)),
            ("functional-equation laplacian(8)", laplacian_1d(8, 1.0)),
        ):
            family = family_recursive(op, 1.5, 1.0, 0.1, 16)
            worst = 0.0
            for m in range(17):
                for nn in range(17):
                    res = check_functional_equation(family, m, nn)
                    scale = max(res.scale, 1e-300)
                    worst = max(worst, res.residual / scale)
            gate(label, worst, 1e-9)
    if suite in ("ztransform", "all"):
        kc = kernel_ztransform_check(0.5, 0.1, 2.0, 200)
        gate("ztransform kernel(alpha=0.5)", kc.residual, 1e-6, ok=kc.conclusive)
        family = family_recursive(scalar_op(-1.0), 1.5, 1.0, 0.1, 200)
        fc = check_ztransform(family, 2.0)
        gate("ztransform family scalar(-1)", fc.residual, 1e-6, ok=fc.conclusive)
    if suite in ("subordination", "all"):
        values = subordinate_exponential(-1.0, 0.1, 30)
        exact = (1.0 / 1.1) ** (np.arange(31) + 1.0)
        gate(
            "subordination quadrature vs closed form",
            float(np.max(np.abs(values - exact) / exact)),
            1e-8,
        )
        family = family_recursive(scalar_op(-1.0), 1.0, 1.0, 0.1, 30)
        gate(
            "subordination vs backward-Euler family",
            float(np.max(np.abs(values - family.values) / np.abs(family.values))),
            1e-8,
        )

    failed = False
    lines = []
    for name, residual, limit, ok in checks:
        status = "PASS" if ok else "FAIL"
        failed = failed or not ok
        line = f"{name}: residual={residual:.3e} tol={limit:.1e} {status}"
        lines.append((name, residual, limit, status))
        click.echo(line)
    if out is not None:
        _write_csv(
            out,
            ["identity", "residual", "tolerance", "status"],
            ([name, _fmt(res), _fmt(limit), status] for name, res, limit, status in lines),
        )
    if failed:
        sys.exit(TOLERANCE_FAILURE)


@main.command()
@click.option("--problem", "problem_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--tol", type=float, default=None, help="cross-solver agreement gate")
def solve(problem_path: str, out: str, tol: float | None) -> None:
    """Solve a problem file by variation of parameters, cross-check against
    the implicit stepping oracle, and write the solution CSV."""
    tol = tol if tol is not None else _env_tol(1e-8)
    try:
        problem = load_problem(problem_path)
    except (ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(VALIDATION_ERROR)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(IO_ERROR)
    vop = solve_vop(problem)
    direct = solve_direct(problem)
    scale = max(float(np.max(np.abs(vop.family_trajectory))), 1e-300)
    agreement = float(
        np.max(np.abs(vop.family_trajectory - direct.family_trajectory)) / scale
    )
    try:
        save_solution(vop, out)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(IO_ERROR)
    click.echo(f"wrote {out}")
    click.echo(f"vop/direct agreement: max relative difference {agreement:.3e}")
    worst_res = float(np.nanmax(direct.residuals)) / scale
    click.echo(f"direct trajectory residual (relative): {worst_res:.3e}")
    if agreement > tol:
        click.echo(f"FAIL: cross-solver difference {agreement:.3e} above {tol:.1e}", err=True)
        sys.exit(TOLERANCE_FAILURE)


@main.command("compare-ml")
@click.option("--rho", type=float, required=True, callback=_positive)
@click.option("--alpha", type=float, required=True, callback=_positive)
@click.option("--beta", type=float, required=True, callback=_positive)
@click.option("--n", "n", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None)
def compare_ml(rho, alpha, beta, n, out, plot_path) -> None:
    """Compare the discrete family against the continuous profile on [0, 1]
    and write the four-column table; --plot renders the figure to a file."""
    if n < 1:
        raise click.BadParameter("n must be at least 1")
    try:
        comparison = compare_mittag_leffler(rho, alpha, beta, n)
    except (ValueError, ConvergenceError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(VALIDATION_ERROR)
    rows = (
        [_fmt(t), _fmt(d), _fmt(c), _fmt(e)]
        for t, d, c, e in zip(
            comparison.t, comparison.discrete, comparison.continuous, comparison.abs_error
        )
    )
    _write_csv(out, ["t", "discrete", "continuous", "abs_error"], rows)
    click.echo(f"wrote {out}")
    click.echo(f"max error: {comparison.max_error:.6e}")
    if plot_path is not None:
        _render_comparison(comparison, plot_path)
        click.echo(f"wrote {plot_path}")


def _render_comparison(comparison, plot_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(comparison.t, comparison.continuous, "-", color="tab:blue", label="continuous")
    ax.plot(
        comparison.t,
        comparison.discrete,
        "o",
        markersize=3.5,
        markerfacecolor="none",
        color="tab:red",
        label="discrete",
    )
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    ax.set_title(
        f"alpha={comparison.alpha:g}, beta={comparison.beta:g}, "
        f"rho={comparison.rho:g}, N={round(1.0 / comparison.tau)}"
    )
    ax.legend(frameon=False)
    fig.tight_layout()
    try:
        fig.savefig(plot_path, dpi=150)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(IO_ERROR)
    finally:
        plt.close(fig)


if __name__ == "__main__":
    main()
