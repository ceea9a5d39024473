"""Command-line interface.

Exit codes: 0 when every evaluated bound holds, 1 when one is violated,
2 on usage or input errors.
"""

from __future__ import annotations

import sys

import click

from .bounds import FAMILIES, BoundReport, evaluate_many
from .optimizer import PRESETS, OptimizeConfig, optimize_perp, parse_grid, sweep_theta
from .scenario import ScenarioError, load_scenario
from .verify import DEFAULT_DIMS, run_suite


class InputError(click.ClickException):
    exit_code = 2


def _fmt_c(c) -> str:
    if c is None:
        return "-"
    return f"{c.real:+.6g}{c.imag:+.6g}i"


def _report_line(r: BoundReport) -> str:
    star = "-" if r.alpha_star is None else f"{r.alpha_star:.6g}"
    z = w = "-"
    if r.context is not None:
        z, w = _fmt_c(r.context.z), _fmt_c(r.context.w)
    flags = []
    if r.degenerate:
        flags.append("degenerate")
    if r.note:
        flags.append(r.note)
    return (f"{r.family:<16} {r.lhs:>17.10g} {r.rhs:>17.10g} {r.slack:>14.6g} "
            f"{str(r.satisfied).lower():>9}  {star:>10} {z:>22} {w:>22}  {'; '.join(flags)}").rstrip()


HEADER = (f"{'family':<16} {'lhs':>17} {'rhs':>17} {'slack':>14} {'satisfied':>9}  "
          f"{'alpha*':>10} {'z':>22} {'w':>22}")


def _load(path):
    try:
        return load_scenario(path)
    except OSError as exc:
        raise InputError(f"cannot read scenario: {exc}") from None
    except ScenarioError as exc:
        raise InputError(str(exc)) from None


def _families(text):
    names = [f.strip() for f in text.split(",") if f.strip()]
    for f in names:
        if f not in FAMILIES:
            raise InputError(f"unknown bound family {f!r}; expected one of {', '.join(FAMILIES)}")
    if not names:
        raise InputError("no bound families given")
    return names


@click.group()
def main():
    """Uncertainty-relation lower bounds for finite-dimensional observables."""


@main.command()
@click.argument("scenario_file", type=click.Path(dir_okay=False))
def bounds(scenario_file):
    """Evaluate the bound families requested by a scenario file."""
    sc = _load(scenario_file)
    perp = sc.perp
    if isinstance(perp, OptimizeConfig):
        perp = optimize_perp(sc.operator_a, sc.operator_b, sc.state, perp).best_perp
    try:
        reports = evaluate_many(sc.bounds, sc.operator_a, sc.operator_b, sc.state, perp, sc.alpha, sc.beta)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    click.echo(HEADER)
    for r in reports:
        click.echo(_report_line(r))
    sys.exit(0 if all(r.satisfied for r in reports) else 1)


@main.command()
@click.option("--preset", required=True, type=click.Choice(PRESETS))
@click.option("--families", required=True, help="Comma-separated bound families.")
@click.option("--grid", "grid_spec", required=True, help="start:stop:count, endpoints included.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--hbar", default=1.0, show_default=True, type=float)
def sweep(preset, families, grid_spec, out_path, hbar):
    """Sweep theta over a spin-1 worked example and write a CSV table."""
    names = _families(families)
    try:
        grid = parse_grid(grid_spec)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if hbar <= 0:
        raise InputError("hbar must be positive")
    table = sweep_theta(preset, names, grid, hbar)
    try:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(table.to_csv())
    except OSError as exc:
        raise InputError(f"cannot write {out_path}: {exc}") from None
    bad = sum(not r.satisfied for r in table.rows)
    click.echo(f"wrote {len(table.rows)} rows to {out_path}" + (f" ({bad} violated)" if bad else ""))
    sys.exit(1 if bad else 0)


def _int_list(text):
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise InputError(f"--dims must be comma-separated integers, got {text!r}") from None
    if not values or min(values) < 2:
        raise InputError("--dims entries must be >= 2")
    return values


@main.command()
@click.option("--dims", default=",".join(map(str, DEFAULT_DIMS)), show_default=True)
@click.option("--count", default=1000, show_default=True, type=click.IntRange(min=1))
@click.option("--seed", default=0, show_default=True, type=click.IntRange(min=0))
@click.option("--families", default=None, help="Restrict family-specific checks.")
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
def verify(dims, count, seed, families, as_json):
    """Run the invariant suite and the worked-example claim checks."""
    names = None if families is None else _families(families)
    report = run_suite(_int_list(dims), count, seed, names)
    click.echo(report.to_json() if as_json else report.to_text())
    sys.exit(0 if report.passed else 1)


@main.command()
@click.argument("scenario_file", type=click.Path(dir_okay=False))
def optimize(scenario_file):
    """Search for the perpendicular state maximizing a bound's right-hand side."""
    sc = _load(scenario_file)
    if not isinstance(sc.perp, OptimizeConfig):
        raise InputError('scenario perp must be {"optimize": {...}} for this command')
    result = optimize_perp(sc.operator_a, sc.operator_b, sc.state, sc.perp)
    click.echo(f"objective:   {sc.perp.objective}")
    click.echo(f"best_rhs:    {result.best_rhs:.12g}")
    click.echo(f"evaluations: {result.evaluations}")
    click.echo(f"converged:   {str(result.converged).lower()}")
    click.echo("best_perp:")
    for k, c in enumerate(result.best_perp.amplitudes):
        click.echo(f"  [{k}] {_fmt_c(complex(c))}")
    click.echo(HEADER)
    click.echo(_report_line(result.report))
    sys.exit(0 if result.report.satisfied else 1)


def run():
    """Console entry point enforcing the 0/1/2 exit-code contract."""
    try:
        main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(2 if exc.exit_code not in (0, 1, 2) else exc.exit_code)
    except click.Abort:
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except ValueError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(2)
