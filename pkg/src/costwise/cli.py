"""Command-line entry points.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import csv
import functools
import sys

import click

from .config import ExperimentConfig, parse_measure_spec
from .errors import ConfigError, NumericalError
from .harness import (
    TAG_SAMPLE,
    run_budget,
    run_convergence,
    run_theta,
    substream,
    summarize,
    write_csv,
)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _exit_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"configuration error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except NumericalError as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)

    return wrapper


def _load_config(path: str, kind: str, jobs: int | None) -> ExperimentConfig:
    config = ExperimentConfig.from_json(path)
    if config.kind != kind:
        raise ConfigError(f"config declares kind {config.kind!r}, expected {kind!r}")
    if jobs is not None:
        config = ExperimentConfig.from_dict({**_config_dict(config), "jobs": jobs})
    return config


def _config_dict(config: ExperimentConfig) -> dict:
    data = {f: getattr(config, f) for f in config.__dataclass_fields__}
    return data


def _resolve_output(config: ExperimentConfig, out: str | None) -> str:
    path = out or config.output
    if path is None:
        raise ConfigError("no output path given (config 'output' or --out)")
    return path


@click.group()
def main():
    """Cost-aware sampling experiments for weighted least-squares recovery."""


def _experiment_options(fn):
    fn = click.option("--config", "config_path", required=True, type=click.Path(exists=False))(fn)
    fn = click.option("--out", default=None, help="output CSV path (overrides config)")(fn)
    fn = click.option("--jobs", default=None, type=int, help="parallel workers (env COSTWISE_JOBS overrides)")(fn)
    fn = click.option("--figure", default=None, type=click.Path(), help="also render a PNG figure here")(fn)
    return fn


@main.command()
@_experiment_options
@_exit_codes
def convergence(config_path, out, jobs, figure):
    """Run repeated weighted least-squares fits over a grid of n."""
    config = _load_config(config_path, "convergence", jobs)
    path = _resolve_output(config, out)
    records = run_convergence(config)
    write_csv(records, path)
    if figure is not None:
        from .plots import convergence_figure

        rows = summarize(path, ["n"])
        convergence_figure(rows, figure)
    click.echo(f"wrote {len(records)} records to {path}")


@main.command()
@_experiment_options
@_exit_codes
def theta(config_path, out, jobs, figure):
    """Find the smallest m with mean condition number below theta."""
    config = _load_config(config_path, "theta", jobs)
    path = _resolve_output(config, out)
    records = run_theta(config)
    write_csv(records, path)
    if figure is not None:
        from .plots import theta_figure

        theta_figure(records, figure)
    click.echo(f"wrote {len(records)} records to {path}")


@main.command()
@_experiment_options
@_exit_codes
def budget(config_path, out, jobs, figure):
    """Report sample budgets and expected costs per basis dimension."""
    config = _load_config(config_path, "budget", jobs)
    path = _resolve_output(config, out)
    records = run_budget(config)
    write_csv(records, path)
    if figure is not None:
        from .plots import budget_figure

        budget_figure(records, figure)
    click.echo(f"wrote {len(records)} records to {path}")


@main.command()
@click.option("--measure", "measure_spec", required=True, help="e.g. chebyshev, jacobi:0.5, christoffel:10")
@click.option("--m", "m", required=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("--out", default=None, type=click.Path(), help="points CSV (default: stdout)")
@_exit_codes
def sample(measure_spec, m, seed, out):
    """Draw m points from a sampling measure and emit them as CSV."""
    if m < 1:
        raise ConfigError("m must be positive")
    measure = parse_measure_spec(measure_spec)
    rng = substream(seed, TAG_SAMPLE, m=m)
    x = measure.sample(m, rng)
    w = measure.weight(x)
    rows = [[str(i), repr(float(xi)), repr(float(wi))] for i, (xi, wi) in enumerate(zip(x, w))]
    if out is None:
        writer = csv.writer(sys.stdout)
        writer.writerow(["index", "x", "weight"])
        writer.writerows(rows)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "x", "weight"])
            writer.writerows(rows)
        click.echo(f"wrote {m} points to {out}")


@main.command(name="summarize")
@click.option("--in", "csv_in", required=True, type=click.Path(exists=False))
@click.option("--group", default="n,m", help="comma-separated group columns")
@click.option("--out", "csv_out", default=None, type=click.Path())
@_exit_codes
def summarize_cmd(csv_in, group, csv_out):
    """Aggregate an experiment CSV: geometric mean/std per group."""
    keys = [k.strip() for k in group.split(",") if k.strip()]
    if not keys:
        raise ConfigError("at least one group column is required")
    try:
        rows = summarize(csv_in, keys, csv_out)
    except OSError as exc:
        raise ConfigError(f"cannot read {csv_in}: {exc}") from exc
    if csv_out is None and rows:
        writer = csv.writer(sys.stdout)
        columns = list(rows[0].keys())
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row[c] for c in columns])
    elif csv_out is not None:
        click.echo(f"wrote {len(rows)} groups to {csv_out}")


if __name__ == "__main__":
    main()
