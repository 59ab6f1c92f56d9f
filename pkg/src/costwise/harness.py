"""Experiment drivers: convergence and condition-number studies, budget reports.

Every random draw comes from a named substream keyed by
(base_seed, experiment tag, n, m, trial), so results are reproducible
and independent of trial scheduling.  CSV output is deterministic:
floats are written with ``repr`` and the wall_time column is always
last so byte comparisons can exclude it.
"""

from __future__ import annotations

import csv
import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from functools import partial

import numpy as np

from .config import ExperimentConfig
from .errors import ConfigError
from .legendre import LegendreBasis, rho_sigma
from .measures import Measure
from .oracle import best_approx, composite_gauss_legendre, runge_shifted
from .strategies import (
    CostModel,
    expected_cost,
    plan_budget,
    subdomain_for_measure,
)
from .wls import SampleSet, fit

# substream tags, one per kind of random draw
TAG_SAMPLE = 0
TAG_CONVERGENCE = 1
TAG_THETA = 2
TAG_BUDGET = 3
TAG_STABILITY = 4

THETA_SENTINEL = -1


def substream(base_seed: int, tag: int, n: int = 0, m: int = 0, trial: int = 0):
    """Independent generator for one (experiment, n, m, trial) cell."""
    return np.random.default_rng([base_seed, tag, n, m, trial])


def draw_samples(
    measure: Measure,
    m: int,
    rng,
    cost: CostModel | None = None,
    fun=None,
    noise_amplitude: float = 0.0,
) -> SampleSet:
    """Draw m points from the measure and assemble a sample set.

    The point draw always comes first in the stream, so sample
    positions can be regenerated independently of noise settings.
    """
    x = measure.sample(m, rng)
    weights = measure.weight(x)
    if noise_amplitude > 0.0:
        noise = noise_amplitude * rng.uniform(-1.0, 1.0, size=m)
    else:
        noise = np.zeros(m)
    y = (np.asarray(fun(x), dtype=float) if fun is not None else np.zeros(m)) + noise
    costs = cost(x) if cost is not None else np.zeros(m)
    return SampleSet(x=x, weights=weights, y=y, noise=noise, costs=costs)


@dataclass
class ExperimentRecord:
    """One trial's metrics; one CSV row."""

    experiment: str
    n: int
    m: int
    trial: int
    seed: int
    l2_error: float
    linf_error: float
    best_approx_l2_error: float
    cond: float
    sigma_min: float
    total_cost: float
    expected_cost: float
    wall_time: float


@dataclass
class ThetaRecord:
    """Smallest m at which the mean condition number drops to theta."""

    experiment: str
    n: int
    theta: float
    m_threshold: int
    mean_cond: float
    trials: int
    wall_time: float


@dataclass
class BudgetRecord:
    """Budget-planning report row for one basis dimension."""

    experiment: str
    n: int
    strategy: str
    alpha: float
    delta: float
    beta: float
    kappa_w: float
    sigma: float
    rho_sigma_n: float
    m: int
    expected_cost: float
    cost_bound: float
    scaling_exponent: float
    scaling_ratio: float
    wall_time: float


def record_columns(record_type) -> list[str]:
    return [f.name for f in fields(record_type)]


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(records, path) -> None:
    """Write records (all of one dataclass type) as a deterministic CSV."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    columns = record_columns(type(records[0]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_format_value(getattr(rec, name)) for name in columns])


def _quadrature_for(n: int, margin: int):
    return composite_gauss_legendre(panels=8, nodes_per_panel=max(64, 2 * n + margin))


def _convergence_for_n(config: ExperimentConfig, n: int) -> list[ExperimentRecord]:
    basis = LegendreBasis(n)
    m = config.m_rule.m_for(n)
    measure = config.measure_for(n)
    cost = CostModel(config.alpha)
    fun = runge_shifted(config.pole)

    rule = _quadrature_for(n, config.quadrature_margin)
    proj = best_approx(fun, basis, rule)
    proj_vals = basis.eval(rule.nodes) @ proj
    resid = np.asarray(fun(rule.nodes)) - proj_vals
    best_err = math.sqrt(max(float(np.sum(rule.weights * resid * resid)), 0.0))

    grid = np.cos(np.linspace(0.0, math.pi, config.grid_size))
    f_grid = np.asarray(fun(grid), dtype=float)
    phi_grid = basis.eval(grid)

    c_exp = expected_cost(measure, cost, m)

    records = []
    for trial in range(config.trials):
        start = time.perf_counter()
        rng = substream(config.base_seed, TAG_CONVERGENCE, n, m, trial)
        samples = draw_samples(measure, m, rng, cost, fun, config.noise_amplitude)
        est = fit(samples, basis)
        # f - p splits orthogonally into (f - proj) + (proj - p)
        l2 = math.sqrt(best_err**2 + float(np.sum((proj - est.coefficients) ** 2)))
        linf = float(np.max(np.abs(f_grid - phi_grid @ est.coefficients)))
        records.append(
            ExperimentRecord(
                experiment="convergence",
                n=n,
                m=m,
                trial=trial,
                seed=config.base_seed,
                l2_error=l2,
                linf_error=linf,
                best_approx_l2_error=best_err,
                cond=est.cond,
                sigma_min=est.sigma_min,
                total_cost=samples.total_cost,
                expected_cost=c_exp,
                wall_time=time.perf_counter() - start,
            )
        )
    return records


def run_convergence(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Repeated weighted least-squares fits over the configured n grid."""
    if config.m_rule is None:
        raise ConfigError("convergence experiments require an m rule")
    jobs = config.effective_jobs()
    worker = partial(_convergence_for_n, config)
    if jobs > 1 and len(config.n_values) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(config.n_values))) as pool:
            chunks = list(pool.map(worker, config.n_values))
    else:
        chunks = [worker(n) for n in config.n_values]
    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r.n, r.m, r.trial))
    return records


def _mean_cond(config: ExperimentConfig, measure: Measure, n: int, m: int) -> float:
    basis = LegendreBasis(n)
    conds = np.empty(config.trials)
    for trial in range(config.trials):
        rng = substream(config.base_seed, TAG_THETA, n, m, trial)
        x = measure.sample(m, rng)
        w = measure.weight(x)
        a = basis.eval(x) * np.sqrt(w / m)[:, None]
        lam = np.linalg.eigvalsh(a.T @ a)
        conds[trial] = lam[-1] / lam[0] if lam[0] > 0.0 else np.inf
    return float(np.mean(conds))


def _theta_for_n(config: ExperimentConfig, n: int) -> ThetaRecord:
    start = time.perf_counter()
    measure = config.measure_for(n)
    m = n
    while m <= config.m_cap:
        mean_cond = _mean_cond(config, measure, n, m)
        if mean_cond <= config.theta:
            return ThetaRecord(
                experiment="theta",
                n=n,
                theta=config.theta,
                m_threshold=m,
                mean_cond=mean_cond,
                trials=config.trials,
                wall_time=time.perf_counter() - start,
            )
        m += config.m_step
    warnings.warn(f"mean condition number did not reach theta within m <= {config.m_cap} at n = {n}")
    return ThetaRecord(
        experiment="theta",
        n=n,
        theta=config.theta,
        m_threshold=THETA_SENTINEL,
        mean_cond=math.inf,
        trials=config.trials,
        wall_time=time.perf_counter() - start,
    )


def run_theta(config: ExperimentConfig) -> list[ThetaRecord]:
    """Smallest m (from n in fixed steps) with mean condition number <= theta."""
    jobs = config.effective_jobs()
    worker = partial(_theta_for_n, config)
    if jobs > 1 and len(config.n_values) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(config.n_values))) as pool:
            records = list(pool.map(worker, config.n_values))
    else:
        records = [worker(n) for n in config.n_values]
    records.sort(key=lambda r: r.n)
    return records


def _predicted_exponent(config: ExperimentConfig) -> float:
    name = config.strategy.partition(":")[0]
    if name == "one" and config.alpha >= 0.5:
        return max(1.0, 2.0 * (config.alpha + config.delta))
    return max(1.0, 2.0 * config.alpha)


def run_budget(config: ExperimentConfig) -> list[BudgetRecord]:
    """Budget-planning report: kappa_w, m, expected cost and its scaling ratio."""
    cost = CostModel(config.alpha)
    exponent = _predicted_exponent(config)
    records = []
    for n in config.n_values:
        start = time.perf_counter()
        basis = LegendreBasis(n)
        measure = config.measure_for(n)
        omega = subdomain_for_measure(measure, n)
        plan = plan_budget(basis, measure, omega, cost, config.epsilon)
        denom = float(n) ** exponent * math.log(3.0 * n / config.epsilon)
        ratio = plan.expected_cost / denom if math.isfinite(plan.expected_cost) else math.inf
        beta = getattr(measure, "beta", None)
        records.append(
            BudgetRecord(
                experiment="budget",
                n=n,
                strategy=config.strategy,
                alpha=config.alpha,
                delta=config.delta,
                beta=beta if beta is not None else math.nan,
                kappa_w=plan.kappa_w_value,
                sigma=plan.sigma,
                rho_sigma_n=rho_sigma(plan.sigma) ** n,
                m=plan.m,
                expected_cost=plan.expected_cost,
                cost_bound=plan.cost_bound,
                scaling_exponent=exponent,
                scaling_ratio=ratio,
                wall_time=time.perf_counter() - start,
            )
        )
    return records


_NON_METRIC_COLUMNS = {"experiment", "n", "m", "trial", "seed", "wall_time", "strategy"}


def summarize(csv_in: str, group_keys: list[str], csv_out: str | None = None):
    """Geometric mean / std of every positive metric, per group.

    Nonpositive and non-finite values are excluded from the aggregation
    and reported in a per-metric ``<metric>_excluded`` count column.
    Returns the summary rows as a list of dicts; also writes them when
    ``csv_out`` is given.
    """
    with open(csv_in, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ConfigError(f"{csv_in}: empty CSV")
        for key in group_keys:
            if key not in reader.fieldnames:
                raise ConfigError(f"{csv_in}: missing group column {key!r}")
        metrics = [c for c in reader.fieldnames if c not in _NON_METRIC_COLUMNS and c not in group_keys]
        groups: dict[tuple, dict[str, list[float]]] = {}
        for line_no, row in enumerate(reader, start=2):
            key = tuple(row[k] for k in group_keys)
            bucket = groups.setdefault(key, {m: [] for m in metrics})
            for metric in metrics:
                raw = row.get(metric)
                if raw is None:
                    raise ConfigError(f"{csv_in}:{line_no}: missing value for {metric!r}")
                try:
                    bucket[metric].append(float(raw))
                except ValueError as exc:
                    raise ConfigError(f"{csv_in}:{line_no}: bad value {raw!r} for {metric!r}") from exc

    rows = []
    for key in sorted(groups):
        out: dict[str, object] = dict(zip(group_keys, key))
        bucket = groups[key]
        out["count"] = len(next(iter(bucket.values()))) if bucket else 0
        for metric in metrics:
            values = np.asarray(bucket[metric])
            good = values[(values > 0.0) & np.isfinite(values)]
            excluded = values.size - good.size
            if good.size:
                logs = np.log(good)
                out[f"{metric}_geomean"] = float(np.exp(np.mean(logs)))
                out[f"{metric}_geostd"] = float(np.exp(np.std(logs)))
            else:
                out[f"{metric}_geomean"] = math.nan
                out[f"{metric}_geostd"] = math.nan
            out[f"{metric}_excluded"] = excluded
        rows.append(out)

    if csv_out is not None and rows:
        columns = list(rows[0].keys())
        with open(csv_out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_value(row[c]) for c in columns])
    return rows
