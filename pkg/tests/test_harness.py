import csv
import math

import numpy as np
import pytest

from costwise import (
    CostModel,
    ExperimentConfig,
    Measure,
    expected_cost,
    run_budget,
    run_convergence,
    run_theta,
    substream,
    summarize,
    write_csv,
)
from costwise.harness import TAG_CONVERGENCE, THETA_SENTINEL


def _conv_config(**overrides):
    data = {
        "kind": "convergence",
        "n_values": [4, 6],
        "strategy": "fig1",
        "alpha": 1.5,
        "m_rule": {"coefficient": 0.5, "exponent": 3.0},
        "trials": 3,
        "base_seed": 11,
    }
    data.update(overrides)
    return ExperimentConfig.from_dict(data)


def _strip_wall_time(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][-1] == "wall_time"
    return [row[:-1] for row in rows]


def test_convergence_is_deterministic(tmp_path):
    config = _conv_config(trials=1)
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    write_csv(run_convergence(config), a)
    write_csv(run_convergence(config), b)
    assert _strip_wall_time(a) == _strip_wall_time(b)


def test_convergence_records_shape_and_invariants():
    config = _conv_config()
    records = run_convergence(config)
    assert len(records) == 2 * 3
    for rec in records:
        assert rec.cond >= 1.0
        assert rec.l2_error >= rec.best_approx_l2_error > 0.0
        assert rec.linf_error >= 0.0
        assert rec.total_cost > 0.0
        assert rec.m == math.ceil(0.5 * rec.n**3)


def test_total_cost_regenerates_from_substream():
    config = _conv_config(trials=2)
    records = run_convergence(config)
    cost = CostModel(config.alpha)
    for rec in records:
        measure = config.measure_for(rec.n)
        rng = substream(rec.seed, TAG_CONVERGENCE, rec.n, rec.m, rec.trial)
        x = measure.sample(rec.m, rng)
        assert rec.total_cost == pytest.approx(float(np.sum(cost(x))), rel=1e-12)


def test_total_cost_mean_is_consistent_with_expected_cost():
    # finite-cost setting: strategy two with a mild cost exponent
    config = _conv_config(
        strategy="two",
        alpha=0.5,
        n_values=[6],
        trials=40,
        m_rule={"coefficient": 2.0, "exponent": 2.0},
    )
    records = run_convergence(config)
    c_exp = records[0].expected_cost
    assert math.isfinite(c_exp)
    totals = np.array([rec.total_cost for rec in records])
    stderr = totals.std(ddof=1) / math.sqrt(totals.size)
    assert abs(totals.mean() - c_exp) <= 3.0 * stderr
    assert c_exp == pytest.approx(
        expected_cost(config.measure_for(6), CostModel(0.5), records[0].m), rel=1e-10
    )


def test_parallel_run_matches_serial():
    serial = run_convergence(_conv_config(trials=1, jobs=1))
    parallel = run_convergence(_conv_config(trials=1, jobs=2))
    for a, b in zip(serial, parallel):
        assert a.l2_error == b.l2_error
        assert a.cond == b.cond


def test_theta_threshold_at_least_n():
    config = ExperimentConfig.from_dict(
        {"kind": "theta", "n_values": [4, 6], "strategy": "fig1", "trials": 5, "base_seed": 3}
    )
    records = run_theta(config)
    assert [rec.n for rec in records] == [4, 6]
    for rec in records:
        assert rec.m_threshold >= rec.n
        assert rec.mean_cond <= config.theta


def test_theta_cap_records_sentinel_with_warning():
    config = ExperimentConfig.from_dict(
        {
            "kind": "theta",
            "n_values": [8],
            "strategy": "fig1",
            "trials": 3,
            "theta": 1.01,
            "m_cap": 20,
            "base_seed": 3,
        }
    )
    with pytest.warns(UserWarning):
        records = run_theta(config)
    assert records[0].m_threshold == THETA_SENTINEL
    assert math.isinf(records[0].mean_cond)


def test_budget_report_scaling_and_divergence():
    finite = run_budget(
        ExperimentConfig.from_dict(
            {"kind": "budget", "n_values": [4, 8], "strategy": "two", "alpha": 0.25}
        )
    )
    assert all(math.isfinite(rec.expected_cost) for rec in finite)
    assert all(rec.scaling_exponent == 1.0 for rec in finite)
    assert all(rec.rho_sigma_n <= 2.0 + 1e-12 for rec in finite)

    divergent = run_budget(
        ExperimentConfig.from_dict(
            {"kind": "budget", "n_values": [6], "strategy": "jacobi:0.5", "alpha": 1.5}
        )
    )
    assert math.isinf(divergent[0].expected_cost)
    assert divergent[0].beta == pytest.approx(0.5)


def test_summarize_geometric_statistics(tmp_path):
    path = tmp_path / "records.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "m", "trial", "l2_error", "wall_time"])
        writer.writerow(["4", "10", "0", "1.0", "0.1"])
        writer.writerow(["4", "10", "1", "100.0", "0.1"])
        writer.writerow(["6", "20", "0", "7.5", "0.1"])
        writer.writerow(["6", "20", "1", "0.0", "0.1"])
    rows = summarize(str(path), ["n", "m"])
    by_n = {row["n"]: row for row in rows}
    assert by_n["4"]["l2_error_geomean"] == pytest.approx(10.0)
    assert by_n["4"]["l2_error_excluded"] == 0
    # single positive value: geo-mean is the value, geo-std is 1
    assert by_n["6"]["l2_error_geomean"] == pytest.approx(7.5)
    assert by_n["6"]["l2_error_geostd"] == pytest.approx(1.0)
    assert by_n["6"]["l2_error_excluded"] == 1


def test_summarize_rejects_malformed_csv(tmp_path):
    from costwise import ConfigError

    path = tmp_path / "bad.csv"
    path.write_text("n,m,l2_error\n4,10,not-a-number\n")
    with pytest.raises(ConfigError, match="bad.csv:2"):
        summarize(str(path), ["n", "m"])
    with pytest.raises(ConfigError):
        summarize(str(path), ["missing"])
