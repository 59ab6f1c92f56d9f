"""Optional figure rendering for experiment reports.

The CSV files are the primary artifact; these helpers render companion
PNGs next to them when requested from the command line.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def convergence_figure(summary_rows, path: str) -> None:
    """Error and condition-number trends versus n from summarized records."""
    rows = sorted(summary_rows, key=lambda r: int(r["n"]))
    n = [int(r["n"]) for r in rows]
    err = [r["l2_error_geomean"] for r in rows]
    err_std = [r["l2_error_geostd"] for r in rows]
    cond = [r["cond_geomean"] for r in rows]

    fig, (ax_err, ax_cond) = plt.subplots(1, 2, figsize=(10, 4))
    lo = [e / s for e, s in zip(err, err_std)]
    hi = [e * s for e, s in zip(err, err_std)]
    ax_err.fill_between(n, lo, hi, alpha=0.25)
    ax_err.semilogy(n, err, "o-")
    ax_err.set_xlabel("n")
    ax_err.set_ylabel("geometric-mean L2 error")
    ax_cond.semilogy(n, cond, "s-")
    ax_cond.set_xlabel("n")
    ax_cond.set_ylabel("geometric-mean condition number")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def theta_figure(records, path: str) -> None:
    """Sample-complexity threshold versus n on log-log axes."""
    pairs = [(r.n, r.m_threshold) for r in records if r.m_threshold > 0]
    fig, ax = plt.subplots(figsize=(5, 4))
    if pairs:
        n, theta = zip(*pairs)
        ax.loglog(n, theta, "o-")
    ax.set_xlabel("n")
    ax.set_ylabel("threshold sample count")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def budget_figure(records, path: str) -> None:
    """Expected cost and its predicted-scaling ratio versus n."""
    records = sorted(records, key=lambda r: r.n)
    n = [r.n for r in records]
    fig, (ax_cost, ax_ratio) = plt.subplots(1, 2, figsize=(10, 4))
    ax_cost.loglog(n, [r.expected_cost for r in records], "o-")
    ax_cost.set_xlabel("n")
    ax_cost.set_ylabel("expected cost")
    ax_ratio.semilogx(n, [r.scaling_ratio for r in records], "s-")
    ax_ratio.set_xlabel("n")
    ax_ratio.set_ylabel("cost / predicted scaling")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
