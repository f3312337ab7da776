"""Figure rendering for CLI reports.

Figures are informational companions to the exact CSV/JSON outputs: every
rational is converted to a float only here, never in the library. Output is
deterministic (Agg backend, fixed metadata, no timestamps).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_SAVE_KW = {"dpi": 120, "metadata": {"Software": "shiftshadow"}}


def render_decay_curves(report, path) -> None:
    """Semilog plot of the two-sided Hausdorff decay curves with the bound
    staircase from a covering report."""
    rows = list(report.rows())
    ns = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(ns, [max(float(r[1]), 1e-18) for r in rows], marker="o", label="forward")
    ax.semilogy(ns, [max(float(r[2]), 1e-18) for r in rows], marker="s", label="backward")
    ax.semilogy(ns, [float(r[3]) for r in rows], drawstyle="steps-post", linestyle="--", label="bound")
    ax.set_xlabel("n")
    ax.set_ylabel("Hausdorff distance")
    ax.set_title("two-sided decay of the spliced set")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_displacement(values, path, xlabel: str, title: str) -> None:
    """Bar chart of exact displacements (e.g. per loop-switch index)."""
    xs = [x for x, _ in values]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(xs, [float(v) for _, v in values], color="tab:blue")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("displacement")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def render_shadow_window(ks, dists, eps, path) -> None:
    """Per-index tracking error of a shadow candidate against its pseudo-orbit."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy(ks, [max(float(d), 1e-18) for d in dists], marker="o", label="d(f^k z, x_k)")
    ax.axhline(float(eps), linestyle="--", color="tab:red", label="eps")
    ax.set_xlabel("k")
    ax.set_ylabel("distance")
    ax.set_title("shadowing window")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
