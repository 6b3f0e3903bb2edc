"""
Figures for CLI reports.

Files are written with the non-interactive Agg backend; nothing is shown on
screen.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .grams import GramSet  # noqa: E402


def _style(ax, title):
    ax.set_title(title, fontsize=11)
    ax.tick_params(direction="in", top=True, right=True, labelsize=9)
    for spine in ax.spines.values():
        spine.set_linewidth(0.8)


def min_eig_grid(x_in, x_out, n: int = 201):
    """Smallest residual eigenvalue on an ``n x n`` grid of [0,1]^2."""
    t = np.linspace(0.0, 1.0, n)
    e1, e2 = np.meshgrid(t, t, indexing="ij")
    s = np.sqrt(e1 * e2)
    r11 = (x_in[0, 0] - e1 * x_out[0, 0]).real
    r22 = (x_in[1, 1] - e2 * x_out[1, 1]).real
    r12 = x_in[0, 1] - s * x_out[0, 1]
    lam = 0.5 * (r11 + r22) - np.hypot(0.5 * (r11 - r22), np.abs(r12))
    return e1, e2, lam


def plot_feasible_regions(grams: GramSet, report: dict, path: Path) -> Path:
    fig, axes = plt.subplots(1, 2, figsize=(8.4, 4.0), constrained_layout=True)
    for ax, branch, label in zip(axes, ("plus", "minus"), ("psi inputs", "complement inputs")):
        x_in, x_out = grams.branch(branch)
        e1, e2, lam = min_eig_grid(np.asarray(x_in), np.asarray(x_out))
        ax.contourf(e1, e2, lam >= -1e-12, levels=[0.5, 1.5], colors=["#cfe3f3"])
        ax.contour(e1, e2, lam, levels=[0.0], colors="#1f5f8b", linewidths=1.0)

        b = report["bounds"][branch]["value"]
        xs = np.linspace(0, 1, 50)
        ax.plot(xs, 2 * b - xs, ls="--", lw=0.9, color="#b03a2e", label=f"mean bound {b:.3f}")
        opt = report.get("optimizer", {}).get(branch)
        if opt is not None:
            g1, g2 = opt["best_eff"]
            opt_label = f"optimum {opt['best_average']:.4f}"
            ax.plot([g1], [g2], "o", ms=6, color="#222222", clip_on=False, label=opt_label)
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
        ax.set_aspect("equal")
        ax.set_xlabel("e1")
        ax.set_ylabel("e2")
        ax.legend(loc="lower left", fontsize=8, frameon=False)
        _style(ax, f"feasible efficiencies ({label})")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_probe_outcomes(report: dict, path: Path) -> Path:
    sim = report["simulation"]
    rows = [(b, r) for b in ("plus", "minus") for r in sim[b]]
    fig, ax = plt.subplots(figsize=(6.4, 3.6), constrained_layout=True)
    x = np.arange(len(rows))
    exact = [r["exact"]["success_prob"] for _, r in rows]
    seen = [r["monte_carlo"]["observed_success_freq"] for _, r in rows]
    ax.bar(x - 0.18, exact, width=0.36, color="#1f5f8b", label="exact")
    ax.bar(x + 0.18, seen, width=0.36, color="#9ac1dd", label="sampled")
    ax.set_xticks(x, [r["input"] for _, r in rows])
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("P(probe = P0)")
    ax.legend(fontsize=8, frameon=False)
    _style(ax, "post-selection success")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_report_figures(report: dict, grams: GramSet, outdir: Path) -> list[str]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = [plot_feasible_regions(grams, report, outdir / f"{report['command']}_feasible.png")]
    if "simulation" in report:
        written.append(plot_probe_outcomes(report, outdir / f"{report['command']}_success.png"))
    return [str(p) for p in written]
