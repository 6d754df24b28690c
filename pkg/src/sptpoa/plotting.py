"""Matplotlib figures written next to the CSV outputs.

Floats appear here and nowhere else: exact values are converted only for
drawing.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def plot_schedule(ax, instance, schedule, title=""):
    """Gantt-style bars, one lane per machine, jobs in SPT order."""
    cmap = plt.get_cmap("tab20")
    start = [0.0] * instance.m
    for j, i in enumerate(schedule, 1):
        dur = float(instance.p(j) / instance.speed(i))
        ax.barh(i, dur, left=start[i - 1], color=cmap((j - 1) % 20), edgecolor="black", lw=0.5)
        if dur > 0:
            ax.text(start[i - 1] + dur / 2, i, str(j), ha="center", va="center", fontsize=7)
        start[i - 1] += dur
    ax.set_yticks(range(1, instance.m + 1))
    ax.set_yticklabels([f"M{i} (s={instance.speed(i)})" for i in range(1, instance.m + 1)])
    ax.set_xlabel("time")
    ax.set_title(title)


def plot_slacks(ax, slacks_by_fitting):
    names = list(slacks_by_fitting)
    if not names:
        ax.set_axis_off()
        return
    width = 0.8 / len(names)
    for t, name in enumerate(names):
        vals = [float(v) for v in slacks_by_fitting[name]]
        xs = [k + 1 + (t - (len(names) - 1) / 2) * width for k in range(len(vals))]
        ax.bar(xs, vals, width=width, label=name)
    ax.axhline(0, color="black", lw=0.6)
    ax.set_xticks(range(1, len(vals) + 1))
    ax.set_xlabel("job")
    ax.set_ylabel("dual row slack")
    ax.set_title("fitting slack per job (0 = tight)")
    ax.legend(frameon=False)


def render_report_figure(path, instance, opt, ne, slacks_by_fitting, ne_label="worst equilibrium"):
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(3, 1, figsize=(6.5, 7.5))
        plot_schedule(axes[0], instance, opt, "optimal schedule")
        plot_schedule(axes[1], instance, ne, ne_label)
        plot_slacks(axes[2], slacks_by_fitting)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def render_search_figure(path, report):
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.5, 3.2))
        idx = [h[0] for h in report.history]
        poa = [float(h[2]) for h in report.history]
        colors = ["tab:blue" if h[1] == "restart" else "tab:gray" for h in report.history]
        ax.scatter(idx, poa, s=6, c=colors)
        running, best = [], 0.0
        for v in poa:
            best = max(best, v)
            running.append(best)
        ax.plot(idx, running, color="tab:red", lw=1, label="best so far")
        ax.axhline(float(report.bound), color="black", ls="--", lw=0.8, label=f"bound {report.bound}")
        ax.set_xlabel("evaluation")
        ax.set_ylabel("price of anarchy")
        ax.legend(frameon=False, loc="lower right")
        fig.savefig(path)
        plt.close(fig)
