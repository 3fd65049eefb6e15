"""Figure rendering for demo curves and suite tables.

Figures are written next to the delimited output; everything here uses the
Agg backend so headless runs work.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_CURVE_STYLE = {"geodesic": ("tab:cyan", "o"), "naive": ("tab:orange", "x")}


def render_sphere_figure(rows, out_png):
    """3-D view of the sampled sphere paths."""
    fig = plt.figure(figsize=(6, 6))
    ax = fig.add_subplot(projection="3d")
    u, v = np.meshgrid(np.linspace(0, 2 * np.pi, 40), np.linspace(0, np.pi, 20))
    ax.plot_wireframe(
        np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v),
        color="0.85", linewidth=0.3,
    )
    for curve, (color, marker) in _CURVE_STYLE.items():
        pts = np.array([c for name, _, c in rows if name == curve])
        if pts.size:
            ax.plot(pts[:, 0], pts[:, 1], pts[:, 2], color=color, marker=marker,
                    markersize=3, linewidth=1.2, label=curve)
    ends = np.array([c for name, t, c in rows if name == "geodesic" and t in (0.0, 1.0)])
    if ends.size:
        ax.scatter(ends[:, 0], ends[:, 1], ends[:, 2], color="black", s=30)
    ax.set_box_aspect((1, 1, 1))
    ax.legend()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)


def render_shape_figure(rows, out_png):
    """One panel per sampled t, geodesic and naive paths as separate rows."""
    curves = ["geodesic", "naive"]
    ts = sorted({t for name, t, _ in rows if name == curves[0]})
    fig, axes = plt.subplots(len(curves), len(ts), figsize=(2.2 * len(ts), 4.6), squeeze=False)
    for i, curve in enumerate(curves):
        color, _ = _CURVE_STYLE[curve]
        samples = {t: c for name, t, c in rows if name == curve}
        for j, t in enumerate(ts):
            ax = axes[i][j]
            pts = samples[t].reshape(-1, 2)
            closed = np.vstack([pts, pts[:1]])
            ax.plot(closed[:, 0], closed[:, 1], color=color, linewidth=1.2)
            ax.set_aspect("equal")
            ax.set_xticks([])
            ax.set_yticks([])
            if i == 0:
                ax.set_title(f"t={t:g}", fontsize=9)
            if j == 0:
                ax.set_ylabel(curve, fontsize=9)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)


def render_demo_figure(kind, rows, out_png):
    if kind == "sphere":
        render_sphere_figure(rows, out_png)
    elif kind == "shape":
        render_shape_figure(rows, out_png)
    else:
        raise ValueError(f"unknown demo kind {kind!r}")


def render_suite_figure(table, out_png):
    """Grouped bar chart of per-task accuracies with average markers."""
    n_tasks, n_methods = table.cells.shape
    x = np.arange(n_tasks)
    width = 0.8 / n_methods
    fig, ax = plt.subplots(figsize=(max(7.0, 0.9 * n_tasks), 4.2))
    for j, method in enumerate(table.methods):
        ax.bar(x + (j - (n_methods - 1) / 2) * width, table.cells[:, j], width,
               label=f"{method} (avg {table.averages[j]:.1f})")
    ax.set_xticks(x)
    ax.set_xticklabels([f"{s}→{t}" for s, t in table.tasks], rotation=45, ha="right")
    ax.set_ylabel("accuracy (%)")
    ax.set_ylim(0, 102)
    ax.set_title(table.dataset)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
