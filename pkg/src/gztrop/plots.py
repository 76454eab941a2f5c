"""Figure rendering for experiment reports.

Each renderer takes a finished report and writes one PNG next to the data
file.  Rendering is opt-in from the CLI (--plot); reports stay flat data by
default.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150


def _style(ax, xlabel: str, ylabel: str, title: str):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title, fontsize=10)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    ax.grid(True, alpha=0.25, linewidth=0.5)


def figure_path(out: str | None, kind: str) -> Path:
    stem = Path(out).with_suffix("") if out else Path(kind)
    return stem.parent / (stem.name + ".png")


def save_convergence_figure(report, path: Path) -> Path:
    """log err against t, one curve per (sample, coordinate)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    curves: dict[tuple, list[tuple[float, float]]] = {}
    for row in report.rows:
        key = (row["sample"], row.get("i"), row.get("k"))
        curves.setdefault(key, []).append((row["t"], max(row["err"], 1e-17)))
    for (sample, i, k), pts in curves.items():
        pts.sort()
        ts, errs = zip(*pts)
        ax.semilogy(ts, errs, lw=0.8, alpha=0.55)
    _style(ax, "t", "|2 zeta - ell|", f"{report.kind}: chart error decay")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_estimate_figure(report, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    curves: dict[int, list[tuple[float, float]]] = {}
    for row in report.rows:
        curves.setdefault(row["sample"], []).append((row["t"], max(row["err"], 1e-17)))
    for sample, pts in curves.items():
        pts.sort()
        ts, errs = zip(*pts)
        ax.semilogy(ts, errs, lw=0.8, alpha=0.6)
    _style(ax, "t", "estimate error", f"{report.kind}: tropical estimate decay")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_angle_figure(report, path: Path) -> Path:
    """Measured chart phase against the leading source angle per coordinate."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    groups: dict[tuple, list[tuple[float, float]]] = {}
    for row in report.rows:
        groups.setdefault((row["i"], row["k"]), []).append(
            (row["psi_leading"], row["phi"])
        )
    for (i, k), pts in sorted(groups.items()):
        x, y = zip(*pts)
        ax.plot(x, y, "o", ms=3, alpha=0.6, label=f"phi_{i}^({k})")
    lim = max(abs(v) for row in report.rows for v in (row["phi"], row["psi_leading"]))
    ax.plot([0, lim], [0, lim], "k--", lw=0.8, alpha=0.5)
    ax.legend(fontsize=8, frameon=False)
    _style(ax, "leading source angle", "chart phase", f"{report.kind}: angle pairing")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_bracket_figure(report, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    kinds = {"zz": ("o", "zeta-zeta"), "pp": ("s", "phi-phi"), "zp": ("^", "zeta-phi")}
    for kind, (marker, label) in kinds.items():
        pred = [r["predicted"] for r in report.rows if r["kind"] == kind]
        adj = [r["adjusted"] for r in report.rows if r["kind"] == kind]
        if pred:
            ax.plot(pred, adj, marker, ms=4, alpha=0.6, label=label)
    lim = 0.75
    ax.plot([-lim, lim], [-lim, lim], "k--", lw=0.8, alpha=0.5)
    ax.legend(fontsize=8, frameon=False)
    _style(ax, "predicted", "sign-adjusted measured", f"{report.kind}: bracket table")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_chambers_figure(report, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    fiber = [r for r in report.rows if r["part"] == "fiber"]
    labels = sorted({r["pattern"] for r in fiber})
    vals = {lab: [] for lab in labels}
    for r in fiber:
        vals[r["pattern"]].append(r["residual"])
    xs = np.arange(len(labels))
    ax.bar(xs, [float(np.max(vals[lab])) for lab in labels], width=0.7, alpha=0.75)
    ax.set_xticks(xs)
    ax.set_xticklabels(labels, rotation=60, fontsize=7)
    ax.set_yscale("log")
    _style(ax, "sign pattern", "ladder residual", f"{report.kind}: fiber candidates")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def save_tropical_map_figure(report, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    names = [r["check"] for r in report.rows]
    vals = [max(abs(r["value"]), 1e-18) for r in report.rows]
    ax.bar(np.arange(len(names)), vals, width=0.5, alpha=0.75)
    ax.set_xticks(np.arange(len(names)))
    ax.set_xticklabels(names, fontsize=8)
    ax.set_yscale("log")
    _style(ax, "check", "worst value", f"{report.kind}: image sampling")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


RENDERERS = {
    "converge-action": save_convergence_figure,
    "converge-angle": save_angle_figure,
    "bracket-limit": save_bracket_figure,
    "chambers": save_chambers_figure,
    "tropical-estimate": save_estimate_figure,
    "tropical-map": save_tropical_map_figure,
}


def render(report, out: str | None) -> Path | None:
    fn = RENDERERS.get(report.kind)
    if fn is None:
        return None
    return fn(report, figure_path(out, report.kind))
