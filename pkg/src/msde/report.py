"""Render figures from finished experiment directories.

The numeric pipeline writes only delimited text; this module turns those
files into PNG figures next to them. Rendering never feeds back into the
numeric outputs, so reports can be regenerated at will.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _read_csv(path) -> dict[str, list[str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = {name: [] for name in header}
        for row in reader:
            for name, val in zip(header, row):
                cols[name].append(val)
    return cols


def _floats(col) -> np.ndarray:
    return np.array([float(v) if v != "" else math.nan for v in col])


def _render_density(out: Path) -> list[Path]:
    cols = _read_csv(out / "density.csv")
    summary = json.loads((out / "summary.json").read_text())
    n = _floats(cols["n"])
    err = _floats(cols["l2_error"])
    keep = err > 0
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.loglog(n[keep], err[keep], "o", label="observed")
    slope, intercept = summary["slope"], summary["intercept"]
    grid = np.logspace(np.log10(n[keep].min()), np.log10(n[keep].max()), 50)
    ax.loglog(grid, 10.0**intercept * grid**slope, "-", label=f"fit, slope {slope:.2f}")
    ax.set_xlabel("trajectory length n")
    ax.set_ylabel("l2 density error")
    ax.legend(frameon=False)
    fig.tight_layout()
    path = out / "density_convergence.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _render_error_table(out: Path) -> list[Path]:
    cols = _read_csv(out / "points.csv")
    above = np.array([s == "above" for s in cols["stratum"]])
    fig, axes = plt.subplots(2, 2, figsize=(9.0, 6.5))
    labels = [("nrmse_mu_E", "ambient drift"), ("nrmse_mu_o", "projected drift"), ("nrmse_P_mu_E", "oracle projection")]
    for name, label in labels:
        vals = _floats(cols[name])[above]
        vals = vals[np.isfinite(vals)]
        if len(vals):
            axes[0, 0].hist(vals, bins=30, histtype="step", label=label)
    axes[0, 0].set_xlabel("drift NRMSE")
    axes[0, 0].legend(frameon=False, fontsize=8)
    for ax, name, xlabel in (
        (axes[0, 1], "angle_mu_o", "drift angle error (rad)"),
        (axes[1, 0], "pi_frob_rel", "diffusion relative Frobenius error"),
        (axes[1, 1], "sin_theta", "tangent space sin-theta distance"),
    ):
        vals = _floats(cols[name])
        vals = vals[np.isfinite(vals)]
        if len(vals):
            ax.hist(vals, bins=30, color="tab:blue")
        ax.set_xlabel(xlabel)
    fig.tight_layout()
    path = out / "error_table.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _render_clt(out: Path) -> list[Path]:
    qq = _read_csv(out / "qq.csv")
    coord = np.array([int(c) for c in qq["coord"]])
    theo = _floats(qq["theoretical"])
    emp = _floats(qq["empirical"])
    n_coords = coord.max() + 1
    fig, axes = plt.subplots(1, n_coords, figsize=(4.0 * n_coords, 3.6), squeeze=False)
    for j in range(n_coords):
        ax = axes[0, j]
        sel = coord == j
        ax.plot(theo[sel], emp[sel], ".", ms=4)
        lim = max(3.0, np.abs(theo[sel]).max() + 0.5)
        ax.plot([-lim, lim], [-lim, lim], "k-", lw=0.8)
        ax.set_xlabel("normal quantile")
        ax.set_ylabel(f"standardized error, coordinate {j}")
    fig.tight_layout()
    qq_path = out / "clt_qq.png"
    fig.savefig(qq_path, dpi=150)
    plt.close(fig)

    std = _read_csv(out / "standardized.csv")
    zcols = [name for name in std if name.startswith("z_")]
    fig, axes = plt.subplots(1, len(zcols), figsize=(4.0 * len(zcols), 3.6), squeeze=False)
    grid = np.linspace(-4, 4, 200)
    for j, name in enumerate(zcols):
        ax = axes[0, j]
        ax.hist(_floats(std[name]), bins=25, density=True, color="tab:blue", alpha=0.7)
        ax.plot(grid, np.exp(-grid**2 / 2) / math.sqrt(2 * math.pi), "k-", lw=1.0)
        ax.set_xlabel(name)
    fig.tight_layout()
    hist_path = out / "clt_histograms.png"
    fig.savefig(hist_path, dpi=150)
    plt.close(fig)
    return [qq_path, hist_path]


def render_report(out_dir) -> list[Path]:
    """Render the figures matching the experiment that produced ``out_dir``."""
    out = Path(out_dir)
    summary = json.loads((out / "summary.json").read_text())
    experiment = summary.get("config", {}).get("experiment")
    if experiment == "density_convergence":
        return _render_density(out)
    if experiment == "error_table":
        return _render_error_table(out)
    if experiment == "clt_monte_carlo":
        return _render_clt(out)
    raise ValueError(f"no report defined for experiment {experiment!r}")
