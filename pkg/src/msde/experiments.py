"""Experiment harness: config parsing, runners, and delimited output.

Every runner emits CSV tables plus a JSON summary embedding the fully
resolved configuration (derived bandwidth included), so a run is
reproducible from its own output directory.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .estimators import (
    EstimatorConfig,
    EstimatorFailure,
    PointEstimates,
    batch_estimate,
    batch_occupation,
)
from .geometry import (
    ManifoldKind,
    ManifoldSpec,
    embed,
    surface_area,
    tangent_projector,
    true_diffusion,
    true_drift,
)
from .kernels import (
    DEFAULT_KERNEL,
    bandwidth_from_neighbor_fraction,
    bandwidth_from_path_fraction,
    kernel_moment,
)
from .metrics import (
    STRATUM_ABOVE,
    bonferroni,
    diffusion_errors,
    drift_errors,
    l2_density_error,
    moment_normality,
    qq_points,
    standardize_drift_errors,
    wilcoxon_one_sided,
)
from .simulate import SimConfig, derive_seed, downsample, make_rng, simulate
from .trajectory_io import write_trajectory

EXPERIMENTS = ("simulate", "density_convergence", "error_table", "clt_monte_carlo")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    manifold: ManifoldSpec
    n: int
    delta: float
    stride: int = 1
    seed: int = 0
    radius_law: str = "chi"
    initial: tuple | None = None
    bandwidth: dict = field(default_factory=lambda: {"rule": "neighbor_fraction", "fraction": 0.01})
    base_points: dict = field(default_factory=dict)
    ladder: tuple | None = None
    replicates: int = 0
    eval_point: tuple | None = None
    min_neighbors: int = 5
    stratum_threshold: float = 0.05
    workers: int = 1


def parse_manifold(d: dict) -> ManifoldSpec:
    kind = d.get("kind")
    if kind == "ellipsoid":
        return ManifoldSpec.ellipsoid(d["a"], d["b"], d["c"], d.get("scale"))
    if kind == "klein_bottle":
        return ManifoldSpec.klein_bottle(d.get("ring_radius", 2.0), d.get("tube_radius", 1.0))
    raise ValueError(f"unknown manifold kind {kind!r}")


def manifold_to_dict(m: ManifoldSpec) -> dict:
    if m.kind is ManifoldKind.ELLIPSOID:
        a, b, c, s, _ = m.params
        return {"kind": "ellipsoid", "a": a, "b": b, "c": c, "scale": s}
    return {"kind": "klein_bottle", "ring_radius": m.ring_radius, "tube_radius": m.tube_radius}


def parse_config(doc: dict) -> ExperimentConfig:
    experiment = doc.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ValueError(f"experiment must be one of {EXPERIMENTS}")
    cfg = ExperimentConfig(
        experiment=experiment,
        manifold=parse_manifold(doc["manifold"]),
        n=int(doc["n"]),
        delta=float(doc["delta"]),
        stride=int(doc.get("stride", 1)),
        seed=int(doc.get("seed", 0)),
        radius_law=doc.get("radius_law", "chi"),
        initial=tuple(doc["initial"]) if doc.get("initial") is not None else None,
        bandwidth=dict(doc.get("bandwidth", {"rule": "neighbor_fraction", "fraction": 0.01})),
        base_points=dict(doc.get("base_points", {})),
        ladder=tuple(int(v) for v in doc["ladder"]) if doc.get("ladder") else None,
        replicates=int(doc.get("replicates", 0)),
        eval_point=tuple(doc["eval_point"]) if doc.get("eval_point") is not None else None,
        min_neighbors=int(doc.get("min_neighbors", 5)),
        stratum_threshold=float(doc.get("stratum_threshold", 0.05)),
        workers=int(doc.get("workers", 1)),
    )
    if cfg.n < 1 or cfg.stride < 1 or cfg.workers < 1:
        raise ValueError("n, stride and workers must be positive")
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "experiment": cfg.experiment,
        "manifold": manifold_to_dict(cfg.manifold),
        "n": cfg.n,
        "delta": cfg.delta,
        "stride": cfg.stride,
        "seed": cfg.seed,
        "radius_law": cfg.radius_law,
        "initial": list(cfg.initial) if cfg.initial is not None else None,
        "bandwidth": cfg.bandwidth,
        "base_points": cfg.base_points,
        "ladder": list(cfg.ladder) if cfg.ladder else None,
        "replicates": cfg.replicates,
        "eval_point": list(cfg.eval_point) if cfg.eval_point is not None else None,
        "min_neighbors": cfg.min_neighbors,
        "stratum_threshold": cfg.stratum_threshold,
        "workers": cfg.workers,
    }


def run_simulation(cfg: ExperimentConfig, seed: int | None = None):
    """Simulate ``n`` observations at spacing ``delta``.

    With ``stride > 1`` the chain runs at the finer spacing ``delta/stride``
    and is then thinned, mirroring a finely simulated, coarsely observed path.
    """
    sim = SimConfig(
        manifold=cfg.manifold,
        n_steps=cfg.n * cfg.stride,
        delta=cfg.delta / cfg.stride,
        seed=cfg.seed if seed is None else seed,
        initial=cfg.initial,
        radius_law=cfg.radius_law,
    )
    traj = simulate(sim)
    return downsample(traj, cfg.stride) if cfg.stride > 1 else traj


def resolve_bandwidth(bandwidth: dict, points: np.ndarray, kernel=DEFAULT_KERNEL) -> float:
    rule = bandwidth.get("rule", "neighbor_fraction")
    if rule == "neighbor_fraction":
        return bandwidth_from_neighbor_fraction(points, float(bandwidth.get("fraction", 0.01)), kernel)
    if rule == "path_fraction":
        return bandwidth_from_path_fraction(points, float(bandwidth.get("fraction", 0.01)), kernel)
    if rule == "explicit":
        h = float(bandwidth["h"])
        if h <= 0:
            raise ValueError("explicit bandwidth must be positive")
        return h
    raise ValueError(f"unknown bandwidth rule {rule!r}")


def generate_base_points(m: ManifoldSpec, scheme_cfg: dict, default_seed: int = 0):
    """Base points as (ambient, intrinsic) arrays, deterministic given the scheme."""
    scheme = scheme_cfg.get("scheme")
    if scheme == "uniform_sphere":
        if m.kind is not ManifoldKind.ELLIPSOID:
            raise ValueError("uniform_sphere applies to ellipsoids")
        count = int(scheme_cfg.get("count", 100))
        rng = make_rng(derive_seed(int(scheme_cfg.get("seed", default_seed)), 0))
        qs = rng.standard_normal((count, 3))
        qs /= np.linalg.norm(qs, axis=1, keepdims=True)
    elif scheme == "uniform_grid":
        if m.kind is not ManifoldKind.KLEIN_BOTTLE:
            raise ValueError("uniform_grid applies to the Klein bottle")
        rows = int(scheme_cfg.get("rows", 20))
        cols = int(scheme_cfg.get("cols", 20))
        # cell centers, avoiding the parameter lines where the chart degenerates
        us = (np.arange(rows) + 0.5) * (2.0 * math.pi / rows)
        vs = (np.arange(cols) + 0.5) * (2.0 * math.pi / cols)
        uu, vv = np.meshgrid(us, vs, indexing="ij")
        qs = np.column_stack([uu.ravel(), vv.ravel()])
    elif scheme == "explicit_intrinsic":
        qs = np.asarray(scheme_cfg["points"], dtype=float)
    else:
        raise ValueError(f"unknown base point scheme {scheme!r}")
    return embed(m, qs), qs


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if v is not None else "" for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_summary(path, summary: dict) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _stats(values) -> dict:
    arr = np.asarray([v for v in values if math.isfinite(v)], dtype=float)
    if arr.size == 0:
        return {"count": 0, "mean": math.nan, "std": math.nan, "median": math.nan}
    return {
        "count": int(arr.size),
        "mean": float(arr.mean()),
        "std": float(arr.std()),
        "median": float(np.median(arr)),
    }


def run_simulate(cfg: ExperimentConfig, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traj = run_simulation(cfg)
    write_trajectory(traj, out / "trajectory.msde")
    summary = {
        "config": config_to_dict(cfg),
        "n_points": traj.n_points,
        "delta": traj.delta,
        "scheme_id": traj.scheme_id,
    }
    write_summary(out / "summary.json", summary)
    return summary


def run_error_table(cfg: ExperimentConfig, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    m = cfg.manifold
    d = m.d
    traj = run_simulation(cfg)
    h = resolve_bandwidth(cfg.bandwidth, traj.points)
    est_cfg = EstimatorConfig(h=h, d=d, min_neighbors=cfg.min_neighbors)
    xs, qs = generate_base_points(m, cfg.base_points, cfg.seed)
    mu_true = true_drift(m, qs)
    pi_true = true_diffusion(m, qs)
    sup_norm = float(np.max(np.linalg.norm(mu_true, axis=1)))
    results = batch_estimate(traj, xs, est_cfg, workers=cfg.workers)

    p = m.p
    header = (
        ["index"]
        + [f"base_{i}" for i in range(p)]
        + [f"q_{i}" for i in range(qs.shape[1])]
        + [f"mu_true_{i}" for i in range(p)]
        + ["error", "L_hat", "n_active", "gap_flag", "stratum"]
        + [f"mu_E_{i}" for i in range(p)]
        + [f"mu_o_{i}" for i in range(p)]
        + [f"P_mu_E_{i}" for i in range(p)]
        + [
            "nrmse_mu_E", "rel_mu_E", "angle_mu_E", "abs_mu_E",
            "nrmse_mu_o", "rel_mu_o", "angle_mu_o", "abs_mu_o",
            "nrmse_P_mu_E", "rel_P_mu_E", "angle_P_mu_E", "abs_P_mu_E",
            "pi_frob_rel", "sin_theta",
        ]
    )
    rows = []
    recs = {"mu_E": [], "mu_o": [], "P_mu_E": []}
    diff_recs = []
    strata = []
    nrmse_rows = []  # (mu_E, mu_o, P_mu_E) on the above stratum, paired
    failures = 0
    low_support = 0
    for i, res in enumerate(results):
        prefix = [i] + list(xs[i]) + list(qs[i]) + list(mu_true[i])
        if isinstance(res, EstimatorFailure):
            failures += 1
            rows.append(prefix + [res.message] + [None] * (len(header) - len(prefix) - 1))
            continue
        if res.n_active < cfg.min_neighbors:
            low_support += 1
        p_mu_e = tangent_projector(m, xs[i]) @ res.mu_E
        rec_e = drift_errors(res.mu_E, mu_true[i], sup_norm, cfg.stratum_threshold)
        rec_o = drift_errors(res.mu_o, mu_true[i], sup_norm, cfg.stratum_threshold)
        rec_p = drift_errors(p_mu_e, mu_true[i], sup_norm, cfg.stratum_threshold)
        diff = diffusion_errors(res.pi_hat, pi_true[i], d)
        recs["mu_E"].append(rec_e)
        recs["mu_o"].append(rec_o)
        recs["P_mu_E"].append(rec_p)
        diff_recs.append(diff)
        strata.append(rec_e.stratum)
        if rec_e.stratum == STRATUM_ABOVE:
            nrmse_rows.append((rec_e.nrmse, rec_o.nrmse, rec_p.nrmse))
        rows.append(
            prefix
            + ["", res.L_hat, res.n_active, res.gap_flag, rec_e.stratum]
            + list(res.mu_E) + list(res.mu_o) + list(p_mu_e)
            + [rec_e.nrmse, rec_e.rel_norm_err, rec_e.angle_err, rec_e.abs_err]
            + [rec_o.nrmse, rec_o.rel_norm_err, rec_o.angle_err, rec_o.abs_err]
            + [rec_p.nrmse, rec_p.rel_norm_err, rec_p.angle_err, rec_p.abs_err]
            + [diff.frob_rel_err, diff.sin_theta]
        )
    write_csv(out / "points.csv", header, rows)

    wilcoxon = {}
    if len(nrmse_rows) >= 5:
        arr = np.asarray(nrmse_rows)
        raw = {
            "mu_o_lt_mu_E": wilcoxon_one_sided(arr[:, 1], arr[:, 0]),
            "P_mu_E_lt_mu_o": wilcoxon_one_sided(arr[:, 2], arr[:, 1]),
            "P_mu_E_lt_mu_E": wilcoxon_one_sided(arr[:, 2], arr[:, 0]),
        }
        adj = bonferroni(list(raw.values()))
        wilcoxon = {"raw": raw, "bonferroni": dict(zip(raw.keys(), adj))}

    aggregates = {}
    for name, entries in recs.items():
        above = [r for r in entries if r.stratum == STRATUM_ABOVE]
        below = [r for r in entries if r.stratum != STRATUM_ABOVE]
        aggregates[name] = {
            "nrmse": _stats([r.nrmse for r in above]),
            "rel_norm_err": _stats([r.rel_norm_err for r in above]),
            "angle_err": _stats([r.angle_err for r in above]),
            "abs_err_below": _stats([r.abs_err for r in below]),
        }
    aggregates["diffusion"] = {
        "frob_rel_err": _stats([r.frob_rel_err for r in diff_recs]),
        "sin_theta": _stats([r.sin_theta for r in diff_recs]),
    }
    summary = {
        "config": config_to_dict(cfg),
        "h": h,
        "sup_norm": sup_norm,
        "base_point_count": len(xs),
        "failures": failures,
        "low_support_points": low_support,
        "stratum_counts": {
            "above": int(sum(1 for s in strata if s == STRATUM_ABOVE)),
            "below": int(sum(1 for s in strata if s != STRATUM_ABOVE)),
        },
        "aggregates": aggregates,
        "wilcoxon": wilcoxon,
    }
    write_summary(out / "summary.json", summary)
    return summary


def fit_loglog_slope(ns, errs):
    """Least-squares slope of log10(err) against log10(n), skipping zero errors."""
    ns = np.asarray(ns, dtype=float)
    errs = np.asarray(errs, dtype=float)
    keep = (errs > 0) & np.isfinite(errs)
    if int(keep.sum()) < 2:
        raise ValueError("need at least two nonzero errors to fit a slope")
    coef = np.polyfit(np.log10(ns[keep]), np.log10(errs[keep]), 1)
    return float(coef[0]), float(coef[1]), int(keep.sum())


def run_density_convergence(cfg: ExperimentConfig, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not cfg.ladder:
        raise ValueError("density convergence needs a ladder of prefix sizes")
    ladder = sorted(cfg.ladder)
    if ladder[-1] > cfg.n:
        raise ValueError("ladder entries cannot exceed n")
    m = cfg.manifold
    traj = run_simulation(cfg)
    xs, _ = generate_base_points(m, cfg.base_points, cfg.seed)
    weights = np.full(len(xs), surface_area(m) / len(xs))

    def density_for(n_obs: int):
        prefix = traj.points[: n_obs + 1]
        h_i = resolve_bandwidth(cfg.bandwidth, prefix)
        est_cfg = EstimatorConfig(h=h_i, d=m.d, min_neighbors=cfg.min_neighbors)
        dens = batch_occupation(prefix, traj.delta, xs, est_cfg, workers=cfg.workers)
        # normalize to an occupation density per unit of time
        return h_i, dens / (n_obs * traj.delta)

    h_ref, ref = density_for(cfg.n)
    rows = []
    errs = []
    hs = []
    for n_i in ladder:
        h_i, dens = density_for(n_i)
        err = l2_density_error(dens, ref, weights)
        rows.append((n_i, h_i, err))
        errs.append(err)
        hs.append(h_i)
    write_csv(out / "density.csv", ["n", "h", "l2_error"], rows)
    slope, intercept, used = fit_loglog_slope(ladder, errs)
    summary = {
        "config": config_to_dict(cfg),
        "h_reference": h_ref,
        "bandwidths": hs,
        "slope": slope,
        "intercept": intercept,
        "points_used": used,
        "errors": errs,
    }
    write_summary(out / "summary.json", summary)
    return summary


def run_clt_mc(cfg: ExperimentConfig, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    m = cfg.manifold
    d = m.d
    if cfg.replicates < 8:
        raise ValueError("need at least eight replicates")
    if cfg.eval_point is None:
        raise ValueError("clt experiment needs an eval_point (intrinsic coordinates)")
    q0 = np.asarray(cfg.eval_point, dtype=float)
    x0 = embed(m, q0)
    mu0 = true_drift(m, q0)
    pi0 = true_diffusion(m, q0)
    p0 = tangent_projector(m, x0)
    kappa10 = kernel_moment(DEFAULT_KERNEL, 1, 0, d)
    kappa20 = kernel_moment(DEFAULT_KERNEL, 2, 0, d)
    kappa20_eff = kappa20 / kappa10  # raw kernel: occupation carries one kappa10 factor

    h = None
    errors = []
    l_hats = []
    pi_errors = []
    failures = 0
    for i in range(cfg.replicates):
        traj = run_simulation(cfg, seed=derive_seed(cfg.seed, i + 1))
        if h is None:
            h = resolve_bandwidth(cfg.bandwidth, traj.points)
        est_cfg = EstimatorConfig(h=h, d=d, min_neighbors=cfg.min_neighbors)
        res = batch_estimate(traj, x0[None, :], est_cfg)[0]
        if isinstance(res, EstimatorFailure):
            failures += 1
            continue
        errors.append(res.mu_o - mu0)
        l_hats.append(res.L_hat)
        pi_errors.append(res.pi_hat - pi0)
    if len(errors) < 8:
        raise ValueError("too few successful replicates")
    errors = np.asarray(errors)
    l_hats = np.asarray(l_hats)
    z = standardize_drift_errors(errors, p0, pi0, kappa20_eff, h, d, l_hats)

    write_csv(
        out / "errors.csv",
        ["replicate"] + [f"err_{i}" for i in range(m.p)] + ["L_hat"],
        [(i, *errors[i], l_hats[i]) for i in range(len(errors))],
    )
    write_csv(
        out / "standardized.csv",
        ["replicate"] + [f"z_{i}" for i in range(d)],
        [(i, *z[i]) for i in range(len(z))],
    )
    qq_rows = []
    coords = {}
    max_dev = 0.0
    max_dev_full = 0.0
    n_z = len(z)
    # the outer order statistics of an exactly normal sample already deviate
    # by O(1), so agreement is scored between the 5th and 95th percentiles
    positions = (np.arange(1, n_z + 1) - 0.5) / n_z
    interior = (positions >= 0.05) & (positions <= 0.95)
    for j in range(d):
        pairs = qq_points(z[:, j])
        devs = np.abs(pairs[:, 0] - pairs[:, 1])
        dev = float(np.max(devs[interior]))
        dev_full = float(np.max(devs))
        max_dev = max(max_dev, dev)
        max_dev_full = max(max_dev_full, dev_full)
        mom = moment_normality(z[:, j])
        coords[f"z_{j}"] = {
            "skewness": mom.skewness,
            "excess_kurtosis": mom.excess_kurtosis,
            "qq_max_deviation": dev,
            "qq_max_deviation_full": dev_full,
        }
        qq_rows.extend((j, t, e) for t, e in pairs)
    write_csv(out / "qq.csv", ["coord", "theoretical", "empirical"], qq_rows)

    # auxiliary: entrywise standardized diffusion errors at the matching rate
    scale = np.sqrt(h**d * l_hats / cfg.delta)
    pi_errors = np.asarray(pi_errors)
    pi_centered = pi_errors - pi_errors.mean(axis=0)
    entries = [(i, j) for i in range(m.p) for j in range(i, m.p) if pi0[i, i] * pi0[j, j] > 1e-12]
    diff_header = ["replicate"] + [f"z_pi_{i}{j}" for i, j in entries]
    diff_rows = []
    for r in range(len(pi_errors)):
        vals = [
            scale[r] * pi_centered[r, i, j] / math.sqrt(2.0 * kappa20_eff * pi0[i, i] * pi0[j, j])
            for i, j in entries
        ]
        diff_rows.append([r] + vals)
    write_csv(out / "diffusion_standardized.csv", diff_header, diff_rows)

    summary = {
        "config": config_to_dict(cfg),
        "h": h,
        "kappa10": kappa10,
        "kappa20": kappa20,
        "kappa20_effective": kappa20_eff,
        "eval_point_ambient": list(x0),
        "failures": failures,
        "replicates_used": int(len(errors)),
        "coordinates": coords,
        "qq_max_deviation": max_dev,
        "qq_max_deviation_full": max_dev_full,
    }
    write_summary(out / "summary.json", summary)
    return summary


def run_estimate(doc: dict, out_dir) -> dict:
    """Estimate at configured base points from a stored trajectory file."""
    from .trajectory_io import read_trajectory

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traj = read_trajectory(doc["trajectory"])
    m = traj.manifold
    bandwidth = dict(doc.get("bandwidth", {"rule": "neighbor_fraction", "fraction": 0.01}))
    h = resolve_bandwidth(bandwidth, traj.points)
    est_cfg = EstimatorConfig(
        h=h,
        d=int(doc.get("d", m.d)),
        min_neighbors=int(doc.get("min_neighbors", 5)),
    )
    xs, qs = generate_base_points(m, dict(doc.get("base_points", {})), int(doc.get("seed", traj.seed)))
    results = batch_estimate(traj, xs, est_cfg, workers=int(doc.get("workers", 1)))
    p = m.p
    upper = [(i, j) for i in range(p) for j in range(i, p)]
    header = (
        ["index"]
        + [f"base_{i}" for i in range(p)]
        + ["error", "L_hat", "n_active", "gap_flag"]
        + [f"mu_E_{i}" for i in range(p)]
        + [f"mu_o_{i}" for i in range(p)]
        + [f"pi_{i}{j}" for i, j in upper]
        + [f"P_{i}{j}" for i, j in upper]
    )
    rows = []
    failures = 0
    for i, res in enumerate(results):
        prefix = [i] + list(xs[i])
        if isinstance(res, EstimatorFailure):
            failures += 1
            rows.append(prefix + [res.message] + [None] * (len(header) - len(prefix) - 1))
            continue
        rows.append(
            prefix
            + ["", res.L_hat, res.n_active, res.gap_flag]
            + list(res.mu_E) + list(res.mu_o)
            + [res.pi_hat[i_, j_] for i_, j_ in upper]
            + [res.P_hat[i_, j_] for i_, j_ in upper]
        )
    write_csv(out / "estimates.csv", header, rows)
    summary = {
        "config": {
            "trajectory": str(doc["trajectory"]),
            "bandwidth": bandwidth,
            "base_points": dict(doc.get("base_points", {})),
            "d": est_cfg.d,
            "min_neighbors": est_cfg.min_neighbors,
            "workers": int(doc.get("workers", 1)),
        },
        "manifold": manifold_to_dict(m),
        "h": h,
        "n_points": traj.n_points,
        "failures": failures,
    }
    write_summary(out / "summary.json", summary)
    return summary


def run_experiment(cfg: ExperimentConfig, out_dir) -> dict:
    if cfg.experiment == "simulate":
        return run_simulate(cfg, out_dir)
    if cfg.experiment == "density_convergence":
        return run_density_convergence(cfg, out_dir)
    if cfg.experiment == "error_table":
        return run_error_table(cfg, out_dir)
    if cfg.experiment == "clt_monte_carlo":
        return run_clt_mc(cfg, out_dir)
    raise ValueError(f"unknown experiment {cfg.experiment!r}")
