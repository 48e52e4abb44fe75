"""Kernel estimators of occupation density, diffusion, tangent space and drift.

All estimators share one weighting scheme: for a base point x and bandwidth
h, step k of the trajectory carries weight w_k = K(|x_k - x| / h), with the
sums running over k = 0 .. N-2 so that every weighted step has an increment.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .kernels import DEFAULT_KERNEL, Kernel
from .numerics import sym_eig, top_d_projector
from .simulate import Trajectory


class InsufficientDataError(ValueError):
    """No trajectory point carries positive weight at the base point."""


@dataclass(frozen=True)
class EstimatorConfig:
    h: float
    d: int
    kernel: Kernel = DEFAULT_KERNEL
    min_neighbors: int = 5

    def __post_init__(self):
        if self.h <= 0:
            raise ValueError("bandwidth must be positive")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.min_neighbors < 0:
            raise ValueError("min_neighbors must be >= 0")


@dataclass(eq=False)
class PointEstimates:
    base: np.ndarray
    L_hat: float
    pi_hat: np.ndarray
    mu_E: np.ndarray
    P_hat: np.ndarray
    mu_o: np.ndarray
    n_active: int
    gap_flag: bool

    @property
    def low_support(self) -> bool:
        return self.n_active == 0


@dataclass(frozen=True)
class EstimatorFailure:
    base: np.ndarray
    message: str


def _active_weights(points: np.ndarray, x: np.ndarray, cfg: EstimatorConfig, tree=None):
    """Indices k <= N-2 with positive weight, and those weights.

    The brute-force scan and the tree-assisted scan visit the same index set
    in the same order, so both paths produce bit-identical sums.
    """
    head = points[:-1]
    radius = cfg.h * cfg.kernel.support
    if tree is None:
        diff = head - x
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        idx = np.flatnonzero(dist <= radius)
        dist = dist[idx]
    else:
        idx = np.sort(np.asarray(tree.query_ball_point(x, radius), dtype=np.intp))
        diff = head[idx] - x
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    w = cfg.kernel.evaluate(dist / cfg.h) if idx.size else np.empty(0)
    keep = w > 0.0
    return idx[keep], w[keep]


def _estimate_at(points: np.ndarray, delta: float, x: np.ndarray, cfg: EstimatorConfig, tree=None) -> PointEstimates:
    idx, w = _active_weights(points, x, cfg, tree)
    n_active = int(idx.size)
    s0 = float(np.sum(w))
    l_hat = (delta / cfg.h**cfg.d) * s0
    if s0 <= 0.0:
        raise InsufficientDataError("insufficient local data")
    inc = points[idx + 1] - points[idx]
    s_inc = np.sum(w[:, None] * inc, axis=0)
    s_outer = np.sum(w[:, None, None] * (inc[:, :, None] * inc[:, None, :]), axis=0)
    pi_hat = s_outer / (delta * s0)
    pi_hat = 0.5 * (pi_hat + pi_hat.T)
    mu_e = s_inc / (delta * s0)
    p_hat, gap_flag = top_d_projector(sym_eig(pi_hat), cfg.d)
    mu_o = p_hat @ mu_e
    return PointEstimates(np.asarray(x, dtype=float), l_hat, pi_hat, mu_e, p_hat, mu_o, n_active, gap_flag)


def occupation_density(traj: Trajectory, x, cfg: EstimatorConfig) -> float:
    """Unnormalized local time estimate; zero when no sample is in range."""
    x = np.asarray(x, dtype=float)
    _, w = _active_weights(traj.points, x, cfg)
    return (traj.delta / cfg.h**cfg.d) * float(np.sum(w))


def drift_estimate(traj: Trajectory, x, cfg: EstimatorConfig) -> PointEstimates:
    """All shared-weight estimates at one base point in a single pass."""
    return _estimate_at(traj.points, traj.delta, np.asarray(x, dtype=float), cfg)


def diffusion_estimate(traj: Trajectory, x, cfg: EstimatorConfig) -> np.ndarray:
    return drift_estimate(traj, x, cfg).pi_hat


def euclidean_drift_estimate(traj: Trajectory, x, cfg: EstimatorConfig) -> np.ndarray:
    return drift_estimate(traj, x, cfg).mu_E


def tangent_projector_estimate(pi_hat: np.ndarray, d: int) -> tuple[np.ndarray, bool]:
    """Projector onto the top-``d`` eigenspace of an estimated diffusion matrix."""
    return top_d_projector(sym_eig(pi_hat), d)


def batch_occupation(points: np.ndarray, delta: float, xs, cfg: EstimatorConfig, workers: int = 1) -> np.ndarray:
    """Occupation density at many base points; zeros where nothing is in range."""
    points = np.asarray(points, dtype=float)
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    tree = cKDTree(points[:-1]) if (len(xs) >= 4 and len(points) >= 20_000) else None

    def one(i):
        _, w = _active_weights(points, xs[i], cfg, tree)
        return (delta / cfg.h**cfg.d) * float(np.sum(w))

    if workers <= 1:
        return np.array([one(i) for i in range(len(xs))])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(one, range(len(xs)))))


def batch_estimate(traj: Trajectory, xs, cfg: EstimatorConfig, workers: int = 1):
    """Estimates at many base points; failures are recorded in their slots.

    The worker count changes scheduling only, never values: each slot is a
    pure function of the trajectory and its base point.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    points = traj.points
    tree = cKDTree(points[:-1]) if (len(xs) >= 4 and len(points) >= 20_000) else None

    def one(i):
        try:
            return _estimate_at(points, traj.delta, xs[i], cfg, tree)
        except InsufficientDataError as exc:
            return EstimatorFailure(xs[i], str(exc))

    if workers <= 1:
        return [one(i) for i in range(len(xs))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(len(xs))))
