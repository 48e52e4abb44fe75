"""Compactly supported smoothing kernel, its moments, and bandwidth rules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad


@dataclass(frozen=True)
class Kernel:
    """Radial profile s -> amplitude * exp(-1 / (1 - (s/support)^2)) on [0, support)."""

    rule: str = "bump"
    support: float = 3.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.rule != "bump":
            raise ValueError(f"unknown kernel rule {self.rule!r}")
        if self.support <= 0 or self.amplitude <= 0:
            raise ValueError("support and amplitude must be positive")

    def evaluate(self, s):
        """Kernel profile at nonnegative argument(s) ``s``; zero outside the support."""
        arr = np.asarray(s, dtype=float)
        if np.any(arr < 0):
            raise ValueError("negative argument")
        z = arr / self.support
        den = 1.0 - z * z
        inside = den > 0.0
        out = np.zeros_like(arr)
        out[inside] = self.amplitude * np.exp(-1.0 / den[inside])
        if np.isscalar(s) or arr.ndim == 0:
            return float(out)
        return out

    __call__ = evaluate


DEFAULT_KERNEL = Kernel()


def kernel_moment(kernel: Kernel, p_exp: int, q_exp: int, dim: int) -> float:
    """Radial moment kappa_{p,q} = integral over R^dim of K(|u|)^p |u|^q du.

    Computed as S_{dim-1} * int_0^L K(t)^p t^(q+dim-1) dt by adaptive
    quadrature with absolute tolerance 1e-10.
    """
    if p_exp < 1 or q_exp < 0 or dim < 1:
        raise ValueError("need p_exp >= 1, q_exp >= 0, dim >= 1")
    sphere = 2.0 * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0)

    def integrand(t):
        return kernel.evaluate(t) ** p_exp * t ** (q_exp + dim - 1)

    val, _ = quad(integrand, 0.0, kernel.support, epsabs=1e-10, epsrel=1e-10, limit=200)
    return sphere * val


def path_length(points: np.ndarray) -> float:
    diffs = np.diff(np.asarray(points, dtype=float), axis=0)
    return float(np.sum(np.linalg.norm(diffs, axis=1)))


def bandwidth_from_path_fraction(points: np.ndarray, fraction: float, kernel: Kernel = DEFAULT_KERNEL) -> float:
    """h such that the kernel support radius equals fraction * total path length."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0, 1)")
    total = path_length(points)
    if total <= 0.0:
        raise ValueError("degenerate trajectory")
    return fraction * total / kernel.support


def bandwidth_from_neighbor_fraction(
    points: np.ndarray,
    fraction: float,
    kernel: Kernel = DEFAULT_KERNEL,
    sample_size: int = 2048,
) -> float:
    """h such that the kernel support ball holds about ``fraction`` of the samples.

    The radius is the ``fraction`` quantile of pairwise distances on a
    deterministic evenly spaced subsample, so the rule is reproducible and
    insensitive to trajectory length.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError("fraction must be in (0, 1)")
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    if n < 2:
        raise ValueError("degenerate trajectory")
    if n > sample_size:
        idx = np.unique(np.round(np.linspace(0, n - 1, sample_size)).astype(int))
        pts = pts[idx]
    from scipy.spatial.distance import pdist

    dists = pdist(pts)
    radius = float(np.quantile(dists, fraction))
    if radius <= 0.0:
        raise ValueError("degenerate trajectory")
    return radius / kernel.support
