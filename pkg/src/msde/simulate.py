"""Single-path simulation of diffusions on the model manifolds.

The ellipsoid process is a sphere-valued retraction Euler chain pushed
through the linear embedding; the Klein bottle process is a planar Euler
chain reduced to the fundamental domain each step and then embedded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ManifoldKind, ManifoldSpec, embed, reduce_fundamental_domain

_MASK64 = (1 << 64) - 1
RADIUS_LAWS = ("chi", "chi2")


def splitmix64(x: int) -> int:
    """One splitmix64 output step; the documented seed-mixing function."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def derive_seed(base_seed: int, index: int) -> int:
    """Output ``index`` of the splitmix64 stream seeded at ``base_seed``.

    Streams from different base seeds are decorrelated by the avalanche of
    the mixing step, unlike xor-of-small-integers schemes whose seed sets
    overlap. Index 0 is reserved for base-point sampling; replicate ``i``
    uses index ``i + 1``.
    """
    return splitmix64((base_seed + index * 0x9E3779B97F4A7C15) & _MASK64)


def make_rng(seed: int) -> np.random.Generator:
    """The package-wide generator: 64-bit PCG64 as shipped with numpy."""
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class SimConfig:
    manifold: ManifoldSpec
    n_steps: int
    delta: float
    seed: int
    initial: tuple | None = None
    radius_law: str = "chi"

    def __post_init__(self):
        if self.n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if self.radius_law not in RADIUS_LAWS:
            raise ValueError(f"radius_law must be one of {RADIUS_LAWS}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    points: np.ndarray  # (N, p) ambient, float64
    delta: float
    manifold: ManifoldSpec
    seed: int
    scheme_id: str

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or len(pts) < 2:
            raise ValueError("trajectory needs at least two points")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n_points(self) -> int:
        return len(self.points)


def _draw_radii(rng, law: str, n: int) -> np.ndarray:
    draws = rng.chisquare(2, n)
    return np.sqrt(draws) if law == "chi" else draws


def _sphere_path(y0, n_steps, delta, rng, radius_law="chi", drift_fn=None):
    """Unit-sphere retraction Euler chain; returns (n_steps + 1, 3) unit vectors.

    Tangent directions come from projecting uniform unit vectors; directions
    that collapse under projection are redrawn, erroring out after 100
    consecutive failures.
    """
    ys = np.empty((n_steps + 1, 3))
    ys[0] = y0
    w_all = rng.standard_normal((n_steps, 3)).tolist()
    radii = _draw_radii(rng, radius_law, n_steps).tolist()
    sq = math.sqrt(delta)
    y1, y2, y3 = (float(y0[0]), float(y0[1]), float(y0[2]))
    for k in range(n_steps):
        w1, w2, w3 = w_all[k]
        wn = math.sqrt(w1 * w1 + w2 * w2 + w3 * w3)
        attempts = 0
        while True:
            if wn > 1e-12:
                w1, w2, w3 = w1 / wn, w2 / wn, w3 / wn
                dot = w1 * y1 + w2 * y2 + w3 * y3
                t1, t2, t3 = w1 - dot * y1, w2 - dot * y2, w3 - dot * y3
                tn = math.sqrt(t1 * t1 + t2 * t2 + t3 * t3)
                if tn > 1e-12:
                    break
            attempts += 1
            if attempts > 100:
                raise RuntimeError("could not draw a non-degenerate tangent direction")
            w1, w2, w3 = rng.standard_normal(3)
            wn = math.sqrt(w1 * w1 + w2 * w2 + w3 * w3)
        r = radii[k] / tn
        v1, v2, v3 = r * t1, r * t2, r * t3
        if drift_fn is None:
            m1, m2, m3 = y2, -y1, 0.0
        else:
            m1, m2, m3 = drift_fn(y1, y2, y3)
        y1 = y1 + sq * v1 + delta * m1
        y2 = y2 + sq * v2 + delta * m2
        y3 = y3 + sq * v3 + delta * m3
        inv = 1.0 / math.sqrt(y1 * y1 + y2 * y2 + y3 * y3)
        y1, y2, y3 = y1 * inv, y2 * inv, y3 * inv
        ys[k + 1] = (y1, y2, y3)
    return ys


def _plane_path(q0, n_steps, delta, rng, drift_fn=None):
    """Planar Euler chain reduced to [0, 2pi)^2 each step; returns (n_steps + 1, 2)."""
    qs = np.empty((n_steps + 1, 2))
    u, v = float(q0[0]), float(q0[1])
    u, v = reduce_fundamental_domain(u, v)
    qs[0] = (u, v)
    g_all = rng.standard_normal((n_steps, 2)).tolist()
    sq = math.sqrt(delta)
    for k in range(n_steps):
        g1, g2 = g_all[k]
        if drift_fn is None:
            m1 = 1.0 + 0.5 * math.cos(u / 2.0) * math.sin(v)
            m2 = 0.5 * math.sin(2.0 * v)
        else:
            m1, m2 = drift_fn(u, v)
        u, v = reduce_fundamental_domain(u + delta * m1 + sq * g1, v + delta * m2 + sq * g2)
        qs[k + 1] = (u, v)
    return qs


def _uniform_sphere_point(rng) -> np.ndarray:
    while True:
        y = rng.standard_normal(3)
        n = np.linalg.norm(y)
        if n > 1e-12:
            return y / n


def scheme_id_for(cfg: SimConfig) -> str:
    if cfg.manifold.kind is ManifoldKind.ELLIPSOID:
        return f"sphere_retraction_euler/{cfg.radius_law}"
    return "plane_euler"


def simulate(cfg: SimConfig) -> Trajectory:
    """Run the scheme matching ``cfg.manifold`` and embed the result."""
    rng = make_rng(cfg.seed)
    if cfg.manifold.kind is ManifoldKind.ELLIPSOID:
        if cfg.initial is None:
            y0 = _uniform_sphere_point(rng)
        else:
            y0 = np.asarray(cfg.initial, dtype=float)
            if y0.shape != (3,) or abs(np.linalg.norm(y0) - 1.0) > 1e-8:
                raise ValueError("initial point must be a unit 3-vector")
        ys = _sphere_path(y0, cfg.n_steps, cfg.delta, rng, cfg.radius_law)
        pts = embed(cfg.manifold, ys)
    else:
        if cfg.initial is None:
            q0 = rng.uniform(0.0, 2.0 * math.pi, 2)
        else:
            q0 = np.asarray(cfg.initial, dtype=float)
            if q0.shape != (2,):
                raise ValueError("initial point must be a (u, v) pair")
        qs = _plane_path(q0, cfg.n_steps, cfg.delta, rng)
        pts = embed(cfg.manifold, qs)
    return Trajectory(pts, cfg.delta, cfg.manifold, cfg.seed, scheme_id_for(cfg))


def downsample(traj: Trajectory, stride: int) -> Trajectory:
    """Keep every ``stride``-th point and rescale the sampling interval."""
    if stride < 1:
        raise ValueError("stride must be >= 1")
    pts = traj.points[::stride]
    if len(pts) < 2:
        raise ValueError("stride exceeds length")
    return Trajectory(pts.copy(), traj.delta * stride, traj.manifold, traj.seed, traj.scheme_id)
