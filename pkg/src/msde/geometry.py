"""Embedded model manifolds: ellipsoids in R^3 and a Klein bottle surface in R^4.

Both manifolds are two dimensional. The ellipsoid is the image of the unit
sphere under ``x -> (s*a*x1, s*b*x2, s*c*x3)``; the Klein bottle is the image
of the flat square ``[0, 2pi)^2`` under a fixed trigonometric map, with the
deck transformations ``g1:(u,v)->(u,v+2pi)`` and ``g2:(u,v)->(u+2pi,-v)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

TWO_PI = 2.0 * math.pi


class OffManifoldError(ValueError):
    pass


class ManifoldKind(Enum):
    ELLIPSOID = "ellipsoid"
    KLEIN_BOTTLE = "klein_bottle"


@dataclass(frozen=True)
class ManifoldSpec:
    """Manifold identity plus a fixed-width parameter block.

    Ellipsoid params: (a, b, c, scale, 0). Klein bottle params:
    (ring_radius, tube_radius, 0, 0, 0).
    """

    kind: ManifoldKind
    params: tuple[float, float, float, float, float]

    @classmethod
    def ellipsoid(cls, a: float, b: float, c: float, scale: float | None = None) -> "ManifoldSpec":
        if min(a, b, c) <= 0:
            raise ValueError("semi-axes must be positive")
        if scale is None:
            # normalization keeping the mean squared semi-axis equal to 1
            scale = math.sqrt(3.0 / (a * a + b * b + c * c))
        if scale <= 0:
            raise ValueError("scale must be positive")
        return cls(ManifoldKind.ELLIPSOID, (float(a), float(b), float(c), float(scale), 0.0))

    @classmethod
    def klein_bottle(cls, ring_radius: float = 2.0, tube_radius: float = 1.0) -> "ManifoldSpec":
        if tube_radius <= 0 or ring_radius <= tube_radius:
            raise ValueError("need ring_radius > tube_radius > 0")
        return cls(ManifoldKind.KLEIN_BOTTLE, (float(ring_radius), float(tube_radius), 0.0, 0.0, 0.0))

    @property
    def d(self) -> int:
        return 2

    @property
    def p(self) -> int:
        return 3 if self.kind is ManifoldKind.ELLIPSOID else 4

    @property
    def semi_axes(self) -> np.ndarray:
        """Scaled semi-axes of the ellipsoid as realized in ambient space."""
        a, b, c, s, _ = self.params
        return np.array([s * a, s * b, s * c])

    @property
    def ring_radius(self) -> float:
        return self.params[0]

    @property
    def tube_radius(self) -> float:
        return self.params[1]


def embed(m: ManifoldSpec, q) -> np.ndarray:
    """Map intrinsic coordinates to ambient space.

    ``q`` is a unit 3-vector for the ellipsoid or ``(u, v)`` for the Klein
    bottle; leading batch dimensions are allowed.
    """
    q = np.asarray(q, dtype=float)
    if m.kind is ManifoldKind.ELLIPSOID:
        if q.shape[-1] != 3:
            raise ValueError("ellipsoid intrinsic points are unit 3-vectors")
        return q * m.semi_axes
    if q.shape[-1] != 2:
        raise ValueError("Klein bottle intrinsic points are (u, v) pairs")
    ring, tube = m.ring_radius, m.tube_radius
    u, v = q[..., 0], q[..., 1]
    sv = np.sin(v)
    rad = ring + tube * sv
    return np.stack(
        [
            np.cos(u) * rad,
            np.sin(u) * rad,
            tube * np.cos(u / 2.0) * sv,
            tube * np.sin(u / 2.0) * sv,
        ],
        axis=-1,
    )


def _kb_frame_from_ambient(m: ManifoldSpec, x: np.ndarray):
    """Recover (u, s=sin v) and the two tangent directions from an ambient point."""
    ring, tube = m.ring_radius, m.tube_radius
    u = math.atan2(x[1], x[0]) % TWO_PI
    cu, su = math.cos(u), math.sin(u)
    ch, sh = math.cos(u / 2.0), math.sin(u / 2.0)
    s = (x[2] * ch + x[3] * sh) / tube
    rad = ring + tube * s
    recon = np.array([cu * rad, su * rad, tube * ch * s, tube * sh * s])
    resid = float(np.linalg.norm(x - recon))
    # d(embed)/du at (u, s) and the direction of d(embed)/dv (independent of v)
    t_u = np.array([-su * rad, cu * rad, -0.5 * tube * sh * s, 0.5 * tube * ch * s])
    t_v = np.array([cu, su, ch, sh])
    return u, s, t_u, t_v, resid


def tangent_projector(m: ManifoldSpec, x) -> np.ndarray:
    """Orthogonal projector onto the tangent plane at an ambient point ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (m.p,):
        raise ValueError(f"expected ambient point of dimension {m.p}")
    if m.kind is ManifoldKind.ELLIPSOID:
        axes = m.semi_axes
        resid = abs(float(np.sum((x / axes) ** 2)) - 1.0)
        if resid > 1e-8:
            raise OffManifoldError("off-manifold point")
        n = x / axes**2
        return np.eye(3) - np.outer(n, n) / float(n @ n)
    _, _, t_u, t_v, resid = _kb_frame_from_ambient(m, x)
    if resid > 1e-8 * max(1.0, float(np.linalg.norm(x))):
        raise OffManifoldError("off-manifold point")
    # modified Gram-Schmidt, u-direction first
    q1 = t_u / np.linalg.norm(t_u)
    w = t_v - (q1 @ t_v) * q1
    q2 = w / np.linalg.norm(w)
    return np.outer(q1, q1) + np.outer(q2, q2)


def _kb_jacobian(m: ManifoldSpec, u, v):
    """Columns d(embed)/du and d(embed)/dv, batched over leading axes."""
    ring, tube = m.ring_radius, m.tube_radius
    cu, su = np.cos(u), np.sin(u)
    ch, sh = np.cos(u / 2.0), np.sin(u / 2.0)
    sv, cv = np.sin(v), np.cos(v)
    rad = ring + tube * sv
    du = np.stack([-su * rad, cu * rad, -0.5 * tube * sh * sv, 0.5 * tube * ch * sv], axis=-1)
    dv = np.stack([tube * cv * cu, tube * cv * su, tube * cv * ch, tube * cv * sh], axis=-1)
    return du, dv


def intrinsic_drift_kb(q) -> np.ndarray:
    """Drift of the planar SDE generating the Klein bottle process."""
    q = np.asarray(q, dtype=float)
    u, v = q[..., 0], q[..., 1]
    return np.stack(
        [1.0 + 0.5 * np.cos(u / 2.0) * np.sin(v), 0.5 * np.sin(2.0 * v)],
        axis=-1,
    )


def true_drift(m: ManifoldSpec, q) -> np.ndarray:
    """Tangential Ito drift of the ambient process at intrinsic point(s) ``q``."""
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    q2 = np.atleast_2d(q)
    if m.kind is ManifoldKind.ELLIPSOID:
        x = embed(m, q2)
        axes = m.semi_axes
        rot = np.stack(
            [axes[0] * x[:, 1] / axes[1], -axes[1] * x[:, 0] / axes[0], np.zeros(len(x))],
            axis=-1,
        )
        n = x / axes**2
        nn = np.sum(n * n, axis=1)
        # tangential part of the renormalization drift -x
        corr = -x - (np.sum(n * (-x), axis=1) / nn)[:, None] * n
        out = rot + corr
    else:
        u, v = q2[:, 0], q2[:, 1]
        du, dv = _kb_jacobian(m, u, v)
        mu = intrinsic_drift_kb(q2)
        push = mu[:, :1] * du + mu[:, 1:2] * dv
        ring, tube = m.ring_radius, m.tube_radius
        cu, su = np.cos(u), np.sin(u)
        ch, sh = np.cos(u / 2.0), np.sin(u / 2.0)
        sv = np.sin(v)
        rad = ring + tube * sv
        huu = np.stack([-cu * rad, -su * rad, -0.25 * tube * ch * sv, -0.25 * tube * sh * sv], axis=-1)
        hvv = np.stack([-tube * sv * cu, -tube * sv * su, -tube * sv * ch, -tube * sv * sh], axis=-1)
        hess = huu + hvv
        out = np.empty_like(push)
        for i in range(len(q2)):
            proj = tangent_projector(m, embed(m, q2[i]))
            out[i] = push[i] + 0.5 * proj @ hess[i]
    return out[0] if single else out


def true_diffusion(m: ManifoldSpec, q) -> np.ndarray:
    """Instantaneous covariance of the ambient process at intrinsic point(s) ``q``."""
    q = np.asarray(q, dtype=float)
    single = q.ndim == 1
    q2 = np.atleast_2d(q)
    if m.kind is ManifoldKind.ELLIPSOID:
        x = embed(m, q2)
        axes = m.semi_axes
        out = np.diag(axes**2)[None, :, :] - x[:, :, None] * x[:, None, :]
    else:
        du, dv = _kb_jacobian(m, q2[:, 0], q2[:, 1])
        out = du[:, :, None] * du[:, None, :] + dv[:, :, None] * dv[:, None, :]
    return out[0] if single else out


def reduce_fundamental_domain(u: float, v: float) -> tuple[float, float]:
    """Map (u, v) to its representative in [0, 2pi)^2 under the deck group.

    Wrapping u by 2pi*m flips the sign of v when m is odd.
    """
    m = math.floor(u / TWO_PI)
    u1 = u - TWO_PI * m
    if u1 >= TWO_PI:  # float round-up guard
        u1 -= TWO_PI
        m += 1
    v1 = v if m % 2 == 0 else -v
    v1 = v1 % TWO_PI
    if v1 >= TWO_PI:
        v1 -= TWO_PI
    return u1, v1


def surface_area(m: ManifoldSpec) -> float:
    """Approximate surface area, used only to weight density grids."""
    if m.kind is ManifoldKind.ELLIPSOID:
        a, b, c = m.semi_axes
        p = 1.6075  # Thomsen's exponent, exact for spheres
        return float(4.0 * math.pi * (((a * b) ** p + (a * c) ** p + (b * c) ** p) / 3.0) ** (1.0 / p))
    return float(TWO_PI * TWO_PI)  # parameter-domain measure for the flat square
