"""Binary trajectory files.

Layout (all little-endian):

    bytes 0-3    magic "MSDE"
    u32          format version (1)
    u32          ambient dimension p
    u64          point count N
    f64          sampling interval delta
    u64          seed
    u32          manifold id (1 ellipsoid, 2 klein bottle)
    f64 x 5      manifold parameters (slot 5 carries the scheme code)
    f64 x N x p  points, point-major

Total size is exactly 80 + 8*N*p bytes.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .geometry import ManifoldKind, ManifoldSpec
from .simulate import Trajectory

MAGIC = b"MSDE"
VERSION = 1
_HEADER = struct.Struct("<4sIIQdQI5d")

_MANIFOLD_IDS = {ManifoldKind.ELLIPSOID: 1, ManifoldKind.KLEIN_BOTTLE: 2}
_SCHEME_CODES = {
    "external": 0,
    "sphere_retraction_euler/chi": 1,
    "sphere_retraction_euler/chi2": 2,
    "plane_euler": 3,
}
_SCHEME_NAMES = {v: k for k, v in _SCHEME_CODES.items()}


class TrajectoryFormatError(ValueError):
    pass


def write_trajectory(traj: Trajectory, path) -> None:
    m = traj.manifold
    params = list(m.params)
    params[4] = float(_SCHEME_CODES.get(traj.scheme_id, 0))
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        traj.points.shape[1],
        traj.points.shape[0],
        traj.delta,
        traj.seed,
        _MANIFOLD_IDS[m.kind],
        *params,
    )
    data = np.ascontiguousarray(traj.points, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())


def read_trajectory(path) -> Trajectory:
    raw = Path(path).read_bytes()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise TrajectoryFormatError("bad magic")
    if len(raw) < _HEADER.size:
        raise TrajectoryFormatError("truncated file")
    (_, version, p, n, delta, seed, manifold_id, *params) = _HEADER.unpack(raw[: _HEADER.size])
    if version != VERSION:
        raise TrajectoryFormatError("unsupported version")
    expected = _HEADER.size + 8 * n * p
    if len(raw) < expected:
        raise TrajectoryFormatError("truncated file")
    if len(raw) > expected:
        raise TrajectoryFormatError("trailing data")
    scheme_id = _SCHEME_NAMES.get(int(params[4]), "external")
    if manifold_id == 1:
        manifold = ManifoldSpec(ManifoldKind.ELLIPSOID, (params[0], params[1], params[2], params[3], 0.0))
    elif manifold_id == 2:
        manifold = ManifoldSpec(ManifoldKind.KLEIN_BOTTLE, (params[0], params[1], 0.0, 0.0, 0.0))
    else:
        raise TrajectoryFormatError("unknown manifold id")
    if p != manifold.p:
        raise TrajectoryFormatError("dimension does not match manifold")
    points = np.frombuffer(raw, dtype="<f8", count=n * p, offset=_HEADER.size).reshape(n, p)
    return Trajectory(points.astype(float), delta, manifold, seed, scheme_id)
