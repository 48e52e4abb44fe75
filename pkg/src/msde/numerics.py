"""Small dense symmetric eigensolver and subspace comparison helpers.

A hand-rolled cyclic Jacobi iteration keeps the eigendecomposition
deterministic down to the bit for the tiny (p <= 8) matrices used here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SymEigResult:
    values: np.ndarray  # eigenvalues, nonincreasing
    vectors: np.ndarray  # column j pairs with values[j]


def sym_eig(a, max_sweeps: int = 50) -> SymEigResult:
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi sweeps."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    p = a.shape[0]
    if p > 8:
        raise ValueError("matrix larger than 8x8")
    scale = float(np.linalg.norm(a))
    if np.linalg.norm(a - a.T) > 1e-8 * max(1.0, scale):
        raise ValueError("not symmetric")

    w = 0.5 * (a + a.T)
    v = np.eye(p)
    if p == 1:
        return SymEigResult(np.array([w[0, 0]]), v)
    threshold = 1e-14 * scale

    for _ in range(max_sweeps):
        off = 0.0
        for i in range(p - 1):
            for j in range(i + 1, p):
                off = max(off, abs(w[i, j]))
        if off <= threshold:
            break
        for i in range(p - 1):
            for j in range(i + 1, p):
                if abs(w[i, j]) <= threshold:
                    continue
                tau = (w[j, j] - w[i, i]) / (2.0 * w[i, j])
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                row_i, row_j = w[i, :].copy(), w[j, :].copy()
                w[i, :] = c * row_i - s * row_j
                w[j, :] = s * row_i + c * row_j
                col_i, col_j = w[:, i].copy(), w[:, j].copy()
                w[:, i] = c * col_i - s * col_j
                w[:, j] = s * col_i + c * col_j
                w[i, j] = 0.0
                w[j, i] = 0.0
                vi, vj = v[:, i].copy(), v[:, j].copy()
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj
    else:
        raise ConvergenceError("no convergence")

    values = np.diag(w).copy()
    order = np.argsort(-values, kind="stable")
    return SymEigResult(values[order], v[:, order])


def top_d_projector(eig: SymEigResult, d: int) -> tuple[np.ndarray, bool]:
    """Projector onto the span of the top ``d`` eigenvectors, plus a gap flag.

    The flag is set when the spectral gap lambda_d - lambda_{d+1} is not
    resolved relative to the leading eigenvalue.
    """
    p = len(eig.values)
    if not 1 <= d <= p:
        raise ValueError("d out of range")
    u = eig.vectors[:, :d]
    proj = u @ u.T
    proj = 0.5 * (proj + proj.T)
    if d == p:
        return proj, False
    gap = eig.values[d - 1] - eig.values[d]
    flag = gap <= 1e-8 * max(float(eig.values[0]), 0.0)
    return proj, bool(flag)


def principal_cosines(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Cosines of principal angles between equal-rank orthonormal frames."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 2:
        raise ValueError("frames must share shape (p, d)")
    d = u.shape[1]
    for frame in (u, v):
        if np.linalg.norm(frame.T @ frame - np.eye(d)) > 1e-8:
            raise ValueError("not orthonormal")
    m = u.T @ v
    vals = sym_eig(m.T @ m).values
    return np.sqrt(np.clip(vals, 0.0, 1.0))
