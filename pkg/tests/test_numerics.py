"""Eigensolver tests against analytic spectra and reconstruction identities."""

import math

import numpy as np
import pytest

from msde.numerics import SymEigResult, principal_cosines, sym_eig, top_d_projector


def test_swap_matrix():
    res = sym_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(res.values, [1.0, -1.0], atol=1e-15)
    assert np.allclose(res.vectors @ np.diag(res.values) @ res.vectors.T,
                       [[0.0, 1.0], [1.0, 0.0]], atol=1e-15)


def test_two_by_two_quadratic_formula_oracle():
    rng = np.random.default_rng(21)
    for _ in range(200):
        a, b, c = rng.standard_normal(3)
        mat = np.array([[a, b], [b, c]])
        # roots of t^2 - (a+c) t + (ac - b^2)
        mean = 0.5 * (a + c)
        disc = math.sqrt(0.25 * (a - c) ** 2 + b * b)
        res = sym_eig(mat)
        assert np.allclose(res.values, [mean + disc, mean - disc], atol=1e-12)


def test_constructed_spectrum_recovery():
    rng = np.random.default_rng(22)
    lam = np.array([3.0, 1.0, -2.0])
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    mat = q @ np.diag(lam) @ q.T
    mat = 0.5 * (mat + mat.T)
    res = sym_eig(mat)
    assert np.allclose(res.values, lam, atol=1e-12)


def test_reconstruction_orthogonality_and_order_bulk():
    rng = np.random.default_rng(23)
    worst_recon = 0.0
    worst_orth = 0.0
    for _ in range(1000):
        p = int(rng.integers(1, 9))
        raw = rng.standard_normal((p, p))
        mat = 0.5 * (raw + raw.T)
        res = sym_eig(mat)
        recon = res.vectors @ np.diag(res.values) @ res.vectors.T
        worst_recon = max(worst_recon, float(np.max(np.abs(recon - mat))))
        worst_orth = max(worst_orth, float(np.max(np.abs(res.vectors.T @ res.vectors - np.eye(p)))))
        assert np.all(np.diff(res.values) <= 1e-14)
    assert worst_recon < 1e-10
    assert worst_orth < 1e-10


def test_diagonal_input_is_exact():
    res = sym_eig(np.diag([5.0, -1.0, 2.0]))
    assert np.array_equal(res.values, [5.0, 2.0, -1.0])


def test_input_validation():
    with pytest.raises(ValueError, match="square"):
        sym_eig(np.zeros((2, 3)))
    with pytest.raises(ValueError, match="not symmetric"):
        sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError, match="8x8"):
        sym_eig(np.eye(9))


def test_top_d_projector_basics():
    res = sym_eig(np.diag([3.0, 2.0, 1.0]))
    proj, flag = top_d_projector(res, 2)
    assert np.allclose(proj, np.diag([1.0, 1.0, 0.0]), atol=1e-15)
    assert flag is False
    proj, flag = top_d_projector(res, 3)
    assert np.allclose(proj, np.eye(3), atol=1e-15)
    assert flag is False  # d = p has no gap to resolve
    with pytest.raises(ValueError, match="range"):
        top_d_projector(res, 0)
    with pytest.raises(ValueError, match="range"):
        top_d_projector(res, 4)


def test_top_d_projector_flags_unresolved_gap():
    _, flag = top_d_projector(sym_eig(np.zeros((3, 3))), 2)
    assert flag is True
    _, flag = top_d_projector(sym_eig(np.diag([1.0, 1.0, 1.0 - 1e-12])), 2)
    assert flag is True


def test_principal_cosines_identity_and_orthogonal():
    u = np.eye(4)[:, :2]
    assert np.allclose(principal_cosines(u, u), [1.0, 1.0], atol=1e-15)
    v = np.eye(4)[:, 2:]
    assert np.allclose(principal_cosines(u, v), [0.0, 0.0], atol=1e-15)


def test_principal_cosines_planar_rotation():
    u = np.eye(3)[:, :2]
    for theta in (0.1, 0.4, 1.2):
        v = np.column_stack([
            [math.cos(theta), 0.0, math.sin(theta)],
            [0.0, 1.0, 0.0],
        ])
        assert np.allclose(principal_cosines(u, v), [1.0, math.cos(theta)], atol=1e-12)


def test_principal_cosines_validation():
    u = np.eye(3)[:, :2]
    with pytest.raises(ValueError, match="shape"):
        principal_cosines(u, np.eye(4)[:, :2])
    with pytest.raises(ValueError, match="not orthonormal"):
        principal_cosines(u, 2.0 * u)


def test_result_type_fields():
    res = sym_eig(np.eye(2))
    assert isinstance(res, SymEigResult)
    assert res.values.shape == (2,) and res.vectors.shape == (2, 2)
