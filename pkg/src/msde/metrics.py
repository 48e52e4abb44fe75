"""Error metrics, a one-sided signed-rank test, and normality diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, rankdata

from .numerics import principal_cosines, sym_eig

STRATUM_ABOVE = "above"
STRATUM_BELOW = "below"


@dataclass(frozen=True)
class ErrorRecord:
    nrmse: float
    rel_norm_err: float
    angle_err: float
    abs_err: float
    stratum: str


def drift_errors(mu_hat, mu_true, sup_norm: float, c: float = 0.05) -> ErrorRecord:
    """Pointwise drift errors, stratified by |mu_true| relative to ``sup_norm``.

    Points with |mu_true| / sup_norm below ``c`` only get the absolute error;
    the relative fields are NaN there (and the angle is NaN for a zero
    estimate).
    """
    mu_hat = np.asarray(mu_hat, dtype=float)
    mu_true = np.asarray(mu_true, dtype=float)
    if sup_norm <= 0:
        raise ValueError("sup_norm must be positive")
    err = float(np.linalg.norm(mu_hat - mu_true))
    norm_true = float(np.linalg.norm(mu_true))
    norm_hat = float(np.linalg.norm(mu_hat))
    if norm_true / sup_norm < c:
        return ErrorRecord(math.nan, math.nan, math.nan, err, STRATUM_BELOW)
    nrmse = err / norm_true
    rel = abs(norm_hat - norm_true) / norm_true
    if norm_hat == 0.0:
        angle = math.nan
    else:
        cosang = float(mu_hat @ mu_true) / (norm_hat * norm_true)
        angle = math.acos(min(1.0, max(-1.0, cosang)))
    return ErrorRecord(nrmse, rel, angle, err, STRATUM_ABOVE)


@dataclass(frozen=True)
class DiffusionErrors:
    frob_rel_err: float
    sin_theta: float


def diffusion_errors(pi_hat, pi_true, d: int) -> DiffusionErrors:
    """Frobenius error of the matrix and sine distance of top-``d`` eigenspaces."""
    pi_hat = np.asarray(pi_hat, dtype=float)
    pi_true = np.asarray(pi_true, dtype=float)
    denom = float(np.linalg.norm(pi_true))
    if denom == 0.0:
        raise ValueError("pi_true must be nonzero")
    frob = float(np.linalg.norm(pi_hat - pi_true)) / denom
    u = sym_eig(pi_hat).vectors[:, :d]
    v = sym_eig(pi_true).vectors[:, :d]
    cosines = principal_cosines(u, v)
    sin_theta = math.sqrt(max(0.0, d - float(np.sum(cosines**2))))
    return DiffusionErrors(frob, sin_theta)


def wilcoxon_one_sided(a, b, alternative: str = "a<b") -> float:
    """Paired one-sided Wilcoxon signed-rank p-value for "a tends below b".

    Zero differences are dropped and ties get average ranks. The null
    distribution is exact (full sign enumeration, via a rank-sum count table)
    for m <= 25 pairs, and a tie-corrected normal approximation with
    continuity correction beyond that.
    """
    if alternative != "a<b":
        raise ValueError("only the alternative 'a<b' is supported")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or len(a) < 5:
        raise ValueError("need paired samples of equal length >= 5")
    diff = a - b
    diff = diff[diff != 0.0]
    m = len(diff)
    if m == 0:
        raise ValueError("all differences zero")
    ranks = rankdata(np.abs(diff))
    w_plus = float(np.sum(ranks[diff > 0.0]))
    if m <= 25:
        # doubled ranks are integers even with midrank ties
        r2 = np.round(2.0 * ranks).astype(int)
        total = int(np.sum(r2))
        counts = np.zeros(total + 1, dtype=np.int64)
        counts[0] = 1
        for r in r2:
            counts[r:] = counts[r:] + counts[:-r]
        w2 = int(round(2.0 * w_plus))
        return float(np.sum(counts[: w2 + 1]) / 2.0**m)
    mean = m * (m + 1) / 4.0
    var = m * (m + 1) * (2 * m + 1) / 24.0
    _, tie_counts = np.unique(ranks, return_counts=True)
    var -= float(np.sum(tie_counts**3 - tie_counts)) / 48.0
    z = (w_plus - mean + 0.5) / math.sqrt(var)
    return float(norm.cdf(z))


def bonferroni(p_values):
    """Family-wise adjusted p-values: multiply by the family size, cap at 1."""
    k = len(p_values)
    return [min(1.0, p * k) for p in p_values]


def l2_density_error(est, ref, weights) -> float:
    """Weighted l2 distance between two density evaluations on a common grid."""
    est = np.asarray(est, dtype=float)
    ref = np.asarray(ref, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if not (est.shape == ref.shape == weights.shape):
        raise ValueError("grids must share shape")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    return float(np.sqrt(np.sum(weights * (est - ref) ** 2)))


def standardize_drift_errors(errors, p_true, pi_true, kappa20: float, h: float, d: int, l_hats):
    """Map raw drift errors to coordinates that should be standard normal.

    Each error is centered by the sample mean (absorbing the common bias),
    scaled by sqrt(h^d * L_hat_i), and whitened by the rank-``d`` inverse
    square root of kappa20 * P pi P within the tangent subspace. ``kappa20``
    must match the kernel's normalization (kappa_{2,0} / kappa_{1,0} when the
    occupation estimates use the raw, unnormalized kernel).
    """
    errors = np.atleast_2d(np.asarray(errors, dtype=float))
    l_hats = np.asarray(l_hats, dtype=float)
    if len(l_hats) != len(errors):
        raise ValueError("one occupation value per error")
    if np.any(l_hats <= 0):
        raise ValueError("occupation values must be positive")
    if kappa20 <= 0 or h <= 0:
        raise ValueError("kappa20 and h must be positive")
    p_true = np.asarray(p_true, dtype=float)
    pi_true = np.asarray(pi_true, dtype=float)
    cov = p_true @ pi_true @ p_true.T
    cov = 0.5 * (cov + cov.T)
    eig = sym_eig(cov)
    tol = 1e-12 * max(1.0, float(abs(eig.values[0])))
    if eig.values[d - 1] <= tol:
        raise ValueError("rank deficient")
    u_d = eig.vectors[:, :d]
    inv_sqrt = 1.0 / np.sqrt(kappa20 * eig.values[:d])
    centered = errors - errors.mean(axis=0)
    scaled = centered * np.sqrt(h**d * l_hats)[:, None]
    return (scaled @ u_d) * inv_sqrt


def qq_points(samples) -> np.ndarray:
    """Pairs (normal quantile at (i - 1/2)/n, i-th order statistic)."""
    samples = np.asarray(samples, dtype=float)
    n = len(samples)
    if n < 2:
        raise ValueError("need at least two samples")
    theo = norm.ppf((np.arange(1, n + 1) - 0.5) / n)
    return np.column_stack([theo, np.sort(samples)])


@dataclass(frozen=True)
class MomentSummary:
    skewness: float
    excess_kurtosis: float


def moment_normality(samples) -> MomentSummary:
    """Sample skewness and excess kurtosis from central moments."""
    samples = np.asarray(samples, dtype=float)
    if len(samples) < 8:
        raise ValueError("need at least eight samples")
    centered = samples - samples.mean()
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        raise ValueError("zero variance")
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    return MomentSummary(m3 / m2**1.5, m4 / m2**2 - 3.0)
