"""Diffusions on embedded manifolds: simulation, estimation, experiments."""

from .estimators import (
    EstimatorConfig,
    EstimatorFailure,
    InsufficientDataError,
    PointEstimates,
    batch_estimate,
    diffusion_estimate,
    drift_estimate,
    euclidean_drift_estimate,
    occupation_density,
    tangent_projector_estimate,
)
from .geometry import (
    ManifoldKind,
    ManifoldSpec,
    embed,
    reduce_fundamental_domain,
    tangent_projector,
    true_diffusion,
    true_drift,
)
from .kernels import (
    DEFAULT_KERNEL,
    Kernel,
    bandwidth_from_neighbor_fraction,
    bandwidth_from_path_fraction,
    kernel_moment,
)
from .metrics import (
    diffusion_errors,
    drift_errors,
    l2_density_error,
    moment_normality,
    qq_points,
    standardize_drift_errors,
    wilcoxon_one_sided,
)
from .numerics import SymEigResult, principal_cosines, sym_eig, top_d_projector
from .simulate import SimConfig, Trajectory, derive_seed, downsample, make_rng, simulate
from .trajectory_io import TrajectoryFormatError, read_trajectory, write_trajectory

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
