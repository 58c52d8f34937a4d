"""Frobenius-distance similarity of graphs and symmetric matrices."""

from .errors import (
    ConvergenceError,
    FrobSimError,
    InstanceTooLargeError,
    NotPSDError,
    ParseError,
    PreconditionError,
)
from .exact import SimResult, brute_force_msim, brute_force_qvp, mismatch_count
from .matrixcore import (
    Clustering,
    Graph,
    SpectralDecomp,
    adjacency,
    clustering_of,
    eig_sym,
    frobenius_norm,
    laplacian,
    permute,
    spectral_decompose,
    trace_inner,
)
from .pathtree import max_path_cover, path_tree_distance
from .qvp import QvpInstance, qvp_objective, reduce_msim_to_qvp
from .solver import solve_msim, solve_qvp

__version__ = "0.1.0"
