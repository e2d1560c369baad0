"""The discrete Gaussian exp(-2t) I_x(2t) and the heat kernels, limit laws,
spectral zeta functions and determinants built from it."""

__version__ = "0.1.0"

from .bessel import evaluate, scaled_bessel_i
from .errors import (DegenerateError, DomainError, PoleError, PreconditionError,
                     ResourceError, ValidationError)
from .graphs import GraphSpec, kernel_graph, load_graph
from .heat import TreeParams, WalkParams, kernel_circle, kernel_pq, kernel_tree, kernel_Z
from .prob import Pmf, llt_discrepancy, sample_Y
from .tori import asymptotic_remainder, lattice_density, log_det_prime
from .trig import generating_coeffs, sin4_identity, trig_sum_direct
from .zeta import tree_det, xi_Z, zeta_tree, zeta_Z

__all__ = [
    "DegenerateError", "DomainError", "GraphSpec", "Pmf", "PoleError",
    "PreconditionError", "ResourceError", "TreeParams", "ValidationError",
    "WalkParams", "asymptotic_remainder", "evaluate", "generating_coeffs",
    "kernel_Z", "kernel_circle", "kernel_graph", "kernel_pq", "kernel_tree",
    "lattice_density", "llt_discrepancy", "load_graph", "log_det_prime",
    "sample_Y", "scaled_bessel_i", "sin4_identity", "tree_det", "trig_sum_direct",
    "xi_Z", "zeta_Z", "zeta_tree",
]
