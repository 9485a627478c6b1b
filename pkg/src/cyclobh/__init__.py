"""Bohnenblust-Hille machinery for cyclic groups: Fourier analysis on Omega_N^n,
support-homogeneous splitting, hull maximum-modulus experiments, Sidon and
Bohr quantities, low-degree learning and the Heisenberg-Weyl qudit basis.
"""
__version__ = "0.1.0"

from .bh import (
    BHQuotient,
    bh_constant_search,
    bh_quotient,
    bohr_check,
    bohr_radius_lower_bound,
    sidon_bound,
    sidon_quotient,
)
from .bounds import cyclic_bh_bound, hw_bh_bound, rotating_constant, split_constant, splitting_bound
from .decompose import (
    SupportDecomposition,
    full_splitting,
    pseudo_projection,
    split_max_support_prime,
    split_max_support_vandermonde,
    support_homogeneous_parts,
    tau,
)
from .errors import *  # noqa: F401,F403
from .groups import GroupParams, enumerate_group_points, enumerate_indices
from .hw import HWObservable, hw_analyze, hw_basis, hw_bh_quotient, hw_synthesize, operator_norm
from .learning import chernoff_sample_size, junta_approximate, learn_from_samples, learning_error_curve
from .maxmod import build_dn_system, convex_hull_bh_constant, hull_coefficients, hull_sup_estimate, n3_counterexample
from .polynomial import (
    CyclicPolynomial,
    evaluate,
    fourier_analyze,
    l2_norm,
    random_polynomial,
    sup_norm,
    synthesize,
)
