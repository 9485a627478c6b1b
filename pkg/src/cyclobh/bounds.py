"""Explicit constants from the prime-N proof path.

Only upper bounds are available for the true Bohnenblust-Hille constants;
everything here is an evaluated bound, never a measured value.
"""
from __future__ import annotations

import math

import numpy as np

from .groups import is_prime

DN_GROWTH = 2 * math.sqrt(2) + 2
# BH^{<=d} on the Boolean cube is bounded by BOOLEAN_BASE ** d; the true constant is unknown.
BOOLEAN_BASE = 2.0


def rotating_constant(N: int) -> complex:
    """d_N = prod_{k=1}^{N-1} (omega^k - conj(omega)^k)."""
    k = np.arange(1, N)
    w = np.exp(2j * np.pi * k / N)
    return complex(np.prod(w - np.conj(w)))


def split_constant(N: int, d: int) -> float:
    """C_N^d = |d_N|^{-d} (2 sqrt2 + 2)^{(N-1) d}; infinite when d_N vanishes."""
    dn = abs(rotating_constant(N))
    if dn < 1e-12:
        return math.inf
    return dn ** (-d) * DN_GROWTH ** ((N - 1) * d)


def splitting_bound(N: int, d: int, ell: int, j: int) -> float:
    """Bound C(1+C)^{ell-j} on ||f_j|| / ||f|| from the peeling induction."""
    C = split_constant(N, d)
    return C * (1 + C) ** (ell - j)


def support_homogeneous_constant(N: int, d: int, boolean_base: float = BOOLEAN_BASE) -> float:
    """Constant for support-homogeneous parts of degree <= d.

    (N-1)^{(d+1)/2} * BH_{Omega_2}^{<=d} * (2 sqrt2 + 2)^d / |1 - omega|^d.
    """
    gap = float(abs(1 - np.exp(2j * np.pi / N)))
    return (N - 1) ** ((d + 1) / 2) * boolean_base**d * DN_GROWTH**d / gap**d


def cyclic_bh_bound(d: int, N: int, boolean_base: float = BOOLEAN_BASE) -> float:
    """Explicit prime-path bound on BH^{<=d}_{Omega_N}; ``inf`` unless N is an odd prime."""
    d = max(int(d), 1)
    if N <= 2 or not is_prime(N):
        return math.inf
    K = support_homogeneous_constant(N, d, boolean_base)
    return sum(K * splitting_bound(N, d, d, j) for j in range(d + 1))


def hw_bh_bound(d: int, N: int, boolean_base: float = BOOLEAN_BASE) -> float:
    """(N+1)^d times the cyclic bound (Heisenberg-Weyl basis, N prime)."""
    return float((N + 1) ** max(int(d), 1) * cyclic_bh_bound(d, N, boolean_base))
