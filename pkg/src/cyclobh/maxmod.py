"""Maximum-modulus experiments on the convex hull of Omega_N.

The D_N system follows the odd-order parameterisation: ``build_dn_system(N_small)``
describes the group of order ``2 * N_small - 1`` and polynomials of local
degree at most ``N_small - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MissingTorusConstant, NegativeWeight, RadiusExceeded, SingularMatrix
from .groups import GroupParams, get_budget
from .polynomial import (
    CyclicPolynomial,
    NormReport,
    evaluate_at_exponents,
    evaluate_many,
    fourier_analyze,
    synthesize,
)

WEIGHT_FLOOR = -1e-12
PRODUCT_GRID_CAP = 200_000


@dataclass(frozen=True)
class DnSystem:
    N_small: int
    matrix: np.ndarray
    inverse: np.ndarray
    inverse_inf_norm: float
    epsilon0: float

    @property
    def order(self) -> int:
        return 2 * self.N_small - 1

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.order) / self.order)


def build_dn_system(N_small: int) -> DnSystem:
    """Real (2N-1)x(2N-1) moment matrix: a row of ones, cosine rows, sine rows."""
    if N_small < 2:
        raise ValueError("N_small must be >= 2")
    m = 2 * N_small - 1
    theta = 2 * np.pi / m
    k = np.arange(m)
    rows = [np.ones(m)]
    rows += [np.cos(k * j * theta) for j in range(1, N_small)]
    rows += [np.sin(k * j * theta) for j in range(1, N_small)]
    D = np.array(rows)
    if np.linalg.cond(D) > 1e12:
        raise SingularMatrix(f"D_{N_small} is numerically singular")
    Dinv = np.linalg.inv(D)
    uniform = np.full(m, 1.0 / m)
    e1 = np.zeros(m)
    e1[0] = 1.0
    if np.abs(D @ uniform - e1).max() > 1e-10:
        raise SingularMatrix("D_N does not map the uniform vector to e_1")
    inf_norm = float(np.abs(Dinv).sum(axis=1).max())
    return DnSystem(N_small, D, Dinv, inf_norm, 1.0 / (m * inf_norm))


def moment_vector(N_small: int, z: complex) -> np.ndarray:
    powers = complex(z) ** np.arange(1, N_small)
    return np.concatenate([[1.0], powers.real, powers.imag])


def hull_coefficients(system: DnSystem, z: complex) -> np.ndarray:
    """Weights p_k >= 0 with sum_k p_k xi_k^m = z^m for m < N_small, for |z| <= epsilon0."""
    z = complex(z)
    if abs(z) > system.epsilon0 * (1 + 1e-12):
        raise RadiusExceeded(f"|z| = {abs(z):.3e} exceeds epsilon0 = {system.epsilon0:.3e}")
    p = system.inverse @ moment_vector(system.N_small, z)
    if p.min() < WEIGHT_FLOOR:
        raise NegativeWeight(f"weight {p.min():.3e} < 0 at z = {z}")
    return p


def moment_residual(system: DnSystem, z: complex, p: np.ndarray) -> float:
    m = np.arange(system.N_small)
    lhs = complex(z) ** m
    rhs = (p[None, :] * system.nodes[None, :] ** m[:, None]).sum(axis=1)
    return float(np.abs(lhs - rhs).max())


def gmp_partial_bound(group_order: int, d: int) -> float:
    """d * epsilon0^{-d} for odd group order 2N-1 (local degree <= N-1)."""
    if group_order < 3 or group_order % 2 == 0:
        raise ValueError("the partial bound covers odd group orders >= 3 only")
    eps0 = build_dn_system((group_order + 1) // 2).epsilon0
    return d * eps0 ** (-d)


# -- hull suprema --------------------------------------------------------------
def van_der_corput(count: int) -> np.ndarray:
    """First ``count`` points of the base-2 van der Corput sequence (nested in ``count``)."""
    out = np.empty(count)
    for i in range(count):
        x, denom, k = 0.0, 1.0, i
        while k:
            denom *= 2
            x += (k & 1) / denom
            k >>= 1
        out[i] = x
    return out


def boundary_points(N: int, samples_per_edge: int) -> np.ndarray:
    """Points on the edges of the regular N-gon conv(Omega_N); vertices included."""
    verts = np.exp(2j * np.pi * np.arange(N) / N)
    t = van_der_corput(samples_per_edge)
    start, end = verts, np.roll(verts, -1)
    return (start[:, None] * (1 - t[None, :]) + end[:, None] * t[None, :]).ravel()


@dataclass(frozen=True)
class GmpRatio:
    hull_sup: float
    group_sup: NormReport
    ratio: float
    hull_samples: int
    argmax: tuple = ()

    def to_json(self) -> dict:
        return {"hull_sup": self.hull_sup, "group_sup": self.group_sup.to_json(), "ratio": self.ratio,
                "hull_samples": self.hull_samples}


def hull_sup_estimate(f: CyclicPolynomial, samples_per_edge: int = 16, seed: int = 0,
                      random_points: int = 2000, budget: int | None = None) -> GmpRatio:
    """Lower estimate of sup over conv(Omega_N)^n of |f| and its ratio to the group sup.

    Each coordinate only needs to range over the polygon boundary.  The point
    set is the group, a product grid on the boundary, one-coordinate sweeps
    through the best group point, and ``random_points`` random boundary
    points; it grows with ``samples_per_edge``, so the estimate is monotone.
    """
    P = f.params
    n = P.nvars
    budget = get_budget(budget)
    rng = np.random.default_rng(seed)

    if P.size <= budget:
        vals = np.abs(synthesize(f, budget)).ravel()
        k_all = None
        certified, used = True, P.size
    else:
        k_all = rng.integers(0, P.orders, size=(budget, n))
        vals = np.abs(evaluate_at_exponents(f, k_all))
        certified, used = False, budget
    i_best = int(np.argmax(vals))
    group_sup = NormReport(float(vals[i_best]), certified, used)
    if k_all is None:
        anchor_k = np.array(np.unravel_index(i_best, P.orders))
    else:
        anchor_k = k_all[i_best]
    anchor = np.exp(2j * np.pi * anchor_k / np.array(P.orders))

    best, best_pt = group_sup.value, tuple(anchor)
    count = used

    def consider(Z):
        nonlocal best, best_pt, count
        if len(Z) == 0:
            return
        v = np.abs(evaluate_many(f, Z))
        count += len(Z)
        i = int(np.argmax(v))
        if v[i] > best:
            best, best_pt = float(v[i]), tuple(Z[i])

    B = boundary_points(P.N, samples_per_edge)
    # product grid at the largest nested resolution that fits
    s_star = samples_per_edge
    while s_star >= 1 and (P.N * s_star) ** n > PRODUCT_GRID_CAP:
        s_star -= 1
    if s_star >= 1:
        Bs = boundary_points(P.N, s_star)
        grids = np.meshgrid(*([Bs] * n), indexing="ij")
        consider(np.stack([g.ravel() for g in grids], axis=1))
    for j in range(n):
        Z = np.repeat(anchor[None, :], len(B), axis=0)
        Z[:, j] = B
        consider(Z)
    if random_points:
        edges = rng.integers(0, P.N, size=(random_points, n))
        t = rng.random((random_points, n))
        verts = np.exp(2j * np.pi * np.arange(P.N + 1) / P.N)
        consider(verts[edges] * (1 - t) + verts[edges + 1] * t)

    ratio = best / group_sup.value if group_sup.value > 0 else 1.0
    return GmpRatio(best, group_sup, ratio, count, best_pt)


def n3_counterexample() -> tuple[CyclicPolynomial, complex]:
    """Quadratic p on Omega_3 with |p| = 1 on the group but |p(z0)| = (1+2 sqrt3)/4 at z0 = (1+omega)/2.

    The values p(omega^k) are unimodular and chosen so that the three Lagrange
    terms are all positive real at z0.
    """
    params = GroupParams(3, 1)
    nodes = params.roots
    z0 = (1 + nodes[1]) / 2
    values = np.empty(3, dtype=complex)
    for k in range(3):
        others = [nodes[j] for j in range(3) if j != k]
        lk = np.prod([(z0 - w) / (nodes[k] - w) for w in others])
        values[k] = np.conj(lk) / abs(lk)
    return fourier_analyze(values, params), complex(z0)


def polygon_constant(N: int) -> float:
    """c_N = 1 / cos(pi/N), the smallest c with D / c inside conv(Omega_N)."""
    return 1.0 / math.cos(math.pi / N)


def convex_hull_bh_constant(N: int, d: int, torus_constant: float | None = None,
                            torus_base: float | None = None) -> float:
    """c_N^d times a torus BH constant (given directly or as torus_base^sqrt(d log d))."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if torus_constant is None:
        if torus_base is None:
            raise MissingTorusConstant("supply torus_constant or torus_base")
        torus_constant = torus_base ** math.sqrt(d * math.log(d))
    return polygon_constant(N) ** d * torus_constant

