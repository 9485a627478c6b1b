import math

import numpy as np
import pytest

from cyclobh.errors import MissingTorusConstant, RadiusExceeded
from cyclobh.groups import GroupParams
from cyclobh.maxmod import (
    boundary_points,
    build_dn_system,
    convex_hull_bh_constant,
    gmp_partial_bound,
    hull_coefficients,
    hull_sup_estimate,
    moment_residual,
    n3_counterexample,
    polygon_constant,
)
from cyclobh.polynomial import CyclicPolynomial, constant, evaluate, monomial, sup_norm, synthesize

from helpers import make_poly

W3 = np.exp(2j * np.pi / 3)
TARGET = (1 + 2 * math.sqrt(3)) / 4


def test_dn_layout_small():
    D = build_dn_system(2).matrix
    t = 2 * np.pi / 3
    expected = [[1, 1, 1], [1, np.cos(t), np.cos(2 * t)], [0, np.sin(t), np.sin(2 * t)]]
    assert np.allclose(D, expected, atol=1e-14)


@pytest.mark.parametrize("N_small", [2, 3, 4, 5])
def test_dn_uniform_and_inverse(N_small):
    sysm = build_dn_system(N_small)
    m = 2 * N_small - 1
    e1 = np.zeros(m)
    e1[0] = 1
    assert np.abs(sysm.matrix @ np.full(m, 1 / m) - e1).max() < 1e-10
    assert np.abs(sysm.matrix @ sysm.inverse - np.eye(m)).max() < 1e-10
    # oracle: explicit inverse of the real DFT layout, rows 1/m + (2/m) sum (x cos + y sin)
    k = np.arange(m)[:, None]
    j = np.arange(1, N_small)[None, :]
    th = 2 * np.pi / m
    inv = np.hstack([np.full((m, 1), 1 / m), 2 / m * np.cos(k * j * th), 2 / m * np.sin(k * j * th)])
    assert np.abs(inv - sysm.inverse).max() < 1e-10
    assert sysm.inverse_inf_norm == pytest.approx(np.abs(inv).sum(axis=1).max())
    assert sysm.epsilon0 == pytest.approx(1 / (m * sysm.inverse_inf_norm))


def test_dn_epsilon_small_value():
    # row sums of the explicit inverse for m = 3: 1/3 + (2/3)(|cos| + |sin|)
    norm = 1 / 3 + 2 / 3 * (0.5 + math.sqrt(3) / 2)
    assert build_dn_system(2).epsilon0 == pytest.approx(1 / (3 * norm))


@pytest.mark.parametrize("N_small", [2, 3, 4, 5])
def test_hull_weights(N_small):
    sysm = build_dn_system(N_small)
    eps = sysm.epsilon0
    m = 2 * N_small - 1
    assert hull_coefficients(sysm, 0) == pytest.approx(np.full(m, 1 / m))
    assert hull_coefficients(sysm, eps).min() >= -1e-12
    for phi in np.linspace(0, 2 * np.pi, 64, endpoint=False):
        for r in (0.3 * eps, eps):
            z = r * np.exp(1j * phi)
            p = hull_coefficients(sysm, z)
            assert p.min() >= -1e-12
            assert abs(p.sum() - 1) < 1e-10
            assert moment_residual(sysm, z, p) < 1e-9
            cert = sysm.inverse_inf_norm * max(abs(z), abs(z) ** (N_small - 1))
            assert np.abs(p - 1 / m).max() <= cert + 1e-12
    with pytest.raises(RadiusExceeded):
        hull_coefficients(sysm, 1.01 * eps)


def test_partial_bound():
    eps = build_dn_system(2).epsilon0
    assert gmp_partial_bound(3, 2) == pytest.approx(2 * eps**-2)
    with pytest.raises(ValueError):
        gmp_partial_bound(4, 2)


def lagrange_value(values, z):
    nodes = [1, W3, W3**2]
    out = 0j
    for k in range(3):
        term = values[k]
        for j in range(3):
            if j != k:
                term *= (z - nodes[j]) / (nodes[k] - nodes[j])
        out += term
    return out


def test_counterexample():
    p, z0 = n3_counterexample()
    vals = synthesize(p)
    assert np.abs(np.abs(vals) - 1).max() < 1e-12
    assert sup_norm(p).value == pytest.approx(1, abs=1e-10)
    assert z0 == pytest.approx((1 + W3) / 2)
    assert abs(z0 - W3**2) == pytest.approx(1.5)
    assert abs(evaluate(p, (z0,))) == pytest.approx(TARGET, abs=1e-10)
    # independent Lagrange interpolation of the same unimodular data
    assert abs(lagrange_value(vals, z0)) == pytest.approx(TARGET, abs=1e-10)
    assert TARGET == pytest.approx(math.sqrt(3) / 4 + math.sqrt(3) / 4 + 1 / 4)


def test_counterexample_hull_ratio():
    p, _ = n3_counterexample()
    r = hull_sup_estimate(p, 16, seed=0)
    assert r.ratio >= 1.116025
    assert r.ratio <= 2 * build_dn_system(2).epsilon0 ** -2


def test_hull_trivial_cases():
    P = GroupParams(3, 2)
    assert hull_sup_estimate(monomial(P, (1, 0)), 8).ratio == pytest.approx(1)
    assert hull_sup_estimate(constant(P, 2), 8).ratio == pytest.approx(1)


def test_hull_ratio_at_least_one_and_monotone():
    for seed in range(5):
        f = make_poly(3, 2, 3, seed)
        prev = 0
        for s in (1, 2, 4, 8, 16):
            r = hull_sup_estimate(f, s, seed=seed)
            assert r.ratio >= 1 - 1e-9
            assert r.hull_sup >= prev - 1e-15
            prev = r.hull_sup


def test_boundary_points_on_polygon():
    B = boundary_points(5, 7)
    assert len(B) == 35
    # every point lies on the polygon: inner product with the edge normal is cos(pi/5)
    ang = np.angle(B)
    sector = np.floor((ang % (2 * np.pi)) / (2 * np.pi / 5))
    normal = np.exp(1j * (2 * np.pi / 5) * (sector + 0.5))
    dist = (B * normal.conj()).real
    assert np.abs(dist - math.cos(math.pi / 5)).max() < 1e-12


def test_polygon_constants():
    assert polygon_constant(3) == pytest.approx(2)
    assert polygon_constant(6) == pytest.approx(2 / math.sqrt(3))
    cs = [polygon_constant(N) for N in range(3, 30)]
    assert cs == sorted(cs, reverse=True) and cs[-1] > 1
    assert convex_hull_bh_constant(5, 1, torus_constant=1.0) == pytest.approx(polygon_constant(5))
    assert convex_hull_bh_constant(3, 4, torus_base=2.0) == pytest.approx(16 * 2 ** math.sqrt(4 * math.log(4)))
    with pytest.raises(MissingTorusConstant):
        convex_hull_bh_constant(3, 2)
