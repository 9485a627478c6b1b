import itertools
import math

import numpy as np
import pytest

from cyclobh.errors import BudgetExceeded, DimensionMismatch
from cyclobh.groups import (
    GroupParams,
    character_matrix,
    degree,
    enumerate_group_points,
    enumerate_indices,
    get_budget,
    group_exponents,
    index_count_bound,
    is_prime,
    support_size,
)


def test_omega_is_primitive():
    for N in range(2, 9):
        P = GroupParams(N, 1)
        assert abs(P.omega**N - 1) < 1e-12
        assert all(abs(P.omega**k - 1) > 1e-12 for k in range(1, N))


def test_params_are_frozen():
    P = GroupParams(3, 2)
    with pytest.raises(Exception):
        P.N = 4


@pytest.mark.parametrize("N,n", [(1, 1), (3, 0)])
def test_invalid_params(N, n):
    with pytest.raises(ValueError):
        GroupParams(N, n)


def test_json_round_trip():
    P = GroupParams(5, 3)
    assert P.to_json() == {"N": 5, "n": 3}
    assert GroupParams.from_json(P.to_json()) == P


def test_small_point_sets():
    assert [z[0] for z in enumerate_group_points(GroupParams(2, 1))] == pytest.approx([1, -1])
    w = np.exp(2j * np.pi / 3)
    assert [z[0] for z in enumerate_group_points(GroupParams(3, 1))] == pytest.approx([1, w, w * w])


def test_point_count_and_distinctness():
    pts = list(enumerate_group_points(GroupParams(3, 4)))
    assert len(pts) == 81
    rounded = {tuple(round(c.real, 9) + 1j * round(c.imag, 9) for c in p) for p in pts}
    assert len(rounded) == 81


def test_enumeration_matches_exponent_table():
    P = GroupParams(3, 2)
    pts = np.array(list(enumerate_group_points(P)))
    k = group_exponents(P)
    assert np.allclose(pts, np.exp(2j * np.pi * k / 3))


def test_budget_enforced(monkeypatch):
    with pytest.raises(BudgetExceeded):
        list(enumerate_group_points(GroupParams(3, 5), budget=100))
    monkeypatch.setenv("CYCLOBH_BUDGET", "50")
    assert get_budget() == 50
    with pytest.raises(BudgetExceeded):
        group_exponents(GroupParams(2, 6))


def test_indices_examples():
    assert list(enumerate_indices(GroupParams(3, 2), 1)) == [(0, 0), (0, 1), (1, 0)]
    got = list(enumerate_indices(GroupParams(3, 2), 2))
    brute = sorted(a for a in itertools.product(range(3), repeat=2) if sum(a) <= 2)
    assert got == brute and len(got) == 6
    assert len(list(enumerate_indices(GroupParams(2, 3), 3))) == 8


@pytest.mark.parametrize("N,n", [(2, 4), (3, 3), (4, 2), (5, 2)])
def test_indices_against_brute_force(N, n):
    P = GroupParams(N, n)
    for d in range((N - 1) * n + 1):
        got = list(enumerate_indices(P, d))
        brute = sorted(a for a in itertools.product(range(N), repeat=n) if sum(a) <= d)
        assert got == brute
        assert len(got) <= index_count_bound(n, d)
    assert len(list(enumerate_indices(P, (N - 1) * n))) == N**n


def test_degree_and_support():
    assert degree((2, 0, 1)) == 3
    assert support_size((2, 0, 1)) == 2
    P = GroupParams(3, 3)
    for a in enumerate_indices(P, 6):
        assert support_size(a) <= degree(a) <= 2 * 3


def test_characters_unimodular():
    P = GroupParams(5, 3)
    k = group_exponents(P)
    alphas = np.array(list(enumerate_indices(P, 4)))
    E = character_matrix(P, k, alphas)
    assert np.abs(np.abs(E) - 1).max() < 1e-12
    direct = np.exp(2j * np.pi * (k @ alphas.T) / 5)
    assert np.abs(E - direct).max() < 1e-12


def test_validate_index():
    P = GroupParams(3, 2)
    with pytest.raises(DimensionMismatch):
        P.validate_index((1,))
    with pytest.raises(ValueError):
        P.validate_index((3, 0))


def test_mixed_orders():
    P = GroupParams(3, 2, n_boolean=2)
    assert P.orders == (3, 3, 2, 2)
    assert P.size == 36
    assert group_exponents(P).shape == (36, 4)


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert index_count_bound(3, 2) == sum(math.comb(3 + k, 3) for k in range(3))
