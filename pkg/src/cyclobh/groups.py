"""Group parameters, multi-indices and enumeration of the points of Omega_N^n.

A multi-index is a plain tuple of non-negative ints.  Group points are
addressed by their exponent vector ``k``; the actual point is
``(omega**k_1, ..., omega**k_n)``.

A ``GroupParams`` may carry extra order-2 variables (``n_boolean``).  These
model the doubled domain Omega_N^n x Omega_2^n used by the pseudo-projection;
the order-N variables always come first.
"""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch

DEFAULT_BUDGET = 10**8


def get_budget(budget: int | None = None) -> int:
    """Resolve the enumeration budget (explicit value, then ``CYCLOBH_BUDGET``)."""
    if budget is not None:
        return int(budget)
    env = os.environ.get("CYCLOBH_BUDGET")
    if env:
        return int(float(env))
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class GroupParams:
    N: int
    n: int
    n_boolean: int = 0

    def __post_init__(self):
        if self.N < 2:
            raise ValueError(f"group order must be >= 2, got {self.N}")
        if self.n < 1:
            raise ValueError(f"need at least one variable, got n={self.n}")
        if self.n_boolean < 0:
            raise ValueError("n_boolean must be non-negative")

    @cached_property
    def omega(self) -> complex:
        return complex(np.exp(2j * np.pi / self.N))

    @cached_property
    def roots(self) -> np.ndarray:
        """Table ``omega**k`` for k = 0..N-1."""
        return np.exp(2j * np.pi * np.arange(self.N) / self.N)

    @property
    def nvars(self) -> int:
        return self.n + self.n_boolean

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return (self.N,) * self.n + (2,) * self.n_boolean

    @property
    def size(self) -> int:
        """Number of group points."""
        return self.N**self.n * 2**self.n_boolean

    @cached_property
    def phase_modulus(self) -> int:
        return math.lcm(*self.orders)

    @cached_property
    def phase_weights(self) -> np.ndarray:
        L = self.phase_modulus
        return np.array([L // q for q in self.orders], dtype=np.int64)

    @cached_property
    def phase_table(self) -> np.ndarray:
        L = self.phase_modulus
        return np.exp(2j * np.pi * np.arange(L) / L)

    def validate_index(self, alpha) -> tuple[int, ...]:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.nvars:
            raise DimensionMismatch(f"index {alpha} has length {len(alpha)}, expected {self.nvars}")
        for a, q in zip(alpha, self.orders):
            if not 0 <= a < q:
                raise ValueError(f"exponent {a} out of range [0, {q - 1}] in {alpha}")
        return alpha

    def to_json(self) -> dict:
        out = {"N": self.N, "n": self.n}
        if self.n_boolean:
            out["n_boolean"] = self.n_boolean
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GroupParams":
        return cls(int(obj["N"]), int(obj["n"]), int(obj.get("n_boolean", 0)))


def degree(alpha) -> int:
    return int(sum(alpha))


def support_size(alpha) -> int:
    return sum(1 for a in alpha if a != 0)


def support(alpha) -> tuple[int, ...]:
    return tuple(j for j, a in enumerate(alpha) if a != 0)


def check_budget(params: GroupParams, budget: int | None = None) -> None:
    budget = get_budget(budget)
    if params.size > budget:
        raise BudgetExceeded(f"{params.size} group points exceed the enumeration budget {budget}")


def group_exponents(params: GroupParams, budget: int | None = None) -> np.ndarray:
    """All exponent vectors of the group, shape ``(size, nvars)``, mixed-radix order.

    The last coordinate varies fastest, matching C-order flattening of an
    array of shape ``params.orders``.
    """
    check_budget(params, budget)
    grids = np.indices(params.orders, dtype=np.int64)
    return grids.reshape(params.nvars, -1).T


def exponents_to_points(params: GroupParams, k: np.ndarray) -> np.ndarray:
    k = np.asarray(k, dtype=np.int64)
    orders = np.array(params.orders)
    return np.exp(2j * np.pi * k / orders)


def enumerate_group_points(params: GroupParams, budget: int | None = None):
    """Yield every point of the group as a tuple of complex numbers."""
    check_budget(params, budget)
    tables = [np.exp(2j * np.pi * np.arange(q) / q) for q in params.orders]
    for k in itertools.product(*(range(q) for q in params.orders)):
        yield tuple(complex(tables[j][kj]) for j, kj in enumerate(k))


def enumerate_indices(params: GroupParams, max_degree: int):
    """Yield every multi-index with total degree <= max_degree in lexicographic order."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    orders = params.orders
    nv = len(orders)
    prefix = [0] * nv

    def rec(j, remaining):
        if j == nv:
            yield tuple(prefix)
            return
        for e in range(min(orders[j] - 1, remaining) + 1):
            prefix[j] = e
            yield from rec(j + 1, remaining - e)
        prefix[j] = 0

    yield from rec(0, max_degree)


def index_count_bound(n: int, d: int) -> int:
    """sum_{k<=d} C(n+k, n), the crude count of indices of degree <= d."""
    return sum(math.comb(n + k, n) for k in range(d + 1))


def monomial_phases(params: GroupParams, k: np.ndarray, alphas: np.ndarray) -> np.ndarray:
    """Integer phases (mod the phase modulus) of ``z**alpha`` at exponent points ``k``.

    Returns an int array of shape ``(len(k), len(alphas))``.
    """
    kw = np.asarray(k, dtype=np.int64) * params.phase_weights
    return (kw @ np.asarray(alphas, dtype=np.int64).T) % params.phase_modulus


def character_matrix(params: GroupParams, k: np.ndarray, alphas) -> np.ndarray:
    """``E[i, t] = z_i ** alpha_t`` for group points with exponents ``k``."""
    alphas = np.asarray(alphas, dtype=np.int64).reshape(-1, params.nvars)
    return params.phase_table[monomial_phases(params, k, alphas)]


def is_prime(N: int) -> bool:
    if N < 2:
        return False
    return all(N % p for p in range(2, math.isqrt(N) + 1))
