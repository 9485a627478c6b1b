"""Sparse polynomials on Omega_N^n: evaluation, Fourier analysis/synthesis, norms."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, IncompleteSamples
from .groups import (
    GroupParams,
    check_budget,
    character_matrix,
    degree,
    enumerate_indices,
    get_budget,
    support_size,
)

PRUNE_TOL = 1e-14
# above this many points the exhaustive sup norm is evaluated in chunks instead of one FFT
DENSE_LIMIT = 1 << 22
CHUNK = 1 << 15


class CyclicPolynomial:
    """Polynomial ``sum_alpha a_alpha z**alpha`` stored as a sparse index -> coefficient map.

    Coefficients with modulus below ``PRUNE_TOL`` are dropped on construction
    and the terms are kept in lexicographic index order.  Instances are
    treated as immutable.
    """

    __slots__ = ("params", "_coeffs")

    def __init__(self, params: GroupParams, coeffs=None, prune: float = PRUNE_TOL):
        self.params = params
        items = {}
        for alpha, c in (coeffs or {}).items():
            alpha = params.validate_index(alpha)
            c = complex(c)
            if abs(c) > prune:
                items[alpha] = items.get(alpha, 0j) + c
        self._coeffs = {a: items[a] for a in sorted(items)}

    # -- basic accessors -------------------------------------------------
    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, alpha) -> complex:
        return self._coeffs.get(tuple(alpha), 0j)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self):
        return iter(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def degree(self) -> int:
        return max((degree(a) for a in self._coeffs), default=0)

    @property
    def max_support_size(self) -> int:
        return max((support_size(a) for a in self._coeffs), default=0)

    def alpha_array(self) -> np.ndarray:
        if not self._coeffs:
            return np.zeros((0, self.params.nvars), dtype=np.int64)
        return np.array(list(self._coeffs), dtype=np.int64)

    def coeff_array(self) -> np.ndarray:
        return np.array(list(self._coeffs.values()), dtype=complex)

    # -- arithmetic -------------------------------------------------------
    def _check_same(self, other):
        if other.params != self.params:
            raise DimensionMismatch(f"{other.params} vs {self.params}")

    def __add__(self, other):
        self._check_same(other)
        out = dict(self._coeffs)
        for a, c in other.items():
            out[a] = out.get(a, 0j) + c
        return CyclicPolynomial(self.params, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, scalar):
        return CyclicPolynomial(self.params, {a: scalar * c for a, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self * (1 / scalar)

    def map_coeffs(self, fn):
        """New polynomial with ``a_alpha`` replaced by ``fn(alpha, a_alpha)``."""
        return CyclicPolynomial(self.params, {a: fn(a, c) for a, c in self._coeffs.items()})

    def restrict(self, pred):
        return CyclicPolynomial(self.params, {a: c for a, c in self._coeffs.items() if pred(a)})

    def translate(self, k) -> "CyclicPolynomial":
        """The polynomial ``z -> f(xi * z)`` for the group point with exponents ``k``."""
        k = np.asarray(k, dtype=np.int64).reshape(1, -1)
        if self.is_zero():
            return self
        chars = character_matrix(self.params, k, self.alpha_array())[0]
        return CyclicPolynomial(self.params, dict(zip(self._coeffs, self.coeff_array() * chars)))

    def max_coeff_diff(self, other) -> float:
        self._check_same(other)
        keys = set(self._coeffs) | set(other._coeffs)
        return max((abs(self[a] - other[a]) for a in keys), default=0.0)

    def __repr__(self):
        terms = ", ".join(f"{a}: {c:.6g}" for a, c in list(self._coeffs.items())[:6])
        more = "" if len(self) <= 6 else f", ... (+{len(self) - 6})"
        return f"CyclicPolynomial(N={self.params.N}, n={self.params.n}, {{{terms}{more}}})"

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        out = self.params.to_json()
        out["terms"] = [
            {"alpha": list(a), "re": float(c.real), "im": float(c.imag)} for a, c in self._coeffs.items()
        ]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CyclicPolynomial":
        params = GroupParams.from_json(obj)
        coeffs = {}
        for t in obj.get("terms", []):
            alpha = tuple(int(x) for x in t["alpha"])
            coeffs[alpha] = coeffs.get(alpha, 0j) + complex(float(t.get("re", 0.0)), float(t.get("im", 0.0)))
        return cls(params, coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "CyclicPolynomial":
        return cls.from_json(json.loads(text))


def monomial(params: GroupParams, alpha, c: complex = 1.0) -> CyclicPolynomial:
    return CyclicPolynomial(params, {tuple(alpha): c})


def constant(params: GroupParams, c: complex) -> CyclicPolynomial:
    return CyclicPolynomial(params, {(0,) * params.nvars: c})


@dataclass(frozen=True)
class NormReport:
    value: float
    certified: bool
    samples_used: int

    def to_json(self) -> dict:
        return {"value": self.value, "certified": self.certified, "samples_used": self.samples_used}


# -- evaluation -------------------------------------------------------------
def evaluate(f: CyclicPolynomial, z) -> complex:
    """Value of the polynomial extension of ``f`` at an arbitrary point of C^n."""
    z = [complex(x) for x in z]
    if len(z) != f.params.nvars:
        raise DimensionMismatch(f"point has {len(z)} coordinates, expected {f.params.nvars}")
    total = 0j
    for alpha, c in f.items():
        term = c
        for zj, e in zip(z, alpha):
            if e:
                term *= zj**e
        total += term
    return total


def evaluate_many(f: CyclicPolynomial, Z: np.ndarray) -> np.ndarray:
    """Vectorised ``evaluate`` over the rows of ``Z`` (shape ``(m, nvars)``)."""
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or Z.shape[1] != f.params.nvars:
        raise DimensionMismatch(f"expected points of shape (m, {f.params.nvars}), got {Z.shape}")
    if f.is_zero():
        return np.zeros(len(Z), dtype=complex)
    alphas = f.alpha_array()
    coeffs = f.coeff_array()
    maxe = int(alphas.max())
    out = np.empty(len(Z), dtype=complex)
    for start in range(0, len(Z), CHUNK):
        block = Z[start:start + CHUNK]
        # powers[i, j, e] = block[i, j] ** e
        powers = np.cumprod(np.concatenate(
            [np.ones(block.shape + (1,), dtype=complex), np.repeat(block[:, :, None], maxe, axis=2)], axis=2), axis=2)
        mono = np.ones((len(block), len(alphas)), dtype=complex)
        for j in range(f.params.nvars):
            mono *= powers[:, j, :][:, alphas[:, j]]
        out[start:start + CHUNK] = mono @ coeffs
    return out


def evaluate_at_exponents(f: CyclicPolynomial, k: np.ndarray) -> np.ndarray:
    """Values at the group points with exponent vectors ``k`` (exact root-of-unity phases)."""
    k = np.asarray(k, dtype=np.int64).reshape(-1, f.params.nvars)
    if f.is_zero():
        return np.zeros(len(k), dtype=complex)
    alphas = f.alpha_array()
    coeffs = f.coeff_array()
    out = np.empty(len(k), dtype=complex)
    step = max(1, CHUNK * 16 // max(1, len(alphas)))
    for start in range(0, len(k), step):
        out[start:start + step] = character_matrix(f.params, k[start:start + step], alphas) @ coeffs
    return out


def dense_coefficients(f: CyclicPolynomial) -> np.ndarray:
    A = np.zeros(f.params.orders, dtype=complex)
    if not f.is_zero():
        A[tuple(f.alpha_array().T)] = f.coeff_array()
    return A


def synthesize(f: CyclicPolynomial, budget: int | None = None) -> np.ndarray:
    """Values of ``f`` on every group point, as an array of shape ``params.orders``.

    Entry ``[k_1, ..., k_n]`` is ``f(omega**k_1, ..., omega**k_n)``.
    """
    check_budget(f.params, budget)
    return np.fft.ifftn(dense_coefficients(f)) * f.params.size


def fourier_analyze(samples, params: GroupParams, prune: float = PRUNE_TOL) -> CyclicPolynomial:
    """Coefficients ``a_alpha = E_z[f(z) conj(z**alpha)]`` from a full table of values.

    ``samples`` is either an array (shape ``params.orders`` or flat in
    mixed-radix order) or a mapping from exponent tuples ``k`` to values.
    """
    if isinstance(samples, dict):
        values = np.full(params.orders, np.nan + 0j, dtype=complex)
        for k, v in samples.items():
            values[tuple(k)] = v
        if np.isnan(values.real).any():
            missing = int(np.isnan(values.real).sum())
            raise IncompleteSamples(f"{missing} of {params.size} group points have no sample")
    else:
        values = np.asarray(samples, dtype=complex)
        if values.size != params.size:
            raise IncompleteSamples(f"got {values.size} samples for {params.size} group points")
        values = values.reshape(params.orders)
    A = np.fft.fftn(values) / params.size
    idx = np.argwhere(np.abs(A) > prune)
    return CyclicPolynomial(params, {tuple(int(x) for x in a): A[tuple(a)] for a in idx}, prune=prune)


# -- norms -------------------------------------------------------------------
def sup_norm(f: CyclicPolynomial, budget: int | None = None, rng_seed: int = 0) -> NormReport:
    """Sup of ``|f|`` over the group.

    Exhaustive (certified) when the group fits in the budget, otherwise the max
    over ``budget`` uniform random points, which only bounds the sup from below.
    """
    params = f.params
    budget = get_budget(budget)
    if f.is_zero():
        return NormReport(0.0, params.size <= budget, min(params.size, budget))
    if params.size <= budget:
        if params.size <= DENSE_LIMIT:
            return NormReport(float(np.abs(synthesize(f, budget)).max()), True, params.size)
        best = 0.0
        for start in range(0, params.size, CHUNK):
            flat = np.arange(start, min(start + CHUNK, params.size))
            k = np.stack(np.unravel_index(flat, params.orders), axis=1)
            best = max(best, float(np.abs(evaluate_at_exponents(f, k)).max()))
        return NormReport(best, True, params.size)
    rng = np.random.default_rng(rng_seed)
    best = 0.0
    for start in range(0, budget, CHUNK):
        m = min(CHUNK, budget - start)
        k = rng.integers(0, params.orders, size=(m, params.nvars))
        best = max(best, float(np.abs(evaluate_at_exponents(f, k)).max()))
    return NormReport(best, False, budget)


def coeff_lp_norm(f: CyclicPolynomial, p: float) -> float:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if f.is_zero():
        return 0.0
    a = np.abs(f.coeff_array())
    scale = a.max()
    return float(scale * np.sum((a / scale) ** p) ** (1.0 / p))


def l2_norm(f: CyclicPolynomial) -> float:
    """L2 norm w.r.t. the uniform probability measure (= coefficient l2 norm by Parseval)."""
    return coeff_lp_norm(f, 2.0)


def l2_norm_spatial(f: CyclicPolynomial, budget: int | None = None) -> float:
    """sqrt(E_z |f(z)|^2) computed from the values on all group points."""
    vals = synthesize(f, budget)
    return float(np.sqrt(np.mean(np.abs(vals) ** 2)))


def bh_exponent(d: int) -> float:
    """The exponent 2d/(d+1), with d clamped to at least 1."""
    d = max(int(d), 1)
    return 2 * d / (d + 1)


def truncate_by_degree(f: CyclicPolynomial, d: int) -> CyclicPolynomial:
    if d < 0:
        raise ValueError("d must be >= 0")
    return f.restrict(lambda a: degree(a) <= d)


def random_polynomial(params: GroupParams, d: int, density: float = 1.0,
                      coeff_law: str = "complex_gaussian", rng_seed=0) -> CyclicPolynomial:
    """Random polynomial of degree <= d: each admissible index kept with probability ``density``.

    ``rng_seed`` may be an int or a ``numpy.random.Generator``.
    """
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    indices = list(enumerate_indices(params, d))
    keep = rng.random(len(indices)) < density
    m = int(keep.sum())
    if coeff_law == "unit_circle":
        vals = np.exp(2j * np.pi * rng.random(m))
    elif coeff_law == "complex_gaussian":
        vals = (rng.standard_normal(m) + 1j * rng.standard_normal(m)) / np.sqrt(2)
    else:
        raise ValueError(f"unknown coefficient law {coeff_law!r}")
    chosen = [a for a, k in zip(indices, keep) if k]
    return CyclicPolynomial(params, dict(zip(chosen, vals)))
