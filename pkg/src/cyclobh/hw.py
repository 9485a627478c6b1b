"""Heisenberg-Weyl basis for qudit observables: shift/phase matrices, expansion, operator norm."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bounds import BOOLEAN_BASE, hw_bh_bound
from .errors import BudgetExceeded, DegreeExceeded, DimensionMismatch, NonConvergence, ZeroPolynomial
from .groups import GroupParams, group_exponents, is_prime
from .polynomial import PRUNE_TOL, bh_exponent

DENSE_DIM_LIMIT = 1 << 12
POWER_TOL = 1e-10
POWER_RESTARTS = 3
POWER_MAX_ITER = 20_000


def shift_matrix(N: int) -> np.ndarray:
    """X with X e_j = e_{j+1 mod N}."""
    return np.roll(np.eye(N, dtype=complex), 1, axis=0)


def phase_matrix(N: int) -> np.ndarray:
    """Z with Z e_j = omega^j e_j."""
    return np.diag(np.exp(2j * np.pi * np.arange(N) / N))


@dataclass(frozen=True)
class HWBasisElement:
    N: int
    l: int
    m: int

    @property
    def matrix(self) -> np.ndarray:
        return np.linalg.matrix_power(shift_matrix(self.N), self.l) @ np.linalg.matrix_power(
            phase_matrix(self.N), self.m)


def hw_basis(N: int) -> list[HWBasisElement]:
    """All N^2 elements X^l Z^m, ordered by (l, m)."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return [HWBasisElement(N, l, m) for l in range(N) for m in range(N)]


def normalized_inner(A: np.ndarray, B: np.ndarray) -> complex:
    """<A, B> = tr(A^dagger B) / dim."""
    return complex(np.vdot(A, B) / A.shape[0])


def hw_element_matrix(N: int, l, m) -> np.ndarray:
    """Dense X^{l_1} Z^{m_1} (x) ... (x) X^{l_n} Z^{m_n}."""
    out = np.ones((1, 1), dtype=complex)
    for lj, mj in zip(l, m):
        out = np.kron(out, HWBasisElement(N, int(lj), int(mj)).matrix)
    return out


class HWObservable:
    """Sparse expansion ``A = sum A_hat(l, m) X^l Z^m`` of an n-qudit operator.

    Keys are pairs of exponent tuples ``(l, m)`` with entries in [0, N-1].
    """

    __slots__ = ("N", "n", "_coeffs")

    def __init__(self, N: int, n: int, coeffs=None, prune: float = PRUNE_TOL):
        GroupParams(N, n)
        self.N, self.n = N, n
        items = {}
        for (l, m), c in (coeffs or {}).items():
            l, m = tuple(int(x) for x in l), tuple(int(x) for x in m)
            if len(l) != n or len(m) != n:
                raise DimensionMismatch(f"key {(l, m)} does not have {n} qudits")
            if any(not 0 <= x < N for x in l + m):
                raise ValueError(f"key {(l, m)} has an exponent outside [0, {N - 1}]")
            c = complex(c)
            if abs(c) > prune:
                items[(l, m)] = items.get((l, m), 0j) + c
        self._coeffs = {k: items[k] for k in sorted(items)}

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def items(self):
        return self._coeffs.items()

    def __getitem__(self, key) -> complex:
        l, m = key
        return self._coeffs.get((tuple(l), tuple(m)), 0j)

    def __len__(self) -> int:
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def hw_degree(self) -> int:
        """max of sum_j (l_j + m_j); the sum is not reduced mod N."""
        return max((sum(l) + sum(m) for l, m in self._coeffs), default=0)

    def coeff_array(self) -> np.ndarray:
        return np.array(list(self._coeffs.values()), dtype=complex)

    def __add__(self, other):
        if (other.N, other.n) != (self.N, self.n):
            raise DimensionMismatch("observables act on different spaces")
        out = dict(self._coeffs)
        for k, c in other.items():
            out[k] = out.get(k, 0j) + c
        return HWObservable(self.N, self.n, out)

    def __mul__(self, scalar):
        return HWObservable(self.N, self.n, {k: scalar * c for k, c in self._coeffs.items()})

    __rmul__ = __mul__

    def to_dense(self, budget: int = DENSE_DIM_LIMIT) -> np.ndarray:
        return hw_synthesize(self, budget)

    def to_json(self) -> dict:
        return {"N": self.N, "n": self.n,
                "terms": [{"l": list(l), "m": list(m), "re": float(c.real), "im": float(c.imag)}
                          for (l, m), c in self._coeffs.items()]}

    @classmethod
    def from_json(cls, obj: dict) -> "HWObservable":
        return cls(int(obj["N"]), int(obj["n"]),
                   {(tuple(t["l"]), tuple(t["m"])): complex(t["re"], t["im"]) for t in obj["terms"]})

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def loads(cls, text: str) -> "HWObservable":
        return cls.from_json(json.loads(text))

    def __repr__(self):
        return f"HWObservable(N={self.N}, n={self.n}, terms={len(self)})"


def _check_dim(N: int, n: int, budget: int) -> int:
    dim = N**n
    if dim > budget:
        raise BudgetExceeded(f"dimension N^n = {dim} exceeds the dense budget {budget}")
    return dim


def _shift_tables(N: int, n: int):
    """Exponent vectors c (C order) and, per shift l, the flat row index of c + l."""
    params = GroupParams(N, n)
    C = group_exponents(params)
    rows = np.zeros((len(C), len(C)), dtype=np.int64)
    for j in range(n):
        rows = rows * N + (C[:, None, j] + C[None, :, j]) % N
    return C, rows


def hw_analyze(A, N: int, n: int, budget: int = DENSE_DIM_LIMIT) -> HWObservable:
    """Coefficients A_hat(l, m) = N^{-n} tr((X^l Z^m)^dagger A).

    For fixed l the coefficients are the discrete Fourier transform of the
    shifted diagonal c -> A[c + l, c], so one FFT per shift suffices.
    """
    dim = _check_dim(N, n, budget)
    A = np.asarray(A, dtype=complex)
    if A.shape != (dim, dim):
        raise DimensionMismatch(f"matrix shape {A.shape} does not match N^n = {dim}")
    C, rows = _shift_tables(N, n)
    cols = np.arange(dim)
    diag = A[rows, cols[None, :]]
    spectra = np.fft.fftn(diag.reshape((dim,) + (N,) * n), axes=tuple(range(1, n + 1))) / dim
    spectra = spectra.reshape(dim, dim)
    keys = [tuple(int(x) for x in c) for c in C]
    coeffs = {}
    for i, l in enumerate(keys):
        for j in np.flatnonzero(np.abs(spectra[i]) > PRUNE_TOL):
            coeffs[(l, keys[j])] = spectra[i, j]
    return HWObservable(N, n, coeffs)


def hw_synthesize(obs: HWObservable, budget: int = DENSE_DIM_LIMIT) -> np.ndarray:
    """Dense matrix of an observable; inverse of ``hw_analyze``."""
    N, n = obs.N, obs.n
    dim = _check_dim(N, n, budget)
    weights = N ** np.arange(n - 1, -1, -1)
    spectra = np.zeros((dim, dim), dtype=complex)
    for (l, m), c in obs.items():
        spectra[int(np.dot(l, weights)), int(np.dot(m, weights))] = c
    diag = np.fft.ifftn(spectra.reshape((dim,) + (N,) * n), axes=tuple(range(1, n + 1))) * dim
    _, rows = _shift_tables(N, n)
    A = np.zeros((dim, dim), dtype=complex)
    A[rows, np.arange(dim)[None, :]] = diag.reshape(dim, dim)
    return A


def operator_norm(A, seed: int = 0, tol: float = POWER_TOL, restarts: int = POWER_RESTARTS,
                  max_iter: int = POWER_MAX_ITER) -> float:
    """Largest singular value by power iteration on A^dagger A.

    Closed forms are used for 1x1 and 2x2 matrices.  Each restart begins from
    a fresh random vector and the largest converged value is returned.
    """
    if isinstance(A, HWObservable):
        A = hw_synthesize(A)
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise DimensionMismatch("operator_norm needs a matrix")
    G = A.conj().T @ A
    if G.shape == (1, 1):
        return float(np.sqrt(G[0, 0].real))
    if G.shape == (2, 2):
        tr = G[0, 0].real + G[1, 1].real
        det = (G[0, 0] * G[1, 1] - G[0, 1] * G[1, 0]).real
        return float(np.sqrt(max(tr / 2 + np.sqrt(max(tr * tr / 4 - det, 0.0)), 0.0)))
    if not np.any(G):
        return 0.0
    rng = np.random.default_rng(seed)
    best, converged = 0.0, False
    for _ in range(restarts):
        v = rng.standard_normal(G.shape[0]) + 1j * rng.standard_normal(G.shape[0])
        v /= np.linalg.norm(v)
        lam = 0.0
        for _ in range(max_iter):
            w = G @ v
            new = float(np.vdot(v, w).real)
            nw = np.linalg.norm(w)
            if nw == 0:
                break
            v = w / nw
            if abs(new - lam) <= tol * max(abs(new), 1e-300):
                converged = True
                lam = new
                break
            lam = new
        best = max(best, lam)
    if not converged:
        raise NonConvergence(f"power iteration did not reach tolerance {tol}", best=math.sqrt(best))
    return math.sqrt(best)


@dataclass(frozen=True)
class HWQuotient:
    d: int
    lhs: float
    norm: float
    quotient: float
    explicit_bound: float
    bound_applies: bool

    @property
    def violates_bound(self) -> bool:
        return self.bound_applies and self.quotient > self.explicit_bound

    def to_json(self) -> dict:
        return {"d": self.d, "lhs": self.lhs, "operator_norm": self.norm, "quotient": self.quotient,
                "explicit_bound": self.explicit_bound if self.bound_applies else None,
                "bound_applies": self.bound_applies}


def hw_bh_quotient(obs: HWObservable, d: int | None = None, seed: int = 0,
                   boolean_base: float = BOOLEAN_BASE) -> HWQuotient:
    """||A_hat||_{2d/(d+1)} / ||A||, compared with (N+1)^d times the cyclic bound.

    The comparison is only meaningful for an odd prime N; otherwise
    ``bound_applies`` is False.
    """
    if obs.is_zero():
        raise ZeroPolynomial("BH quotient of the zero observable")
    if d is None:
        d = max(obs.hw_degree, 1)
    if obs.hw_degree > d:
        raise DegreeExceeded(f"observable has HW degree {obs.hw_degree} > {d}")
    p = bh_exponent(d)
    lhs = float(np.sum(np.abs(obs.coeff_array()) ** p) ** (1 / p))
    norm = operator_norm(obs, seed=seed)
    applies = obs.N > 2 and is_prime(obs.N)
    bound = hw_bh_bound(d, obs.N, boolean_base) if applies else math.inf
    return HWQuotient(d, lhs, norm, lhs / norm, bound, applies)


def random_observable(N: int, n: int, d: int, density: float = 1.0, seed=0) -> HWObservable:
    """Random observable with complex Gaussian coefficients on keys of HW degree <= d."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    C = group_exponents(GroupParams(N, n))
    coeffs = {}
    for l in C:
        for m in C:
            if l.sum() + m.sum() <= d and rng.random() < density:
                coeffs[(tuple(l), tuple(m))] = complex(rng.standard_normal(), rng.standard_normal())
    if not coeffs:
        coeffs[((0,) * n, (0,) * n)] = 1.0
    return HWObservable(N, n, coeffs)
