"""BH quotients, empirical search for large quotients, Sidon and Bohr quantities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import BOOLEAN_BASE, cyclic_bh_bound
from .errors import DegreeExceeded, NotHomogeneous, ZeroPolynomial
from .groups import (
    GroupParams,
    character_matrix,
    degree,
    enumerate_indices,
    get_budget,
    group_exponents,
    index_count_bound,
)
from .polynomial import CyclicPolynomial, NormReport, bh_exponent, coeff_lp_norm, random_polynomial, sup_norm


@dataclass(frozen=True)
class BHQuotient:
    d: int
    lhs: float
    rhs: NormReport
    quotient: float
    explicit_bound: float

    @property
    def exponent(self) -> float:
        return bh_exponent(self.d)

    @property
    def certified(self) -> bool:
        return self.rhs.certified

    @property
    def violates_bound(self) -> bool:
        return self.quotient > self.explicit_bound

    def to_json(self) -> dict:
        return {"d": self.d, "lhs": self.lhs, "rhs": self.rhs.to_json(), "quotient": self.quotient,
                "explicit_bound": None if math.isinf(self.explicit_bound) else self.explicit_bound}


def bh_quotient(f: CyclicPolynomial, d: int | None = None, budget: int | None = None, seed: int = 0,
                boolean_base: float = BOOLEAN_BASE) -> BHQuotient:
    """||a||_{2d/(d+1)} / ||f||_sup for a polynomial of degree <= d."""
    if f.is_zero():
        raise ZeroPolynomial("BH quotient of the zero polynomial")
    if d is None:
        d = max(f.degree, 1)
    if f.degree > d:
        raise DegreeExceeded(f"polynomial has degree {f.degree} > {d}")
    lhs = coeff_lp_norm(f, bh_exponent(d))
    rhs = sup_norm(f, budget, seed)
    return BHQuotient(d, lhs, rhs, lhs / rhs.value, cyclic_bh_bound(d, f.params.N, boolean_base))


@dataclass
class SearchReport:
    best_quotient: float
    best_polynomial: CyclicPolynomial
    iterations: int
    seed: int
    strategy: str
    certified: bool
    explicit_bound: float
    trajectory: list = field(default_factory=list)

    @property
    def violates_bound(self) -> bool:
        return self.best_quotient > self.explicit_bound

    def to_json(self) -> dict:
        return {"best_quotient": self.best_quotient, "best_polynomial": self.best_polynomial.to_json(),
                "iterations": self.iterations, "seed": self.seed, "strategy": self.strategy,
                "certified": self.certified,
                "explicit_bound": None if math.isinf(self.explicit_bound) else self.explicit_bound,
                "trajectory": [list(t) for t in self.trajectory]}

    def trajectory_csv(self) -> str:
        return "iteration,quotient\n" + "".join(f"{i},{q!r}\n" for i, q in self.trajectory)


class _QuotientEvaluator:
    """Fast BH quotient for coefficient vectors over a fixed index list."""

    def __init__(self, params: GroupParams, indices, d: int, budget, seed):
        self.params = params
        self.indices = list(indices)
        self.p = bh_exponent(d)
        budget = get_budget(budget)
        self.certified = params.size <= budget
        if self.certified:
            k = group_exponents(params, budget)
        else:
            k = np.random.default_rng(seed).integers(0, params.orders, size=(budget, params.nvars))
        self.E = character_matrix(params, k, np.array(self.indices))

    def __call__(self, c: np.ndarray) -> float:
        s = np.abs(self.E @ c).max()
        if s <= 0:
            return 0.0
        a = np.abs(c)
        return float(np.sum(a**self.p) ** (1 / self.p) / s)

    def polynomial(self, c) -> CyclicPolynomial:
        return CyclicPolynomial(self.params, dict(zip(self.indices, c)))


def _coefficient_vector(f: CyclicPolynomial, pos: dict) -> np.ndarray:
    c = np.zeros(len(pos), dtype=complex)
    for a, v in f.items():
        c[pos[a]] = v
    return c


def bh_constant_search(params: GroupParams, d: int, iterations: int, strategy: str = "coordinate_ascent",
                       seed: int = 0, start: CyclicPolynomial | None = None, budget: int | None = None,
                       initial_step: float = 0.5, patience: int = 50, min_step: float = 1e-6) -> SearchReport:
    """Maximise the BH quotient over polynomials of degree <= d.

    ``random`` draws fresh random polynomials; ``coordinate_ascent`` perturbs one
    coefficient at a time (multiplicative complex steps for nonzero
    coefficients, additive ones for zero coefficients), keeps improvements,
    halves the step after ``patience`` consecutive rejections and, once the
    step falls below ``min_step``, restarts from a fresh random polynomial
    (seeded from ``(seed, restart)``) until the iterations are used up.  The
    best polynomial over all restarts is reported.
    """
    rng = np.random.default_rng(seed)
    indices = list(enumerate_indices(params, d))
    ev = _QuotientEvaluator(params, indices, d, budget, seed)
    pos = {a: i for i, a in enumerate(indices)}
    if start is None:
        start = random_polynomial(params, d, 1.0, "unit_circle", rng)
    if start.degree > d:
        raise DegreeExceeded(f"start polynomial has degree {start.degree} > {d}")
    c = _coefficient_vector(start, pos)
    best = ev(c)
    trajectory = [(0, best)]
    done = 0

    if strategy == "random":
        for it in range(1, iterations + 1):
            trial = rng.standard_normal(len(c)) + 1j * rng.standard_normal(len(c))
            trial *= rng.random(len(c)) < rng.uniform(0.2, 1.0)
            q = ev(trial)
            done = it
            if q > best:
                best, c = q, trial
                trajectory.append((it, best))
    elif strategy == "coordinate_ascent":
        step = initial_step
        rejections = 0
        restart = 0
        cur, cur_q = c.copy(), best
        for it in range(1, iterations + 1):
            done = it
            if step < min_step:
                # converged: restart from a fresh polynomial drawn from a counter-derived seed
                restart += 1
                rs = np.random.default_rng([seed, restart])
                cur = _coefficient_vector(random_polynomial(params, d, 1.0, "unit_circle", rs), pos)
                cur_q, step, rejections = ev(cur), initial_step, 0
            j = rng.integers(len(cur))
            g = complex(rng.standard_normal(), rng.standard_normal())
            trial = cur.copy()
            if abs(cur[j]) > 0:
                trial[j] = cur[j] * np.exp(step * g)
            else:
                trial[j] = step * g * max(np.abs(cur).max(), 1.0)
            q = ev(trial)
            if q > cur_q:
                cur, cur_q = trial, q
                rejections = 0
                if q > best:
                    best, c = q, trial
                    trajectory.append((it, best))
            else:
                rejections += 1
                if rejections >= patience:
                    step /= 2
                    rejections = 0
    else:
        raise ValueError(f"unknown search strategy {strategy!r}")

    best_poly = ev.polynomial(c)
    # report the quotient recomputed from scratch for the returned polynomial
    best = bh_quotient(best_poly, d, budget, seed).quotient if not best_poly.is_zero() else 0.0
    return SearchReport(best, best_poly, done, seed, strategy, ev.certified,
                        cyclic_bh_bound(d, params.N), trajectory)


def sidon_quotient(f: CyclicPolynomial, budget: int | None = None, seed: int = 0) -> float:
    """sum |a_alpha| / ||f||_sup."""
    if f.is_zero():
        raise ZeroPolynomial("Sidon quotient of the zero polynomial")
    return coeff_lp_norm(f, 1.0) / sup_norm(f, budget, seed).value


def sidon_bound(params: GroupParams, d: int, bh_constant: float | None = None) -> float:
    """BH constant times (sum_{k<=d} C(n+k, n))^{(d-1)/(2d)}."""
    C = cyclic_bh_bound(d, params.N) if bh_constant is None else bh_constant
    return C * index_count_bound(params.n, d) ** ((d - 1) / (2 * d))


def bohr_radius_lower_bound(params: GroupParams, d: int, bh_constant: float | None = None) -> float:
    """[BH * C(n+d, n)^{(d-1)/(2d)}]^{-1/d} for d-homogeneous polynomials."""
    if d < 1:
        raise ValueError("d must be >= 1")
    C = cyclic_bh_bound(d, params.N) if bh_constant is None else bh_constant
    return (C * math.comb(params.n + d, params.n) ** ((d - 1) / (2 * d))) ** (-1.0 / d)


@dataclass(frozen=True)
class BohrCheck:
    rho: float
    weighted_l1: float
    sup: NormReport
    holds: bool


def bohr_check(f: CyclicPolynomial, rho: float, budget: int | None = None, seed: int = 0) -> BohrCheck:
    """Check sum |a_alpha| rho^|alpha| <= ||f||_sup for a homogeneous polynomial."""
    degs = {degree(a) for a in f}
    if len(degs) > 1:
        raise NotHomogeneous(f"polynomial mixes degrees {sorted(degs)}")
    s = sup_norm(f, budget, seed)
    total = float(sum(abs(c) * rho ** degree(a) for a, c in f.items()))
    return BohrCheck(rho, total, s, total <= s.value * (1 + 1e-12))
