"""Support-homogeneous splitting: tau factors, the maximal-support pseudo-projection,
and the two recovery schemes for the top support-homogeneous part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import DN_GROWTH, rotating_constant, split_constant, splitting_bound
from .errors import AccumulationMismatch, IllConditioned, NotPrime, PairCollision, ZeroPolynomial
from .groups import GroupParams, is_prime, support_size
from .polynomial import CyclicPolynomial, NormReport, sup_norm

TAU_GROUP_RTOL = 1e-9
ACCUMULATION_RTOL = 1e-9
RESIDUAL_RTOL = 1e-6


@dataclass
class SupportDecomposition:
    parts: list
    source_sup_norm: NormReport | None = None
    part_sup_norms: list = field(default_factory=list)
    bounds: list = field(default_factory=list)
    method: str = "direct"

    def total(self) -> CyclicPolynomial:
        out = self.parts[0]
        for p in self.parts[1:]:
            out = out + p
        return out

    def violations(self) -> list[int]:
        """Support sizes j whose measured ratio ||f_j|| / ||f|| exceeds the recorded bound."""
        if not self.bounds or self.source_sup_norm is None or not self.part_sup_norms:
            return []
        ref = self.source_sup_norm.value
        return [j for j, (nr, b) in enumerate(zip(self.part_sup_norms, self.bounds))
                if b is not None and nr.value > b * ref * (1 + 1e-12)]

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "parts": [p.to_json() for p in self.parts],
            "source_sup_norm": self.source_sup_norm.to_json() if self.source_sup_norm else None,
            "part_sup_norms": [nr.to_json() for nr in self.part_sup_norms],
            "bounds": [None if b is None or math.isinf(b) else b for b in self.bounds],
        }


def _with_norms(dec: SupportDecomposition, f: CyclicPolynomial, budget, seed) -> SupportDecomposition:
    dec.source_sup_norm = sup_norm(f, budget, seed)
    dec.part_sup_norms = [sup_norm(p, budget, seed) for p in dec.parts]
    return dec


def support_homogeneous_parts(f: CyclicPolynomial, compute_norms: bool = False,
                              budget: int | None = None, seed: int = 0) -> SupportDecomposition:
    """Partition the terms of ``f`` by support size (the direct decomposition)."""
    L = f.max_support_size
    parts = [f.restrict(lambda a, j=j: support_size(a) == j) for j in range(L + 1)]
    dec = SupportDecomposition(parts)
    return _with_norms(dec, f, budget, seed) if compute_norms else dec


def tau(alpha, a: complex, b: complex) -> complex:
    """prod over the support of alpha of (a^alpha_j - b^alpha_j); 1 for alpha = 0."""
    a, b = complex(a), complex(b)
    if abs(a - b) < 1e-12:
        raise PairCollision(f"pair ({a}, {b}) is not two distinct points")
    out = 1 + 0j
    for e in alpha:
        if e:
            out *= a**e - b**e
    return out


def _top_support(f: CyclicPolynomial) -> int:
    if f.is_zero():
        raise ZeroPolynomial("pseudo-projection of the zero polynomial")
    return f.max_support_size


def pseudo_projection(f: CyclicPolynomial, a: complex, b: complex) -> CyclicPolynomial:
    """Maximal-support pseudo-projection as a polynomial on Omega_N^n x Omega_2^n.

    Keeps the terms of maximal support size ``l``, scales each by ``tau(alpha)``
    and attaches the Boolean monomial ``x^supp(alpha)``.  The result lives on
    ``GroupParams(N, n, n_boolean=n)`` with the Boolean variables last.
    """
    ell = _top_support(f)
    P = f.params
    doubled = GroupParams(P.N, P.n, P.n_boolean + P.nvars)
    coeffs = {}
    for alpha, c in f.items():
        if support_size(alpha) == ell:
            marker = tuple(1 if e else 0 for e in alpha)
            coeffs[alpha + marker] = tau(alpha, a, b) * c
    return CyclicPolynomial(doubled, coeffs)


def pseudo_projection_restricted(f: CyclicPolynomial, a: complex, b: complex) -> CyclicPolynomial:
    """The pseudo-projection with all Boolean variables set to 1."""
    ell = _top_support(f)
    return CyclicPolynomial(f.params, {alpha: tau(alpha, a, b) * c
                                       for alpha, c in f.items() if support_size(alpha) == ell})


@dataclass
class SplitResult:
    part: CyclicPolynomial
    ell: int
    bound: float | None = None
    # extra diagnostics: accumulated factor (prime) or tau groups / eta (vandermonde)
    info: dict = field(default_factory=dict)


def split_max_support_prime(f: CyclicPolynomial) -> SplitResult:
    """Recover the top support-homogeneous part by rotating pairs (omega^k, conj(omega)^k).

    After the N-1 rotations every surviving coefficient carries the same
    factor d_N^l; this is checked index by index and a mismatch raises.
    """
    N = f.params.N
    if N <= 2 or not is_prime(N):
        raise NotPrime(f"rotating-pair splitting needs an odd prime order, got N={N}")
    ell = _top_support(f)
    roots = f.params.roots
    g = f
    for k in range(1, N):
        g = pseudo_projection_restricted(g, roots[k % N], roots[(-k) % N])
    dn = rotating_constant(N)
    target = dn**ell
    worst = 0.0
    for alpha, c in g.items():
        ratio = c / f[alpha]
        err = abs(ratio - target) / abs(target)
        worst = max(worst, err)
        if err > ACCUMULATION_RTOL:
            raise AccumulationMismatch(
                f"index {alpha}: accumulated factor {ratio} differs from d_N^{ell} = {target} (rel {err:.2e})")
    bound = abs(dn) ** (-ell) * DN_GROWTH ** ((N - 1) * ell)
    return SplitResult(g / target, ell, bound, {"d_N": dn, "accumulated": target, "max_rel_error": worst})


def group_tau_values(values, rtol: float = TAU_GROUP_RTOL) -> tuple[list, list]:
    """Cluster complex values that agree to relative tolerance; returns (representatives, labels)."""
    reps, labels = [], []
    for v in values:
        for j, r in enumerate(reps):
            if abs(v - r) <= rtol * max(abs(v), abs(r)):
                labels.append(j)
                break
        else:
            reps.append(v)
            labels.append(len(reps) - 1)
    return reps, labels


def vandermonde_determinant(c) -> complex:
    """det of V[k, j] = c_j^{k+1}: (prod c_j) * prod_{j<k} (c_k - c_j)."""
    c = np.asarray(c, dtype=complex)
    out = np.prod(c)
    for j in range(len(c)):
        for k in range(j + 1, len(c)):
            out *= c[k] - c[j]
    return complex(out)


def split_max_support_vandermonde(f: CyclicPolynomial) -> SplitResult:
    """Recover the top part from the iterates D f, ..., D^M f with the fixed pair (1, omega)."""
    P = f.params
    if P.N <= 2:
        raise ValueError("Vandermonde splitting needs N > 2")
    ell = _top_support(f)
    a, b = P.roots[0], P.roots[1 % P.N]
    top = [alpha for alpha in f if support_size(alpha) == ell]
    reps, labels = group_tau_values([tau(alpha, a, b) for alpha in top])
    M = len(reps)

    iterates = []
    g = f
    for _ in range(M):
        g = pseudo_projection_restricted(g, a, b)
        iterates.append([g[alpha] for alpha in top])
    D = np.array(iterates, dtype=complex)
    c = np.array(reps, dtype=complex)
    V = c[None, :] ** np.arange(1, M + 1)[:, None]
    H = np.linalg.solve(V, D)
    resid = np.linalg.norm(V @ H - D) / max(np.linalg.norm(D), 1e-300)
    if not np.isfinite(resid) or resid > RESIDUAL_RTOL:
        raise IllConditioned(f"Vandermonde solve residual {resid:.2e} exceeds {RESIDUAL_RTOL}")
    eta = np.linalg.solve(V.T, np.ones(M))
    part = CyclicPolynomial(P, dict(zip(top, H.sum(axis=0))))
    info = {"c": reps, "labels": labels, "M": M, "eta": eta, "residual": resid,
            "M_bound": math.comb(P.N - 1 + f.degree, f.degree)}
    return SplitResult(part, ell, None, info)


def full_splitting(f: CyclicPolynomial, method: str = "prime", compute_norms: bool = True,
                   budget: int | None = None, seed: int = 0, d: int | None = None) -> SupportDecomposition:
    """Peel support-homogeneous parts from the top down with the chosen splitter.

    ``bounds[j]`` is the splitting bound C_N^d (1 + C_N^d)^{l - j} (prime path
    only; ``None`` for the Vandermonde path on composite N).
    """
    if method == "prime":
        splitter = split_max_support_prime
        if f.params.N <= 2 or not is_prime(f.params.N):
            raise NotPrime(f"method 'prime' needs an odd prime order, got N={f.params.N}")
    elif method == "vandermonde":
        splitter = split_max_support_vandermonde
    else:
        raise ValueError(f"unknown splitting method {method!r}")
    if f.is_zero():
        raise ZeroPolynomial("cannot split the zero polynomial")

    L = f.max_support_size
    parts = [CyclicPolynomial(f.params) for _ in range(L + 1)]
    g = f
    while not g.is_zero():
        res = splitter(g)
        parts[res.ell] = res.part
        # g - f_l has no support-l terms; drop the rounding residue there
        g = (g - res.part).restrict(lambda a, l=res.ell: support_size(a) < l)

    dd = f.degree if d is None else d
    N = f.params.N
    if is_prime(N) and N > 2:
        bounds = [splitting_bound(N, max(dd, 1), L, j) for j in range(L + 1)]
    else:
        bounds = [None] * (L + 1)
    dec = SupportDecomposition(parts, bounds=bounds, method=method)
    return _with_norms(dec, f, budget, seed) if compute_norms else dec


__all__ = [
    "SupportDecomposition", "SplitResult", "support_homogeneous_parts", "tau", "pseudo_projection",
    "pseudo_projection_restricted", "split_max_support_prime", "split_max_support_vandermonde",
    "full_splitting", "group_tau_values", "vandermonde_determinant", "rotating_constant", "split_constant",
]
