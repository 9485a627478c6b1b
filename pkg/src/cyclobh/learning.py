"""Junta approximation and learning bounded low-degree polynomials from random samples."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import DegreeExceeded, NotBounded
from .groups import (
    GroupParams,
    character_matrix,
    enumerate_indices,
    get_budget,
    group_exponents,
    index_count_bound,
    support,
)
from .polynomial import (
    PRUNE_TOL,
    CyclicPolynomial,
    evaluate_at_exponents,
    l2_norm,
    l2_norm_spatial,
    sup_norm,
)

# accuracy of coefficients computed from every group point
EXACT_ACCURACY = PRUNE_TOL


@dataclass
class JuntaReport:
    g: CyclicPolynomial
    coordinates: tuple
    k: int
    lam: float
    l2_error: float
    l2_error_spatial: float | None
    k_bound: float
    kept: int

    def to_json(self) -> dict:
        return {"g": self.g.to_json(), "coordinates": list(self.coordinates), "k": self.k, "lambda": self.lam,
                "l2_error": self.l2_error, "l2_error_spatial": self.l2_error_spatial,
                "k_bound": self.k_bound, "kept": self.kept}


def junta_approximate(f: CyclicPolynomial, d: int, epsilon: float, bh_constant: float,
                      budget: int | None = None, check_bounded: bool = True) -> JuntaReport:
    """Keep the coefficients above lambda = eps^{d+1} BH^{-d}; the result is a junta close to f in L2."""
    if f.degree > d:
        raise DegreeExceeded(f"polynomial has degree {f.degree} > {d}")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if bh_constant < 1:
        raise ValueError("bh_constant must be >= 1")
    if check_bounded:
        s = sup_norm(f, budget)
        if s.certified and s.value > 1 + 1e-9:
            raise NotBounded(f"sup norm {s.value:.6g} exceeds 1")
    lam = epsilon ** (d + 1) * bh_constant ** (-d)
    g = f.restrict(lambda a: abs(f[a]) > lam)
    coords = tuple(sorted({j for a in g for j in support(a)}))
    err = l2_norm(f - g)
    spatial = None
    if f.params.size <= get_budget(budget):
        spatial = l2_norm_spatial(f - g, budget)
    k_bound = d * bh_constant ** (2 * d) / epsilon ** (2 * d)
    return JuntaReport(g, coords, len(coords), lam, err, spatial, k_bound, len(g))


@dataclass(frozen=True)
class SampleSize:
    M: int
    M_b: int
    b: float
    index_count: int
    M_real: float
    M_b_real: float


def _ceil_int(x) -> int:
    return int(mpmath.ceil(x))


def chernoff_sample_size(epsilon: float, delta: float, d: int, N: int, n: int, bh_constant: float) -> SampleSize:
    """Sample counts for learning with accuracy eps and confidence 1 - delta.

    ``M_b = ceil(2/b^2 log(2/delta sum_{k<=d} C(n+k, n)))`` with
    b^2 = e^{-5} eps^{d+1} / (d BH^{2d}).  The headline
    ``M = ceil(e^5 d (d+1) BH^{2d} / eps^{d+1} log(2Nn/delta))`` replaces the index
    count by (Nn)^{d+1}; note it carries e^5 where 2/b^2 carries 2 e^5, so M
    can be smaller than M_b.  Counts are exact integers even past float range.
    """
    if not (0 < epsilon < 1 and 0 < delta < 1):
        raise ValueError("epsilon and delta must lie in (0, 1)")
    if min(d, N, n) <= 0 or bh_constant <= 0:
        raise ValueError("d, N, n and bh_constant must be positive")
    with mpmath.workdps(50):
        bh = mpmath.mpf(bh_constant)
        eps = mpmath.mpf(epsilon)
        b2 = mpmath.e ** -5 * eps ** (d + 1) / (d * bh ** (2 * d))
        count = index_count_bound(n, d)
        Mb = 2 / b2 * mpmath.log(2 / mpmath.mpf(delta) * count)
        M = mpmath.e**5 * d * (d + 1) * bh ** (2 * d) / eps ** (d + 1) * mpmath.log(2 * N * n / mpmath.mpf(delta))
        return SampleSize(_ceil_int(M), _ceil_int(Mb), float(mpmath.sqrt(b2)), count, float(M), float(Mb))


def threshold_for(b: float, d: int) -> float:
    """a = b (1 + sqrt(d+1))."""
    return b * (1 + math.sqrt(d + 1))


@dataclass
class LearnReport:
    estimated: CyclicPolynomial
    raw: dict
    M: int
    b: float
    a: float
    surviving: tuple
    seed: int
    l2_error_sq: float | None = None
    chernoff_event: bool | None = None
    decomposition_gap: float | None = None

    def to_json(self) -> dict:
        return {"estimated": self.estimated.to_json(), "M": self.M, "b": self.b, "a": self.a,
                "surviving": [list(s) for s in self.surviving], "seed": self.seed,
                "l2_error_sq": self.l2_error_sq, "chernoff_event": self.chernoff_event}


def _oracle_values(oracle, params: GroupParams, k: np.ndarray) -> np.ndarray:
    if isinstance(oracle, CyclicPolynomial):
        return evaluate_at_exponents(oracle, k)
    Z = np.exp(2j * np.pi * k / np.array(params.orders))
    return np.asarray(oracle(Z), dtype=complex).reshape(len(k))


def learn_from_samples(oracle, params: GroupParams, d: int, b: float, M: int, seed: int = 0,
                       truth: CyclicPolynomial | None = None, exhaustive: bool = False,
                       multinomial_above: int | None = None) -> LearnReport:
    """Empirical Fourier coefficients from M uniform samples, thresholded at a = b(1 + sqrt(d+1)).

    ``oracle`` is a ``CyclicPolynomial`` or a callable mapping an ``(m, n)``
    array of group points to values.  With ``exhaustive=True`` every group
    point is used once; the coefficients are then exact, so ``b`` is replaced
    by the round-off floor ``EXACT_ACCURACY`` and no true coefficient is cut.

    When ``M`` exceeds ``multinomial_above`` (default: the group size) the i.i.d.
    draws are represented by their multinomial visit counts over the group,
    which has the same distribution as M independent uniform draws.
    """
    if b <= 0:
        raise ValueError("b must be positive")
    if M < 1 and not exhaustive:
        raise ValueError("M must be >= 1")
    rng = np.random.default_rng(seed)
    indices = list(enumerate_indices(params, d))
    alphas = np.array(indices, dtype=np.int64)
    if multinomial_above is None:
        multinomial_above = params.size

    if exhaustive:
        k = group_exponents(params)
        weights = np.ones(len(k))
        M = len(k)
        b = EXACT_ACCURACY
    elif M > multinomial_above and params.size <= get_budget():
        k = group_exponents(params)
        weights = rng.multinomial(M, np.full(params.size, 1.0 / params.size)).astype(float)
        keep = weights > 0
        k, weights = k[keep], weights[keep]
    else:
        k = rng.integers(0, params.orders, size=(M, params.nvars))
        weights = np.ones(M)

    est = np.zeros(len(indices), dtype=complex)
    step = 1 << 14
    for start in range(0, len(k), step):
        kb = k[start:start + step]
        vals = _oracle_values(oracle, params, kb) * weights[start:start + step]
        est += np.conj(character_matrix(params, kb, alphas)).T @ vals
    est /= M

    a = threshold_for(b, d)
    raw = dict(zip(indices, est))
    surviving = tuple(alpha for alpha, c in raw.items() if abs(c) > a)
    estimated = CyclicPolynomial(params, {alpha: raw[alpha] for alpha in surviving})
    report = LearnReport(estimated, raw, M, b, a, surviving, seed)
    if truth is not None:
        attach_truth(report, truth)
    return report


def attach_truth(report: LearnReport, truth: CyclicPolynomial) -> LearnReport:
    """Fill in the squared L2 error and check it against the coefficient-wise decomposition."""
    err_sq = l2_norm(truth - report.estimated) ** 2
    surv = set(report.surviving)
    decomposed = sum(abs(truth[a] - report.raw[a]) ** 2 for a in surv)
    decomposed += sum(abs(c) ** 2 for a, c in truth.items() if a not in surv)
    report.l2_error_sq = err_sq
    report.decomposition_gap = abs(err_sq - decomposed)
    report.chernoff_event = all(abs(report.raw[a] - truth[a]) <= report.b for a in report.raw)
    return report


@dataclass
class CurveResult:
    rows: list = field(default_factory=list)
    summary: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["grid_kind", "grid_value", "trial", "M", "b", "l2_error_sq", "surviving"])
        for r in self.rows:
            w.writerow([r["grid_kind"], r["grid_value"], r["trial"], r["M"], repr(r["b"]),
                        repr(r["l2_error_sq"]), r["surviving"]])
        return buf.getvalue()

    def summary_csv(self) -> str:
        buf = io.StringIO()
        if not self.summary:
            return ""
        w = csv.DictWriter(buf, fieldnames=list(self.summary[0]))
        w.writeheader()
        w.writerows(self.summary)
        return buf.getvalue()


def learning_error_curve(truth: CyclicPolynomial, d: int, M_grid=None, b_grid=None, trials: int = 10,
                         seed: int = 0, epsilons=(0.3,), b: float | None = None, delta: float = 0.2,
                         include_exhaustive: bool = True) -> CurveResult:
    """Run ``trials`` independent learns per grid point and tabulate squared L2 errors.

    Along an M grid a fixed ``b`` is used; along a b grid the sample count is
    the formula's M_b for that b (confidence ``delta``).
    """
    if truth.degree > d:
        raise DegreeExceeded(f"truth has degree {truth.degree} > {d}")
    if (M_grid is None) == (b_grid is None):
        raise ValueError("give exactly one of M_grid or b_grid")
    params = truth.params
    seeds = np.random.SeedSequence(seed)
    out = CurveResult()
    points = []
    if M_grid is not None:
        if b is None:
            raise ValueError("an M grid needs a fixed b")
        points = [("M", M, int(M), b) for M in M_grid]
    else:
        count = index_count_bound(params.n, d)
        for bb in b_grid:
            Mb = math.ceil(2 / bb**2 * math.log(2 / delta * count))
            points.append(("b", bb, Mb, bb))
    for kind, value, M, bb in points:
        errs = []
        for t, child in enumerate(seeds.spawn(trials)):
            s = int(child.generate_state(1)[0])
            rep = learn_from_samples(truth, params, d, bb, M, seed=s, truth=truth)
            errs.append(rep.l2_error_sq)
            out.rows.append({"grid_kind": kind, "grid_value": value, "trial": t, "M": M, "b": bb,
                             "l2_error_sq": rep.l2_error_sq, "surviving": len(rep.surviving)})
        out.summary.append(_summarize(kind, value, M, errs, epsilons))
    if include_exhaustive:
        bb = b if b is not None else (b_grid[0] if b_grid else 0.1)
        rep = learn_from_samples(truth, params, d, bb, 0, truth=truth, exhaustive=True)
        out.rows.append({"grid_kind": "exhaustive", "grid_value": params.size, "trial": 0, "M": params.size,
                         "b": rep.b, "l2_error_sq": rep.l2_error_sq, "surviving": len(rep.surviving)})
        out.summary.append(_summarize("exhaustive", params.size, params.size, [rep.l2_error_sq], epsilons))
    return out


def _summarize(kind, value, M, errs, epsilons) -> dict:
    errs = np.asarray(errs, dtype=float)
    row = {"grid_kind": kind, "grid_value": value, "M": M, "trials": len(errs),
           "median": float(np.median(errs)), "mean": float(errs.mean()),
           "std": float(errs.std(ddof=1)) if len(errs) > 1 else 0.0}
    for eps in epsilons:
        row[f"frac_le_{eps}"] = float(np.mean(errs <= eps))
    return row
