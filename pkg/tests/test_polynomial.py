import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclobh.errors import DimensionMismatch, IncompleteSamples
from cyclobh.groups import GroupParams, enumerate_group_points, group_exponents
from cyclobh.maxmod import n3_counterexample
from cyclobh.polynomial import (
    CyclicPolynomial,
    coeff_lp_norm,
    constant,
    evaluate,
    evaluate_at_exponents,
    evaluate_many,
    fourier_analyze,
    l2_norm,
    l2_norm_spatial,
    monomial,
    random_polynomial,
    sup_norm,
    synthesize,
    truncate_by_degree,
)

from helpers import brute_coefficients, make_poly

W3 = np.exp(2j * np.pi / 3)


def test_evaluate_examples():
    P1, P2 = GroupParams(3, 1), GroupParams(3, 2)
    assert evaluate(monomial(P1, (1,)), (W3,)) == pytest.approx(W3)
    f = CyclicPolynomial(P2, {(0, 0): 1, (1, 2): 1})
    assert evaluate(f, (W3, W3)) == pytest.approx(2)
    z0 = (1 + W3) / 2
    assert evaluate(monomial(P1, (2,)), (z0,)) == pytest.approx(z0**2)
    assert abs(z0 - 1) == pytest.approx(np.sqrt(3) / 2)
    with pytest.raises(DimensionMismatch):
        evaluate(f, (1,))


def test_prune_and_order():
    P = GroupParams(3, 2)
    f = CyclicPolynomial(P, {(1, 0): 1, (0, 1): 1e-15, (0, 0): 2})
    assert list(f) == [(0, 0), (1, 0)]
    z = CyclicPolynomial(P)
    assert z.degree == 0 and z.max_support_size == 0 and z.is_zero()


def test_analyze_simple():
    P = GroupParams(3, 1)
    f = fourier_analyze(np.full(3, 2 - 1j), P)
    assert f.coeffs.keys() == {(0,)} and f[(0,)] == pytest.approx(2 - 1j)
    g = fourier_analyze(P.roots, P)
    assert g.coeffs.keys() == {(1,)} and g[(1,)] == pytest.approx(1)


def test_analyze_matches_brute_force():
    P = GroupParams(3, 2)
    f = make_poly(3, 2, 4, seed=1)
    vals = synthesize(f)
    brute = brute_coefficients(vals, P)
    for a, c in brute.items():
        assert abs(c - f[a]) < 1e-12


def test_analyze_round_trip_sparse():
    P = GroupParams(4, 3)
    rng = np.random.default_rng(2)
    idx = {tuple(rng.integers(0, 4, 3)) for _ in range(5)}
    f = CyclicPolynomial(P, {a: complex(*rng.standard_normal(2)) for a in idx})
    g = fourier_analyze(synthesize(f), P)
    assert g.max_coeff_diff(f) < 1e-12


def test_synthesis_matches_pointwise_evaluation():
    f = make_poly(3, 3, 3, seed=4)
    pts = np.array(list(enumerate_group_points(f.params)))
    direct = np.array([evaluate(f, z) for z in pts])
    assert np.abs(synthesize(f).ravel() - direct).max() < 1e-12
    assert np.abs(evaluate_many(f, pts) - direct).max() < 1e-12
    assert np.abs(evaluate_at_exponents(f, group_exponents(f.params)) - direct).max() < 1e-12


def test_incomplete_samples():
    P = GroupParams(3, 1)
    with pytest.raises(IncompleteSamples):
        fourier_analyze({(0,): 1, (1,): 1}, P)
    with pytest.raises(IncompleteSamples):
        fourier_analyze(np.ones(2), P)
    f = fourier_analyze({(0,): 1, (1,): 1, (2,): 1}, P)
    assert f[(0,)] == pytest.approx(1)


def test_sup_norm_examples():
    for N in (2, 3, 5):
        r = sup_norm(monomial(GroupParams(N, 2), (1, 1)))
        assert r.value == pytest.approx(1) and r.certified and r.samples_used == N**2
    p, _ = n3_counterexample()
    assert sup_norm(p).value == pytest.approx(1, abs=1e-12)
    f = CyclicPolynomial(GroupParams(2, 1), {(0,): 1, (1,): 1})
    assert sup_norm(f).value == pytest.approx(2)


def test_sup_norm_uncertified_is_lower_bound():
    f = make_poly(3, 6, 2, seed=5)
    exact = sup_norm(f)
    approx = sup_norm(f, budget=200, rng_seed=1)
    assert not approx.certified and approx.samples_used == 200
    assert approx.value <= exact.value + 1e-12


def test_sup_norm_translation_invariant():
    f = make_poly(5, 2, 3, seed=6)
    s = sup_norm(f).value
    for k in [(1, 0), (2, 3), (4, 4)]:
        assert sup_norm(f.translate(k)).value == pytest.approx(s, rel=1e-12)


def test_lp_norm_examples():
    P = GroupParams(3, 2)
    assert coeff_lp_norm(monomial(P, (1, 1), 1j), 1.3) == pytest.approx(1)
    f = CyclicPolynomial(P, {(0, 0): 3, (1, 0): 4})
    assert coeff_lp_norm(f, 2) == pytest.approx(5)
    g = CyclicPolynomial(P, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
    assert coeff_lp_norm(g, 1) == pytest.approx(3)
    with pytest.raises(ValueError):
        coeff_lp_norm(g, 0.5)


def test_l2_examples():
    P = GroupParams(3, 2)
    f = CyclicPolynomial(P, {(1, 0): 1, (0, 1): 1})
    assert l2_norm(f) == pytest.approx(np.sqrt(2))
    assert l2_norm(CyclicPolynomial(P)) == 0
    g = make_poly(3, 4, 4, seed=7)
    assert abs(l2_norm(g) - l2_norm_spatial(g)) < 1e-10


def test_truncate():
    P = GroupParams(3, 2)
    f = CyclicPolynomial(P, {(0, 0): 1, (1, 0): 1, (1, 1): 1})
    assert truncate_by_degree(f, 1).coeffs == {(0, 0): 1, (1, 0): 1}
    assert truncate_by_degree(f, 5).coeffs == f.coeffs
    assert truncate_by_degree(f, 0).coeffs == {(0, 0): 1}


def test_random_polynomial():
    P = GroupParams(3, 2)
    assert len(random_polynomial(P, 1, 1.0, "unit_circle", 0)) == 3
    a = random_polynomial(P, 2, 0.5, "complex_gaussian", 9)
    b = random_polynomial(P, 2, 0.5, "complex_gaussian", 9)
    assert a.coeffs == b.coeffs
    with pytest.raises(ValueError):
        random_polynomial(P, 2, 0.0)


def test_random_polynomial_density_statistics():
    P = GroupParams(3, 3)
    rng = np.random.default_rng(0)
    counts = [len(random_polynomial(P, 2, 0.5, "unit_circle", rng)) for _ in range(1000)]
    total = 10  # indices of degree <= 2 in 3 variables
    mean, sd = 0.5 * total, np.sqrt(total * 0.25 / 1000)
    assert abs(np.mean(counts) - mean) <= 3 * sd


def test_json_round_trip():
    f = make_poly(4, 2, 3, seed=3)
    g = CyclicPolynomial.loads(f.dumps())
    assert g.params == f.params and g.max_coeff_diff(f) == 0
    keys = [tuple(t["alpha"]) for t in f.to_json()["terms"]]
    assert keys == sorted(keys)


def test_constant_helper():
    c = constant(GroupParams(3, 2), 2j)
    assert sup_norm(c).value == pytest.approx(2)


@settings(max_examples=40, deadline=None)
@given(N=st.integers(2, 5), n=st.integers(1, 4), d=st.integers(0, 6), seed=st.integers(0, 10**6),
       density=st.floats(0.1, 1.0))
def test_round_trip_and_parseval(N, n, d, seed, density):
    f = random_polynomial(GroupParams(N, n), d, density, "complex_gaussian", seed)
    g = fourier_analyze(synthesize(f), f.params)
    assert g.max_coeff_diff(f) < 1e-10
    a2 = l2_norm(f) ** 2
    assert abs(a2 - l2_norm_spatial(f) ** 2) <= 1e-10 * (1 + a2)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), p=st.floats(1.0, 3.0), q=st.floats(1.0, 3.0))
def test_lp_monotone(seed, p, q):
    f = random_polynomial(GroupParams(3, 3), 3, 0.7, "complex_gaussian", seed)
    lo, hi = sorted((p, q))
    if not f.is_zero():
        assert coeff_lp_norm(f, hi) <= coeff_lp_norm(f, lo) * (1 + 1e-12)
