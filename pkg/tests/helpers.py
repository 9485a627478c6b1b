"""Shared oracles for the test suite."""
import itertools

import numpy as np

from cyclobh.groups import GroupParams
from cyclobh.polynomial import random_polynomial


def brute_coefficients(values, params):
    """a_alpha = mean over all points of f(z) conj(z^alpha), by explicit double loop."""
    orders = params.orders
    pts = list(itertools.product(*(range(q) for q in orders)))
    out = {}
    for alpha in pts:
        s = 0j
        for k in pts:
            phase = sum(a * kk / q for a, kk, q in zip(alpha, k, orders))
            s += values[k] * np.exp(-2j * np.pi * phase)
        out[alpha] = s / len(pts)
    return out


def make_poly(N, n, d, seed, density=1.0, law="complex_gaussian"):
    return random_polynomial(GroupParams(N, n), d, density, law, seed)
