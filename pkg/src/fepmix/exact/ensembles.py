"""Finite-window marginals: the infinite-volume measure at density rho
versus the uniform measure on the circle's ergodic component."""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np


def no_double_holes(sigma) -> bool:
    return all(sigma[x] or sigma[x + 1] for x in range(len(sigma) - 1))


@lru_cache(maxsize=None)
def window_patterns(ell: int) -> tuple:
    """All 0/1 words of length ell without two consecutive zeros."""
    out = [(0,), (1,)]
    for _ in range(ell - 1):
        out = [w + (b,) for w in out for b in (0, 1) if b or w[-1]]
    return tuple(out)


def grand_canonical(rho: float, ell: int, sigma) -> float:
    """Probability of the window pattern ``sigma`` under the infinite-volume
    measure at density rho in (1/2, 1).  Zero on words with two
    neighbouring holes."""
    if not (0.5 < rho < 1.0):
        raise ValueError("rho must lie in (1/2, 1)")
    sigma = tuple(int(v) for v in sigma)
    if len(sigma) != ell:
        raise ValueError("pattern length must equal ell")
    if not no_double_holes(sigma):
        return 0.0
    n = sum(sigma)
    s1, sl = sigma[0], sigma[-1]
    return (rho ** (s1 + sl - n)) * ((1 - rho) ** (ell - n)) * ((2 * rho - 1) ** (2 * n + 1 - ell - s1 - sl))


def grand_canonical_normalisation_error(rho: float, ell: int) -> float:
    total = math.fsum(grand_canonical(rho, ell, s) for s in window_patterns(ell))
    return abs(total - 1.0)


def _log_comb(a: int, b: int) -> float:
    if b < 0 or b > a or a < 0:
        return -math.inf
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def canonical_marginal(N: int, k: int, sigma, exact: bool | None = None) -> float:
    """Probability of the window pattern on sites 1..ell under the uniform
    measure on the circle's ergodic component: the number of admissible
    completions on the remaining N - ell sites over the component size.

    Uses exact integers when ``exact`` (default for N <= 64) and log-gamma
    otherwise.
    """
    sigma = tuple(int(v) for v in sigma)
    ell = len(sigma)
    if not no_double_holes(sigma):
        return 0.0
    n = sum(sigma)
    top = k - n - 1 + sigma[0] + sigma[-1]
    holes = N - ell - k + n
    if exact is None:
        exact = N <= 64
    if exact:
        if holes < 0 or top < 0 or holes > top:
            return 0.0
        size = N * math.comb(k, N - k) // k
        return math.comb(top, holes) / size
    log_size = math.log(N) - math.log(k) + _log_comb(k, N - k)
    return math.exp(_log_comb(top, holes) - log_size)


def equivalence_error(N: int, k: int, ell: int, rho: float | None = None) -> float:
    """max over window patterns of |canonical - grand canonical| with
    rho = k/N unless given."""
    if rho is None:
        rho = k / N
    return max(abs(canonical_marginal(N, k, s) - grand_canonical(rho, ell, s))
               for s in itertools.product((0, 1), repeat=ell))


def correlation_ratio(rho: float, ell: int) -> dict:
    """pi(eta(1)=i, eta(ell)=j) / (pi(eta(1)=i) pi(eta(ell)=j)) for the four
    (i, j), summing the grand canonical measure over admissible words."""
    joint = {(i, j): [] for i in (0, 1) for j in (0, 1)}
    for s in window_patterns(ell):
        joint[(s[0], s[-1])].append(grand_canonical(rho, ell, s))
    J = {key: math.fsum(v) for key, v in joint.items()}
    first = {i: J[(i, 0)] + J[(i, 1)] for i in (0, 1)}
    last = {j: J[(0, j)] + J[(1, j)] for j in (0, 1)}
    return {key: J[key] / (first[key[0]] * last[key[1]]) for key in J}


def canonical_correlation_ratio(N: int, k: int, ell: int) -> dict:
    """Same ratio under the uniform measure on the circle's ergodic
    component, by exact enumeration of window patterns."""
    joint = {(i, j): 0.0 for i in (0, 1) for j in (0, 1)}
    for s in itertools.product((0, 1), repeat=ell):
        joint[(s[0], s[-1])] += canonical_marginal(N, k, s)
    first = {i: joint[(i, 0)] + joint[(i, 1)] for i in (0, 1)}
    last = {j: joint[(0, j)] + joint[(1, j)] for j in (0, 1)}
    return {key: joint[key] / (first[key[0]] * last[key[1]]) for key in joint}


def bernoulli_correlation_ratio(rho: float, ell: int) -> dict:
    """Control: the same ratio under i.i.d. Bernoulli(rho) occupations."""
    joint = {(i, j): 0.0 for i in (0, 1) for j in (0, 1)}
    for s in itertools.product((0, 1), repeat=ell):
        pr = math.prod(rho if v else 1 - rho for v in s)
        joint[(s[0], s[-1])] += pr
    first = {i: joint[(i, 0)] + joint[(i, 1)] for i in (0, 1)}
    last = {j: joint[(0, j)] + joint[(1, j)] for j in (0, 1)}
    return {key: joint[key] / (first[key[0]] * last[key[1]]) for key in joint}


def max_correlation_deviation(ratios: dict) -> float:
    return max(abs(v - 1.0) for v in ratios.values())
