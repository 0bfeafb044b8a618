"""Transient distributions by uniformization, worst-case total variation
curves and exact mixing times."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.stats import poisson

from .generators import RateMatrix
from .stationary import stationary

MAX_STEP_MEAN = 16.0
DEFAULT_MAX_PRODUCTS = 5_000_000


class TruncationError(RuntimeError):
    pass


def _jump_matrix(rm: RateMatrix) -> tuple[sp.csr_matrix, float]:
    rate = float(-rm.Q.diagonal().min()) if len(rm) else 0.0
    if rate <= 0:
        return sp.identity(len(rm), format="csr"), 0.0
    P = (sp.identity(len(rm), format="csr") + rm.Q / rate).tocsr()
    return P, rate


def _poisson_cut(mean: float, tail: float) -> int:
    """Smallest K with P(Poisson(mean) > K) <= tail."""
    K = int(poisson.isf(tail, mean))
    while poisson.sf(K, mean) > tail:
        K += 1
    while K > 0 and poisson.sf(K - 1, mean) <= tail:
        K -= 1
    return K


def evolve_rows(D: np.ndarray, rm: RateMatrix, t: float, tol: float = 1e-12,
                max_products: int = DEFAULT_MAX_PRODUCTS) -> np.ndarray:
    """Rows of ``D`` (distributions) pushed forward by exp(tQ).

    The interval is split into pieces whose uniformized Poisson mean is at
    most 16, so the series weights never underflow.  Each piece drops a
    Poisson tail of mass tol/pieces, so the total variation error of every
    row is below tol/2.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    D = np.array(D, dtype=float)
    P, rate = _jump_matrix(rm)
    if t == 0 or rate == 0:
        return D
    total = rate * t
    pieces = max(1, int(np.ceil(total / MAX_STEP_MEAN)))
    mean = total / pieces
    K = _poisson_cut(mean, tol / pieces)
    if pieces * K > max_products:
        raise TruncationError(f"t={t} needs {pieces * K} matrix products (cap {max_products})")
    w = poisson.pmf(np.arange(K + 1), mean)
    PT = P.T.tocsr()
    squeeze = D.ndim == 1
    V = D.T if not squeeze else D
    for _ in range(pieces):
        acc = w[0] * V
        term = V
        for j in range(1, K + 1):
            term = PT @ term
            acc = acc + w[j] * term
        V = acc
    return V if squeeze else V.T


def evolve(d0: np.ndarray, rm: RateMatrix, t: float, tol: float = 1e-12) -> np.ndarray:
    """Distribution at time t started from ``d0``."""
    return evolve_rows(np.asarray(d0, dtype=float), rm, t, tol)


def _worst(D: np.ndarray, mu: np.ndarray) -> tuple[float, int]:
    # a distance between probability vectors lies in [0, 1]; clip the last-ulp overshoot of the sum
    tv = np.minimum(0.5 * np.abs(D - mu[None, :]).sum(axis=1), 1.0)
    j = int(np.argmax(tv))
    return float(tv[j]), j


@dataclass(frozen=True)
class TvCurve:
    times: np.ndarray
    d: np.ndarray
    worst: tuple  # worst starting state per time


def tv_curve(rm: RateMatrix, times, mu: np.ndarray | None = None, tol: float = 1e-12) -> TvCurve:
    """Worst-case distance to stationarity, max over point-mass starts."""
    if mu is None:
        mu = stationary(rm.family, rm=rm)[1]
    times = np.asarray(times, dtype=float)
    order = np.argsort(times, kind="stable")
    D = np.identity(len(rm))
    now = 0.0
    d = np.empty(times.size)
    worst = [None] * times.size
    for j in order:
        D = evolve_rows(D, rm, times[j] - now, tol)
        now = times[j]
        d[j], w = _worst(D, mu)
        worst[j] = rm.states[w]
    sd = d[order]
    if np.any(np.diff(sd) > 1e-10):
        raise AssertionError("worst-case distance increased in time")
    return TvCurve(times, d, tuple(worst))


@dataclass(frozen=True)
class MixingTime:
    T: float
    eps: float
    d_at_T: float
    worst_state: tuple | None
    bracket: tuple


def mixing_time_exact(rm: RateMatrix, eps: float, mu: np.ndarray | None = None,
                      rtol: float = 1e-3, tol: float = 1e-12) -> MixingTime:
    """Smallest t with worst-case distance <= eps, by a doubling bracket and
    bisection to relative width ``rtol``."""
    if mu is None:
        mu = stationary(rm.family, rm=rm)[1]
    D0 = np.identity(len(rm))
    d0, w0 = _worst(D0, mu)
    if d0 <= eps:
        return MixingTime(0.0, eps, d0, rm.states[w0], (0.0, 0.0))
    lo, D_lo = 0.0, D0
    hi = 1.0
    D_hi = evolve_rows(D_lo, rm, hi, tol)
    d_hi, w_hi = _worst(D_hi, mu)
    while d_hi > eps:
        lo, D_lo = hi, D_hi
        hi = 2.0 * hi
        D_hi = evolve_rows(D_lo, rm, hi - lo, tol)
        d_hi, w_hi = _worst(D_hi, mu)
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        D_mid = evolve_rows(D_lo, rm, mid - lo, tol)
        d_mid, w_mid = _worst(D_mid, mu)
        if d_mid > eps:
            lo, D_lo = mid, D_mid
        else:
            hi, d_hi, w_hi = mid, d_mid, w_mid
    return MixingTime(hi, eps, d_hi, rm.states[w_hi], (lo, hi))
