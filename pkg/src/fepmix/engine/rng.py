"""Counter-based random numbers.

Every random quantity in the engine is a pure function of an integer key,
so a stream can be regenerated in any order.  The mixer is the SplitMix64
finaliser; keys are folded in one word at a time.  Signed words are sent
through a zigzag map first so that negative heights hash consistently in
compiled and interpreted code.
"""
import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def zigzag(a):
    if a >= 0:
        return np.uint64(2 * a)
    return np.uint64(-2 * a - 1)


@njit(cache=True, inline="always")
def fold(h, a):
    return mix64(h ^ (zigzag(a) + _GOLDEN))


@njit(cache=True)
def key5(seed, a, b, c, d):
    h = mix64(zigzag(seed) + _GOLDEN)
    h = fold(h, a)
    h = fold(h, b)
    h = fold(h, c)
    return fold(h, d)


@njit(cache=True)
def key3(seed, a, b):
    h = mix64(zigzag(seed) + _GOLDEN)
    h = fold(h, a)
    return fold(h, b)


@njit(cache=True, inline="always")
def to_unit(h):
    """Map a 64-bit word to a double strictly inside (0, 1)."""
    return float(h >> _S11) * _INV53 + 0.5 * _INV53


@njit(cache=True)
def uniform_at(key, j):
    """j-th uniform drawn from the block addressed by ``key``."""
    return to_unit(mix64(key + np.uint64(j + 1) * _GOLDEN))


@njit(cache=True)
def poisson_by_inversion(u, mean):
    """Poisson(mean) variate by inversion of the cdf at ``u``."""
    n = 0
    pk = np.exp(-mean)
    cdf = pk
    while u > cdf and n < 1000:
        n += 1
        pk *= mean / n
        cdf += pk
        if pk == 0.0 and cdf < u:
            # cdf converged below u in floating point; accept current n
            break
    return n
