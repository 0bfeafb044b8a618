"""Direct (Gillespie) simulation kernels.

Each step draws two uniforms from a counter keyed by (seed, step): one for
the exponential holding time and one to pick the move among the enabled
moves.  Moves are always enumerated in a fixed spatial order, and the zero
range kernels enumerate piles in the same order as the exclusion kernels
enumerate sites.  Consequently an exclusion run and the zero range run of its
image, started from corresponding states with the same seed, add the same
rates in the same order and pick corresponding moves at bit-identical times.

Sites and piles are 0-based inside the kernels.
"""
import numpy as np
from numba import njit, prange

from .rng import key3, uniform_at

_RECORD_CAP = 1024


@njit(cache=True)
def _grow(ev_t, ev_a, ev_b, n):
    cap = 2 * ev_t.size
    t2 = np.empty(cap)
    a2 = np.empty(cap, dtype=np.int64)
    b2 = np.empty(cap, dtype=np.int64)
    t2[:n] = ev_t[:n]
    a2[:n] = ev_a[:n]
    b2[:n] = ev_b[:n]
    return t2, a2, b2


@njit(cache=True)
def _draw(seed, step):
    key = key3(seed, step, 0x5EED)
    return uniform_at(key, 0), uniform_at(key, 1)


@njit(cache=True)
def fep_segment(occ0, seed, p, T, stop_ergodic, record):
    """FEP on {0..N-1}.  A particle at x jumps right at rate p when x-1 is
    occupied and x+1 empty, left at rate 1-p in the mirrored situation.

    Returns (stop_time, final occupation, event count, times, from, to).
    ``stop_time`` is the hitting time of the ergodic component when
    ``stop_ergodic`` is set (+inf if censored), else +inf.
    """
    q = 1.0 - p
    occ = occ0.copy()
    N = occ.size
    cap = _RECORD_CAP if record else 0
    ev_t = np.empty(cap)
    ev_a = np.empty(cap, dtype=np.int64)
    ev_b = np.empty(cap, dtype=np.int64)
    n_ev = 0
    t = 0.0
    stop_time = np.inf
    while True:
        R = 0.0
        double = 0
        for x in range(N):
            if occ[x] == 0:
                if x + 1 < N and occ[x + 1] == 0:
                    double += 1
                continue
            if x == 0 or x == N - 1:
                continue
            if occ[x - 1] == 1 and occ[x + 1] == 0:
                R += p
            elif occ[x + 1] == 1 and occ[x - 1] == 0:
                R += q
        if stop_ergodic and double == 0 and occ[0] == 1 and occ[N - 1] == 1:
            stop_time = t
            break
        if R == 0.0:
            break
        u1, u2 = _draw(seed, n_ev)
        t += -np.log(u1) / R
        if t > T:
            break
        target = u2 * R
        acc = 0.0
        src = -1
        dst = -1
        for x in range(1, N - 1):
            if occ[x] == 0:
                continue
            if occ[x - 1] == 1 and occ[x + 1] == 0:
                acc += p
                src = x
                dst = x + 1
            elif occ[x + 1] == 1 and occ[x - 1] == 0:
                acc += q
                src = x
                dst = x - 1
            else:
                continue
            if target < acc:
                break
        occ[src] = 0
        occ[dst] = 1
        if record:
            if n_ev == ev_t.size:
                ev_t, ev_a, ev_b = _grow(ev_t, ev_a, ev_b, n_ev)
            ev_t[n_ev] = t
            ev_a[n_ev] = src
            ev_b[n_ev] = dst
        n_ev += 1
    m = n_ev if record else 0
    return stop_time, occ, n_ev, ev_t[:m], ev_a[:m], ev_b[:m]


@njit(cache=True)
def zrp_segment(w0, seed, p, threshold, T, stop_all_occupied, record):
    """Zero range process on piles {0..n-1} with closed ends.  A pile with at
    least ``threshold`` particles sends one to the left at rate 1-p and one to
    the right at rate p.

    Returns (stop_time, final piles, event count, times, from, to), where
    ``stop_time`` is the first time every pile is nonempty when
    ``stop_all_occupied`` is set.
    """
    q = 1.0 - p
    w = w0.copy()
    n = w.size
    cap = _RECORD_CAP if record else 0
    ev_t = np.empty(cap)
    ev_a = np.empty(cap, dtype=np.int64)
    ev_b = np.empty(cap, dtype=np.int64)
    n_ev = 0
    t = 0.0
    stop_time = np.inf
    while True:
        R = 0.0
        empty = 0
        for i in range(n):
            if w[i] == 0:
                empty += 1
            if w[i] >= threshold:
                if i >= 1:
                    R += q
                if i <= n - 2:
                    R += p
        if stop_all_occupied and empty == 0:
            stop_time = t
            break
        if R == 0.0:
            break
        u1, u2 = _draw(seed, n_ev)
        t += -np.log(u1) / R
        if t > T:
            break
        target = u2 * R
        acc = 0.0
        src = -1
        dst = -1
        for i in range(n):
            if w[i] < threshold:
                continue
            if i >= 1:
                acc += q
                src = i
                dst = i - 1
                if target < acc:
                    break
            if i <= n - 2:
                acc += p
                src = i
                dst = i + 1
                if target < acc:
                    break
        w[src] -= 1
        w[dst] += 1
        if record:
            if n_ev == ev_t.size:
                ev_t, ev_a, ev_b = _grow(ev_t, ev_a, ev_b, n_ev)
            ev_t[n_ev] = t
            ev_a[n_ev] = src
            ev_b[n_ev] = dst
        n_ev += 1
    m = n_ev if record else 0
    return stop_time, w, n_ev, ev_t[:m], ev_a[:m], ev_b[:m]


@njit(cache=True)
def fep_circle(occ0, seed, p, T, tag0, stop_ergodic, record):
    """FEP on Z/NZ.  Moves are enumerated clockwise starting at the tagged
    hole ``tag0`` (or at site 0 when ``tag0 < 0``).  The tagged hole follows
    the particle that fills it.

    Returns (stop_time, final occupation, event count, times, from, to,
    tag positions after each recorded event, final tag).
    """
    q = 1.0 - p
    occ = occ0.copy()
    N = occ.size
    tag = tag0
    cap = _RECORD_CAP if record else 0
    ev_t = np.empty(cap)
    ev_a = np.empty(cap, dtype=np.int64)
    ev_b = np.empty(cap, dtype=np.int64)
    ev_tag = np.empty(cap, dtype=np.int64)
    n_ev = 0
    t = 0.0
    stop_time = np.inf
    while True:
        origin = tag if tag >= 0 else 0
        R = 0.0
        double = 0
        for s in range(N):
            x = origin + s
            if x >= N:
                x -= N
            left = x - 1 if x > 0 else N - 1
            right = x + 1 if x < N - 1 else 0
            if occ[x] == 0:
                if occ[right] == 0:
                    double += 1
                continue
            if occ[left] == 1 and occ[right] == 0:
                R += p
            elif occ[right] == 1 and occ[left] == 0:
                R += q
        if stop_ergodic and double == 0:
            stop_time = t
            break
        if R == 0.0:
            break
        u1, u2 = _draw(seed, n_ev)
        t += -np.log(u1) / R
        if t > T:
            break
        target = u2 * R
        acc = 0.0
        src = -1
        dst = -1
        for s in range(N):
            x = origin + s
            if x >= N:
                x -= N
            if occ[x] == 0:
                continue
            left = x - 1 if x > 0 else N - 1
            right = x + 1 if x < N - 1 else 0
            if occ[left] == 1 and occ[right] == 0:
                acc += p
                src = x
                dst = right
            elif occ[right] == 1 and occ[left] == 0:
                acc += q
                src = x
                dst = left
            else:
                continue
            if target < acc:
                break
        occ[src] = 0
        occ[dst] = 1
        if tag >= 0 and dst == tag:
            tag = src
        if record:
            if n_ev == ev_t.size:
                ev_t, ev_a, ev_b = _grow(ev_t, ev_a, ev_b, n_ev)
                tg = np.empty(ev_t.size, dtype=np.int64)
                tg[:n_ev] = ev_tag[:n_ev]
                ev_tag = tg
            ev_t[n_ev] = t
            ev_a[n_ev] = src
            ev_b[n_ev] = dst
            ev_tag[n_ev] = tag
        n_ev += 1
    m = n_ev if record else 0
    return stop_time, occ, n_ev, ev_t[:m], ev_a[:m], ev_b[:m], ev_tag[:m], tag


@njit(cache=True)
def zrp_circle(w0, seed, p, threshold, T, stop_all_occupied, record):
    """Zero range process on Z/nZ; pile i sends left (to i-1) at rate 1-p and
    right (to i+1) at rate p when it holds at least ``threshold`` particles."""
    q = 1.0 - p
    w = w0.copy()
    n = w.size
    cap = _RECORD_CAP if record else 0
    ev_t = np.empty(cap)
    ev_a = np.empty(cap, dtype=np.int64)
    ev_b = np.empty(cap, dtype=np.int64)
    n_ev = 0
    t = 0.0
    stop_time = np.inf
    while True:
        R = 0.0
        empty = 0
        for i in range(n):
            if w[i] == 0:
                empty += 1
            if w[i] >= threshold:
                R += q
                R += p
        if stop_all_occupied and empty == 0:
            stop_time = t
            break
        if R == 0.0:
            break
        u1, u2 = _draw(seed, n_ev)
        t += -np.log(u1) / R
        if t > T:
            break
        target = u2 * R
        acc = 0.0
        src = -1
        dst = -1
        for i in range(n):
            if w[i] < threshold:
                continue
            acc += q
            src = i
            dst = i - 1 if i > 0 else n - 1
            if target < acc:
                break
            acc += p
            dst = i + 1 if i < n - 1 else 0
            if target < acc:
                break
        w[src] -= 1
        w[dst] += 1
        if record:
            if n_ev == ev_t.size:
                ev_t, ev_a, ev_b = _grow(ev_t, ev_a, ev_b, n_ev)
            ev_t[n_ev] = t
            ev_a[n_ev] = src
            ev_b[n_ev] = dst
        n_ev += 1
    m = n_ev if record else 0
    return stop_time, w, n_ev, ev_t[:m], ev_a[:m], ev_b[:m]


@njit(cache=True)
def obep(z0, seed, q, alpha, beta, gamma, delta, T, record):
    """Open-boundary exclusion on {0..n-1}: right jumps at rate q, left jumps
    at rate 1-q, creation/annihilation at site 0 with rates alpha/gamma and at
    site n-1 with rates delta/beta.  A flip at site x is recorded as (x, x).
    """
    p = 1.0 - q
    z = z0.copy()
    n = z.size
    cap = _RECORD_CAP if record else 0
    ev_t = np.empty(cap)
    ev_a = np.empty(cap, dtype=np.int64)
    ev_b = np.empty(cap, dtype=np.int64)
    n_ev = 0
    t = 0.0
    while True:
        R = 0.0
        for x in range(n):
            if x == 0:
                R += gamma if z[0] == 1 else alpha
            if z[x] == 1:
                if x < n - 1 and z[x + 1] == 0:
                    R += q
                if x > 0 and z[x - 1] == 0:
                    R += p
            if x == n - 1:
                R += beta if z[n - 1] == 1 else delta
        if R <= 0.0:
            break
        u1, u2 = _draw(seed, n_ev)
        t += -np.log(u1) / R
        if t > T:
            break
        target = u2 * R
        acc = 0.0
        src = -1
        dst = -1
        for x in range(n):
            if x == 0:
                acc += gamma if z[0] == 1 else alpha
                src = 0
                dst = 0
                if target < acc:
                    break
            if z[x] == 1:
                if x < n - 1 and z[x + 1] == 0:
                    acc += q
                    src = x
                    dst = x + 1
                    if target < acc:
                        break
                if x > 0 and z[x - 1] == 0:
                    acc += p
                    src = x
                    dst = x - 1
                    if target < acc:
                        break
            if x == n - 1:
                acc += beta if z[n - 1] == 1 else delta
                src = n - 1
                dst = n - 1
                if target < acc:
                    break
        if src == dst:
            z[src] = 1 - z[src]
        else:
            z[src] = 0
            z[dst] = 1
        if record:
            if n_ev == ev_t.size:
                ev_t, ev_a, ev_b = _grow(ev_t, ev_a, ev_b, n_ev)
            ev_t[n_ev] = t
            ev_a[n_ev] = src
            ev_b[n_ev] = dst
        n_ev += 1
    m = n_ev if record else 0
    return z, n_ev, ev_t[:m], ev_a[:m], ev_b[:m]


@njit(cache=True, parallel=True)
def fep_segment_hits(occ0, seeds, p, T):
    R = seeds.size
    out = np.empty(R)
    for r in prange(R):
        out[r] = fep_segment(occ0, seeds[r], p, T, True, False)[0]
    return out


@njit(cache=True, parallel=True)
def zrp_segment_hits(w0, seeds, p, threshold, T):
    R = seeds.size
    out = np.empty(R)
    for r in prange(R):
        out[r] = zrp_segment(w0, seeds[r], p, threshold, T, True, False)[0]
    return out


@njit(cache=True, parallel=True)
def fep_circle_hits(occ0, seeds, p, T, tag0):
    R = seeds.size
    out = np.empty(R)
    for r in prange(R):
        out[r] = fep_circle(occ0, seeds[r], p, T, tag0, True, False)[0]
    return out


@njit(cache=True, parallel=True)
def zrp_circle_hits(w0, seeds, p, threshold, T):
    R = seeds.size
    out = np.empty(R)
    for r in prange(R):
        out[r] = zrp_circle(w0, seeds[r], p, threshold, T, True, False)[0]
    return out
