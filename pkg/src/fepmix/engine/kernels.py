"""Compiled kernels for the lattice-path graphical construction.

A path is an int64 height vector of length k.  Coordinate i (0-based here,
1-based in clock keys) can flip up by 2 at a local minimum and down by 2 at a
local maximum.  The left end may only flip down, and only while it stays
above ``floor``; the right end may only flip up, and only while it stays
below ``top``.  Segment FEP paths use floor 0 and top 2N-3k+1; open-boundary
views replace one of the two bounds by an unreachable sentinel.

Clock streams are Poisson processes attached to (coordinate, height,
direction).  They are materialised one unit-length time window at a time:
window w of a stream holds a Poisson(rate) number of rings placed uniformly in
[w, w+1), all drawn from a counter keyed by (seed, coordinate, height,
direction, w).  The first ring after any instant is therefore found without
generating the stream from time zero.

Every path keeps a tournament tree over its k coordinates holding the next
ring that would move each coordinate.  After an event only the moved
coordinate and its two neighbours can change status.
"""
import numpy as np
from numba import njit, prange

from .rng import key5, poisson_by_inversion, uniform_at

FAR = np.int64(1) << np.int64(60)

# stop rules for run_paths
STOP_NONE = 0
STOP_COALESCE = 1
STOP_ERGODIC = 2
STOP_RIGHT_TOP = 3
STOP_LEFT_FLOOR = 4


@njit(cache=True)
def next_ring(seed, i, y, d, rate, t):
    """First ring strictly after ``t`` on stream (i, y, d)."""
    if rate <= 0.0:
        return np.inf
    w = np.int64(np.floor(t))
    while True:
        key = key5(seed, i, y, d, w)
        n = poisson_by_inversion(uniform_at(key, 0), rate)
        best = np.inf
        for j in range(n):
            s = w + uniform_at(key, j + 1)
            if s > t and s < best:
                best = s
        if best < np.inf:
            return best
        w += 1


@njit(cache=True)
def window_rings(seed, i, y, d, rate, w):
    """Sorted ring times of stream (i, y, d) inside window [w, w+1)."""
    key = key5(seed, i, y, d, w)
    n = poisson_by_inversion(uniform_at(key, 0), rate)
    out = np.empty(n)
    for j in range(n):
        out[j] = w + uniform_at(key, j + 1)
    out.sort()
    return out


@njit(cache=True, inline="always")
def move_dir(h, i, k, floor, top):
    """+1 if coordinate i can flip up, -1 if it can flip down, else 0."""
    if k < 2:
        return 0
    y = h[i]
    if i == 0:
        if h[1] == y - 1 and y > floor:
            return -1
        return 0
    if i == k - 1:
        if h[i - 1] == y + 1 and y < top:
            return 1
        return 0
    if h[i - 1] == y + 1 and h[i + 1] > y:
        return 1
    if h[i + 1] == y - 1 and h[i - 1] < y:
        return -1
    return 0


@njit(cache=True, inline="always")
def tree_set(tt, ti, P, i, val):
    pos = P + i
    tt[pos] = val
    ti[pos] = i
    pos >>= 1
    while pos >= 1:
        left = 2 * pos
        if tt[left + 1] < tt[left]:
            tt[pos] = tt[left + 1]
            ti[pos] = ti[left + 1]
        else:
            tt[pos] = tt[left]
            ti[pos] = ti[left]
        pos >>= 1


@njit(cache=True)
def refresh(H, D, TT, TI, P, m, j, k, floor, top, seed, p, q, now, force):
    d = move_dir(H[m], j, k, floor, top)
    if d == D[m, j] and not force:
        return
    D[m, j] = d
    if d == 0:
        t = np.inf
    elif d > 0:
        t = next_ring(seed, j + 1, H[m, j], 1, p, now)
    else:
        t = next_ring(seed, j + 1, H[m, j], -1, q, now)
    tree_set(TT[m], TI[m], P, j, t)


@njit(cache=True, inline="always")
def local_defects(h, i, k, floor, top):
    """Defects that depend on h[i]: steep steps on either side of it, and an
    endpoint away from its ergodic value."""
    c = 0
    if i > 0 and h[i] - h[i - 1] > 1:
        c += 1
    if i < k - 1 and h[i + 1] - h[i] > 1:
        c += 1
    if i == 0 and h[0] != floor:
        c += 1
    if i == k - 1 and h[k - 1] != top:
        c += 1
    return c


@njit(cache=True)
def total_defects(h, k, floor, top):
    c = 0
    for i in range(k - 1):
        if h[i + 1] - h[i] > 1:
            c += 1
    if h[0] != floor:
        c += 1
    if h[k - 1] != top:
        c += 1
    return c


@njit(cache=True)
def run_paths(H0, seed, p, floor, top, T, stop, record, check_order):
    """Advance M paths on one clock field until ``T`` or the stop rule.

    Returns (stop_time, final heights, event count, order violations,
    event path, event time, event coordinate (1-based), event height).
    ``stop_time`` is +inf when the horizon was reached first.  Order
    violations count, per instant with at least one event, the moved
    coordinates at which consecutive paths are out of order.
    """
    M, k = H0.shape
    q = 1.0 - p
    H = H0.copy()
    P = 1
    while P < k:
        P *= 2
    TT = np.full((M, 2 * P), np.inf)
    TI = np.zeros((M, 2 * P), dtype=np.int64)
    D = np.zeros((M, k), dtype=np.int64)
    for m in range(M):
        for j in range(k):
            refresh(H, D, TT, TI, P, m, j, k, floor, top, seed, p, q, 0.0, True)

    cap = 1024 if record else 0
    ev_m = np.empty(cap, dtype=np.int64)
    ev_t = np.empty(cap)
    ev_i = np.empty(cap, dtype=np.int64)
    ev_h = np.empty(cap, dtype=np.int64)
    n_ev = 0
    violations = 0
    pend = np.empty(M * k + 1, dtype=np.int64)
    n_pend = 0

    # stop-rule bookkeeping
    ndiff = 0
    if stop == STOP_COALESCE:
        for m in range(1, M):
            for j in range(k):
                if H[m, j] != H[0, j]:
                    ndiff += 1
    bad = np.zeros(M, dtype=np.int64)
    nbad = 0
    if stop == STOP_ERGODIC:
        for m in range(M):
            bad[m] = total_defects(H[m], k, floor, top)
            if bad[m] > 0:
                nbad += 1
    if stop == STOP_RIGHT_TOP:
        for m in range(M):
            if H[m, k - 1] != top:
                nbad += 1
    if stop == STOP_LEFT_FLOOR:
        for m in range(M):
            if H[m, 0] != floor:
                nbad += 1

    if stop == STOP_COALESCE and ndiff == 0:
        return 0.0, H, n_ev, violations, ev_m[:0], ev_t[:0], ev_i[:0], ev_h[:0]
    if stop >= STOP_ERGODIC and nbad == 0:
        return 0.0, H, n_ev, violations, ev_m[:0], ev_t[:0], ev_i[:0], ev_h[:0]

    stop_time = np.inf
    while True:
        best = np.inf
        bm = -1
        for m in range(M):
            if TT[m, 1] < best:
                best = TT[m, 1]
                bm = m
        if bm < 0 or best > T:
            break
        i = TI[bm, 1]
        d = D[bm, i]
        before = 0
        after = 0
        if stop == STOP_COALESCE:
            if bm == 0:
                for m in range(1, M):
                    if H[m, i] != H[0, i]:
                        ndiff -= 1
            elif H[bm, i] != H[0, i]:
                ndiff -= 1
        if stop == STOP_ERGODIC:
            before = local_defects(H[bm], i, k, floor, top)
        H[bm, i] += 2 * d
        if stop == STOP_COALESCE:
            if bm == 0:
                for m in range(1, M):
                    if H[m, i] != H[0, i]:
                        ndiff += 1
            elif H[bm, i] != H[0, i]:
                ndiff += 1
        if stop == STOP_ERGODIC:
            after = local_defects(H[bm], i, k, floor, top)
            was_bad = bad[bm] > 0
            bad[bm] += after - before
            if was_bad and bad[bm] == 0:
                nbad -= 1
            elif not was_bad and bad[bm] > 0:
                nbad += 1
        if stop == STOP_RIGHT_TOP and i == k - 1 and H[bm, i] == top:
            nbad -= 1
        if stop == STOP_LEFT_FLOOR and i == 0 and H[bm, i] == floor:
            nbad -= 1
        if check_order:
            # paths sharing a height read the same ring at the same instant,
            # so the order is checked once all events at this time are applied
            pend[n_pend] = i
            n_pend += 1
        if record:
            if n_ev == ev_t.size:
                ncap = 2 * ev_t.size
                t_m = np.empty(ncap, dtype=np.int64)
                t_t = np.empty(ncap)
                t_i = np.empty(ncap, dtype=np.int64)
                t_h = np.empty(ncap, dtype=np.int64)
                t_m[:n_ev] = ev_m[:n_ev]
                t_t[:n_ev] = ev_t[:n_ev]
                t_i[:n_ev] = ev_i[:n_ev]
                t_h[:n_ev] = ev_h[:n_ev]
                ev_m, ev_t, ev_i, ev_h = t_m, t_t, t_i, t_h
            ev_m[n_ev] = bm
            ev_t[n_ev] = best
            ev_i[n_ev] = i + 1
            ev_h[n_ev] = H[bm, i]
        n_ev += 1
        refresh(H, D, TT, TI, P, bm, i, k, floor, top, seed, p, q, best, True)
        if i > 0:
            refresh(H, D, TT, TI, P, bm, i - 1, k, floor, top, seed, p, q, best, False)
        if i < k - 1:
            refresh(H, D, TT, TI, P, bm, i + 1, k, floor, top, seed, p, q, best, False)
        if check_order:
            nxt = np.inf
            for m in range(M):
                if TT[m, 1] < nxt:
                    nxt = TT[m, 1]
            if nxt > best:
                for a in range(n_pend):
                    j = pend[a]
                    for m in range(M - 1):
                        if H[m, j] > H[m + 1, j]:
                            violations += 1
                n_pend = 0
        if stop == STOP_COALESCE and ndiff == 0:
            stop_time = best
            break
        if stop >= STOP_ERGODIC and nbad == 0:
            stop_time = best
            break
    m_rec = n_ev if record else 0
    return stop_time, H, n_ev, violations, ev_m[:m_rec], ev_t[:m_rec], ev_i[:m_rec], ev_h[:m_rec]


@njit(cache=True, parallel=True)
def stop_times_batch(H0, seeds, p, floor, top, T, stop):
    """Stop times of :func:`run_paths` for one start and many seeds."""
    R = seeds.size
    out = np.empty(R)
    events = np.empty(R, dtype=np.int64)
    for r in prange(R):
        res = run_paths(H0, seeds[r], p, floor, top, T, stop, False, False)
        out[r] = res[0]
        events[r] = res[2]
    return out, events


@njit(cache=True, parallel=True)
def coupled_states_at(H0, seeds, p, floor, top, times):
    """For each seed, whether all M paths coincide at each of ``times``
    (sorted).  Returns a (R, len(times)) boolean array."""
    R = seeds.size
    nt = times.size
    out = np.zeros((R, nt), dtype=np.bool_)
    for r in prange(R):
        tc = run_paths(H0, seeds[r], p, floor, top, times[nt - 1], STOP_COALESCE, False, False)[0]
        for j in range(nt):
            out[r, j] = tc <= times[j]
    return out
