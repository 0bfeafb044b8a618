"""Entrywise comparison of generators related by the process mappings."""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from ..lattice_path import path_to_sep, to_path, top_height
from ..mappings import ZrpConfig, phi_zrp_to_obep, single_region, zrp_of_circle, zrp_of_segment
from ..state import CircleConfig, SegmentConfig
from .generators import RateMatrix, binary_states, build_generator, composition_states, ergodic_mask


def _compare(rm_a: RateMatrix, rows_a, rm_b: RateMatrix, image: dict) -> float:
    """max |A[x, y] - B[f(x), f(y)]| over the rows ``rows_a`` of A and all
    columns, where ``image`` maps states of A to states of B.  Columns of B
    outside the image must carry zero rate."""
    A = rm_a.Q.tocsr()
    B = rm_b.Q.tocsr()
    worst = 0.0
    for i in rows_a:
        x = rm_a.states[i]
        bi = rm_b.index_of(image[x])
        row_a = {}
        start, stop = A.indptr[i], A.indptr[i + 1]
        for j, v in zip(A.indices[start:stop], A.data[start:stop]):
            y = rm_a.states[j]
            if y not in image:
                worst = max(worst, abs(v))
                continue
            row_a[rm_b.index_of(image[y])] = row_a.get(rm_b.index_of(image[y]), 0.0) + v
        start, stop = B.indptr[bi], B.indptr[bi + 1]
        row_b = dict(zip(B.indices[start:stop], B.data[start:stop]))
        for col in set(row_a) | set(row_b):
            worst = max(worst, abs(row_a.get(col, 0.0) - row_b.get(col, 0.0)))
    return float(worst)


def fep_sep_error(N: int, k: int, p: float) -> float:
    """FEP on its ergodic component against the exclusion process of
    up-slopes on {1..k-1} (right rate 1-p, left rate p)."""
    fep = build_generator("fep-seg", N=N, k=k, p=p)
    sub = fep.restrict(ergodic_mask(fep))
    sep = build_generator("sep", n=k - 1, m=N - k, q=1.0 - p)
    image = {s: path_to_sep(to_path(SegmentConfig(s))) for s in sub.states}
    if sorted(image.values()) != sorted(sep.states):
        raise AssertionError("slope map is not onto the exclusion state space")
    return _compare(sub, range(len(sub)), sep, image)


def fep_zrp_error(N: int, k: int, p: float) -> float:
    """FEP on the segment against the zero range process of particles
    between holes."""
    fep = build_generator("fep-seg", N=N, k=k, p=p)
    zrp = build_generator("zrp-seg", n=N - k + 1, m=k, p=p)
    image = {s: zrp_of_segment(SegmentConfig(s)).w for s in fep.states}
    if len(set(image.values())) != len(fep) or len(zrp) != len(fep):
        raise AssertionError("pile map is not a bijection")
    return _compare(fep, range(len(fep)), zrp, image)


def fep_obep_error(N: int, k: int, p: float, side: str = "minus") -> float:
    """Path dynamics seen from a packed start against the open exclusion
    process on {1..k-1}.

    ``side="minus"``: states whose path starts at height 0 with unit steps,
    compared with the right-reservoir process (q, 0, 0, 0, p).
    ``side="plus"``: states whose path ends at 2N-3k+1 with unit steps,
    compared with the left-reservoir process (q, q, 0, 0, 0).
    Rows are compared while fewer than N-k particles have entered.
    """
    q = 1.0 - p
    fep = build_generator("fep-seg", N=N, k=k, p=p)
    top = top_height(N, k)
    if side == "minus":
        obep = build_generator("obep", n=k - 1, q=q, delta=p)
    elif side == "plus":
        obep = build_generator("obep", n=k - 1, q=q, alpha=q)
    else:
        raise ValueError("side must be 'minus' or 'plus'")
    image = {}
    rows = []
    for i, s in enumerate(fep.states):
        h = to_path(SegmentConfig(s)).h
        if any(abs(h[j + 1] - h[j]) != 1 for j in range(k - 1)):
            continue
        if side == "minus" and h[0] != 0:
            continue
        if side == "plus" and h[-1] != top:
            continue
        z = tuple((h[j + 1] - h[j] + 1) // 2 for j in range(k - 1))
        image[s] = z
        if sum(z) < N - k:
            rows.append(i)
    return _compare(fep, rows, obep, image)


def circle_zrp_error(N: int, k: int, p: float = 0.5) -> float:
    """Circle FEP with a tagged hole against the circle zero range process.

    For every configuration and every choice of tagged hole, the rates of
    the FEP moves, grouped by the pile vector they lead to (with the tag
    following the particle that fills it), must equal the zero range rates.
    """
    q = 1.0 - p
    zrp = build_generator("zrp-circle", n=N - k, m=k, p=p)
    Z = zrp.Q.tocsr()
    worst = 0.0
    for s in binary_states(N, k):
        cfg = CircleConfig(s)
        for tag in cfg.holes():
            tag = int(tag)
            w = zrp_of_circle(cfg, tag).w
            out = defaultdict(float)
            for x in range(N):
                if not s[x]:
                    continue
                left, right = (x - 1) % N, (x + 1) % N
                if left == right:
                    continue
                for dst, ok, rate in ((right, s[left] and not s[right], p), (left, s[right] and not s[left], q)):
                    if not ok:
                        continue
                    t = list(s)
                    t[x], t[dst] = 0, 1
                    new_tag = x if dst == tag else tag
                    w2 = zrp_of_circle(CircleConfig(t), new_tag).w
                    if w2 != w:
                        out[w2] += rate
            bi = zrp.index_of(w)
            row = {zrp.states[j]: v for j, v in zip(Z.indices[Z.indptr[bi]:Z.indptr[bi + 1]],
                                                   Z.data[Z.indptr[bi]:Z.indptr[bi + 1]]) if j != bi}
            for key in set(out) | set(row):
                worst = max(worst, abs(out.get(key, 0.0) - row.get(key, 0.0)))
    return float(worst)


def phi_rate_mismatch(n: int, ell: int) -> float:
    """Compare the symmetric circle zero range process (rate 1/2 each way
    from piles of size >= 2) started from single-block states with the open
    exclusion process (1/2, 1/2, 0, 0, 1/2) started from their image.

    Zero range moves that fill the last empty pile, and exclusion moves that
    bring the particle count to n-1, are both sent to a common absorbing
    label; all other moves are compared through the block map.
    """
    if ell < 2 or n < 2:
        raise ValueError("need n >= 2 and ell >= 2")
    obep = build_generator("obep", n=ell - 1, q=0.5, alpha=0.5, delta=0.5)
    O = obep.Q.tocsr()
    zrp = build_generator("zrp-circle", n=n, m=ell, p=0.5)
    Zq = zrp.Q.tocsr()
    worst = 0.0
    absorbed = "merged"
    for i, w in enumerate(composition_states(n, ell)):
        if single_region(w) is None:
            continue
        src = tuple(phi_zrp_to_obep(ZrpConfig(w, "circle")))
        zi = zrp.index_of(w)
        mapped = defaultdict(float)
        for j, v in zip(Zq.indices[Zq.indptr[zi]:Zq.indptr[zi + 1]], Zq.data[Zq.indptr[zi]:Zq.indptr[zi + 1]]):
            if j == zi:
                continue
            w2 = zrp.states[j]
            if min(w2) >= 1:
                mapped[absorbed] += v
            else:
                mapped[tuple(phi_zrp_to_obep(ZrpConfig(w2, "circle")))] += v
        oi = obep.index_of(src)
        expected = defaultdict(float)
        for j, v in zip(O.indices[O.indptr[oi]:O.indptr[oi + 1]], O.data[O.indptr[oi]:O.indptr[oi + 1]]):
            if j == oi:
                continue
            z2 = obep.states[j]
            expected[absorbed if sum(z2) >= n - 1 else z2] += v
        for key in set(mapped) | set(expected):
            worst = max(worst, abs(mapped.get(key, 0.0) - expected.get(key, 0.0)))
    return float(worst)
