"""Correspondences between the facilitated exclusion process and simpler
processes: zero range piles between holes, exclusion processes read off
lattice-path slopes, and the map from a single zero range block to an open
exclusion process.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine.simulate import obep_heights, path_events_to_sites
from .engine.trajectory import Trajectory
from .lattice_path import maximal_path, minimal_path, top_height
from .state import CircleConfig, SegmentConfig


@dataclass(frozen=True)
class ZrpConfig:
    """Pile sizes; ``geometry`` is "segment" (closed ends) or "circle"."""

    w: tuple
    geometry: str = "segment"

    def __post_init__(self):
        w = tuple(int(v) for v in self.w)
        if any(v < 0 for v in w):
            raise ValueError("pile sizes must be nonnegative")
        if self.geometry not in ("segment", "circle"):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        object.__setattr__(self, "w", w)

    @property
    def n(self) -> int:
        return len(self.w)

    @property
    def total(self) -> int:
        return sum(self.w)

    def array(self) -> np.ndarray:
        return np.asarray(self.w, dtype=np.int64)

    def all_occupied(self) -> bool:
        return all(v >= 1 for v in self.w)


# ---------------------------------------------------------------- segment

def zrp_of_segment(cfg: SegmentConfig) -> ZrpConfig:
    """Particles between consecutive holes, with virtual holes at sites 0 and
    N+1: pile i holds y(i) - y(i-1) - 1 particles for hole positions y."""
    y = np.concatenate([[0], cfg.holes(), [cfg.N + 1]])
    return ZrpConfig(tuple(np.diff(y) - 1), "segment")


def segment_of_zrp(z: ZrpConfig) -> SegmentConfig:
    """Inverse of :func:`zrp_of_segment`."""
    occ = []
    for j, v in enumerate(z.w):
        if j:
            occ.append(0)
        occ.extend([1] * v)
    return SegmentConfig(np.asarray(occ, dtype=np.uint8))


# ---------------------------------------------------------------- circle

def zrp_of_circle(cfg: CircleConfig, tag: int) -> ZrpConfig:
    """Piles between consecutive holes read clockwise from the tagged hole:
    pile i holds y(i+1) - y(i) - 1 particles, where y(0) = tag."""
    if cfg.k >= cfg.N:
        raise ValueError("circle map needs at least one hole")
    if cfg.occ[tag % cfg.N]:
        raise ValueError(f"tag {tag} is not a hole")
    N = cfg.N
    rel = np.sort((cfg.holes() - tag) % N)
    y = np.concatenate([rel, [N]])
    return ZrpConfig(tuple(np.diff(y) - 1), "circle")


def circle_of_zrp(z: ZrpConfig, tag: int) -> CircleConfig:
    """Inverse of :func:`zrp_of_circle` given the tag position."""
    n = z.n
    N = z.total + n
    occ = np.zeros(N, dtype=np.uint8)
    x = tag
    for v in z.w:
        for s in range(1, v + 1):
            occ[(x + s) % N] = 1
        x += v + 1
    return CircleConfig(occ)


def zrp_path_of_circle(traj: Trajectory) -> list[tuple[float, ZrpConfig]]:
    """Image of a tagged circle trajectory under the tagged pile map, one
    entry per state (time 0 and after each event)."""
    tags = np.concatenate([[traj.meta["tag0"]], traj.meta["tags"]])
    out = []
    for j, (t, state) in enumerate(traj.states()):
        out.append((t, zrp_of_circle(CircleConfig(state.astype(np.uint8)), int(tags[j]))))
    return out


# ---------------------------------------------------------------- open boundary views

def obep_view(traj: Trajectory) -> tuple[Trajectory, float]:
    """Open-boundary exclusion trajectory read off the lattice path started
    from the leftmost or rightmost packed configuration.

    From the left-packed start the slopes of the path form an exclusion
    process on {1..k-1} fed by a reservoir at its right end; from the
    right-packed start the up-slopes form one fed at its left end.  The view
    stops when the reservoir has delivered N-k particles, which is also the
    time the path reaches the ergodic component.  Returns the truncated view
    and that stopping time (+inf if not reached before the horizon).
    """
    if traj.kind != "path":
        raise ValueError("obep_view needs a lattice path trajectory")
    N, k = traj.meta["N"], traj.meta["k"]
    h0 = tuple(int(v) for v in traj.initial)
    top = top_height(N, k)
    if h0 == minimal_path(N, k).h:
        anchor, level = "left", 0
        reached = lambda i, y: i == k and y == top  # noqa: E731
    elif h0 == maximal_path(N, k).h:
        anchor, level = "right", top
        reached = lambda i, y: i == 1 and y == 0  # noqa: E731
    else:
        raise ValueError("obep_view is defined only for the two packed starts")
    stop = float("inf")
    for t, i, y in zip(traj.times, traj.coords, traj.values):
        if reached(int(i), int(y)):
            stop = float(t)
            break
    cut = traj.truncate(stop) if stop < np.inf else traj
    src, dst = path_events_to_sites(cut.times, cut.coords, cut.values, h0)
    z0 = np.zeros(k - 1, dtype=np.int64)
    meta = {"n": k - 1, "anchor": anchor, "level": level, "stop": stop}
    view = Trajectory("sites", z0, cut.times, src, dst, cut.horizon, 1, meta)
    return view, stop


def obep_occupation_of_path(h) -> np.ndarray:
    """Slopes of a height vector as an occupation vector (up-slope = 1)."""
    h = np.asarray(h, dtype=np.int64)
    return ((np.diff(h) + 1) // 2).astype(np.int64)


def path_of_obep(z, anchor: str = "left", level: int = 0) -> np.ndarray:
    return obep_heights(z, anchor, level)


# ---------------------------------------------------------------- single block to OBEP

def single_region(w) -> tuple[int, int] | None:
    """(start, length) of the unique maximal run of nonempty piles of a
    circular pile vector that has at least one empty pile, else None."""
    w = np.asarray(w, dtype=np.int64)
    n = w.size
    if n == 0 or w.min() >= 1:
        return None
    starts = [i for i in range(n) if w[i] >= 1 and w[i - 1] == 0]
    if len(starts) != 1:
        return None
    s = starts[0]
    length = 0
    while length < n and w[(s + length) % n] >= 1:
        length += 1
    return s, length


def phi_zrp_to_obep(z: ZrpConfig) -> np.ndarray:
    """Map a circular pile vector with a single block of nonempty piles to an
    exclusion configuration on {1..l-1}, l the block mass.

    Reading the block clockwise with sizes w_1..w_L, particle r of the image
    sits at w_1 + ... + w_r for r = 1..L-1; the last pile plays the part of
    the right reservoir.  A block made of one pile maps to the empty
    configuration.

    Correspondence of moves (all rates 1/2, only piles of size >= 2 move):
      pile 1 sends left into the empty pile before the block  <->  creation at site 1
      pile L sends right into the empty pile after the block  <->  creation at site l-1
      pile r sends left to pile r-1                           <->  particle r-1 steps right
      pile r sends right to pile r+1                          <->  particle r steps left
    A move that fills the last empty pile corresponds to the image reaching
    n-1 particles, n the number of piles; both are treated as absorbing by
    :func:`fepmix.exact.phi_rate_mismatch`.
    """
    reg = single_region(z.w)
    if reg is None:
        raise ValueError("input must contain exactly one block of nonempty piles and an empty pile")
    s, L = reg
    n = z.n
    block = [z.w[(s + r) % n] for r in range(L)]
    ell = sum(block)
    img = np.zeros(max(ell - 1, 0), dtype=np.int64)
    pos = np.cumsum(block)[:-1]
    img[pos - 1] = 1
    return img


def constant_rate_reduction(z: ZrpConfig) -> ZrpConfig:
    """Drop the empty first pile and one particle from every other pile.

    Valid for pile vectors (0, w_2, ..., w_n) with every w_x >= 1, the image of
    configurations that miss the ergodic component only through an empty
    first site.  The result lives on n-1 piles and moves at rate 1{pile >= 1}.
    """
    w = z.w
    if len(w) < 2 or w[0] != 0 or any(v < 1 for v in w[1:]):
        raise ValueError("reduction needs an empty first pile and nonempty others")
    return ZrpConfig(tuple(v - 1 for v in w[1:]), "segment")
