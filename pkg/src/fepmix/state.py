"""Configurations, ergodic components and ergodic regions of the facilitated
exclusion process on the segment {1..N} and on the circle Z/NZ.

Segment configurations use 1-based site labels in the public API (site ``x``
is stored at ``occ[x - 1]``); circle configurations are 0-based.  Both are
serialised as ASCII strings of 0/1, leftmost character first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, NamedTuple

import numpy as np

MAX_SITES = 1 << 20


def _as_bits(occ) -> np.ndarray:
    if isinstance(occ, str):
        if set(occ) - {"0", "1"}:
            raise ValueError(f"configuration string must contain only 0/1, got {occ!r}")
        arr = np.frombuffer(occ.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(occ)
        if arr.ndim != 1:
            raise ValueError("occupation vector must be one-dimensional")
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("occupation vector must be 0/1 valued")
    out = np.array(arr, dtype=np.uint8)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class _Config:
    occ: np.ndarray
    N: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        bits = _as_bits(self.occ)
        if bits.size < 1 or bits.size > MAX_SITES:
            raise ValueError(f"site count must lie in [1, {MAX_SITES}], got {bits.size}")
        object.__setattr__(self, "occ", bits)
        object.__setattr__(self, "N", int(bits.size))
        object.__setattr__(self, "k", int(bits.sum()))

    def __eq__(self, other):
        return type(self) is type(other) and np.array_equal(self.occ, other.occ)

    def __hash__(self):
        return hash((type(self).__name__, self.occ.tobytes()))

    def __str__(self):
        return (self.occ + ord("0")).tobytes().decode("ascii")

    def __repr__(self):
        return f"{type(self).__name__}('{self}')"

    def as_tuple(self) -> tuple:
        return tuple(int(b) for b in self.occ)


class SegmentConfig(_Config):
    """Occupation of the segment {1..N}; ``occ[x-1]`` is site ``x``."""

    def positions(self) -> np.ndarray:
        """Sorted 1-based particle positions."""
        return np.flatnonzero(self.occ) + 1

    def holes(self) -> np.ndarray:
        return np.flatnonzero(self.occ == 0) + 1


class CircleConfig(_Config):
    """Occupation of Z/NZ; ``occ[x]`` is site ``x``."""

    def positions(self) -> np.ndarray:
        return np.flatnonzero(self.occ)

    def holes(self) -> np.ndarray:
        return np.flatnonzero(self.occ == 0)

    def rotate(self, shift: int) -> "CircleConfig":
        """Configuration translated clockwise by ``shift`` sites."""
        return CircleConfig(np.roll(self.occ, shift))


def segment_from_positions(N: int, positions) -> SegmentConfig:
    occ = np.zeros(N, dtype=np.uint8)
    pos = np.asarray(list(positions), dtype=np.int64)
    if pos.size and (pos.min() < 1 or pos.max() > N or np.unique(pos).size != pos.size):
        raise ValueError("positions must be distinct sites in 1..N")
    occ[pos - 1] = 1
    return SegmentConfig(occ)


def circle_from_positions(N: int, positions) -> CircleConfig:
    occ = np.zeros(N, dtype=np.uint8)
    pos = np.asarray(list(positions), dtype=np.int64) % N
    if np.unique(pos).size != pos.size:
        raise ValueError("positions must be distinct modulo N")
    occ[pos] = 1
    return CircleConfig(occ)


def is_ergodic_segment(cfg: SegmentConfig) -> bool:
    """Occupied endpoints and no two neighbouring holes."""
    occ = cfg.occ
    if not (occ[0] and occ[-1]):
        return False
    return not bool(np.any((occ[:-1] == 0) & (occ[1:] == 0)))


def is_ergodic_circle(cfg: CircleConfig) -> bool:
    """No two neighbouring holes anywhere on the circle."""
    occ = cfg.occ
    if cfg.N == 1:
        return bool(occ[0])
    return not bool(np.any((occ == 0) & (np.roll(occ, -1) == 0)))


@dataclass(frozen=True)
class ErgodicRegionSet:
    """Ergodic regions of a circle configuration.

    ``regions`` holds clockwise closed intervals ``(start, end)`` sorted by
    ``start``; an interval with ``end < start`` wraps through site 0.
    ``full_circle`` marks configurations of the ergodic component, for which
    the whole circle forms a single region and ``regions`` is empty.
    """

    N: int
    regions: tuple = ()
    counts: tuple = ()
    full_circle: bool = False

    def __len__(self):
        return len(self.regions)

    def sites(self, j: int) -> list[int]:
        a, b = self.regions[j]
        length = (b - a) % self.N + 1
        return [(a + s) % self.N for s in range(length)]


def ergodic_regions(cfg: CircleConfig) -> ErgodicRegionSet:
    """Split the circle at every pair of neighbouring holes and keep the
    occupied hull of each piece."""
    N = cfg.N
    occ = cfg.occ
    if is_ergodic_circle(cfg):
        return ErgodicRegionSet(N=N, regions=(), counts=(), full_circle=True)
    double = np.flatnonzero((occ == 0) & (np.roll(occ, -1) == 0))
    # Walk once around the circle starting just after a double hole.
    start = (int(double[0]) + 1) % N
    regions = []
    counts = []
    first = last = None
    count = 0
    for s in range(N + 1):
        x = (start + s) % N
        cut = s == N or (occ[x] == 0 and occ[(x + 1) % N] == 0)
        if s < N and occ[x]:
            if first is None:
                first = x
            last = x
            count += 1
        if cut:
            if first is not None:
                regions.append((first, last))
                counts.append(count)
            first = last = None
            count = 0
    order = sorted(range(len(regions)), key=lambda j: regions[j][0])
    return ErgodicRegionSet(
        N=N,
        regions=tuple(regions[j] for j in order),
        counts=tuple(counts[j] for j in order),
        full_circle=False,
    )


def in_class_I_m(cfg: CircleConfig, m: int) -> bool:
    """True when some ``m`` ergodic regions jointly hold at least ``N - k``
    particles."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    regs = ergodic_regions(cfg)
    if regs.full_circle:
        raise ValueError("configuration already lies in the ergodic component")
    top = sorted(regs.counts, reverse=True)[:m]
    return sum(top) >= cfg.N - cfg.k


def count_ergodic(space: str, N: int, k: int) -> int:
    """Closed-form size of the ergodic component.

    circle: (N/k) * C(k, N-k);  segment: C(k-1, N-k).
    """
    if not (0 < N and 2 * k >= N and k <= N):
        raise ValueError(f"need N/2 <= k <= N, got N={N}, k={k}")
    if space == "circle":
        return N * comb(k, N - k) // k
    if space == "segment":
        return comb(k - 1, N - k)
    raise ValueError(f"unknown space {space!r}")


def iter_occupations(N: int, k: int) -> Iterator[tuple]:
    """All 0/1 tuples of length N with k ones, in lexicographic order of the
    particle positions."""
    for pos in itertools.combinations(range(N), k):
        occ = [0] * N
        for x in pos:
            occ[x] = 1
        yield tuple(occ)


def enumerate_segment(N: int, k: int, ergodic_only: bool = False) -> list[SegmentConfig]:
    out = [SegmentConfig(o) for o in iter_occupations(N, k)]
    if ergodic_only:
        out = [c for c in out if is_ergodic_segment(c)]
    return out


def enumerate_circle(N: int, k: int, ergodic_only: bool = False) -> list[CircleConfig]:
    out = [CircleConfig(o) for o in iter_occupations(N, k)]
    if ergodic_only:
        out = [c for c in out if is_ergodic_circle(c)]
    return out


class SpecialConfigs(NamedTuple):
    minus: SegmentConfig
    plus: SegmentConfig
    vee: SegmentConfig
    wedge: SegmentConfig
    h_sample: SegmentConfig


def special_configs(N: int, k: int) -> SpecialConfigs:
    """Extremal segment configurations for N/2 < k < N.

    ``minus``/``plus`` pack all particles to the left/right.  ``vee`` and
    ``wedge`` are the minimal and maximal elements of the ergodic component:
    ``wedge`` has its holes at the even sites of [1, 2N-2k], ``vee`` is its
    mirror image.  ``h_sample`` has holes at the odd sites of [1, 2N-2k-1]; it
    misses the ergodic component only through its empty first site.
    """
    if not (2 * k > N and k < N):
        raise ValueError(f"need N/2 < k < N, got N={N}, k={k}")
    x = np.arange(1, N + 1)
    band = 2 * (N - k)
    minus = (x <= k).astype(np.uint8)
    plus = (x > N - k).astype(np.uint8)
    wedge_holes = (x % 2 == 0) & (x <= band)
    wedge = (~wedge_holes).astype(np.uint8)
    vee = wedge[::-1].copy()
    h = (~((x % 2 == 1) & (x <= band - 1))).astype(np.uint8)
    return SpecialConfigs(
        SegmentConfig(minus),
        SegmentConfig(plus),
        SegmentConfig(vee),
        SegmentConfig(wedge),
        SegmentConfig(h),
    )
