"""Height-function (lattice path) representation of segment configurations.

A configuration with sorted particle positions x_1 < ... < x_k on {1..N} is
encoded by h[i] = 2 x_i - 3 i + 1.  Steps h[i+1] - h[i] = 2 (x_{i+1} - x_i - 1) - 1
are odd and at least -1; a step of +3 or more is a "steep" segment.  Paths are
ordered coordinatewise, which is the same as ordering particle positions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import SegmentConfig, segment_from_positions


def top_height(N: int, k: int) -> int:
    """Height of the right end of every path in the ergodic component."""
    return 2 * N - 3 * k + 1


@dataclass(frozen=True)
class LatticePath:
    N: int
    k: int
    h: tuple

    def __post_init__(self):
        h = tuple(int(v) for v in self.h)
        object.__setattr__(self, "h", h)
        if len(h) != self.k:
            raise ValueError(f"path length {len(h)} does not match k={self.k}")
        validate_heights(self.N, self.k, h)

    def array(self) -> np.ndarray:
        return np.asarray(self.h, dtype=np.int64)

    def csv_row(self) -> str:
        return ",".join(str(v) for v in self.h)


def validate_heights(N: int, k: int, h) -> None:
    """Raise ``ValueError`` unless ``h`` encodes a configuration of k particles
    on {1..N}."""
    if k < 1 or k > N:
        raise ValueError(f"need 1 <= k <= N, got N={N}, k={k}")
    h = np.asarray(h, dtype=np.int64)
    i = np.arange(1, k + 1)
    if np.any((h + i) % 2 != 1):
        raise ValueError("parity violation: h[i] must have the parity of 1 - i")
    if k > 1 and np.any(np.diff(h) < -1):
        raise ValueError("step below -1: particles would overlap")
    if h[0] < 0:
        raise ValueError("left end below 0: first particle left of site 1")
    if h[-1] > top_height(N, k):
        raise ValueError("right end above 2N-3k+1: last particle right of site N")


def to_path(cfg: SegmentConfig) -> LatticePath:
    x = cfg.positions()
    i = np.arange(1, cfg.k + 1)
    return LatticePath(cfg.N, cfg.k, tuple(2 * x - 3 * i + 1))


def positions_of(path: LatticePath) -> np.ndarray:
    i = np.arange(1, path.k + 1)
    return (path.array() + 3 * i - 1) // 2


def from_path(path: LatticePath) -> SegmentConfig:
    return segment_from_positions(path.N, positions_of(path))


def path_from_heights(N: int, k: int, h) -> LatticePath:
    return LatticePath(N, k, tuple(int(v) for v in h))


def leq(a: LatticePath, b: LatticePath) -> bool:
    if (a.N, a.k) != (b.N, b.k):
        raise ValueError("paths must share N and k")
    return all(u <= v for u, v in zip(a.h, b.h))


def steep_segments(path: LatticePath) -> list[int]:
    """1-based indices i with h[i+1] - h[i] > 1."""
    return [i + 1 for i in range(path.k - 1) if path.h[i + 1] - path.h[i] > 1]


def is_ergodic_path(path: LatticePath) -> bool:
    h = path.h
    if h[0] != 0 or h[-1] != top_height(path.N, path.k):
        return False
    return all(abs(h[i + 1] - h[i]) == 1 for i in range(path.k - 1))


def path_to_sep(path: LatticePath) -> tuple:
    """Up-steps of an ergodic path as particles of an exclusion process on
    {1..k-1}."""
    if not is_ergodic_path(path):
        raise ValueError("path_to_sep needs a path of the ergodic component")
    h = path.h
    return tuple((h[i + 1] - h[i] + 1) // 2 for i in range(path.k - 1))


def sep_to_path(N: int, sigma) -> LatticePath:
    """Inverse of :func:`path_to_sep`: the path starting at height 0 whose
    steps are +1 on particles of ``sigma`` and -1 on holes."""
    sigma = [int(s) for s in sigma]
    k = len(sigma) + 1
    if sum(sigma) != N - k:
        raise ValueError(f"sigma must carry N-k={N - k} particles")
    h = [0]
    for s in sigma:
        h.append(h[-1] + 2 * s - 1)
    return LatticePath(N, k, tuple(h))


def minimal_path(N: int, k: int) -> LatticePath:
    """Path of the configuration packed to the left: h[i] = 1 - i."""
    return LatticePath(N, k, tuple(1 - i for i in range(1, k + 1)))


def maximal_path(N: int, k: int) -> LatticePath:
    """Path of the configuration packed to the right: h[i] = 2N - 2k + 1 - i."""
    return LatticePath(N, k, tuple(2 * N - 2 * k + 1 - i for i in range(1, k + 1)))


def minimal_ergodic_path(N: int, k: int) -> LatticePath:
    """Lowest ergodic path: all down-steps first, then all up-steps."""
    n_up = N - k
    return sep_to_path(N, [0] * (k - 1 - n_up) + [1] * n_up)


def maximal_ergodic_path(N: int, k: int) -> LatticePath:
    """Highest ergodic path: all up-steps first, then all down-steps."""
    n_up = N - k
    return sep_to_path(N, [1] * n_up + [0] * (k - 1 - n_up))


def iter_paths(N: int, k: int):
    """All valid paths for (N, k) via the configuration bijection."""
    from .state import iter_occupations

    for occ in iter_occupations(N, k):
        yield to_path(SegmentConfig(occ))
