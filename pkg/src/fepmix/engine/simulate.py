"""Python entry points for the simulators."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..lattice_path import LatticePath, top_height
from ..state import CircleConfig, SegmentConfig
from . import gillespie as G
from . import kernels as K
from .trajectory import HitResult, Trajectory

_FAR = int(K.FAR)


@dataclass(frozen=True)
class ClockField:
    """Replayable Poisson clocks on (coordinate, height, direction).

    Up clocks ring at rate ``p`` and down clocks at rate ``1 - p``.  The
    field is a pure function of ``seed``: nothing is stored, every query
    regenerates the requested stretch of the stream.
    """

    p: float
    seed: int

    def __post_init__(self):
        if not (0.5 <= self.p < 1.0):
            raise ValueError(f"p must lie in [1/2, 1), got {self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    def rate(self, direction: int) -> float:
        return self.p if direction > 0 else self.q

    def rings(self, i: int, y: int, direction: int, t0: float, t1: float) -> np.ndarray:
        """Ring times of stream (i, y, direction) in (t0, t1]."""
        d = 1 if direction > 0 else -1
        rate = self.rate(d)
        out = []
        for w in range(int(np.floor(t0)), int(np.floor(t1)) + 1):
            r = K.window_rings(self.seed, i, y, d, rate, w)
            out.append(r[(r > t0) & (r <= t1)])
        return np.concatenate(out) if out else np.empty(0)

    def next_ring(self, i: int, y: int, direction: int, t: float) -> float:
        d = 1 if direction > 0 else -1
        return float(K.next_ring(self.seed, i, y, d, self.rate(d), t))


@dataclass(frozen=True)
class ObepParams:
    q: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        vals = (self.q, self.alpha, self.beta, self.gamma, self.delta)
        if not all(np.isfinite(v) and v >= 0 for v in vals):
            raise ValueError("OBEP rates must be finite and nonnegative")
        if self.q > 1:
            raise ValueError("q must not exceed 1")

    @property
    def p(self) -> float:
        return 1.0 - self.q

    @classmethod
    def right_reservoir(cls, q: float) -> "ObepParams":
        """Closed left end, injection at the right end at rate 1-q."""
        return cls(q, 0.0, 0.0, 0.0, 1.0 - q)

    @classmethod
    def left_reservoir(cls, q: float) -> "ObepParams":
        """Injection at the left end at rate q, closed right end."""
        return cls(q, q, 0.0, 0.0, 0.0)

    def is_right_reservoir(self) -> bool:
        return (self.alpha, self.beta, self.gamma) == (0, 0, 0) and self.delta == 1.0 - self.q

    def is_left_reservoir(self) -> bool:
        return self.alpha == self.q and (self.beta, self.gamma, self.delta) == (0, 0, 0)

    def as_tuple(self) -> tuple:
        return (self.q, self.alpha, self.beta, self.gamma, self.delta)


def _path_matrix(paths) -> np.ndarray:
    return np.array([list(p.h) for p in paths], dtype=np.int64)


def _path_traj(h0, times, coords, values, T, meta) -> Trajectory:
    return Trajectory("path", np.asarray(h0, dtype=np.int64), times, coords, values, float(T), 0, meta)


def run_field(H0: np.ndarray, field: ClockField, T: float, floor: int, top: int,
              stop: int = K.STOP_NONE, check_order: bool = False):
    """Thin wrapper around the compiled path kernel returning
    (stop_time, final heights, violations, list of per-path event arrays)."""
    H0 = np.ascontiguousarray(H0, dtype=np.int64)
    res = K.run_paths(H0, np.int64(field.seed), float(field.p), np.int64(floor), np.int64(top),
                      float(T), stop, True, check_order)
    stop_time, H, _, violations, ev_m, ev_t, ev_i, ev_h = res
    per_path = []
    for m in range(H0.shape[0]):
        sel = ev_m == m
        per_path.append((ev_t[sel], ev_i[sel], ev_h[sel]))
    return float(stop_time), H, int(violations), per_path


def simulate_path(p0: LatticePath, field: ClockField, T: float) -> Trajectory:
    """FEP lattice-path dynamics on the clock field up to time ``T``."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    top = top_height(p0.N, p0.k)
    _, _, _, per = run_field(_path_matrix([p0]), field, T, 0, top)
    t, i, h = per[0]
    return _path_traj(p0.h, t, i, h, T, {"N": p0.N, "k": p0.k, "floor": 0, "top": top})


def simulate_coupled(starts, field: ClockField, T: float, check_order: bool = False) -> list[Trajectory]:
    """Drive every start by the same clock field.  With ``check_order`` the
    starts must be listed in increasing order and an ``AssertionError`` is
    raised if the order ever breaks."""
    starts = list(starts)
    N, k = starts[0].N, starts[0].k
    if any((s.N, s.k) != (N, k) for s in starts):
        raise ValueError("all starts must share N and k")
    top = top_height(N, k)
    _, _, viol, per = run_field(_path_matrix(starts), field, T, 0, top, check_order=check_order)
    if check_order and viol:
        raise AssertionError(f"order broken at {viol} instants")
    meta = {"N": N, "k": k, "floor": 0, "top": top}
    return [_path_traj(s.h, *per[m], T, dict(meta)) for m, s in enumerate(starts)]


def order_violations(starts, field: ClockField, T: float) -> tuple[int, int]:
    """(violations, events) for an increasing list of starts."""
    N, k = starts[0].N, starts[0].k
    H0 = _path_matrix(starts)
    res = K.run_paths(H0, np.int64(field.seed), float(field.p), np.int64(0),
                      np.int64(top_height(N, k)), float(T), K.STOP_NONE, False, True)
    return int(res[3]), int(res[2])


def coupling_time(a: LatticePath, b: LatticePath, field: ClockField, T: float) -> float:
    """First time the two paths coincide under ``field``; +inf if after T."""
    H0 = _path_matrix([a, b])
    res = K.run_paths(H0, np.int64(field.seed), float(field.p), np.int64(0),
                      np.int64(top_height(a.N, a.k)), float(T), K.STOP_COALESCE, False, False)
    return float(res[0])


def path_hitting_time(p0: LatticePath, field: ClockField, T: float, rule: str = "ergodic") -> float:
    """Hitting time of the ergodic component (``rule="ergodic"``) or of the
    right end reaching 2N-3k+1 (``rule="right-top"``)."""
    stop = {"ergodic": K.STOP_ERGODIC, "right-top": K.STOP_RIGHT_TOP, "left-floor": K.STOP_LEFT_FLOOR}[rule]
    H0 = _path_matrix([p0])
    res = K.run_paths(H0, np.int64(field.seed), float(field.p), np.int64(0),
                      np.int64(top_height(p0.N, p0.k)), float(T), stop, False, False)
    return float(res[0])


def simulate_segment(c0: SegmentConfig, seed: int, T: float, p: float = 0.5) -> Trajectory:
    """Direct simulation of the segment FEP (sites reported 1-based)."""
    occ = np.asarray(c0.occ, dtype=np.int64)
    _, _, _, t, a, b = G.fep_segment(occ, np.int64(seed), float(p), float(T), False, True)
    return Trajectory("sites", occ, t, a + 1, b + 1, float(T), 1, {"N": c0.N, "k": c0.k, "p": p})


def first_tag(c: CircleConfig) -> int:
    """First hole at or clockwise after site 0."""
    holes = c.holes()
    if holes.size == 0:
        raise ValueError("configuration has no hole to tag")
    return int(holes[0])


def simulate_circle(c0: CircleConfig, seed: int, T: float, p: float = 0.5, tagged: bool = True) -> Trajectory:
    """Direct simulation of the circle FEP.  With ``tagged`` the first hole
    clockwise from site 0 is followed and moves are enumerated from it; the
    tag positions after every event are stored in ``meta["tags"]``."""
    occ = np.asarray(c0.occ, dtype=np.int64)
    tag0 = first_tag(c0) if (tagged and c0.k < c0.N) else -1
    res = G.fep_circle(occ, np.int64(seed), float(p), float(T), np.int64(tag0), False, True)
    _, _, _, t, a, b, tags, _ = res
    meta = {"N": c0.N, "k": c0.k, "p": p, "tag0": tag0, "tags": np.array(tags)}
    return Trajectory("sites", occ, t, a, b, float(T), 0, meta)


def circle_hitting_time(c0: CircleConfig, seed: int, T: float, p: float = 0.5, tagged: bool = True) -> float:
    occ = np.asarray(c0.occ, dtype=np.int64)
    tag0 = first_tag(c0) if (tagged and c0.k < c0.N) else -1
    return float(G.fep_circle(occ, np.int64(seed), float(p), float(T), np.int64(tag0), True, False)[0])


def segment_hitting_time(c0: SegmentConfig, seed: int, T: float, p: float = 0.5) -> float:
    occ = np.asarray(c0.occ, dtype=np.int64)
    return float(G.fep_segment(occ, np.int64(seed), float(p), float(T), True, False)[0])


def simulate_zrp(w0, seed: int, T: float, p: float = 0.5, threshold: int = 2,
                 geometry: str = "segment") -> Trajectory:
    w = np.asarray(w0, dtype=np.int64)
    if geometry == "segment":
        res = G.zrp_segment(w, np.int64(seed), float(p), np.int64(threshold), float(T), False, True)
    elif geometry == "circle":
        res = G.zrp_circle(w, np.int64(seed), float(p), np.int64(threshold), float(T), False, True)
    else:
        raise ValueError(f"unknown geometry {geometry!r}")
    _, _, _, t, a, b = res
    return Trajectory("piles", w, t, a, b, float(T), 0, {"p": p, "threshold": threshold, "geometry": geometry})


def zrp_hitting_time(w0, seed: int, T: float, p: float = 0.5, threshold: int = 2,
                     geometry: str = "segment") -> float:
    """First time every pile is nonempty."""
    w = np.asarray(w0, dtype=np.int64)
    fn = G.zrp_segment if geometry == "segment" else G.zrp_circle
    return float(fn(w, np.int64(seed), float(p), np.int64(threshold), float(T), True, False)[0])


def obep_heights(z, anchor: str = "left", level: int = 0) -> np.ndarray:
    """Height function of an OBEP configuration: steps +1 on particles and -1
    on holes, pinned to ``level`` at the left end (``anchor="left"``) or at
    the right end (``anchor="right"``)."""
    z = np.asarray(z, dtype=np.int64)
    h = np.concatenate([[0], np.cumsum(2 * z - 1)])
    if anchor == "left":
        return h + level
    return h - h[-1] + level


def path_events_to_sites(times, coords, values, h0) -> tuple:
    """Translate height events of an OBEP path into site events (1-based).

    A flip of coordinate i changes the slopes at sites i-1 and i.  Interior
    flips move a particle between those two sites; flips of the first or last
    coordinate create a particle at site 1 or at site n.
    """
    h = np.array(h0, dtype=np.int64)
    n = h.size - 1
    src = np.empty(len(times), dtype=np.int64)
    dst = np.empty(len(times), dtype=np.int64)
    for j, (i, y) in enumerate(zip(coords, values)):
        up = y > h[i - 1]
        h[i - 1] = y
        if i == 1:
            src[j] = dst[j] = 1
        elif i == n + 1:
            src[j] = dst[j] = n
        elif up:
            src[j], dst[j] = i, i - 1
        else:
            src[j], dst[j] = i - 1, i
    return src, dst


def simulate_obep(z0, params: ObepParams, seed: int, T: float, level: int | None = None) -> Trajectory:
    """Open-boundary exclusion process on {1..n}.

    The two reservoir presets run on the clock field with ``p = 1 - q``:
    the right-reservoir preset pins the left end of the height function at 0
    (or ``level``) and the left-reservoir preset pins the right end at
    ``level`` (default 0).  Other parameters use direct simulation.  Events
    are site events: (x, x-1)/(x, x+1) for jumps and (x, x) for flips.
    """
    z = np.asarray(z0, dtype=np.int64)
    n = z.size
    if n < 1:
        raise ValueError("need at least one site")
    meta = {"n": n, "params": params.as_tuple(), "seed": seed}
    if (params.is_right_reservoir() or params.is_left_reservoir()) and 0.5 <= params.p < 1.0:
        field = ClockField(params.p, seed)
        anchor = "left" if params.is_right_reservoir() else "right"
        lvl = 0 if level is None else int(level)
        h0 = obep_heights(z, anchor, lvl)
        if anchor == "left":
            floor, top = lvl, _FAR
        else:
            floor, top = -_FAR, lvl
        _, _, _, per = run_field(h0[None, :], field, T, floor, top)
        t, i, h = per[0]
        src, dst = path_events_to_sites(t, i, h, h0)
        meta.update({"anchor": anchor, "level": lvl, "path_coords": i, "path_heights": h})
        return Trajectory("sites", z, t, src, dst, float(T), 1, meta)
    res = G.obep(z, np.int64(seed), *map(float, params.as_tuple()), float(T), True)
    _, _, t, a, b = res
    return Trajectory("sites", z, t, a + 1, b + 1, float(T), 1, meta)


__all__ = [
    "ClockField", "ObepParams", "Trajectory", "HitResult",
    "simulate_path", "simulate_coupled", "simulate_segment", "simulate_circle",
    "simulate_obep", "simulate_zrp", "coupling_time", "path_hitting_time",
    "circle_hitting_time", "segment_hitting_time", "zrp_hitting_time",
    "order_violations", "first_tag", "obep_heights", "run_field",
]
