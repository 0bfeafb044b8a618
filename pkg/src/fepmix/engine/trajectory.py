"""Event-list trajectories shared by every simulator."""
from __future__ import annotations

import gzip
import io
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

# Event semantics per kind:
#   "path":  coord = 1-based path coordinate, value = new height
#   "sites": coord = departure site, value = arrival site; coord == value is a
#            creation/annihilation flip at that site
#   "piles": coord = departure pile, value = arrival pile (0-based)
KINDS = ("path", "sites", "piles")


@dataclass(frozen=True, eq=False)
class Trajectory:
    kind: str
    initial: np.ndarray
    times: np.ndarray
    coords: np.ndarray
    values: np.ndarray
    horizon: float
    offset: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown trajectory kind {self.kind!r}")
        for name in ("initial", "times", "coords", "values"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return int(self.times.size)

    def apply(self, state: np.ndarray, j: int) -> None:
        """Apply event ``j`` to ``state`` in place."""
        a = int(self.coords[j])
        b = int(self.values[j])
        if self.kind == "path":
            state[a - 1] = b
        elif self.kind == "sites":
            a -= self.offset
            b -= self.offset
            if a == b:
                state[a] = 1 - state[a]
            else:
                state[a] = 0
                state[b] = 1
        else:
            state[a] -= 1
            state[b] += 1

    def states(self) -> Iterator[tuple[float, np.ndarray]]:
        """Yield (time, state) at time 0 and after every event.  The yielded
        array is a fresh copy each time."""
        state = np.array(self.initial, dtype=np.int64)
        yield 0.0, state.copy()
        for j in range(len(self)):
            self.apply(state, j)
            yield float(self.times[j]), state.copy()

    def state_at(self, t: float) -> np.ndarray:
        state = np.array(self.initial, dtype=np.int64)
        n = int(np.searchsorted(self.times, t, side="right"))
        for j in range(n):
            self.apply(state, j)
        return state

    def final(self) -> np.ndarray:
        return self.state_at(np.inf)

    def truncate(self, t: float) -> "Trajectory":
        """Events at times <= t, with horizon t."""
        n = int(np.searchsorted(self.times, t, side="right"))
        return Trajectory(
            self.kind, self.initial, self.times[:n], self.coords[:n], self.values[:n],
            min(self.horizon, t), self.offset, dict(self.meta),
        )

    def same_events(self, other: "Trajectory") -> bool:
        return (
            self.kind == other.kind
            and np.array_equal(self.initial, other.initial)
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.coords, other.coords)
            and np.array_equal(self.values, other.values)
        )

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write("t,coord,value\n")
        for t, a, b in zip(self.times, self.coords, self.values):
            buf.write(f"{t!r},{int(a)},{int(b)}\n")
        return buf.getvalue()

    def to_csv(self, path) -> None:
        text = self.to_csv_text().encode("ascii")
        path = str(path)
        if path.endswith(".gz"):
            with gzip.GzipFile(path, "wb", mtime=0) as fh:
                fh.write(text)
        else:
            with open(path, "wb") as fh:
                fh.write(text)

    def encode(self) -> bytes:
        """Canonical byte encoding used for determinism checks."""
        head = f"{self.kind}|{self.offset}|{self.horizon!r}|".encode()
        return b"".join(
            [
                head,
                np.asarray(self.initial, dtype=np.int64).tobytes(),
                np.asarray(self.times, dtype=np.float64).tobytes(),
                np.asarray(self.coords, dtype=np.int64).tobytes(),
                np.asarray(self.values, dtype=np.int64).tobytes(),
            ]
        )


@dataclass(frozen=True)
class HitResult:
    time: float
    censored: bool


def first_hitting(traj: Trajectory, predicate: Callable[[np.ndarray], bool]) -> HitResult:
    """Earliest state along ``traj`` satisfying ``predicate``; censored at the
    horizon when none does."""
    for t, state in traj.states():
        if predicate(state):
            return HitResult(t, False)
    return HitResult(float("inf"), True)
