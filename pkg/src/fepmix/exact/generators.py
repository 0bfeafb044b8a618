"""Sparse generator matrices over enumerated state spaces."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

DEFAULT_MAX_STATES = 10**6

FAMILIES = ("fep-seg", "fep-circle", "sep", "obep", "zrp-seg", "zrp-circle", "zrp-const")

_ALIASES = {
    "fep-segment": "fep-seg",
    "fep_seg": "fep-seg",
    "fep_circle": "fep-circle",
    "ssep": "sep",
    "zrp-segment": "zrp-seg",
    "zrp_seg": "zrp-seg",
    "zrp_circle": "zrp-circle",
    "zrp-constant-rate": "zrp-const",
    "zrp_const": "zrp-const",
}


class StateSpaceOverflow(ValueError):
    pass


def canonical_family(name: str) -> str:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    return key


@dataclass(frozen=True, eq=False)
class RateMatrix:
    """Generator Q over ``states`` (tuples); Q[x, y] is the rate x -> y and
    each diagonal entry is minus its row's off-diagonal sum."""

    family: str
    params: dict
    states: tuple
    Q: sp.csr_matrix
    meta: dict = field(default_factory=dict)

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def index_of(self, state) -> int:
        return self.index[tuple(int(v) for v in state)]

    def dense(self) -> np.ndarray:
        return self.Q.toarray()

    def rate(self, x, y) -> float:
        return float(self.Q[self.index_of(x), self.index_of(y)])

    def row_sum_error(self) -> float:
        return float(np.abs(np.asarray(self.Q.sum(axis=1)).ravel()).max()) if len(self) else 0.0

    def restrict(self, keep) -> "RateMatrix":
        """Sub-generator on the states selected by ``keep`` (boolean mask or
        index list).  Rates leaving the selection are dropped but the
        diagonal is kept, so rows of a non-closed set sum to minus the exit
        rate."""
        keep = np.asarray(keep)
        idx = np.flatnonzero(keep) if keep.dtype == bool else keep.astype(np.int64)
        sub = self.Q[idx][:, idx].tocsr()
        return RateMatrix(self.family, dict(self.params), tuple(self.states[i] for i in idx), sub,
                          {**self.meta, "restricted": True})


def _assemble(family, params, states, moves, max_states) -> RateMatrix:
    if len(states) > max_states:
        raise StateSpaceOverflow(f"{len(states)} states exceed the cap of {max_states}")
    index = {s: i for i, s in enumerate(states)}
    rows, cols, vals = [], [], []
    diag = np.zeros(len(states))
    for i, s in enumerate(states):
        for target, rate in moves(s):
            if rate <= 0 or target == s:
                continue
            j = index[target]
            rows.append(i)
            cols.append(j)
            vals.append(rate)
            diag[i] -= rate
    n = len(states)
    Q = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    Q = (Q + sp.diags(diag)).tocsr()
    Q.sum_duplicates()
    Q.sort_indices()
    return RateMatrix(family, dict(params), tuple(states), Q)


def binary_states(n: int, m: int | None = None) -> list[tuple]:
    """0/1 tuples of length n (with exactly m ones when given), ordered by the
    positions of the ones."""
    if m is None:
        return [tuple(b) for b in itertools.product((0, 1), repeat=n)]
    out = []
    for pos in itertools.combinations(range(n), m):
        occ = [0] * n
        for x in pos:
            occ[x] = 1
        out.append(tuple(occ))
    return out


def composition_states(n: int, m: int) -> list[tuple]:
    """All ways of placing m indistinguishable particles on n piles."""
    out = []
    for bars in itertools.combinations(range(m + n - 1), n - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(m + n - 2 - prev)
        out.append(tuple(parts))
    return out


def _swap(s, a, b):
    t = list(s)
    t[a], t[b] = t[b], t[a]
    return tuple(t)


def _fep_segment_moves(p):
    q = 1.0 - p

    def moves(s):
        N = len(s)
        for x in range(1, N - 1):
            if not s[x]:
                continue
            if s[x - 1] and not s[x + 1]:
                yield _swap(s, x, x + 1), p
            elif s[x + 1] and not s[x - 1]:
                yield _swap(s, x, x - 1), q

    return moves


def _fep_circle_moves(p):
    q = 1.0 - p

    def moves(s):
        N = len(s)
        for x in range(N):
            if not s[x]:
                continue
            left, right = (x - 1) % N, (x + 1) % N
            if left == right:
                continue
            if s[left] and not s[right]:
                yield _swap(s, x, right), p
            elif s[right] and not s[left]:
                yield _swap(s, x, left), q

    return moves


def _sep_moves(q):
    p = 1.0 - q

    def moves(s):
        n = len(s)
        for x in range(n):
            if not s[x]:
                continue
            if x + 1 < n and not s[x + 1]:
                yield _swap(s, x, x + 1), q
            if x - 1 >= 0 and not s[x - 1]:
                yield _swap(s, x, x - 1), p

    return moves


def _obep_moves(q, alpha, beta, gamma, delta):
    sep = _sep_moves(q)

    def flip(s, x):
        t = list(s)
        t[x] = 1 - t[x]
        return tuple(t)

    def moves(s):
        yield from sep(s)
        n = len(s)
        yield flip(s, 0), (gamma if s[0] else alpha)
        yield flip(s, n - 1), (beta if s[n - 1] else delta)

    return moves


def _zrp_moves(p, threshold, circle):
    q = 1.0 - p

    def move(s, a, b):
        t = list(s)
        t[a] -= 1
        t[b] += 1
        return tuple(t)

    def moves(s):
        n = len(s)
        for i in range(n):
            if s[i] < threshold:
                continue
            if circle:
                yield move(s, i, (i - 1) % n), q
                yield move(s, i, (i + 1) % n), p
            else:
                if i >= 1:
                    yield move(s, i, i - 1), q
                if i <= n - 2:
                    yield move(s, i, i + 1), p

    return moves


def build_generator(family: str, max_states: int = DEFAULT_MAX_STATES, **params) -> RateMatrix:
    """Generator for one of the supported families.

    fep-seg(N, k, p)        segment FEP, right jumps at rate p, left at 1-p
    fep-circle(N, k, p=1/2) circle FEP
    sep(n, m, q)            exclusion on {1..n}: right jumps q, left jumps 1-q
    obep(n, q, alpha, beta, gamma, delta)
                            open exclusion on {0,1}^n
    zrp-seg(n, m, p)        piles with rate 1{pile >= 2}: right p, left 1-p
    zrp-circle(n, m, p=1/2) same on Z/nZ
    zrp-const(n, m, p)      segment piles with rate 1{pile >= 1}
    """
    fam = canonical_family(family)
    if fam == "fep-seg":
        N, k, p = int(params["N"]), int(params["k"]), float(params["p"])
        states, moves = binary_states(N, k), _fep_segment_moves(p)
        params = {"N": N, "k": k, "p": p}
    elif fam == "fep-circle":
        N, k, p = int(params["N"]), int(params["k"]), float(params.get("p", 0.5))
        states, moves = binary_states(N, k), _fep_circle_moves(p)
        params = {"N": N, "k": k, "p": p}
    elif fam == "sep":
        n, m, q = int(params["n"]), int(params["m"]), float(params["q"])
        states, moves = binary_states(n, m), _sep_moves(q)
        params = {"n": n, "m": m, "q": q}
    elif fam == "obep":
        n = int(params["n"])
        rates = [float(params.get(key, 0.0)) for key in ("q", "alpha", "beta", "gamma", "delta")]
        if n < 1:
            raise ValueError("OBEP needs n >= 1")
        states, moves = binary_states(n), _obep_moves(*rates)
        params = dict(zip(("n", "q", "alpha", "beta", "gamma", "delta"), [n] + rates))
    else:
        n, m = int(params["n"]), int(params["m"])
        p = float(params.get("p", 0.5))
        if fam == "zrp-seg":
            thr, circle = int(params.get("threshold", 2)), False
        elif fam == "zrp-circle":
            thr, circle = int(params.get("threshold", 2)), True
        else:
            thr, circle = 1, False
        states, moves = composition_states(n, m), _zrp_moves(p, thr, circle)
        params = {"n": n, "m": m, "p": p, "threshold": thr}
    return _assemble(fam, params, states, moves, max_states)


def ergodic_mask(rm: RateMatrix) -> np.ndarray:
    """Boolean mask of the ergodic component for FEP families."""
    if rm.family == "fep-seg":
        return np.array([s[0] == 1 and s[-1] == 1 and all(s[x] or s[x + 1] for x in range(len(s) - 1))
                         for s in rm.states])
    if rm.family == "fep-circle":
        return np.array([all(s[x] or s[(x + 1) % len(s)] for x in range(len(s))) for s in rm.states])
    raise ValueError("ergodic_mask is defined for FEP families")
