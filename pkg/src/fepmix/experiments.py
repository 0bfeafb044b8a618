"""Monte Carlo experiments: coupling times, hitting times of the ergodic
component, and scaling fits across parameter grids."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from .engine import gillespie as G
from .engine import kernels as K
from .engine.simulate import ClockField, first_tag, run_field
from .lattice_path import maximal_path, minimal_path, to_path, top_height
from .mappings import zrp_of_circle, zrp_of_segment
from .state import CircleConfig, SegmentConfig, is_ergodic_segment, special_configs

SEED_BLOCK = 1_000_003


class CensoringError(RuntimeError):
    pass


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class SummaryStats:
    n: int
    mean: float
    stderr: float
    q05: float
    q50: float
    q95: float
    censored_fraction: float

    @classmethod
    def from_samples(cls, samples, horizon: float | None = None) -> "SummaryStats":
        """Censored samples are +inf; they enter the mean and quantiles at the
        horizon, so the mean is then a lower bound."""
        x = np.asarray(samples, dtype=float)
        cens = ~np.isfinite(x)
        frac = float(cens.mean()) if x.size else 0.0
        if frac >= 1.0:
            raise CensoringError("every replicate was censored")
        if cens.any():
            fill = horizon if horizon is not None else np.nan
            x = np.where(cens, fill, x)
        q05, q50, q95 = np.quantile(x, [0.05, 0.5, 0.95])
        se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")
        return cls(int(x.size), float(x.mean()), se, float(q05), float(q50), float(q95), frac)

    def as_dict(self) -> dict:
        return {
            "n": self.n, "mean": self.mean, "stderr": self.stderr,
            "q05": self.q05, "q50": self.q50, "q95": self.q95,
            "censored_fraction": self.censored_fraction,
        }


@dataclass(frozen=True)
class HorizonPolicy:
    factor: float = 10.0
    max_censored: float = 0.01
    max_doublings: int = 3


@dataclass
class RunResult:
    """Samples and summary for one grid point."""

    N: int
    k: int
    p: float
    statistic: str
    seeds: np.ndarray
    samples: np.ndarray
    horizon: float
    stats: SummaryStats
    checks: dict = field(default_factory=dict)

    def records(self) -> list[dict]:
        return [
            {"N": self.N, "k": self.k, "p": self.p, "replicate": r, "seed": int(s),
             "statistic": self.statistic, "value": float(v) if np.isfinite(v) else self.horizon,
             "censored": int(not np.isfinite(v))}
            for r, (s, v) in enumerate(zip(self.seeds, self.samples))
        ]

    def summary(self) -> dict:
        return {"N": self.N, "k": self.k, "p": self.p, "statistic": self.statistic,
                "horizon": self.horizon, **self.stats.as_dict(), **{f"check_{k}": v for k, v in self.checks.items()}}


@dataclass(frozen=True)
class ExperimentSpec:
    """Grid of (N, k, p) points, replicates per point and seed base."""

    family: str
    grid: tuple
    reps: int
    seed_base: int = 0
    horizon: HorizonPolicy = HorizonPolicy()
    output: str | None = None

    def __post_init__(self):
        if self.reps < 2:
            raise ValueError("need at least two replicates")
        for pt in self.grid:
            N, k = pt["N"], pt["k"]
            if not (2 * k > N and k <= N):
                raise ValueError(f"grid point N={N}, k={k} violates N/2 < k <= N")

    def seeds_for(self, j: int) -> np.ndarray:
        return replicate_seeds(self.seed_base + SEED_BLOCK * j, self.reps)


def replicate_seeds(base: int, reps: int) -> np.ndarray:
    return np.arange(base, base + reps, dtype=np.int64)


def k_rule(N: int, rho: float) -> int:
    """k = ceil(rho N), computed exactly for decimal rho."""
    from fractions import Fraction

    return math.ceil(Fraction(str(rho)) * N)


def with_horizon(run, seeds: np.ndarray, T0: float, policy: HorizonPolicy) -> tuple[np.ndarray, float]:
    """Run ``run(seeds, T)``; while more than ``policy.max_censored`` of the
    replicates are censored, double T and rerun the censored ones only.
    Reruns reuse the same seeds, so uncensored samples are unaffected."""
    out = np.asarray(run(seeds, T0), dtype=float)
    T = T0
    for _ in range(policy.max_doublings):
        cens = ~np.isfinite(out)
        if cens.mean() <= policy.max_censored:
            break
        T *= 2.0
        out[cens] = run(seeds[cens], T)
    return out, T


# ------------------------------------------------------------ segment coupling

def _path_runner(H0: np.ndarray, p: float, floor: int, top: int, stop: int):
    def run(seeds, T):
        return K.stop_times_batch(np.ascontiguousarray(H0, dtype=np.int64), np.asarray(seeds, dtype=np.int64),
                                  float(p), np.int64(floor), np.int64(top), float(T), stop)[0]
    return run


def coupling_time_sfep(N: int, k: int, reps: int, seed: int, p: float = 0.5,
                       horizon: float | None = None, max_censored: float = 0.05) -> RunResult:
    """Coalescence time of the packed-left and packed-right paths under a
    shared clock field, one field per replicate (seed + r)."""
    seeds = replicate_seeds(seed, reps)
    if k == N:
        z = np.zeros(reps)
        return RunResult(N, k, p, "coupling_time", seeds, z, 0.0, SummaryStats.from_samples(z))
    T = horizon if horizon is not None else 10.0 * N * N * math.log(N)
    H0 = np.array([minimal_path(N, k).h, maximal_path(N, k).h], dtype=np.int64)
    samples = _path_runner(H0, p, 0, top_height(N, k), K.STOP_COALESCE)(seeds, T)
    frac = float((~np.isfinite(samples)).mean())
    if frac > max_censored:
        raise CensoringError(f"{frac:.1%} of coupling times censored at T={T:g}; horizon misconfigured")
    return RunResult(N, k, p, "coupling_time", seeds, samples, T, SummaryStats.from_samples(samples, T))


def coupling_survival(N: int, k: int, p: float, times, reps: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Monte Carlo estimate of P(paths not coalesced at t) and its standard
    error for each t in ``times``."""
    times = np.asarray(times, dtype=float)
    seeds = replicate_seeds(seed, reps)
    H0 = np.array([minimal_path(N, k).h, maximal_path(N, k).h], dtype=np.int64)
    tc = _path_runner(H0, p, 0, top_height(N, k), K.STOP_COALESCE)(seeds, float(times.max()))
    est = np.array([(tc > t).mean() for t in times])
    sigma = np.sqrt(est * (1 - est) / reps)
    return est, sigma


@dataclass(frozen=True)
class CouplingBoundCheck:
    N: int
    k: int
    p: float
    times: np.ndarray
    exact: np.ndarray
    estimate: np.ndarray
    sigma: np.ndarray

    @property
    def holds(self) -> bool:
        return bool(np.all(self.exact <= self.estimate + 3 * self.sigma))


def coupling_bound_check(N: int, k: int, p: float, reps: int, seed: int, n_times: int = 10,
                         eps_last: float = 0.01) -> CouplingBoundCheck:
    """Exact worst-case distance against the Monte Carlo non-coalescence
    probability at ``n_times`` equally spaced times up to T(eps_last)."""
    from .exact import build_generator, mixing_time_exact, tv_curve

    rm = build_generator("fep-seg", N=N, k=k, p=p)
    T_end = mixing_time_exact(rm, eps_last).T
    times = np.linspace(0.0, T_end, n_times)
    d = tv_curve(rm, times).d
    est, sigma = coupling_survival(N, k, p, times, reps, seed)
    return CouplingBoundCheck(N, k, p, times, d, est, sigma)


# ------------------------------------------------------------ hitting times

def start_config(start, N: int, k: int, family: str):
    """Resolve a named start: "minus", "plus", "h-sample" (segment) or
    "block" (circle, one block of k particles at sites 0..k-1)."""
    if isinstance(start, (SegmentConfig, CircleConfig)):
        return start
    if family == "circle":
        if start not in ("block", "circle-block", "I1"):
            raise ValueError(f"unknown circle start {start!r}")
        occ = np.zeros(N, dtype=np.uint8)
        occ[:k] = 1
        return CircleConfig(occ)
    sc = special_configs(N, k)
    table = {"minus": sc.minus, "plus": sc.plus, "h-sample": sc.h_sample, "H": sc.h_sample,
             "vee": sc.vee, "wedge": sc.wedge}
    if start not in table:
        raise ValueError(f"unknown segment start {start!r}")
    return table[start]


def default_horizon(family: str, N: int, k: int, p: float, factor: float = 10.0) -> float:
    """factor times the expected order of the hitting time."""
    base = N * N * math.log(max(N, 2))
    if family == "segment" and p > 0.5:
        base = max(base, N * (p / (1 - p)) ** (N - k))
    return factor * base


def _zrp_first_all_occupied(traj_states, to_zrp) -> float:
    for t, st in traj_states:
        if min(to_zrp(st)) >= 1:
            return t
    return float("inf")


def segment_crosscheck(c0: SegmentConfig, p: float, seed: int, T: float, tau: float) -> bool:
    """Replay one replicate, map every state to piles between holes, and
    confirm that the first all-nonempty time equals ``tau``."""
    path = to_path(c0)
    _, _, _, per = run_field(np.array([path.h], dtype=np.int64), ClockField(p, int(seed)), min(T, tau), 0,
                             top_height(c0.N, c0.k))
    t_ev, i_ev, h_ev = per[0]
    h = np.array(path.h, dtype=np.int64)
    i = np.arange(1, c0.k + 1)

    def states():
        yield 0.0, h.copy()
        for t, a, b in zip(t_ev, i_ev, h_ev):
            h[a - 1] = b
            yield float(t), h.copy()

    def to_zrp(hh):
        x = (hh + 3 * i - 1) // 2
        occ = np.zeros(c0.N, dtype=np.uint8)
        occ[x - 1] = 1
        return zrp_of_segment(SegmentConfig(occ)).w

    return _zrp_first_all_occupied(states(), to_zrp) == tau


def hitting_time(start, N: int, k: int, p: float, reps: int, seed: int, family: str = "segment",
                 horizon: float | None = None, policy: HorizonPolicy = HorizonPolicy(),
                 crosscheck: int = 4, method: str = "fep") -> RunResult:
    """Hitting time of the ergodic component.

    Segment runs use the clock field.  Circle runs use direct simulation
    with moves enumerated from a tagged hole; ``method="zrp"`` simulates the
    pile process instead, which gives bit-identical hitting times.  The
    first ``crosscheck`` replicates are verified against the pile process.
    """
    cfg = start_config(start, N, k, family)
    seeds = replicate_seeds(seed, reps)
    T0 = horizon if horizon is not None else default_horizon(family, N, k, p, policy.factor)
    checks = {}
    if family == "segment":
        path = to_path(cfg)
        run = _path_runner(np.array([path.h], dtype=np.int64), p, 0, top_height(N, k), K.STOP_ERGODIC)
        samples, T = with_horizon(run, seeds, T0, policy)
        ok = [segment_crosscheck(cfg, p, s, T, tau) for s, tau in zip(seeds[:crosscheck], samples[:crosscheck])
              if np.isfinite(tau)]
        checks["pile_identity"] = bool(all(ok))
        checks["pile_checked"] = len(ok)
    elif family == "circle":
        occ = np.asarray(cfg.occ, dtype=np.int64)
        tag = first_tag(cfg)
        w0 = np.asarray(zrp_of_circle(cfg, tag).w, dtype=np.int64)

        def run_fep(sd, T):
            return G.fep_circle_hits(occ, np.asarray(sd, dtype=np.int64), float(p), float(T), np.int64(tag))

        def run_zrp(sd, T):
            return G.zrp_circle_hits(w0, np.asarray(sd, dtype=np.int64), float(p), np.int64(2), float(T))

        samples, T = with_horizon(run_zrp if method == "zrp" else run_fep, seeds, T0, policy)
        other = run_fep if method == "zrp" else run_zrp
        sub = seeds[:crosscheck]
        checks["pile_identity"] = bool(np.array_equal(other(sub, T), samples[:crosscheck]))
        checks["pile_checked"] = int(sub.size)
    else:
        raise ValueError(f"unknown family {family!r}")
    return RunResult(N, k, p, "hitting_time", seeds, samples, T, SummaryStats.from_samples(samples, T), checks)


def right_end_dominance(N: int, k: int, p: float, starts, reps: int, seed: int, T: float) -> bool:
    """Under a shared field, the right end of the packed-left path reaches
    2N-3k+1 no earlier than that of any higher start, seed by seed."""
    seeds = replicate_seeds(seed, reps)
    top = top_height(N, k)
    base = _path_runner(np.array([minimal_path(N, k).h], dtype=np.int64), p, 0, top, K.STOP_RIGHT_TOP)(seeds, T)
    for s in starts:
        h = to_path(s).h
        t = _path_runner(np.array([h], dtype=np.int64), p, 0, top, K.STOP_RIGHT_TOP)(seeds, T)
        if np.any(t > base):
            return False
    return True


# ------------------------------------------------------------ scaling fits

@dataclass(frozen=True)
class FitResult:
    kind: str
    statistic: float
    values: tuple
    xs: tuple
    slope: float | None = None
    stderr: float | None = None
    intercept: float | None = None

    def as_dict(self) -> dict:
        return {"kind": self.kind, "statistic": self.statistic, "values": list(self.values),
                "xs": list(self.xs), "slope": self.slope, "stderr": self.stderr, "intercept": self.intercept}


def scaling_fit(kind: str, points, max_censored: float = 0.01) -> FitResult:
    """Fit a grid of summaries (dicts with N, k, mean, censored_fraction).

    sfep-ratio   max/min of mean / (N^2 log(N-k))
    circle-ratio max/min of mean / (N^2 log N)
    afep-slope   least-squares slope of log(mean) against N-k
    """
    pts = [pt for pt in points if pt.get("censored_fraction", 0.0) <= max_censored]
    if len(pts) < 3:
        raise FitError(f"need at least 3 uncensored grid points, got {len(pts)}")
    if kind == "sfep-ratio":
        vals = [pt["mean"] / (pt["N"] ** 2 * math.log(pt["N"] - pt["k"])) for pt in pts]
        return FitResult(kind, max(vals) / min(vals), tuple(vals), tuple(pt["N"] for pt in pts))
    if kind == "circle-ratio":
        vals = [pt["mean"] / (pt["N"] ** 2 * math.log(pt["N"])) for pt in pts]
        return FitResult(kind, max(vals) / min(vals), tuple(vals), tuple(pt["N"] for pt in pts))
    if kind == "afep-slope":
        xs = np.array([pt["N"] - pt["k"] for pt in pts], dtype=float)
        ys = np.log([pt["mean"] for pt in pts])
        if np.ptp(ys) == 0:
            return FitResult(kind, 0.0, tuple(ys), tuple(xs), 0.0, 0.0, float(ys[0]))
        fit = sps.linregress(xs, ys)
        return FitResult(kind, float(fit.slope), tuple(ys), tuple(xs), float(fit.slope),
                         float(fit.stderr), float(fit.intercept))
    raise ValueError(f"unknown fit kind {kind!r}")


# ------------------------------------------------------------ sweeps

def afep_grid(gaps) -> list[tuple[int, int]]:
    """(N, k) with N - k = gap and the smallest N allowing the H start:
    N = 2 gap + 1, k = gap + 1."""
    return [(2 * g + 1, g + 1) for g in gaps]


def log_condition(N: int, k: int, factor: float = 4.0) -> bool:
    return N - k >= factor * math.log(N)


def sfep_ratio_sweep(Ns, rho: float = 0.75, reps: int = 20, seed: int = 0) -> tuple[list[RunResult], FitResult]:
    results = []
    for j, N in enumerate(Ns):
        k = k_rule(N, rho)
        results.append(coupling_time_sfep(N, k, reps, seed + SEED_BLOCK * j))
    pts = [{"N": r.N, "k": r.k, "mean": r.stats.mean, "censored_fraction": r.stats.censored_fraction}
           for r in results]
    return results, scaling_fit("sfep-ratio", pts)


def afep_slope_sweep(gaps, p: float = 0.7, reps: int = 200, seed: int = 0) -> tuple[list[RunResult], FitResult]:
    results = []
    for j, (N, k) in enumerate(afep_grid(gaps)):
        results.append(hitting_time("h-sample", N, k, p, reps, seed + SEED_BLOCK * j))
    pts = [{"N": r.N, "k": r.k, "mean": r.stats.mean, "censored_fraction": r.stats.censored_fraction}
           for r in results]
    return results, scaling_fit("afep-slope", pts)


def circle_ratio_sweep(Ns, rho: float = 0.75, reps: int = 50, seed: int = 0,
                       method: str = "zrp") -> tuple[list[RunResult], FitResult]:
    results = []
    for j, N in enumerate(Ns):
        k = k_rule(N, rho)
        results.append(hitting_time("block", N, k, 0.5, reps, seed + SEED_BLOCK * j, family="circle",
                                    method=method))
    pts = [{"N": r.N, "k": r.k, "mean": r.stats.mean, "censored_fraction": r.stats.censored_fraction}
           for r in results]
    return results, scaling_fit("circle-ratio", pts)


def is_ergodic_start(cfg) -> bool:
    return isinstance(cfg, SegmentConfig) and is_ergodic_segment(cfg)
