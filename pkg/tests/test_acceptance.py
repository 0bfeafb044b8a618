"""Acceptance criteria, each at its stated tolerance.

Every test prints one line "CRITERION <n>: PASS|FAIL <detail>"; the lines
are repeated in the pytest terminal summary.  Running this file directly
executes all criteria and prints the same lines.
"""
import itertools
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from fepmix import cli
from fepmix import exact as ex
from fepmix import experiments as X
from fepmix.engine import ClockField, ObepParams, order_violations, simulate_obep, simulate_path, simulate_segment
from fepmix.engine import gillespie as G
from fepmix.engine import path_hitting_time, simulate_zrp
from fepmix.engine.trajectory import first_hitting
from fepmix.exact.ensembles import max_correlation_deviation
from fepmix.lattice_path import (
    LatticePath,
    from_path,
    iter_paths,
    minimal_path,
    path_to_sep,
    sep_to_path,
    to_path,
)
from fepmix.mappings import obep_view, segment_of_zrp, zrp_of_circle, zrp_of_segment
from fepmix.state import (
    CircleConfig,
    SegmentConfig,
    enumerate_circle,
    enumerate_segment,
    is_ergodic_segment,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


def report(label, ok, detail):
    line = f"CRITERION {label}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pairs_up_to(n_max, n_min=3, include_full=False):
    return [(N, k) for N in range(n_min, n_max + 1) for k in range(N // 2 + 1, N + (1 if include_full else 0))]


# ---------------------------------------------------------------- 1

def test_criterion_01_counting():
    bad = []
    for N, k in pairs_up_to(16):
        g = e = 0
        for sites in itertools.combinations(range(N), k):
            occ = [0] * N
            for x in sites:
                occ[x] = 1
            if all(occ[x] or occ[(x + 1) % N] for x in range(N)):
                g += 1
                if occ[0] and occ[-1] and all(occ[x] or occ[x + 1] for x in range(N - 1)):
                    e += 1
        g_closed = Fraction(N, k) * math.comb(k, N - k)
        e_closed = math.comb(k - 1, N - k)
        pkg_g = len(enumerate_circle(N, k, ergodic_only=True))
        pkg_e = len(enumerate_segment(N, k, ergodic_only=True))
        if not (g == g_closed == pkg_g and e == e_closed == pkg_e):
            bad.append((N, k))
    ok = not bad
    report("1", ok, f"{len(pairs_up_to(16))} (N,k) pairs, mismatches {bad}")
    assert ok


# ---------------------------------------------------------------- 2

def test_criterion_02_bijections():
    bad = 0
    for N, k in pairs_up_to(12, include_full=True):
        configs = enumerate_segment(N, k)
        paths = list(iter_paths(N, k))
        if len(paths) != len(configs) or {from_path(p) for p in paths} != set(configs):
            bad += 1
        for c in configs:
            if from_path(to_path(c)) != c or segment_of_zrp(zrp_of_segment(c)) != c:
                bad += 1
        omega = {s for s in itertools.product((0, 1), repeat=k - 1) if sum(s) == N - k}
        image = {}
        for c in enumerate_segment(N, k, ergodic_only=True):
            s = path_to_sep(to_path(c))
            image[s] = c
            if from_path(sep_to_path(N, s)) != c:
                bad += 1
        if set(image) != omega or len(image) != math.comb(k - 1, N - k):
            bad += 1
    report("2", bad == 0, f"exhaustive N <= 12, failures {bad}")
    assert bad == 0


# ---------------------------------------------------------------- 3

def test_criterion_03_monotone_coupling():
    N, k = 12, 8
    paths = list(iter_paths(N, k))
    rng = np.random.default_rng(2024)
    viol = events = 0
    for r in range(1000):
        a, b = rng.choice(len(paths), 2, replace=False)
        ha, hb = paths[a].h, paths[b].h
        lo = LatticePath(N, k, tuple(map(min, ha, hb)))
        hi = LatticePath(N, k, tuple(map(max, ha, hb)))
        v, e = order_violations([lo, hi], ClockField(0.5, r), 100.0)
        viol += v
        events += e
    report("3", viol == 0, f"1000 ordered pairs at (12,8), T=100, {events} events, violations {viol}")
    assert viol == 0


# ---------------------------------------------------------------- 4

def test_criterion_04_intertwining():
    worst = 0.0
    for N, k in pairs_up_to(12, n_min=4):
        for p in (0.5, 0.7):
            worst = max(worst, ex.fep_sep_error(N, k, p), ex.fep_zrp_error(N, k, p),
                        ex.fep_obep_error(N, k, p, "minus"))
    ok = worst <= 1e-14
    report("4", ok, f"FEP|E~SSEP, FEP~ZRP, packed-left~OBEP(q,0,0,0,p) for N <= 12: max entry error {worst:.1e}")
    assert ok


# ---------------------------------------------------------------- 5

def test_criterion_05_stationarity():
    res = db = 0.0
    for N, k in pairs_up_to(12, include_full=True):
        for p in (0.5, 0.7, 0.9):
            rm, mu = ex.stationary("fep-seg", {"N": N, "k": k, "p": p}, method="closed")
            res = max(res, ex.stationarity_residual(rm, mu))
            db = max(db, ex.detailed_balance_error(rm, mu))
        if k < N:
            rm, mu = ex.stationary("fep-circle", {"N": N, "k": k, "p": 0.5}, method="closed")
            res = max(res, ex.stationarity_residual(rm, mu))
            db = max(db, ex.detailed_balance_error(rm, mu))
    for n in range(1, 7):
        for m in range(1, 7):
            for p in (0.6, 0.7, 0.8):
                rm, mu = ex.stationary("zrp-const", {"n": n, "m": m, "p": p}, method="closed")
                res = max(res, ex.stationarity_residual(rm, mu))
                db = max(db, ex.detailed_balance_error(rm, mu))
    ok = res <= 1e-12 and db <= 1e-12
    report("5", ok, f"max |mu^T L| {res:.1e}, max detailed balance error {db:.1e}")
    assert ok


# ---------------------------------------------------------------- 6

def test_criterion_06_eigenfunction():
    worst = 0.0
    where = None
    for N, k in pairs_up_to(14, n_min=4):
        for variant in ("hole", "particle"):
            r = ex.eigencheck_a1(N, k, variant).residual
            if r > worst:
                worst, where = r, (N, k, variant)
    ok = worst <= 1e-10
    report("6", ok, f"labels counted from site 0: max residual {worst:.3g} at {where}")
    assert ok


def test_criterion_06_lifted_labels():
    worst = 0.0
    for N, k in pairs_up_to(14, n_min=4):
        for variant in ("hole", "particle"):
            worst = max(worst, ex.eigencheck_a1_lifted(N, k, variant).residual)
    ok = worst <= 1e-10
    report("6b", ok, f"labels carried by the particles (supplementary): max residual {worst:.1e}")
    assert ok


# ---------------------------------------------------------------- 7

def _random_occ(rng, N, k):
    occ = np.zeros(N, dtype=np.int64)
    occ[rng.choice(N, k, replace=False)] = 1
    return occ


def test_criterion_07_hitting_identity():
    N, k, reps = 14, 9, 10_000
    rng = np.random.default_rng(7)
    seg_bad = circ_bad = finite = 0
    for r in range(reps):
        occ = _random_occ(rng, N, k)
        p = 0.5 if r % 2 else 0.7
        w = np.asarray(zrp_of_segment(SegmentConfig(occ)).w, dtype=np.int64)
        a = G.fep_segment(occ, np.int64(r), p, 1e7, True, False)[0]
        b = G.zrp_segment(w, np.int64(r), p, np.int64(2), 1e7, True, False)[0]
        seg_bad += a != b
        finite += np.isfinite(a)
        c = CircleConfig(occ)
        tag = int(c.holes()[0])
        wc = np.asarray(zrp_of_circle(c, tag).w, dtype=np.int64)
        a = G.fep_circle(occ, np.int64(r), 0.5, 1e7, np.int64(tag), True, False)[0]
        b = G.zrp_circle(wc, np.int64(r), 0.5, np.int64(2), 1e7, True, False)[0]
        circ_bad += a != b

    # second route on a subsample: scan recorded trajectories with the state predicates
    scan_bad = 0
    for r in range(200):
        occ = _random_occ(rng, N, k)
        tau = G.fep_segment(occ, np.int64(r), 0.7, 1e7, True, False)[0]
        tr = simulate_segment(SegmentConfig(occ), r, tau + 1.0, p=0.7)
        h1 = first_hitting(tr, lambda s: is_ergodic_segment(SegmentConfig(s.astype(np.uint8)))).time
        w = zrp_of_segment(SegmentConfig(occ)).w
        tz = simulate_zrp(w, r, tau + 1.0, p=0.7)
        h2 = first_hitting(tz, lambda s: bool(np.all(s >= 1))).time
        scan_bad += not (h1 == h2 == tau)

    # packed-left start against the right-reservoir exclusion process, ring for ring
    obep_bad = 0
    for r in range(200):
        p = 0.7 if r % 2 else 0.5
        hit = path_hitting_time(minimal_path(N, k), ClockField(p, r), 1e7)
        # record a little past the hit only; the view finds its own stop from the events
        tr = simulate_path(minimal_path(N, k), ClockField(p, r), hit + 1.0)
        view, stop = obep_view(tr)
        ob = simulate_obep(np.zeros(k - 1, dtype=np.int64), ObepParams.right_reservoir(1 - p), r, stop)
        obep_bad += not (view.same_events(ob) and hit == stop and np.isfinite(stop))
    ok = seg_bad == circ_bad == scan_bad == obep_bad == 0
    report("7", ok, f"{reps} replicates at (14,9): segment mismatches {seg_bad} ({finite} finite), circle "
                    f"mismatches {circ_bad}; predicate scan mismatches {scan_bad}/200; OBEP view mismatches "
                    f"{obep_bad}/200")
    assert ok


# ---------------------------------------------------------------- 8

def test_criterion_08_coupling_bound():
    reps = 10_000
    failures = []
    worst_margin = np.inf
    for j, (N, k) in enumerate(pairs_up_to(10, n_min=4)):
        chk = X.coupling_bound_check(N, k, 0.5, reps, seed=X.SEED_BLOCK * j, n_times=10)
        margin = np.min(chk.estimate + 3 * chk.sigma - chk.exact)
        worst_margin = min(worst_margin, margin)
        if not chk.holds:
            failures.append((N, k))
    ok = not failures
    report("8", ok, f"{len(pairs_up_to(10, n_min=4))} (N,k) pairs, 10 times each, {reps} replicates: "
                    f"min (MC + 3 sigma - d) {worst_margin:.3g}, failures {failures}")
    assert ok


# ---------------------------------------------------------------- 9

def test_criterion_09_sfep_scaling():
    results, fit = X.sfep_ratio_sweep([64, 128, 256], rho=0.75, reps=24, seed=9)
    ok = fit.statistic <= 2.0
    ratios = ", ".join(f"N={N}: {v:.4f}" for N, v in zip(fit.xs, fit.values))
    report("9", ok, f"mean coupling time / (N^2 log(N-k)): {ratios}; max/min {fit.statistic:.3f}")
    assert ok


# ---------------------------------------------------------------- 10

def test_criterion_10_afep_slope():
    results, fit = X.afep_slope_sweep([4, 6, 8, 10], p=0.7, reps=200, seed=10)
    target = math.log(7 / 3)
    ok = abs(fit.slope - target) <= 0.25 * target and all(r.stats.n >= 200 for r in results)
    grid = ", ".join(f"(N={r.N},k={r.k})" for r in results)
    report("10", ok, f"grid {grid}: slope {fit.slope:.4f} +- {fit.stderr:.4f}, target {target:.4f} +- 25%")
    assert ok


def test_criterion_10_grid_condition():
    # The grid must also satisfy N-k >= 4 log N.  With k > N/2 this needs
    # N-k >= 4 log(2(N-k)+1), which fails for every N-k <= 16.
    grid = X.afep_grid([4, 6, 8, 10])
    ok = all(X.log_condition(N, k) for N, k in grid)
    smallest = next(g for g in range(1, 100) if X.log_condition(2 * g + 1, g + 1))
    report("10b", ok, f"N-k >= 4 log N on the grid {grid}: {ok}; smallest feasible gap is {smallest}")
    assert ok


# ---------------------------------------------------------------- 11

def test_criterion_11_circle_hitting():
    results, fit = X.circle_ratio_sweep([32, 64, 128], rho=0.75, reps=100, seed=11)
    ok = fit.statistic <= 3.0 and all(r.checks["pile_identity"] for r in results)
    ratios = ", ".join(f"N={N}: {v:.5f}" for N, v in zip(fit.xs, fit.values))
    report("11", ok, f"mean tau_G / (N^2 log N): {ratios}; max/min {fit.statistic:.3f}")
    assert ok


# ---------------------------------------------------------------- 12

def test_criterion_12_aldous_brown():
    bad = []
    min_margin = np.inf
    for n in range(2, 7):
        for m in range(1, 7):
            for p in ("0.6", "0.7", "0.8"):
                chk = ex.aldous_brown_check(n, m, p, n_times=50)
                min_margin = min(min_margin, float(np.min(chk.margin)))
                if not (chk.bound_holds and chk.power_bound_holds and chk.times.size == 50):
                    bad.append((n, m, p))
    ok = not bad
    report("12", ok, f"2 <= n <= 6, 1 <= m <= 6, p in {{0.6,0.7,0.8}}: min(survival - bound) {min_margin:.2e}, "
                     f"failures {bad}; exact pi(w(1)=1) <= lambda^(n-1) checked with fractions")
    assert ok


# ---------------------------------------------------------------- 13

def test_criterion_13_ensembles():
    ell, rho = 4, 0.7
    d200 = ex.equivalence_error(200, 140, ell, rho)
    d2000 = ex.equivalence_error(2000, 1400, ell, rho)
    norm = max(ex.grand_canonical_normalisation_error(r, L) for r in (0.55, 0.7, 0.9) for L in range(1, 13))
    devs = [max_correlation_deviation(ex.correlation_ratio(rho, L)) for L in range(4, 21)]
    decreasing = all(a > b for a, b in zip(devs, devs[1:]))
    ok = d200 > d2000 and d2000 <= 1e-2 and norm <= 1e-12 and decreasing
    report("13", ok, f"deviation N=200 {d200:.3e} > N=2000 {d2000:.3e}; normalisation error {norm:.1e}; "
                     f"correlation deviation strictly decreasing on l=4..20: {decreasing} "
                     f"({devs[0]:.2e} -> {devs[-1]:.2e})")
    assert ok


# ---------------------------------------------------------------- 14

def test_criterion_14_determinism(tmp_path):
    jobs = [
        ["exact", "tv", "--family", "fep-seg", "--n", "6", "--k", "4", "--p", "0.6"],
        ["hit", "--family", "circle", "--start", "block", "--n", "24", "--k", "18", "--reps", "30", "--seed", "4"],
        ["sweep", "sfep-ratio", "--ns", "12,16,20", "--reps", "6", "--seed", "3"],
        ["simulate", "--family", "path", "--n", "12", "--k", "8", "--p", "0.7", "--T", "30"],
    ]
    mismatched = []
    for j, argv in enumerate(jobs):
        a, b = tmp_path / f"a{j}", tmp_path / f"b{j}"
        assert cli.run(argv + ["--out", str(a)]) == 0
        assert cli.run([argv[0], "--config", str(a / "manifest.json"), "--out", str(b)]) == 0
        names = sorted(p.name for p in a.iterdir())
        if names != sorted(p.name for p in b.iterdir()):
            mismatched.append(argv[0])
        for name in names:
            if (a / name).read_bytes() != (b / name).read_bytes():
                mismatched.append(f"{argv[0]}/{name}")
    ok = not mismatched
    report("14", ok, f"{len(jobs)} CLI jobs rerun from their manifests: mismatched outputs {mismatched}")
    assert ok


if __name__ == "__main__":
    import tempfile

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(Path(d))
                else:
                    fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
