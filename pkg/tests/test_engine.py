import numpy as np
import pytest

from fepmix.engine import (
    ClockField,
    ObepParams,
    coupling_time,
    order_violations,
    path_hitting_time,
    simulate_circle,
    simulate_coupled,
    simulate_obep,
    simulate_path,
    simulate_segment,
    simulate_zrp,
)
from fepmix.engine import gillespie as G
from fepmix.engine.rng import key3, poisson_by_inversion, uniform_at
from fepmix.engine.trajectory import first_hitting
from fepmix.exact import build_generator
from fepmix.lattice_path import LatticePath, is_ergodic_path, maximal_path, minimal_path, validate_heights
from fepmix.state import CircleConfig, SegmentConfig, is_ergodic_segment


def test_rng_is_deterministic_and_uniform():
    u = np.array([uniform_at(np.uint64(key3(5, j, 0)), 0) for j in range(20000)])
    assert np.all((u > 0) & (u < 1))
    assert abs(u.mean() - 0.5) < 0.01
    assert uniform_at(np.uint64(key3(1, 2, 3)), 0) == uniform_at(np.uint64(key3(1, 2, 3)), 0)
    assert uniform_at(np.uint64(key3(1, 2, 3)), 0) != uniform_at(np.uint64(key3(1, 2, 4)), 0)


def test_poisson_by_inversion_mean():
    rng = np.random.default_rng(0)
    draws = [poisson_by_inversion(u, 2.5) for u in rng.random(20000)]
    assert abs(np.mean(draws) - 2.5) < 0.05
    assert abs(np.var(draws) - 2.5) < 0.15


def test_clock_rings_are_sorted_and_reproducible():
    f = ClockField(0.5, 7)
    r1 = f.rings(3, 2, 1, 0.0, 50.0)
    r2 = ClockField(0.5, 7).rings(3, 2, 1, 0.0, 50.0)
    assert np.array_equal(r1, r2)
    assert np.all(np.diff(r1) > 0)
    # Poisson rate 1/2 on [0, 50): mean 25
    counts = [ClockField(0.5, s).rings(1, 0, -1, 0.0, 50.0).size for s in range(300)]
    assert abs(np.mean(counts) - 25) < 1.5
    assert f.next_ring(3, 2, 1, 0.0) == r1[0]


def test_clock_field_rejects_bad_rate():
    with pytest.raises(ValueError):
        ClockField(0.3, 0)


def test_path_moves_are_legal_corner_flips():
    N, k = 10, 7
    tr = simulate_path(minimal_path(N, k), ClockField(0.6, 3), 40.0)
    assert len(tr) > 0
    prev = np.array(tr.initial)
    for t, h in tr.states():
        validate_heights(N, k, h)
        d = np.abs(h - prev)
        assert d.sum() in (0, 2) and np.count_nonzero(d) <= 1
        prev = h.copy()


def test_same_seed_same_trajectory():
    a = simulate_path(minimal_path(12, 8), ClockField(0.5, 11), 30.0)
    b = simulate_path(minimal_path(12, 8), ClockField(0.5, 11), 30.0)
    assert a.same_events(b)
    assert a.encode() == b.encode()


def test_truncation_is_a_prefix():
    f = ClockField(0.5, 4)
    long = simulate_path(minimal_path(12, 8), f, 60.0)
    short = simulate_path(minimal_path(12, 8), f, 20.0)
    assert long.truncate(20.0).same_events(short)


def test_coupled_paths_stay_ordered_and_coalesce():
    N, k = 12, 8
    trs = simulate_coupled([minimal_path(N, k), maximal_path(N, k)], ClockField(0.5, 2), 2000.0, check_order=True)
    lo, hi = trs[0].final(), trs[1].final()
    assert np.array_equal(lo, hi)
    tc = coupling_time(minimal_path(N, k), maximal_path(N, k), ClockField(0.5, 2), 2000.0)
    assert 0 < tc < 2000.0
    assert order_violations([minimal_path(N, k), maximal_path(N, k)], ClockField(0.5, 9), 500.0)[0] == 0


def test_path_hitting_time_matches_trajectory_scan():
    N, k = 12, 8
    for s in range(5):
        f = ClockField(0.7, s)
        tau = path_hitting_time(minimal_path(N, k), f, 1e5)
        tr = simulate_path(minimal_path(N, k), f, tau + 1.0)
        hit = first_hitting(tr, lambda h: is_ergodic_path(LatticePath(N, k, tuple(int(v) for v in h))))
        assert hit.time == tau


def _assert_legal(traj, rm, encode):
    Q = rm.Q.tocsr()
    for (_, a), (_, b) in zip(traj.states(), list(traj.states())[1:]):
        i, j = rm.index_of(encode(a)), rm.index_of(encode(b))
        assert Q[i, j] > 0


def test_segment_gillespie_moves_are_generator_moves():
    c = SegmentConfig([1, 1, 1, 0, 0, 1, 1, 0])
    tr = simulate_segment(c, 5, 30.0, p=0.7)
    rm = build_generator("fep-seg", N=8, k=5, p=0.7)
    _assert_legal(tr, rm, lambda s: tuple(int(v) for v in s))


def test_circle_gillespie_moves_are_generator_moves():
    c = CircleConfig([1, 1, 1, 1, 0, 0, 0, 1])
    tr = simulate_circle(c, 5, 30.0)
    rm = build_generator("fep-circle", N=8, k=5)
    _assert_legal(tr, rm, lambda s: tuple(int(v) for v in s))


def test_zrp_moves_are_generator_moves():
    tr = simulate_zrp([4, 0, 0, 1], 3, 30.0, p=0.6)
    rm = build_generator("zrp-seg", n=4, m=5, p=0.6)
    _assert_legal(tr, rm, lambda s: tuple(int(v) for v in s))


@pytest.mark.parametrize("params", [ObepParams.right_reservoir(0.3), ObepParams.left_reservoir(0.3),
                                    ObepParams(0.4, 0.2, 0.3, 0.1, 0.5)])
def test_obep_moves_are_generator_moves(params):
    tr = simulate_obep(np.zeros(5, dtype=np.int64), params, 8, 40.0)
    q, a, b, g, d = params.as_tuple()
    rm = build_generator("obep", n=5, q=q, alpha=a, beta=b, gamma=g, delta=d)
    assert len(tr) > 0
    _assert_legal(tr, rm, lambda s: tuple(int(v) for v in s))


def test_gillespie_empirical_rate_of_first_event():
    # single enabled move 1110 -> 1101 at rate p
    occ = np.array([1, 1, 1, 0], dtype=np.int64)
    # the first event enters the ergodic component, so the stop time is the first event time
    ts = [G.fep_segment(occ, np.int64(s), 0.7, 1e9, True, False)[0] for s in range(4000)]
    assert abs(np.mean(ts) - 1 / 0.7) < 0.06


def test_segment_hits_agree_with_predicate():
    c = SegmentConfig([1, 1, 1, 0, 0, 1, 0, 1, 1])
    for s in range(5):
        tr = simulate_segment(c, s, 500.0)
        hit = first_hitting(tr, lambda occ: is_ergodic_segment(SegmentConfig(occ.astype(np.uint8))))
        occ = np.asarray(c.occ, dtype=np.int64)
        tau = G.fep_segment(occ, np.int64(s), 0.5, 500.0, True, False)[0]
        assert hit.time == tau
