import itertools
import math

import numpy as np
import pytest

from fepmix.state import (
    CircleConfig,
    SegmentConfig,
    circle_from_positions,
    count_ergodic,
    enumerate_circle,
    enumerate_segment,
    ergodic_regions,
    in_class_I_m,
    is_ergodic_circle,
    is_ergodic_segment,
    segment_from_positions,
    special_configs,
)


def brute_circle(N, k):
    n = 0
    for occ in itertools.product((0, 1), repeat=N):
        if sum(occ) == k and all(occ[x] or occ[(x + 1) % N] for x in range(N)):
            n += 1
    return n


def brute_segment(N, k):
    n = 0
    for occ in itertools.product((0, 1), repeat=N):
        if sum(occ) == k and occ[0] and occ[-1] and all(occ[x] or occ[x + 1] for x in range(N - 1)):
            n += 1
    return n


@pytest.mark.parametrize("N", range(3, 11))
def test_counts_match_brute_force(N):
    for k in range(N // 2 + 1, N + 1):
        assert count_ergodic("circle", N, k) == brute_circle(N, k)
        assert count_ergodic("segment", N, k) == brute_segment(N, k)
        assert len(enumerate_circle(N, k, ergodic_only=True)) == brute_circle(N, k)


def test_count_identity_two_binomials():
    for N in range(4, 30):
        for k in range(N // 2 + 1, N):
            assert count_ergodic("circle", N, k) == math.comb(k, N - k) + math.comb(k - 1, N - k - 1)


def test_count_rejects_low_density():
    with pytest.raises(ValueError):
        count_ergodic("circle", 10, 4)


def test_ergodicity_predicates():
    assert is_ergodic_segment(SegmentConfig([1, 1, 0, 1]))
    assert not is_ergodic_segment(SegmentConfig([0, 1, 1, 1]))
    assert not is_ergodic_segment(SegmentConfig([1, 0, 0, 1, 1]))
    assert is_ergodic_circle(CircleConfig([0, 1, 1, 0, 1]))
    assert not is_ergodic_circle(CircleConfig([0, 1, 1, 1, 0]))


def test_positions_are_one_based_on_segment_and_zero_based_on_circle():
    s = segment_from_positions(5, [1, 2, 4])
    assert list(s.positions()) == [1, 2, 4]
    assert list(s.holes()) == [3, 5]
    c = circle_from_positions(5, [0, 3])
    assert list(c.occ) == [1, 0, 0, 1, 0]


def test_config_is_immutable_and_hashable():
    s = SegmentConfig([1, 0, 1])
    with pytest.raises(ValueError):
        s.occ[0] = 0
    assert len({s, SegmentConfig([1, 0, 1])}) == 1


def test_special_configs_small_case():
    sc = special_configs(8, 6)
    assert str(sc.minus) == "11111100"
    assert str(sc.plus) == "00111111"
    assert is_ergodic_segment(sc.vee) and is_ergodic_segment(sc.wedge)
    assert str(sc.vee) == "11110101"
    assert str(sc.wedge) == "10101111"


def test_ergodic_regions_three_blocks():
    N = 20
    occ = np.zeros(N, dtype=np.uint8)
    for a, word in ((14, "101101"), (2, "11011"), (9, "111")):
        for j, ch in enumerate(word):
            occ[a + j] = int(ch)
    regs = ergodic_regions(CircleConfig(occ))
    assert len(regs) == 3
    spans = sorted((regs.sites(j)[0], regs.sites(j)[-1]) for j in range(3))
    assert spans == [(2, 6), (9, 11), (14, 19)]
    assert sorted(regs.counts) == [3, 4, 4]
    assert in_class_I_m(CircleConfig(occ), 3)
    assert not in_class_I_m(CircleConfig(occ), 2)


def test_full_circle_region():
    regs = ergodic_regions(CircleConfig([1, 1, 0, 1, 1, 0]))
    assert regs.full_circle
