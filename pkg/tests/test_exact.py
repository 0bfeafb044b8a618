import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg as sla

from fepmix import exact as ex
from fepmix.exact.ensembles import bernoulli_correlation_ratio, max_correlation_deviation, window_patterns
from fepmix.state import enumerate_circle


def test_fep_segment_rates_small():
    rm = ex.build_generator("fep-seg", N=4, k=3, p=0.7)
    assert rm.rate((1, 1, 1, 0), (1, 1, 0, 1)) == pytest.approx(0.7)
    assert rm.rate((1, 1, 0, 1), (1, 0, 1, 1)) == pytest.approx(0.7)
    assert rm.rate((1, 0, 1, 1), (1, 1, 0, 1)) == pytest.approx(0.3)
    assert rm.rate((0, 1, 1, 1), (1, 0, 1, 1)) == pytest.approx(0.3)
    assert rm.row_sum_error() < 1e-15


def test_state_space_guard():
    with pytest.raises(ex.StateSpaceOverflow):
        ex.build_generator("fep-seg", N=20, k=12, p=0.5, max_states=100)


@pytest.mark.parametrize("N,k,p", [(4, 3, 0.7), (7, 5, 0.6), (9, 6, 0.8), (8, 6, 0.5)])
def test_segment_measure_closed_form_equals_kernel(N, k, p):
    rm, closed = ex.stationary("fep-seg", {"N": N, "k": k, "p": p}, method="closed")
    _, kern = ex.stationary("fep-seg", rm=rm, method="kernel")
    assert np.abs(closed - kern).max() < 1e-12
    assert ex.stationarity_residual(rm, closed) < 1e-12
    assert ex.detailed_balance_error(rm, closed) < 1e-12


def test_segment_measure_ratio_example():
    rm, mu = ex.stationary("fep-seg", {"N": 4, "k": 3, "p": 0.7})
    ratio = mu[rm.index_of((1, 1, 0, 1))] / mu[rm.index_of((1, 0, 1, 1))]
    assert ratio == pytest.approx(0.3 / 0.7)
    assert mu[rm.index_of((1, 1, 1, 0))] == 0.0


def test_zrp_const_measure_against_product_weights():
    p = 0.7
    lam = (1 - p) / p
    rm, mu = ex.stationary("zrp-const", {"n": 3, "m": 4, "p": p})
    w = np.array([math.prod(lam ** ((3 + 1 - x) * v) for x, v in enumerate(s, start=1)) for s in rm.states])
    assert np.abs(mu - w / w.sum()).max() < 1e-14


def test_circle_uniform_on_ergodic_component():
    rm, mu = ex.stationary("fep-circle", {"N": 9, "k": 6, "p": 0.5})
    support = mu > 0
    assert support.sum() == len(enumerate_circle(9, 6, ergodic_only=True))
    assert np.allclose(mu[support], 1 / support.sum())
    assert ex.stationarity_residual(rm, mu) < 1e-14


def test_reducible_chain_detected():
    with pytest.raises(ex.ReducibleChainError):
        ex.solve_stationary(ex.build_generator("fep-seg", N=8, k=4, p=0.5))


def dense_tv(rm, mu, t):
    P = sla.expm(t * rm.dense())
    return 0.5 * np.abs(P - mu[None, :]).sum(axis=1).max()


@pytest.mark.parametrize("family,params", [("fep-seg", {"N": 6, "k": 4, "p": 0.5}),
                                           ("fep-seg", {"N": 7, "k": 5, "p": 0.8}),
                                           ("zrp-const", {"n": 3, "m": 3, "p": 0.6})])
def test_tv_curve_against_dense_exponential(family, params):
    rm, mu = ex.stationary(family, params)
    times = [0.0, 0.3, 1.0, 4.0, 20.0]
    curve = ex.tv_curve(rm, times, mu)
    for t, d in zip(times, curve.d):
        assert d == pytest.approx(dense_tv(rm, mu, t), abs=1e-9)


def test_mixing_time_fixture_and_bracket():
    rm = ex.build_generator("fep-seg", N=4, k=3, p=0.5)
    mt = ex.mixing_time_exact(rm, 0.25)
    assert mt.T == pytest.approx(2.7734375, rel=1e-3)
    assert mt.worst_state == (1, 1, 1, 0)
    _, mu = ex.stationary("fep-seg", rm=rm)
    lo, hi = mt.bracket
    assert dense_tv(rm, mu, hi) <= 0.25 + 1e-12
    assert dense_tv(rm, mu, lo) > 0.25


def test_spectral_gap_against_dense_eigenvalues():
    rm, mu = ex.stationary("fep-seg", {"N": 8, "k": 5, "p": 0.7})
    sub = rm.restrict(mu > 0)
    ev = np.sort(-np.linalg.eigvals(sub.dense()).real)
    assert ex.spectral_gap(rm, mu) == pytest.approx(ev[1], rel=1e-9)
    assert ex.spectral_gap(ex.build_generator("fep-seg", N=4, k=3, p=0.5)) == pytest.approx(1.0)


def test_a1_lifted_eigenfunction():
    for N, k in [(5, 4), (7, 5), (9, 6), (10, 7)]:
        for variant in ("hole", "particle"):
            assert ex.eigencheck_a1_lifted(N, k, variant).residual < 1e-10


def test_a1_moments_shape():
    out = ex.a1_moments(6, 4, (1, 1, 0, 1, 1, 0), [0.0, 1.0, 3.0])
    assert out.shape == (3, 3)
    assert np.all(out[:, 2] >= -1e-12)


def test_survival_matches_matrix_exponential():
    n, m, p = 3, 3, 0.7
    chk = ex.aldous_brown_check(n, m, p, times=[0.0, 0.5, 2.0, 10.0])
    rm, mu = ex.stationary("zrp-const", {"n": n, "m": m, "p": p})
    out = np.array([s[0] == 0 for s in rm.states])
    Qc = rm.dense()[np.ix_(out, out)]
    for t, s in zip(chk.times, chk.survival):
        assert s == pytest.approx(mu[out] @ sla.expm(t * Qc) @ np.ones(out.sum()), abs=1e-12)
    assert chk.bound_holds and chk.power_bound_holds


def test_first_pile_one_fraction_matches_float():
    f = ex.first_pile_one_exact(4, 3, "0.7")
    rm, mu = ex.stationary("zrp-const", {"n": 4, "m": 3, "p": 0.7})
    assert float(f) == pytest.approx(sum(v for s, v in zip(rm.states, mu) if s[0] == 1), rel=1e-12)
    assert isinstance(f, Fraction)


def markov_window(rho, sigma):
    """Window law of the stationary two-state chain with P(1->0) = (1-rho)/rho
    and P(0->1) = 1, started from its invariant law."""
    a = (1 - rho) / rho
    pi1 = 1 / (1 + a)
    pr = pi1 if sigma[0] else 1 - pi1
    for u, v in zip(sigma, sigma[1:]):
        if u == 1:
            pr *= a if v == 0 else 1 - a
        else:
            pr *= 1.0 if v == 1 else 0.0
    return pr


@pytest.mark.parametrize("rho", [0.55, 0.7, 0.9])
def test_grand_canonical_is_two_state_chain(rho):
    for ell in range(1, 9):
        for sigma in itertools.product((0, 1), repeat=ell):
            assert ex.grand_canonical(rho, ell, sigma) == pytest.approx(markov_window(rho, sigma), abs=1e-15)
        assert ex.grand_canonical_normalisation_error(rho, ell) < 1e-12


def test_canonical_marginal_against_enumeration():
    N, k, ell = 12, 8, 4
    G = enumerate_circle(N, k, ergodic_only=True)
    for sigma in window_patterns(ell):
        freq = sum(tuple(int(v) for v in c.occ[:ell]) == sigma for c in G) / len(G)
        assert ex.canonical_marginal(N, k, sigma) == pytest.approx(freq, abs=1e-14)


def test_canonical_marginal_log_gamma_path():
    for sigma in window_patterns(4):
        a = ex.canonical_marginal(60, 42, sigma, exact=True)
        b = ex.canonical_marginal(60, 42, sigma, exact=False)
        assert b == pytest.approx(a, rel=1e-9, abs=1e-300)


def test_bernoulli_control_has_no_correlation():
    assert max_correlation_deviation(bernoulli_correlation_ratio(0.7, 5)) < 1e-12
    assert max_correlation_deviation(ex.correlation_ratio(0.7, 4)) > 1e-3


def test_canonical_correlation_tends_to_grand_canonical():
    a = max_correlation_deviation(ex.canonical_correlation_ratio(200, 140, 4))
    b = max_correlation_deviation(ex.correlation_ratio(0.7, 4))
    assert a == pytest.approx(b, abs=0.02)
