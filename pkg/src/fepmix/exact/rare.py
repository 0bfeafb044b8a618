"""Hitting of the rare set {first pile nonempty} in the constant-rate zero
range process, compared with the capacity lower bound."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg as sla

from .generators import build_generator, composition_states
from .stationary import zrp_const_measure


@dataclass(frozen=True)
class RareSetCheck:
    n: int
    m: int
    p: float
    times: np.ndarray
    survival: np.ndarray
    bound: np.ndarray
    margin: np.ndarray
    mass_outside: float
    capacity: float
    first_pile_one: Fraction
    power_bound: Fraction

    @property
    def bound_holds(self) -> bool:
        return bool(np.all(self.survival >= self.bound * (1.0 - 1e-12) - 1e-15))

    @property
    def power_bound_holds(self) -> bool:
        return self.first_pile_one <= self.power_bound


def first_pile_one_exact(n: int, m: int, p) -> Fraction:
    """pi(w(1) = 1) as an exact fraction; ``p`` may be a decimal string."""
    pf = Fraction(str(p)) if not isinstance(p, Fraction) else p
    lam = (1 - pf) / pf
    Z = Fraction(0)
    hit = Fraction(0)
    for w in composition_states(n, m):
        weight = Fraction(1)
        for x, v in enumerate(w, start=1):
            weight *= lam ** ((n + 1 - x) * v)
        Z += weight
        if w[0] == 1:
            hit += weight
    return hit / Z


def survival_from_stationary(n: int, m: int, p: float, times) -> tuple:
    """Exact P_pi(tau > t) for tau the hitting time of {w(1) >= 1}, started
    from the stationary law.  Uses the spectral expansion of the symmetrised
    sub-generator on {w(1) = 0}, whose terms are all nonnegative."""
    rm = build_generator("zrp-const", n=n, m=m, p=p)
    mu = zrp_const_measure(rm)
    outside = np.array([s[0] == 0 for s in rm.states])
    Qc = rm.Q[outside][:, outside].toarray()
    s = np.sqrt(mu[outside])
    S = (s[:, None] * Qc) / s[None, :]
    S = 0.5 * (S + S.T)
    evals, V = sla.eigh(S)
    c = (V.T @ s) ** 2
    times = np.asarray(times, dtype=float)
    surv = np.exp(np.outer(times, evals)) @ c
    inside = ~outside
    # capacity: stationary flow from the rare set back to its complement
    Q = rm.Q.tocoo()
    cap = float(sum(mu[i] * v for i, j, v in zip(Q.row, Q.col, Q.data) if inside[i] and outside[j]))
    return surv, float(mu[outside].sum()), cap, mu, rm


def aldous_brown_check(n: int, m: int, p, times=None, n_times: int = 50) -> RareSetCheck:
    """Compare exact survival with pi(E^c) exp(-t q(E,E^c) / pi(E^c)) on a
    time grid (default: 50 points up to five times the bound's time scale)."""
    if n < 2 or m < 1:
        raise ValueError("need n >= 2 and m >= 1")
    pf = float(p)
    if times is None:
        _, mass, cap, _, _ = survival_from_stationary(n, m, pf, [0.0])
        times = np.linspace(0.0, 5.0 * mass / cap, n_times)
    surv, mass, cap, mu, rm = survival_from_stationary(n, m, pf, times)
    times = np.asarray(times, dtype=float)
    bound = mass * np.exp(-times * cap / mass)
    exact_one = first_pile_one_exact(n, m, p)
    lam = (1 - Fraction(str(p))) / Fraction(str(p))
    return RareSetCheck(n, m, pf, times, surv, bound, surv - bound, mass, cap,
                        exact_one, lam ** (n - 1))
