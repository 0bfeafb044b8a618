"""Spectral gaps and the first Fourier mode of particle-hole pairs on the
circle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .evolution import evolve_rows
from .generators import RateMatrix, build_generator, ergodic_mask
from .stationary import stationary

DENSE_LIMIT = 20_000


def spectral_gap(rm: RateMatrix, mu: np.ndarray | None = None, sym_tol: float = 1e-10) -> float:
    """Smallest nonzero eigenvalue of -Q for a reversible generator, via the
    symmetrisation D^{1/2} Q D^{-1/2} on the support of the stationary
    vector (transient states are dropped first)."""
    if mu is None:
        mu = stationary(rm.family, rm=rm)[1]
    mu = np.asarray(mu, dtype=float)
    if np.any(mu <= 0):
        keep = mu > 0
        rm, mu = rm.restrict(keep), mu[keep]
    s = np.sqrt(mu)
    S = sp.diags(s) @ rm.Q @ sp.diags(1.0 / s)
    asym = abs(S - S.T).max() if S.nnz else 0.0
    if asym > sym_tol:
        raise ValueError(f"generator is not reversible (asymmetry {asym:.2e})")
    S = 0.5 * (S + S.T)
    n = len(rm)
    if n < 2:
        return 0.0
    if n <= DENSE_LIMIT:
        ev = sla.eigvalsh(-S.toarray())
        return float(np.sort(ev)[1])
    ev = spla.eigsh(-S.tocsc(), k=2, sigma=-1e-9, which="LM", return_eigenvectors=False)
    return float(np.sort(ev)[1])


def restrict_to_ergodic(rm: RateMatrix) -> RateMatrix:
    return rm.restrict(ergodic_mask(rm))


def a1_statistic(state, k: int, variant: str = "hole", offset: int = 0) -> float:
    """Sum over particles labelled i = 0..k-1 clockwise from site 0 of
    cos(2 pi (i + offset) / k), restricted to particles whose right
    neighbour is a hole (``variant="hole"``) or a particle
    (``variant="particle"``)."""
    N = len(state)
    want = 0 if variant == "hole" else 1
    total = 0.0
    i = 0
    for x in range(N):
        if state[x]:
            if state[(x + 1) % N] == want:
                total += np.cos(2 * np.pi * (i + offset) / k)
            i += 1
    return total


@dataclass(frozen=True)
class EigenCheck:
    N: int
    k: int
    variant: str
    eigenvalue: float
    residual: float
    in_spectrum: float  # distance from the target eigenvalue to the spectrum of Q on G


def eigencheck_a1(N: int, k: int, variant: str | None = None) -> EigenCheck:
    """Residual max |Q a1 - (cos(2 pi / k) - 1) a1| on the ergodic component
    of the symmetric circle FEP, with particles labelled from site 0.

    ``variant`` defaults to "hole" for k >= 2N/3 and "particle" otherwise.
    """
    if variant is None:
        variant = "hole" if 3 * k >= 2 * N else "particle"
    rm = restrict_to_ergodic(build_generator("fep-circle", N=N, k=k, p=0.5))
    a = np.array([a1_statistic(s, k, variant) for s in rm.states])
    lam = np.cos(2 * np.pi / k) - 1.0
    res = float(np.abs(rm.Q @ a - lam * a).max())
    ev = sla.eigvals(rm.dense())
    dist = float(np.min(np.abs(ev - lam)))
    return EigenCheck(N, k, variant, lam, res, dist)


def lifted_circle_generator(N: int, k: int) -> tuple[list, sp.csr_matrix]:
    """Symmetric circle FEP on the ergodic component, with the label of the
    particle at the first occupied site tracked modulo k.

    States are (configuration, c) where c is the label, in a fixed
    clockwise labelling that moves with the particles, of the first particle
    clockwise from site 0.  A jump across the bond (N-1, 0) shifts c.
    """
    base = restrict_to_ergodic(build_generator("fep-circle", N=N, k=k, p=0.5))
    states = [(s, c) for s in base.states for c in range(k)]
    index = {st: j for j, st in enumerate(states)}
    rows, cols, vals = [], [], []
    for (s, c), j in index.items():
        for x in range(N):
            if not s[x]:
                continue
            for d in (1, -1):
                y, back = (x + d) % N, (x - d) % N
                if s[back] and not s[y]:
                    t = list(s)
                    t[x], t[y] = 0, 1
                    c2 = c
                    if d == 1 and x == N - 1:
                        c2 = (c - 1) % k
                    elif d == -1 and x == 0:
                        c2 = (c + 1) % k
                    rows.append(j)
                    cols.append(index[(tuple(t), c2)])
                    vals.append(0.5)
    n = len(states)
    Q = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    Q = (Q - sp.diags(np.asarray(Q.sum(axis=1)).ravel())).tocsr()
    return states, Q


def eigencheck_a1_lifted(N: int, k: int, variant: str | None = None) -> EigenCheck:
    """Residual of the first Fourier mode when particle labels follow the
    particles instead of being recounted from site 0."""
    if variant is None:
        variant = "hole" if 3 * k >= 2 * N else "particle"
    states, Q = lifted_circle_generator(N, k)
    a = np.array([a1_statistic(s, k, variant, offset=c) for s, c in states])
    lam = np.cos(2 * np.pi / k) - 1.0
    res = float(np.abs(Q @ a - lam * a).max())
    return EigenCheck(N, k, variant, lam, res, float("nan"))


def a1_moments(N: int, k: int, start, times, variant: str | None = None) -> np.ndarray:
    """Mean and variance of the statistic a1 along the exact law of the
    circle FEP started from ``start`` (a state of the ergodic component).
    Rows of the result are (t, mean, variance); no bound is asserted."""
    if variant is None:
        variant = "hole" if 3 * k >= 2 * N else "particle"
    rm = restrict_to_ergodic(build_generator("fep-circle", N=N, k=k, p=0.5))
    a = np.array([a1_statistic(s, k, variant) for s in rm.states])
    d = np.zeros(len(rm))
    d[rm.index_of(start)] = 1.0
    out = []
    now = 0.0
    for t in sorted(float(x) for x in times):
        d = evolve_rows(d, rm, t - now)
        now = t
        m = float(d @ a)
        out.append((t, m, float(d @ (a - m) ** 2)))
    return np.array(out)
