"""Stationary distributions: closed forms and a kernel solve."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components
from scipy.special import logsumexp

from .generators import RateMatrix, build_generator, canonical_family, ergodic_mask


class ReducibleChainError(ValueError):
    """Raised when the chain has more than one closed class."""

    def __init__(self, classes):
        self.classes = classes
        super().__init__(f"{len(classes)} closed classes; sizes {[len(c) for c in classes]}")


def closed_classes(rm: RateMatrix) -> list[np.ndarray]:
    """Closed communicating classes as sorted index arrays."""
    off = rm.Q.copy().tolil()
    off.setdiag(0)
    off = off.tocsr()
    off.eliminate_zeros()
    n_comp, labels = connected_components(off, directed=True, connection="strong")
    leaving = np.zeros(n_comp, dtype=bool)
    coo = off.tocoo()
    cross = labels[coo.row] != labels[coo.col]
    leaving[np.unique(labels[coo.row[cross]])] = True
    return [np.flatnonzero(labels == c) for c in range(n_comp) if not leaving[c]]


def solve_stationary(rm: RateMatrix) -> np.ndarray:
    """Stationary vector from the kernel of Q^T on the unique closed class."""
    classes = closed_classes(rm)
    if len(classes) != 1:
        raise ReducibleChainError(classes)
    cls = classes[0]
    mu = np.zeros(len(rm))
    if cls.size == 1:
        mu[cls[0]] = 1.0
        return mu
    A = rm.Q[cls][:, cls].T.tolil()
    A[0, :] = np.ones(cls.size)
    b = np.zeros(cls.size)
    b[0] = 1.0
    x = spla.spsolve(A.tocsc(), b)
    x = np.clip(x, 0.0, None)
    mu[cls] = x / x.sum()
    return mu


def _normalise_log(logw: np.ndarray, support: np.ndarray) -> np.ndarray:
    out = np.zeros(logw.size)
    lw = logw[support]
    out[support] = np.exp(lw - logsumexp(lw))
    return out


def fep_segment_measure(rm: RateMatrix) -> np.ndarray:
    """Stationary law of the segment FEP: on the ergodic component,
    proportional to (q/p)^A with A the sum of the hole positions (1-based)."""
    p = rm.params["p"]
    lam_log = np.log((1.0 - p) / p)
    A = np.array([sum(x + 1 for x, v in enumerate(s) if v == 0) for s in rm.states], dtype=float)
    return _normalise_log(A * lam_log, ergodic_mask(rm))


def sep_measure(rm: RateMatrix) -> np.ndarray:
    """Exclusion process with right rate q and left rate p: proportional to
    (q/p)^(sum of particle positions)."""
    q = rm.params["q"]
    lam_log = np.log(q / (1.0 - q))
    S = np.array([sum(x + 1 for x, v in enumerate(s) if v) for s in rm.states], dtype=float)
    return _normalise_log(S * lam_log, np.ones(len(rm), dtype=bool))


def zrp_const_measure(rm: RateMatrix) -> np.ndarray:
    """Constant-rate zero range process on n piles: proportional to
    prod_x (q/p)^((n+1-x) w(x)), x 1-based."""
    n, p = rm.params["n"], rm.params["p"]
    lam_log = np.log((1.0 - p) / p)
    weights = np.arange(n, 0, -1, dtype=float)
    E = np.array([float(np.dot(weights, s)) for s in rm.states])
    return _normalise_log(E * lam_log, np.ones(len(rm), dtype=bool))


def circle_uniform_measure(rm: RateMatrix) -> np.ndarray:
    mask = ergodic_mask(rm)
    out = np.zeros(len(rm))
    out[mask] = 1.0 / mask.sum()
    return out


def stationary(family, params: dict | None = None, rm: RateMatrix | None = None,
               method: str = "auto") -> tuple[RateMatrix, np.ndarray]:
    """Stationary vector aligned to the generator's state order.

    ``method="closed"`` uses the closed form where one exists, ``"kernel"``
    always solves the linear system, ``"auto"`` prefers the closed form.
    Returns (generator, distribution).
    """
    if rm is None:
        rm = build_generator(family, **(params or {}))
    fam = canonical_family(rm.family)
    if method in ("auto", "closed"):
        if fam == "fep-seg" and 2 * rm.params["k"] > rm.params["N"]:
            return rm, fep_segment_measure(rm)
        if fam == "fep-circle" and rm.params["p"] == 0.5 and 2 * rm.params["k"] > rm.params["N"]:
            return rm, circle_uniform_measure(rm)
        if fam == "sep" and 0 < rm.params["q"] < 1:
            return rm, sep_measure(rm)
        if fam == "zrp-const" and 0 < rm.params["p"] < 1:
            return rm, zrp_const_measure(rm)
        if method == "closed":
            raise ValueError(f"no closed form available for {fam} with {rm.params}")
    return rm, solve_stationary(rm)


def stationarity_residual(rm: RateMatrix, mu: np.ndarray) -> float:
    """max |(mu^T Q)_y|."""
    return float(np.abs(rm.Q.T @ mu).max())


def detailed_balance_error(rm: RateMatrix, mu: np.ndarray) -> float:
    """max over pairs of |mu(x) Q(x,y) - mu(y) Q(y,x)|."""
    F = sp.diags(mu) @ rm.Q
    D = (F - F.T).tocoo()
    return float(np.abs(D.data).max()) if D.nnz else 0.0


def check_distribution(mu: np.ndarray, tol: float = 1e-12) -> None:
    if np.any(mu < -tol) or abs(mu.sum() - 1.0) > tol:
        raise ValueError("not a probability vector")
