"""Leading eigenpair and minimum-norm solves against lam*I - A.

Default strategy is a full dense symmetric eigendecomposition (exact and
cheap at n <= ~2000, which covers everything here). A power-iteration
path is kept as an option for larger graphs; it obtains the second
eigenvalue by one deflation step and is unreliable when the two largest
eigenvalue magnitudes nearly coincide (e.g. bipartite graphs), in which
case prefer the dense path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateSpectrum, InvalidVector, NotConnected, ShapeError
from .graphs import Graph, is_connected

__all__ = ["EigenPair", "leading_eigenpair", "rayleigh_quotient", "minnorm_solve"]

_POWER_TOL = 1e-12
_POWER_MAXITER = 100_000


@dataclass(frozen=True)
class EigenPair:
    """Leading eigenvalue, its unit nonnegative eigenvector, and the
    second-largest-magnitude eigenvalue (not the second-largest algebraic
    one). For undirected graphs the left eigenvector coincides with v.
    """

    lam: float
    v: np.ndarray
    lam2: float
    residual: float

    def __post_init__(self) -> None:
        self.v.setflags(write=False)


@lru_cache(maxsize=4)
def _decompose(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Full symmetric eigendecomposition of the adjacency matrix,
    eigenvalues ascending. Cached so repeated solves on one graph
    (per-edge scans, predictions) pay for a single factorization.
    """
    w, q = np.linalg.eigh(g.adjacency())
    w.setflags(write=False)
    q.setflags(write=False)
    return w, q


def _fix_sign(v: np.ndarray) -> np.ndarray:
    if v.sum() < 0:
        v = -v
    v = v.copy()
    v[(v < 0) & (v > -1e-12)] = 0.0
    return v / np.linalg.norm(v)


def _second_by_magnitude(rest: np.ndarray) -> float:
    # magnitude ties broken toward the algebraically larger eigenvalue,
    # which gives the smaller gap (the conservative bound)
    order = np.lexsort((-rest, -np.abs(rest)))
    return float(rest[order[0]])


def leading_eigenpair(g: Graph, method: str = "dense") -> EigenPair:
    """Perron eigenvalue and eigenvector of a connected graph."""
    if g.n <= 1 or g.m == 0:
        raise DegenerateSpectrum(f"n={g.n}, m={g.m}: no leading eigenpair")
    if not is_connected(g):
        raise NotConnected("leading eigenpair requires a connected graph")
    if method == "dense":
        w, q = _decompose(g)
        lam = float(w[-1])
        v = _fix_sign(q[:, -1])
        lam2 = _second_by_magnitude(w[:-1])
    elif method == "power":
        lam, v, lam2 = _power_eigenpair(g.adjacency())
        v = _fix_sign(v)
    else:
        raise ValueError(f"method must be 'dense' or 'power', got {method!r}")
    adj = g.adjacency()
    residual = float(np.linalg.norm(adj @ v - lam * v))
    if residual > 1e-8 * max(1.0, lam):
        raise DegenerateSpectrum(
            f"leading pair residual {residual:.3e} too large (lam={lam:.6g})"
        )
    return EigenPair(lam=lam, v=v, lam2=lam2, residual=residual)


def _power_eigenpair(adj: np.ndarray) -> tuple[float, np.ndarray, float]:
    n = adj.shape[0]
    x = np.ones(n) / np.sqrt(n)  # positive start overlaps the Perron vector
    lam = _power_iterate(adj, x)
    x = _converged_vector(adj, x, lam)
    lam = float(x @ (adj @ x))
    deflated = adj - lam * np.outer(x, x)
    y0 = np.random.default_rng(0).standard_normal(n)
    y0 -= (x @ y0) * x
    y0 /= np.linalg.norm(y0)
    lam2 = _power_iterate(deflated, y0)
    return lam, x, float(lam2)


def _power_iterate(mat: np.ndarray, x: np.ndarray) -> float:
    lam = float(x @ (mat @ x))
    for _ in range(_POWER_MAXITER):
        y = mat @ x
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return 0.0
        x = y / norm
        lam_new = float(x @ (mat @ x))
        if abs(lam_new - lam) <= _POWER_TOL * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return lam


def _converged_vector(mat: np.ndarray, x: np.ndarray, lam: float) -> np.ndarray:
    for _ in range(_POWER_MAXITER):
        y = mat @ x
        norm = np.linalg.norm(y)
        x_new = y / norm
        if np.linalg.norm(mat @ x_new - lam * x_new) <= 1e-9 * max(1.0, abs(lam)):
            return x_new
        x = x_new
    return x


def rayleigh_quotient(g: Graph, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (g.n,):
        raise ShapeError(f"expected shape ({g.n},), got {x.shape}")
    denom = float(x @ x)
    if denom == 0.0:
        raise InvalidVector("zero vector has no Rayleigh quotient")
    return float(x @ (g.adjacency() @ x)) / denom


def minnorm_solve(g: Graph, ep: EigenPair, b: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution of (lam*I - A) x = b.

    Implemented through the eigenbasis of A with reciprocal filtering:
    eigendirections where |lam - mu| <= n * eps * lam are treated as the
    null space (for a simple lam that is exactly the Perron direction).
    The result is orthogonal to the null space, hence to v.
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (g.n,):
        raise ShapeError(f"expected shape ({g.n},), got {b.shape}")
    w, q = _decompose(g)
    gaps = ep.lam - w
    cutoff = g.n * np.finfo(float).eps * max(1.0, abs(ep.lam))
    inv = np.where(np.abs(gaps) <= cutoff, 0.0, 1.0 / np.where(gaps == 0, 1.0, gaps))
    return q @ (inv * (q.T @ b))
