"""First-order edge dynamical importance (FoEDI) scores.

For an unordered pair (i, j) the unnormalized score is
``iota_dag = 2 v_i v_j / (v.v)`` and the normalized score is
``iota = iota_dag / lam``; iota estimates |d lam| / lam for toggling the
pair, identically for present edges (removal) and absent pairs
(addition). Scores are computed against the unit-normalized eigenvector,
so the v.v denominator is included explicitly and vectors supplied at
any scale give the same result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SelfLoopRejected
from .graphs import Graph, complement_edges
from .spectral import EigenPair

__all__ = ["EdgeScore", "foedi", "score_all", "foedi_sum_check"]


@dataclass(frozen=True)
class EdgeScore:
    i: int
    j: int
    iota: float
    iota_dag: float


def foedi(ep: EigenPair, i: int, j: int) -> EdgeScore:
    if i == j:
        raise SelfLoopRejected(f"self-pair ({i},{i}) has no score")
    a, b = (i, j) if i < j else (j, i)
    vv = float(ep.v @ ep.v)
    iota_dag = 2.0 * float(ep.v[a]) * float(ep.v[b]) / vv
    return EdgeScore(i=a, j=b, iota=iota_dag / ep.lam, iota_dag=iota_dag)


def score_all(g: Graph, ep: EigenPair, which: str) -> list[EdgeScore]:
    """Score every present edge or every complement edge, in
    lexicographic (i, j) order.
    """
    if which == "edges":
        pairs = sorted(g.edges)
    elif which == "non_edges":
        pairs = complement_edges(g)
    else:
        raise ValueError(f"which must be 'edges' or 'non_edges', got {which!r}")
    v = ep.v
    vv = float(v @ v)
    return [
        EdgeScore(
            i=i,
            j=j,
            iota=2.0 * float(v[i]) * float(v[j]) / (vv * ep.lam),
            iota_dag=2.0 * float(v[i]) * float(v[j]) / vv,
        )
        for i, j in pairs
    ]


def foedi_sum_check(g: Graph, ep: EigenPair) -> float:
    """Sum of iota_dag over all edges; equals lam (Rayleigh identity)."""
    v = ep.v
    pairs = np.array(sorted(g.edges))
    if pairs.size == 0:
        return 0.0
    return float(2.0 * (v[pairs[:, 0]] * v[pairs[:, 1]]).sum() / (v @ v))
