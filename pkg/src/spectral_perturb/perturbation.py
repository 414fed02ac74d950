"""Exact-vs-predicted comparisons for single-edge toggles.

For a toggle of pair (i, j) the first-order prediction machinery uses the
perturbation matrix dA with +-1 in entries (i, j) and (j, i), the
eigenvalue estimate d_lam = +-iota_dag, and the eigenvector estimate
``dv = pinv(lam*I - A) (dA - d_lam*I) v`` which is orthogonal to v by
construction. Exact counterparts recompute the toggled graph's spectrum.

Comparing eigenvector changes needs a gauge: the perturbed unit vector
v' is rescaled to v'/(v.v') before differencing, so the true change also
lives in the hyperplane orthogonal to v and is commensurable with dv.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import isnan, sqrt

import numpy as np

from .errors import AlignmentFailure, DegenerateSpectrum
from .graphs import Graph, complement_edges, is_connected, toggle_edge
from .importance import foedi
from .spectral import EigenPair, _decompose, leading_eigenpair, minnorm_solve

__all__ = [
    "PerturbationReport",
    "true_delta_lambda",
    "predict_delta_v",
    "true_delta_v",
    "angle_bound_check",
    "edge_scan",
]

_SIMPLE_GAP = 1e-10
_ALIGN_MIN = 1e-6


@dataclass(frozen=True)
class PerturbationReport:
    """One row of an edge scan: scores, exact changes, prediction errors."""

    i: int
    j: int
    mode: str
    iota: float
    iota_dag: float
    delta_lambda_true: float
    delta_lambda_rel_true: float
    dv_pred: np.ndarray
    dv_true: np.ndarray | None
    rel_err_dv: float
    sin_angle: float
    gap_bound: float
    disconnected: bool

    @property
    def bound_vacuous(self) -> bool:
        return self.gap_bound > 1.0

    @property
    def degenerate(self) -> bool:
        return self.dv_true is None


def _toggle_sign(mode: str) -> float:
    if mode == "add":
        return 1.0
    if mode == "remove":
        return -1.0
    raise ValueError(f"mode must be 'add' or 'remove', got {mode!r}")


def true_delta_lambda(g: Graph, i: int, j: int, mode: str) -> float:
    """Exact change of the leading eigenvalue under one toggle.

    Computed from the full perturbed adjacency matrix, so a removal that
    disconnects the graph returns the spectral radius of the largest
    remaining component minus lam.
    """
    _toggle_sign(mode)
    lam = float(np.linalg.eigvalsh(g.adjacency())[-1])
    toggled = toggle_edge(g, i, j, mode)
    lam_new = float(np.linalg.eigvalsh(toggled.adjacency())[-1])
    return lam_new - lam


def predict_delta_v(
    g: Graph,
    ep: EigenPair,
    i: int,
    j: int,
    mode: str,
    delta_lambda: float | None = None,
) -> np.ndarray:
    """First-order eigenvector change for one toggle.

    d_lam defaults to the first-order estimate +-iota_dag; pass an exact
    ``delta_lambda`` to isolate the eigenvector-equation error from the
    eigenvalue-estimate error.
    """
    sign = _toggle_sign(mode)
    toggle_edge(g, i, j, mode)  # validates the toggle precondition
    if delta_lambda is None:
        delta_lambda = sign * foedi(ep, i, j).iota_dag
    v = ep.v
    rhs = -delta_lambda * v
    rhs = rhs.copy()
    rhs[i] += sign * v[j]
    rhs[j] += sign * v[i]
    return minnorm_solve(g, ep, rhs)


def _perturbed_leading(toggled: Graph) -> tuple[float, np.ndarray, float]:
    """lam', unit sign-fixed v', and the algebraic gap lam' - mu_2' of a
    toggled graph (which may be disconnected, so this bypasses the
    connected-graph entry point)."""
    w, q = _decompose(toggled)
    lam = float(w[-1])
    gap = lam - float(w[-2]) if toggled.n >= 2 else np.inf
    v = q[:, -1]
    if v.sum() < 0:
        v = -v
    return lam, v, gap


def true_delta_v(g: Graph, ep: EigenPair, i: int, j: int, mode: str) -> np.ndarray:
    """Exact eigenvector change in the first-order gauge.

    The toggled graph's unit leading eigenvector v' is rescaled so its
    component along v equals 1, making the difference orthogonal to v.
    Requires the perturbed leading eigenvalue to be simple (it can fail
    to be when a removal splits the graph into equal-radius components).
    """
    toggled = toggle_edge(g, i, j, mode)
    lam_new, v_new, gap = _perturbed_leading(toggled)
    if gap <= _SIMPLE_GAP:
        raise DegenerateSpectrum(
            f"perturbed leading eigenvalue not simple (gap {gap:.3e})"
        )
    align = float(ep.v @ v_new)
    if align <= _ALIGN_MIN:
        raise AlignmentFailure(f"perturbed eigenvector alignment {align:.3e}")
    return v_new / align - ep.v


def angle_bound_check(
    g: Graph, ep: EigenPair, i: int, j: int, mode: str
) -> tuple[float, float]:
    """(sin of the angle between v and the perturbed v', 1/(lam - lam2)).

    The bound uses the unperturbed gap. Values above 1 carry no
    information (small spectral gap); callers decide what to do then, no
    assertion is made here.
    """
    toggled = toggle_edge(g, i, j, mode)
    _, v_new, _ = _perturbed_leading(toggled)
    cos = min(1.0, abs(float(ep.v @ v_new)))
    sin = sqrt(max(0.0, 1.0 - cos * cos))
    return sin, 1.0 / (ep.lam - ep.lam2)


def _scan_row(
    g: Graph,
    ep: EigenPair,
    pair: tuple[int, int],
    mode: str,
    use_exact_delta_lambda: bool,
) -> PerturbationReport:
    i, j = pair
    score = foedi(ep, i, j)
    toggled = toggle_edge(g, i, j, mode)
    lam_new, v_new, gap = _perturbed_leading(toggled)
    dlam = lam_new - ep.lam
    disconnected = mode == "remove" and not is_connected(toggled)

    dv_pred = predict_delta_v(
        g, ep, i, j, mode, delta_lambda=dlam if use_exact_delta_lambda else None
    )

    dv_true = None
    rel_err = float("nan")
    sin_angle = float("nan")
    if gap > _SIMPLE_GAP:
        align = float(ep.v @ v_new)
        cos = min(1.0, abs(align))
        sin_angle = sqrt(max(0.0, 1.0 - cos * cos))
        if align > _ALIGN_MIN:
            dv_true = v_new / align - ep.v
            norm_true = float(np.linalg.norm(dv_true))
            if norm_true > 0:
                rel_err = float(np.linalg.norm(dv_pred - dv_true)) / norm_true

    return PerturbationReport(
        i=i,
        j=j,
        mode=mode,
        iota=score.iota,
        iota_dag=score.iota_dag,
        delta_lambda_true=dlam,
        delta_lambda_rel_true=dlam / ep.lam,
        dv_pred=dv_pred,
        dv_true=dv_true,
        rel_err_dv=rel_err,
        sin_angle=sin_angle,
        gap_bound=1.0 / (ep.lam - ep.lam2),
        disconnected=disconnected,
    )


def edge_scan(
    g: Graph,
    mode: str,
    sort_by: str = "iota",
    pairs: list[tuple[int, int]] | None = None,
    use_exact_delta_lambda: bool = False,
    workers: int = 1,
) -> list[PerturbationReport]:
    """Per-edge (remove) or per-complement-edge (add) comparison sweep.

    Rows where the perturbed spectrum is too degenerate to define an
    eigenvector change carry NaN in rel_err_dv/sin_angle instead of
    failing the scan. Sorting is ascending by ``iota`` or ``rel_err_dv``
    (NaN last), with (i, j) as the tie-break, so output order does not
    depend on worker scheduling.
    """
    _toggle_sign(mode)
    if sort_by not in ("iota", "rel_err_dv"):
        raise ValueError(f"sort_by must be 'iota' or 'rel_err_dv', got {sort_by!r}")
    ep = leading_eigenpair(g)
    if pairs is None:
        pairs = sorted(g.edges) if mode == "remove" else complement_edges(g)

    def row(pair: tuple[int, int]) -> PerturbationReport:
        return _scan_row(g, ep, pair, mode, use_exact_delta_lambda)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(row, pairs))
    else:
        reports = [row(pair) for pair in pairs]

    if sort_by == "iota":
        reports.sort(key=lambda r: (r.iota, r.i, r.j))
    else:
        reports.sort(key=lambda r: (isnan(r.rel_err_dv), r.rel_err_dv, r.i, r.j))
    return reports
