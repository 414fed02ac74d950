"""Command-line front end.

One command per process; every command writes plot-ready CSV files plus a
manifest.json into --out. All output is deterministic for a fixed
configuration: floats are written with 17 significant digits, rows carry
total orders, the manifest has sorted keys, and files are written
atomically (temp file + rename). SPECTRAL_PERTURB_THREADS caps the worker
count used by edge scans.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure (the
failing stage is named on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import errors
from .generators import generate, largest_connected_component, spec_from_json, spec_to_json
from .graphs import Graph, degree_stats, read_edge_list, write_edge_list
from .greedy import greedy_add, greedy_remove
from .importance import score_all
from .kuramoto import delta_r_ranking, parabolic_frequency_model, predict, simulate
from .perturbation import edge_scan
from .spectral import EigenPair, leading_eigenpair

_NUMERICAL_ERRORS = (
    errors.NotConnected,
    errors.DegenerateSpectrum,
    errors.AlignmentFailure,
    errors.NumericalBlowup,
    errors.GenerationFailed,
    errors.InvalidCoupling,
    np.linalg.LinAlgError,
)


class _ConfigError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _write_text_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _write_text_atomic(path, "\n".join(lines) + "\n")


def _write_manifest(out_dir: Path, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write_text_atomic(out_dir / "manifest.json", text)


def _load_raw_graph(args) -> tuple[Graph, dict]:
    if args.graph_spec:
        spec = spec_from_json(Path(args.graph_spec))
        return generate(spec), {"graph_spec": spec_to_json(spec)}
    graph = read_edge_list(args.edge_list)
    return graph, {"edge_list": str(args.edge_list)}


def _working_graph(args) -> tuple[Graph, dict]:
    """Load the graph and restrict to its largest connected component;
    every spectral quantity downstream assumes connectivity."""
    raw, source = _load_raw_graph(args)
    lcc, _ = largest_connected_component(raw)
    info = dict(source)
    info.update(
        {"n": lcc.n, "m": lcc.m, "n_original": raw.n, "m_original": raw.m}
    )
    return lcc, info


def _diagnostics(g: Graph, ep: EigenPair) -> dict:
    stats = degree_stats(g)
    return {
        "lambda": ep.lam,
        "lambda2": ep.lam2,
        "mean_degree": stats.mean,
        "sigma_d": stats.std,
        "d_max": stats.max,
        "homogeneity": ep.lam / stats.mean if stats.mean > 0 else None,
    }


def _base_manifest(args, command: str, graph_info: dict) -> dict:
    return {
        "command": command,
        "seed": args.seed,
        "graph": graph_info,
        "threads": _thread_count(),
    }


def _thread_count() -> int:
    raw = os.environ.get("SPECTRAL_PERTURB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _parse_multiples(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise _ConfigError(f"bad --k-multiples value: {text!r}") from exc
    if not values or any(v <= 0 for v in values):
        raise _ConfigError(f"--k-multiples must be positive floats, got {text!r}")
    return values


_SCAN_HEADER = (
    "i",
    "j",
    "mode",
    "iota",
    "iota_dag",
    "delta_lambda_true",
    "delta_lambda_rel_true",
    "rel_err_dv",
    "sin_angle",
    "gap_bound",
    "disconnected",
)


def _scan_rows(reports):
    for r in reports:
        yield (
            r.i,
            r.j,
            r.mode,
            r.iota,
            r.iota_dag,
            r.delta_lambda_true,
            r.delta_lambda_rel_true,
            r.rel_err_dv,
            r.sin_angle,
            r.gap_bound,
            r.disconnected,
        )


def _foedi_curve_rel_err(reports, lam: float) -> float:
    """Relative l2 distance ||x - y|| / ||x|| between the estimated curve
    (iota) and the exact one (|d lam| / lam), paired per edge."""
    x = np.array([r.iota for r in reports])
    y = np.array([abs(r.delta_lambda_true) for r in reports]) / lam
    return float(np.linalg.norm(x - y) / np.linalg.norm(x))


def _cmd_generate(args, out_dir: Path) -> None:
    if not args.graph_spec:
        raise _ConfigError("generate requires --graph-spec")
    spec = spec_from_json(Path(args.graph_spec))
    graph = generate(spec)
    write_edge_list(graph, out_dir / "edges.txt.tmp")
    os.replace(out_dir / "edges.txt.tmp", out_dir / "edges.txt")
    lcc, _ = largest_connected_component(graph)
    manifest = _base_manifest(
        args,
        "generate",
        {
            "graph_spec": spec_to_json(spec),
            "n": graph.n,
            "m": graph.m,
            "n_lcc": lcc.n,
            "m_lcc": lcc.m,
        },
    )
    if lcc.n >= 2 and lcc.m >= 1:
        manifest.update(_diagnostics(lcc, leading_eigenpair(lcc)))
    _write_manifest(out_dir, manifest)


def _cmd_score(args, out_dir: Path) -> None:
    g, info = _working_graph(args)
    ep = leading_eigenpair(g)
    which = "edges" if args.mode == "remove" else "non_edges"
    scores = sorted(score_all(g, ep, which), key=lambda s: (s.iota, s.i, s.j))
    _write_csv(
        out_dir / "scores.csv",
        ("i", "j", "iota", "iota_dag"),
        ((s.i, s.j, s.iota, s.iota_dag) for s in scores),
    )
    manifest = _base_manifest(args, "score", info)
    manifest.update(_diagnostics(g, ep))
    manifest["mode"] = args.mode
    manifest["rows"] = len(scores)
    _write_manifest(out_dir, manifest)


def _scan_command(args, out_dir: Path, sort_by: str, filename: str) -> None:
    g, info = _working_graph(args)
    ep = leading_eigenpair(g)
    reports = edge_scan(
        g,
        args.mode,
        sort_by=sort_by,
        use_exact_delta_lambda=args.exact_delta_lambda,
        workers=_thread_count(),
    )
    _write_csv(out_dir / filename, _SCAN_HEADER, _scan_rows(reports))
    manifest = _base_manifest(args, "scan" if sort_by == "iota" else "eigvec-delta", info)
    manifest.update(_diagnostics(g, ep))
    manifest["mode"] = args.mode
    manifest["rows"] = len(reports)
    manifest["rel_err_iota_vs_dlambda"] = (
        _foedi_curve_rel_err(reports, ep.lam) if reports else None
    )
    _write_manifest(out_dir, manifest)


def _cmd_scan(args, out_dir: Path) -> None:
    _scan_command(args, out_dir, "iota", "scan.csv")


def _cmd_eigvec_delta(args, out_dir: Path) -> None:
    _scan_command(args, out_dir, "rel_err_dv", "eigvec_delta.csv")


def _cmd_greedy(args, out_dir: Path) -> None:
    g, info = _working_graph(args)
    ep = leading_eigenpair(g)
    steps = args.steps
    if args.mode == "add":
        result = greedy_add(g, steps=steps)
    else:
        if steps is None:
            raise _ConfigError("greedy --mode remove requires an integer --steps")
        result = greedy_remove(g, steps=steps)
    _write_csv(
        out_dir / "greedy_trace.csv",
        ("step", "i", "j", "iota_dag", "lambda", "sigma_d"),
        ((t.step, t.i, t.j, t.iota_dag, t.lam, t.sigma_d) for t in result.trace),
    )
    manifest = _base_manifest(args, "greedy", info)
    manifest.update(_diagnostics(g, ep))
    manifest.update(
        {
            "mode": args.mode,
            "steps_requested": "complete" if steps is None else steps,
            "steps_done": len(result.trace),
            "stop_reason": result.stop_reason,
            "lambda_final": result.trace[-1].lam if result.trace else ep.lam,
        }
    )
    _write_manifest(out_dir, manifest)


def _cmd_kuramoto_predict(args, out_dir: Path) -> None:
    g, info = _working_graph(args)
    ep = leading_eigenpair(g)
    fm = parabolic_frequency_model()
    pred = predict(g, ep, fm)
    multiples = _parse_multiples(args.k_multiples)
    rows = []
    for mult in multiples:
        k = mult * pred.k_c
        r_sq = pred.r_squared_at(k)
        rows.append((mult, k, r_sq, min(1.0, float(np.sqrt(max(0.0, r_sq))))))
    _write_csv(out_dir / "prediction.csv", ("k_multiple", "k", "r_squared", "r"), rows)
    manifest = _base_manifest(args, "kuramoto-predict", info)
    manifest.update(_diagnostics(g, ep))
    manifest.update(
        {"k_c": pred.k_c, "eta": pred.eta, "beta": pred.beta, "gamma": pred.gamma}
    )
    _write_manifest(out_dir, manifest)


def _cmd_kuramoto_rank(args, out_dir: Path) -> None:
    g, info = _working_graph(args)
    ep = leading_eigenpair(g)
    fm = parabolic_frequency_model()
    multiples = _parse_multiples(args.k_multiples)
    table = delta_r_ranking(g, ep, fm, multiples)
    _write_csv(
        out_dir / "delta_r.csv",
        ("edge_index", "i", "j", "iota_dag", "k_multiple", "delta_r", "ln_delta_r"),
        table.iter_rows(),
    )
    pred = predict(g, ep, fm)
    manifest = _base_manifest(args, "kuramoto-rank", info)
    manifest.update(_diagnostics(g, ep))
    manifest.update(
        {
            "k_c": pred.k_c,
            "eta": pred.eta,
            "k_multiples": multiples,
            "rows_per_multiple": table.curves[0].i.size if table.curves else 0,
        }
    )
    _write_manifest(out_dir, manifest)


def _cmd_kuramoto_sim(args, out_dir: Path) -> None:
    g, info = _working_graph(args)
    ep = leading_eigenpair(g)
    fm = parabolic_frequency_model()
    pred = predict(g, ep, fm)
    multiples = _parse_multiples(args.k_multiples)
    steady = {}
    for mult in multiples:
        k = mult * pred.k_c
        sim = simulate(g, fm, k, horizon=args.horizon, dt=args.dt, seed=args.seed)
        name = f"timeseries_k{mult:g}.csv"
        _write_csv(out_dir / name, ("t", "r"), zip(sim.t, sim.r_time_series))
        steady[f"{mult:g}"] = {
            "k": k,
            "r_steady": sim.r_steady,
            "r_predicted": min(1.0, float(np.sqrt(max(0.0, pred.r_squared_at(k))))),
        }
    manifest = _base_manifest(args, "kuramoto-sim", info)
    manifest.update(_diagnostics(g, ep))
    manifest.update(
        {"k_c": pred.k_c, "dt": args.dt, "horizon": args.horizon, "runs": steady}
    )
    _write_manifest(out_dir, manifest)


_COMMANDS = {
    "generate": _cmd_generate,
    "score": _cmd_score,
    "scan": _cmd_scan,
    "eigvec-delta": _cmd_eigvec_delta,
    "greedy": _cmd_greedy,
    "kuramoto-predict": _cmd_kuramoto_predict,
    "kuramoto-rank": _cmd_kuramoto_rank,
    "kuramoto-sim": _cmd_kuramoto_sim,
}


def _steps_value(text: str):
    if text == "complete":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--steps expects an integer or 'complete', got {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError("--steps must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-perturb",
        description=(
            "Edge importance from leading-eigenpair perturbation: score edges, "
            "compare first-order estimates to exact recomputation, grow graphs "
            "greedily, and estimate Kuramoto synchronization."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, graph: bool = True) -> None:
        if graph:
            group = p.add_mutually_exclusive_group(required=True)
            group.add_argument("--graph-spec", help="JSON generator spec file")
            group.add_argument("--edge-list", help="plain 'i j' edge-list file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0, help="auxiliary seed (recorded)")

    p = sub.add_parser("generate", help="generate a graph and write its edge list")
    p.add_argument("--graph-spec", required=True, help="JSON generator spec file")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("score", help="importance scores for edges or non-edges")
    add_common(p)
    p.add_argument("--mode", choices=("add", "remove"), required=True,
                   help="remove scores present edges, add scores non-edges")

    for name, helptext in (
        ("scan", "per-edge comparison of estimated vs exact eigenvalue change"),
        ("eigvec-delta", "per-edge eigenvector-change errors, sorted by error"),
    ):
        p = sub.add_parser(name, help=helptext)
        add_common(p)
        p.add_argument("--mode", choices=("add", "remove"), required=True)
        p.add_argument(
            "--exact-delta-lambda",
            action="store_true",
            help="use the exact eigenvalue change inside the eigenvector prediction",
        )

    p = sub.add_parser("greedy", help="iterated best-edge addition or removal")
    add_common(p)
    p.add_argument("--mode", choices=("add", "remove"), default="add")
    p.add_argument("--steps", type=_steps_value, default=None,
                   help="step count, or 'complete' to fill the graph (add mode)")

    for name, helptext in (
        ("kuramoto-predict", "closed-form synchronization prediction"),
        ("kuramoto-rank", "order-parameter gain ranking over complement edges"),
        ("kuramoto-sim", "direct RK4 simulation of the phase equations"),
    ):
        p = sub.add_parser(name, help=helptext)
        add_common(p)
        p.add_argument("--k-multiples", default="1.0,1.1,1.2,1.3",
                       help="comma-separated multiples of the critical coupling")
        if name == "kuramoto-sim":
            p.add_argument("--dt", type=float, default=0.01)
            p.add_argument("--horizon", type=float, default=200.0)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return 2
    try:
        _COMMANDS[args.command](args, out_dir)
    except _NUMERICAL_ERRORS as exc:
        # checked before the config handler: several of these subclass ValueError
        print(
            f"error: numerical failure in {args.command}: "
            f"{type(exc).__name__}: {exc}",
            file=sys.stderr,
        )
        return 3
    except (_ConfigError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
