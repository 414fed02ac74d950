"""Seeded random-graph generators.

Models
------
ER      G(n, p): each unordered pair independently with probability p.
BA      growth from a single isolated node; each new node attaches to
        ``m_attach`` distinct existing nodes, sampled without replacement
        with probability proportional to (degree + 1) ** power.
WS      ring lattice, k nearest neighbors, each lattice edge rewired with
        probability p_rw (no self-loops or duplicates; edge count fixed).
SBM     blocks with intra-block probability p_in and inter-block p_out.
CONFIG  stub matching on a degree sequence drawn uniformly from
        {d_min..d_max}, repaired to a simple graph by degree-preserving
        double-edge swaps, then randomized with further swaps.

Reproducibility: each spec carries a 64-bit seed feeding a PCG64 stream
through ``numpy.random.SeedSequence``. Stages split substreams with
``spawn`` in a fixed order (documented per model below), so a given spec
yields the same edge set on every platform.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .errors import GenerationFailed
from .graphs import Graph, build_graph

__all__ = [
    "MODELS",
    "GeneratorSpec",
    "generate",
    "largest_connected_component",
    "spec_from_json",
    "spec_to_json",
]

MODELS = ("ER", "BA", "WS", "SBM", "CONFIG")

# flat JSON keys accepted per model, besides "model" and "seed"
_PARAM_KEYS = {
    "ER": {"n", "p"},
    "BA": {"n", "m_attach", "power"},
    "WS": {"n", "k", "p_rw"},
    "SBM": {"sizes", "p_in", "p_out"},
    "CONFIG": {"n", "d_min", "d_max"},
}

_PARAM_DEFAULTS = {"BA": {"m_attach": 5, "power": 4.0}}


@dataclass(frozen=True)
class GeneratorSpec:
    """Model name, model parameters, and the seed that fixes the stream."""

    model: str
    seed: int
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected one of {MODELS}")
        merged = dict(_PARAM_DEFAULTS.get(self.model, {}))
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        unknown = set(merged) - _PARAM_KEYS[self.model]
        if unknown:
            raise ValueError(f"unknown {self.model} parameters: {sorted(unknown)}")
        missing = _PARAM_KEYS[self.model] - set(merged)
        if missing:
            raise ValueError(f"missing {self.model} parameters: {sorted(missing)}")
        _validate_params(self.model, merged)


def _validate_params(model: str, p: dict[str, Any]) -> None:
    def positive_int(key: str) -> int:
        v = p[key]
        if not isinstance(v, int) or isinstance(v, bool) or v <= 0:
            raise ValueError(f"{key} must be a positive integer, got {v!r}")
        return v

    def probability(key: str) -> float:
        v = float(p[key])
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"{key} must lie in [0, 1], got {v!r}")
        return v

    if model == "ER":
        positive_int("n")
        probability("p")
    elif model == "BA":
        positive_int("n")
        positive_int("m_attach")
        if float(p["power"]) < 0:
            raise ValueError("power must be nonnegative")
    elif model == "WS":
        n = positive_int("n")
        k = positive_int("k")
        if k % 2 != 0 or k >= n:
            raise ValueError(f"k must be even and < n, got k={k}, n={n}")
        probability("p_rw")
    elif model == "SBM":
        sizes = p["sizes"]
        if not sizes or any(not isinstance(s, int) or s <= 0 for s in sizes):
            raise ValueError(f"sizes must be positive integers, got {sizes!r}")
        probability("p_in")
        probability("p_out")
    elif model == "CONFIG":
        n = positive_int("n")
        lo, hi = positive_int("d_min"), positive_int("d_max")
        if lo > hi or hi >= n:
            raise ValueError(f"need 1 <= d_min <= d_max < n, got {lo}..{hi}, n={n}")


def spec_from_json(source: str | Path | dict[str, Any]) -> GeneratorSpec:
    """Parse a spec from a JSON object {"model":..., "seed":..., params...}."""
    if isinstance(source, dict):
        obj = dict(source)
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(source).read_text()
        obj = json.loads(text)
    model = obj.pop("model", None)
    seed = obj.pop("seed", None)
    if model is None or seed is None:
        raise ValueError("spec requires 'model' and 'seed' fields")
    if "sizes" in obj:
        obj["sizes"] = tuple(obj["sizes"])
    return GeneratorSpec(model=str(model), seed=int(seed), params=obj)


def spec_to_json(spec: GeneratorSpec) -> dict[str, Any]:
    obj: dict[str, Any] = {"model": spec.model, "seed": spec.seed}
    for key, val in spec.params.items():
        obj[key] = list(val) if isinstance(val, tuple) else val
    return obj


def generate(spec: GeneratorSpec) -> Graph:
    """Generate the graph for a spec. Deterministic for a fixed seed."""
    root = np.random.SeedSequence(spec.seed)
    p = spec.params
    if spec.model == "ER":
        edges = _er_edges(p["n"], float(p["p"]), np.random.default_rng(root))
        return build_graph(p["n"], edges)
    if spec.model == "BA":
        edges = _ba_edges(
            p["n"], int(p["m_attach"]), float(p["power"]), np.random.default_rng(root)
        )
        return build_graph(p["n"], edges)
    if spec.model == "WS":
        edges = _ws_edges(p["n"], int(p["k"]), float(p["p_rw"]), np.random.default_rng(root))
        return build_graph(p["n"], edges)
    if spec.model == "SBM":
        sizes = tuple(p["sizes"])
        edges = _sbm_edges(sizes, float(p["p_in"]), float(p["p_out"]), np.random.default_rng(root))
        return build_graph(sum(sizes), edges)
    # CONFIG splits three substreams: degree sampling, stub matching/repair,
    # final randomizing swaps.
    deg_seq, match_seq, mix_seq = root.spawn(3)
    degrees = _config_degrees(
        p["n"], int(p["d_min"]), int(p["d_max"]), np.random.default_rng(deg_seq)
    )
    edges = _config_edges(degrees, np.random.default_rng(match_seq), np.random.default_rng(mix_seq))
    return build_graph(p["n"], edges)


def largest_connected_component(g: Graph) -> tuple[Graph, tuple[int, ...]]:
    """Node-induced subgraph on the largest component, relabeled 0..n'-1.

    Returns (subgraph, node_map) where node_map[new_index] is the original
    node index. Size ties break toward the component containing the
    smallest original index.
    """
    nbrs = g.neighbor_lists()
    comp = [-1] * g.n
    components: list[list[int]] = []
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        cid = len(components)
        comp[start] = cid
        queue = deque([start])
        members = [start]
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                if comp[w] < 0:
                    comp[w] = cid
                    members.append(w)
                    queue.append(w)
        components.append(members)
    # first-come order means ties already favor the smallest original index
    best = max(components, key=len)
    node_map = tuple(sorted(best))
    new_index = {old: new for new, old in enumerate(node_map)}
    edges = [
        (new_index[i], new_index[j])
        for i, j in g.edges
        if i in new_index and j in new_index
    ]
    return build_graph(len(node_map), edges), node_map


# ---------------------------------------------------------------------------
# model internals
# ---------------------------------------------------------------------------


def _all_pairs(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def _er_edges(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    # one Bernoulli draw per pair, lexicographic pair order
    rows, cols = _all_pairs(n)
    mask = rng.random(rows.size) < p
    return list(zip(rows[mask].tolist(), cols[mask].tolist()))


def _ba_edges(
    n: int, m_attach: int, power: float, rng: np.random.Generator
) -> list[tuple[int, int]]:
    # growth from one isolated node; attachment weight (degree + 1) ** power
    # keeps the seed node reachable
    deg = np.zeros(n)
    edges: list[tuple[int, int]] = []
    for new in range(1, n):
        count = min(m_attach, new)
        weights = (deg[:new] + 1.0) ** power
        available = np.arange(new)
        for _ in range(count):
            probs = weights / weights.sum()
            pick = int(rng.choice(available.size, p=probs))
            target = int(available[pick])
            edges.append((target, new))
            deg[target] += 1
            available = np.delete(available, pick)
            weights = np.delete(weights, pick)
        deg[new] = count
    return edges


def _ws_edges(n: int, k: int, p_rw: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    edge_set: set[tuple[int, int]] = set()
    for i in range(n):
        for off in range(1, k // 2 + 1):
            j = (i + off) % n
            edge_set.add((i, j) if i < j else (j, i))
    # rewire pass: node-major then offset order, one coin per lattice edge
    for i in range(n):
        for off in range(1, k // 2 + 1):
            j = (i + off) % n
            old = (i, j) if i < j else (j, i)
            if rng.random() >= p_rw or old not in edge_set:
                continue
            for _ in range(8 * n):
                w = int(rng.integers(n))
                if w == i:
                    continue
                new = (i, w) if i < w else (w, i)
                if new in edge_set:
                    continue
                edge_set.remove(old)
                edge_set.add(new)
                break
            # no eligible endpoint (node adjacent to everyone): keep the edge
    return sorted(edge_set)


def _sbm_edges(
    sizes: tuple[int, ...], p_in: float, p_out: float, rng: np.random.Generator
) -> list[tuple[int, int]]:
    bounds = np.cumsum((0,) + sizes)
    block = np.zeros(bounds[-1], dtype=int)
    for b in range(len(sizes)):
        block[bounds[b] : bounds[b + 1]] = b
    rows, cols = _all_pairs(int(bounds[-1]))
    probs = np.where(block[rows] == block[cols], p_in, p_out)
    mask = rng.random(rows.size) < probs
    return list(zip(rows[mask].tolist(), cols[mask].tolist()))


def _config_degrees(n: int, lo: int, hi: int, rng: np.random.Generator) -> np.ndarray:
    # resample the whole sequence until the stub count is even
    for _ in range(64):
        deg = rng.integers(lo, hi + 1, size=n)
        if int(deg.sum()) % 2 == 0:
            return deg
    raise GenerationFailed("could not draw an even-sum degree sequence")


def _config_edges(
    degrees: np.ndarray, rng: np.random.Generator, rng_mix: np.random.Generator
) -> list[tuple[int, int]]:
    """Stub matching with swap-based repair to a simple graph.

    Self-loops and multi-edges left by the matching are removed by
    degree-preserving double-edge swaps; a fresh stub shuffle restarts the
    attempt if repair stalls. The simple result is then mixed with 10*m
    further simplicity-preserving swap attempts.
    """
    n = degrees.size
    stubs_base = np.repeat(np.arange(n), degrees)
    m = stubs_base.size // 2
    max_restarts = 200
    for _ in range(max_restarts):
        stubs = stubs_base.copy()
        rng.shuffle(stubs)
        pairs = [_norm(int(stubs[2 * t]), int(stubs[2 * t + 1])) for t in range(m)]
        if _repair_to_simple(pairs, rng, attempt_cap=100 * m):
            _randomizing_swaps(pairs, rng_mix, attempts=10 * m)
            return pairs
    raise GenerationFailed(f"stub-matching repair failed {max_restarts} times")


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


def _repair_to_simple(
    pairs: list[tuple[int, int]], rng: np.random.Generator, attempt_cap: int
) -> bool:
    m = len(pairs)
    count: dict[tuple[int, int], int] = {}
    for pr in pairs:
        count[pr] = count.get(pr, 0) + 1

    def is_bad(pr: tuple[int, int]) -> bool:
        return pr[0] == pr[1] or count[pr] > 1

    bad = {t for t, pr in enumerate(pairs) if is_bad(pr)}
    attempts = 0
    while bad and attempts < attempt_cap:
        attempts += 1
        a = min(bad)
        b = int(rng.integers(m))
        if b == a:
            continue
        u, v = pairs[a]
        x, y = pairs[b]
        if rng.random() < 0.5:
            x, y = y, x
        if u == x or v == y:
            continue  # would create a self-loop
        for old in (pairs[a], pairs[b]):
            count[old] -= 1
            if count[old] == 0:
                del count[old]
        new_a, new_b = _norm(u, x), _norm(v, y)
        pairs[a], pairs[b] = new_a, new_b
        for new in (new_a, new_b):
            count[new] = count.get(new, 0) + 1
        for t in (a, b):
            if is_bad(pairs[t]):
                bad.add(t)
            else:
                bad.discard(t)
        # positions sharing a pair whose count fell back to 1 are clean now
        bad = {t for t in bad if is_bad(pairs[t])}
    return not bad


def _randomizing_swaps(
    pairs: list[tuple[int, int]], rng: np.random.Generator, attempts: int
) -> None:
    m = len(pairs)
    present = set(pairs)
    for _ in range(attempts):
        a, b = int(rng.integers(m)), int(rng.integers(m))
        if a == b:
            continue
        u, v = pairs[a]
        x, y = pairs[b]
        if rng.random() < 0.5:
            x, y = y, x
        if u == x or v == y:
            continue
        new_a, new_b = _norm(u, x), _norm(v, y)
        if new_a in present or new_b in present or new_a == new_b:
            continue
        present.discard(pairs[a])
        present.discard(pairs[b])
        present.add(new_a)
        present.add(new_b)
        pairs[a], pairs[b] = new_a, new_b
