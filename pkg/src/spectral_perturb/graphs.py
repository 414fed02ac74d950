"""Immutable undirected simple graphs with degree statistics.

Nodes are integers 0..n-1. Edges are stored canonically as (i, j) with
i < j; a dense symmetric 0/1 adjacency view is built on demand (all
workloads here are desk scale, n <= ~1000).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import EdgeStateConflict, InvalidNode, SelfLoopRejected

__all__ = [
    "Graph",
    "DegreeStats",
    "build_graph",
    "complement_edges",
    "toggle_edge",
    "degree_stats",
    "is_connected",
    "read_edge_list",
    "write_edge_list",
]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph. Immutable; toggles return new snapshots."""

    n: int
    edges: frozenset[tuple[int, int]]
    degrees: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        a, b = (i, j) if i < j else (j, i)
        return (a, b) in self.edges

    def adjacency(self) -> np.ndarray:
        """Dense symmetric 0/1 adjacency matrix (float64)."""
        a = np.zeros((self.n, self.n))
        if self.edges:
            rows, cols = np.array(sorted(self.edges)).T
            a[rows, cols] = 1.0
            a[cols, rows] = 1.0
        return a

    def neighbor_lists(self) -> list[list[int]]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return nbrs


@dataclass(frozen=True)
class DegreeStats:
    """Degree-distribution summary: mean, population std, max, fourth moment."""

    mean: float
    std: float
    max: int
    fourth_moment: float


def _check_node(i: int, n: int) -> None:
    if not (0 <= i < n):
        raise InvalidNode(f"node {i} outside 0..{n - 1}")


def build_graph(n: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from a pair list.

    Duplicate pairs and orientation-flipped duplicates collapse to a single
    edge. Self-loops and out-of-range indices are rejected.
    """
    if n <= 0:
        raise ValueError(f"node count must be positive, got {n}")
    edges = set()
    for i, j in edge_list:
        _check_node(i, n)
        _check_node(j, n)
        if i == j:
            raise SelfLoopRejected(f"self-loop ({i},{i}) rejected")
        edges.add((i, j) if i < j else (j, i))
    deg = [0] * n
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    return Graph(n=n, edges=frozenset(edges), degrees=tuple(deg))


def complement_edges(g: Graph) -> list[tuple[int, int]]:
    """All non-adjacent unordered pairs, in lexicographic order."""
    out = []
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if (i, j) not in g.edges:
                out.append((i, j))
    return out


def toggle_edge(g: Graph, i: int, j: int, mode: str) -> Graph:
    """Return a new graph with edge (i, j) added or removed."""
    _check_node(i, g.n)
    _check_node(j, g.n)
    if i == j:
        raise SelfLoopRejected(f"self-loop ({i},{i}) rejected")
    if mode not in ("add", "remove"):
        raise ValueError(f"mode must be 'add' or 'remove', got {mode!r}")
    a, b = (i, j) if i < j else (j, i)
    present = (a, b) in g.edges
    if mode == "add" and present:
        raise EdgeStateConflict(f"edge ({a},{b}) already present")
    if mode == "remove" and not present:
        raise EdgeStateConflict(f"edge ({a},{b}) not present")
    if mode == "add":
        edges = g.edges | {(a, b)}
        delta = 1
    else:
        edges = g.edges - {(a, b)}
        delta = -1
    deg = list(g.degrees)
    deg[a] += delta
    deg[b] += delta
    return Graph(n=g.n, edges=edges, degrees=tuple(deg))


def degree_stats(g: Graph) -> DegreeStats:
    d = np.asarray(g.degrees, dtype=float)
    return DegreeStats(
        mean=float(d.mean()),
        std=float(d.std()),  # population convention
        max=int(d.max()),
        fourth_moment=float((d**4).mean()),
    )


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    nbrs = g.neighbor_lists()
    seen = bytearray(g.n)
    seen[0] = 1
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if not seen[w]:
                seen[w] = 1
                count += 1
                queue.append(w)
    return count == g.n


def read_edge_list(path: str | Path) -> Graph:
    """Read the plain edge-list format: one "i j" pair per line,
    whitespace-separated, 0-indexed; '#' starts a comment line.

    The node count is inferred as 1 + the largest index seen.
    """
    pairs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'i j', got {line!r}")
        try:
            i, j = int(tokens[0]), int(tokens[1])
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: non-integer node index") from exc
        if i < 0 or j < 0:
            raise InvalidNode(f"{path}:{lineno}: negative node index")
        pairs.append((i, j))
    if not pairs:
        raise ValueError(f"{path}: no edges found")
    n = 1 + max(max(i, j) for i, j in pairs)
    return build_graph(n, pairs)


def write_edge_list(g: Graph, path: str | Path) -> None:
    lines = [f"{i} {j}" for i, j in sorted(g.edges)]
    Path(path).write_text("\n".join(lines) + "\n")
