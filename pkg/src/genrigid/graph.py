"""Undirected simple graphs on vertices ``0..v-1``.

Edges are stored canonically as ``(u, w)`` with ``u < w`` and kept sorted,
so the row order of every matrix built from a graph is reproducible.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "Graph",
    "GraphFormatError",
    "FAMILIES",
    "parse_graph",
    "format_graph",
    "generate",
    "delete_edge",
    "add_edge",
    "vertex_connectivity_at_least",
    "is_connected",
]

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Raised for malformed edge-list text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _canonical(u: int, w: int) -> Edge:
    return (u, w) if u < w else (w, u)


@dataclass(frozen=True)
class Graph:
    v: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("vertex count must be non-negative")
        canon = []
        for u, w in self.edges:
            u, w = int(u), int(w)
            if u == w:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.v and 0 <= w < self.v):
                raise ValueError(f"edge ({u}, {w}) has an endpoint out of range for v={self.v}")
            canon.append(_canonical(u, w))
        ordered = tuple(sorted(canon))
        if len(set(ordered)) != len(ordered):
            raise ValueError("duplicate edge")
        object.__setattr__(self, "edges", ordered)

    @classmethod
    def from_edges(cls, v: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(v, tuple((int(a), int(b)) for a, b in edges))

    @property
    def e(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, w: int) -> bool:
        return _canonical(u, w) in self._edge_set()

    def _edge_set(self) -> frozenset[Edge]:
        cached = self.__dict__.get("_edges_cache")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edges_cache", cached)
        return cached

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.v)]
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        return adj

    def is_complete(self) -> bool:
        return self.e == self.v * (self.v - 1) // 2

    def induced_without(self, removed: Iterable[int]) -> "Graph":
        """Subgraph on the remaining vertices, relabelled densely in order."""
        gone = set(removed)
        keep = [x for x in range(self.v) if x not in gone]
        index = {x: i for i, x in enumerate(keep)}
        edges = [(index[u], index[w]) for u, w in self.edges if u in index and w in index]
        return Graph.from_edges(len(keep), edges)

    def canonical_hash(self) -> str:
        return hashlib.sha256(format_graph(self).encode("utf-8")).hexdigest()


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format.

    Lines starting with ``#`` are comments. The first remaining line is
    ``"v e"``, followed by exactly ``e`` lines ``"u w"``.
    """
    header: tuple[int, int] | None = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise GraphFormatError(f"expected two integers, got {line!r}", lineno)
        try:
            a, b = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError(f"expected two integers, got {line!r}", lineno) from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError("malformed header: counts must be non-negative", lineno)
            header = (a, b)
            continue
        v, e = header
        if len(edges) >= e:
            raise GraphFormatError(f"more than the declared {e} edges", lineno)
        if not (0 <= a < v and 0 <= b < v):
            raise GraphFormatError(f"endpoint out of range in edge ({a}, {b}) for v={v}", lineno)
        if a == b:
            raise GraphFormatError(f"self-loop at vertex {a}", lineno)
        edge = _canonical(a, b)
        if edge in seen:
            raise GraphFormatError(f"duplicate edge ({edge[0]}, {edge[1]})", lineno)
        seen.add(edge)
        edges.append(edge)
    if header is None:
        raise GraphFormatError("malformed header: missing 'v e' line")
    if len(edges) != header[1]:
        raise GraphFormatError(f"declared {header[1]} edges but found {len(edges)}")
    return Graph(header[0], tuple(edges))


def format_graph(g: Graph) -> str:
    lines = [f"{g.v} {g.e}"]
    lines.extend(f"{u} {w}" for u, w in g.edges)
    return "\n".join(lines) + "\n"


def _complete(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs n >= 1")
    return Graph.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def _cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def _path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def _complete_bipartite(n: int, m: int) -> Graph:
    if n < 1 or m < 1:
        raise ValueError("complete_bipartite needs n, m >= 1")
    return Graph.from_edges(n + m, ((i, n + j) for i in range(n) for j in range(m)))


def _wheel(n: int) -> Graph:
    # rim 0..n-1, hub n
    if n < 3:
        raise ValueError("wheel needs a rim of n >= 3 vertices")
    rim = [(i, (i + 1) % n) for i in range(n)]
    spokes = [(i, n) for i in range(n)]
    return Graph.from_edges(n + 1, rim + spokes)


def _prism() -> Graph:
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])


FAMILIES = {
    "complete": (_complete, 1),
    "cycle": (_cycle, 1),
    "path": (_path, 1),
    "complete_bipartite": (_complete_bipartite, 2),
    "wheel": (_wheel, 1),
    "prism": (_prism, 0),
}


def generate(family: str, params: Sequence[int] = ()) -> Graph:
    """Build a member of one of the named families in :data:`FAMILIES`."""
    try:
        builder, arity = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown graph family {family!r}; choose from {sorted(FAMILIES)}") from None
    if len(params) != arity:
        raise ValueError(f"{family} takes {arity} parameter(s), got {len(params)}")
    return builder(*(int(x) for x in params))


def delete_edge(g: Graph, edge: Sequence[int]) -> Graph:
    target = _canonical(int(edge[0]), int(edge[1]))
    if target not in g._edge_set():
        raise ValueError(f"edge {target} is not in the graph")
    return Graph(g.v, tuple(x for x in g.edges if x != target))


def add_edge(g: Graph, edge: Sequence[int]) -> Graph:
    return Graph(g.v, g.edges + (_canonical(int(edge[0]), int(edge[1])),))


def is_connected(g: Graph) -> bool:
    if g.v <= 1:
        return True
    adj = g.adjacency()
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == g.v


def _local_connectivity(adj: list[list[int]], s: int, t: int, cap: int) -> int:
    """Number of internally vertex-disjoint s-t paths, stopping once ``cap`` is reached.

    Unit-capacity max flow on the split graph: vertex x becomes x_in = 2x and
    x_out = 2x + 1 joined by an arc of capacity 1 (infinite for s and t).
    """
    n = len(adj)
    big = n + 1
    residual: dict[int, dict[int, int]] = {i: {} for i in range(2 * n)}

    def arc(a: int, b: int, c: int) -> None:
        residual[a][b] = residual[a].get(b, 0) + c
        residual[b].setdefault(a, 0)

    for x in range(n):
        arc(2 * x, 2 * x + 1, big if x in (s, t) else 1)
        for y in adj[x]:
            arc(2 * x + 1, 2 * y, big)

    source, sink = 2 * s + 1, 2 * t
    flow = 0
    while flow < cap:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            a = queue.popleft()
            for b, c in residual[a].items():
                if c > 0 and b not in parent:
                    parent[b] = a
                    queue.append(b)
        if sink not in parent:
            break
        b = sink
        while b != source:
            a = parent[b]
            residual[a][b] -= 1
            residual[b][a] += 1
            b = a
        flow += 1
    return flow


def vertex_connectivity_at_least(g: Graph, k: int) -> bool:
    """True iff ``g`` has more than ``k`` vertices and no cut of fewer than ``k`` vertices.

    By Menger, it suffices that every non-adjacent pair is joined by ``k``
    internally disjoint paths. Complete graphs have no separating set, so
    for them the answer reduces to ``v > k``.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if g.v <= k:
        return False
    adj = g.adjacency()
    if any(len(nbrs) < k for nbrs in adj):
        return False
    # A minimum separator S misses some vertex among any k vertices; taking
    # each of the first k vertices as the source covers that case (Even's scheme).
    for s in range(k):
        for t in range(s + 1, g.v):
            if g.has_edge(s, t):
                continue
            if _local_connectivity(adj, s, t, k) < k:
                return False
    return True
