"""Finite bounded-degree graphs on which the Hamiltonians are assembled.

Vertices are 0..vertex_count-1; edges are unordered pairs stored canonically
as (u, v) with u < v.  The degree bound is carried explicitly because the
gap certificates are statements about *every* graph with a given bound, not
just the instance at hand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field


class GraphError(ValueError):
    pass


class EdgeListParseError(GraphError):
    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def _canonical_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]
    declared_degree_bound: int

    def __post_init__(self):
        if self.vertex_count < 1:
            raise GraphError("vertex_count must be positive")
        if self.declared_degree_bound < 1:
            raise GraphError("declared_degree_bound must be positive")
        degrees = [0] * self.vertex_count
        for e in self.edges:
            u, v = e
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge {e} has an endpoint outside the vertex range")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if u > v:
                raise GraphError(f"edge {e} is not in canonical (u < v) order")
            degrees[u] += 1
            degrees[v] += 1
        if degrees and max(degrees) > self.declared_degree_bound:
            raise GraphError(
                f"max degree {max(degrees)} exceeds declared bound "
                f"{self.declared_degree_bound}"
            )

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def max_degree(self) -> int:
        if not self.edges:
            return 0
        degrees = [0] * self.vertex_count
        for u, v in self.edges:
            degrees[u] += 1
            degrees[v] += 1
        return max(degrees)

    def relabeled(self, permutation: list[int]) -> "Graph":
        """Graph with vertex i renamed to permutation[i]."""
        edges = frozenset(
            _canonical_edge(permutation[u], permutation[v]) for u, v in self.edges
        )
        return Graph(self.vertex_count, edges, self.declared_degree_bound)


def build_path(n: int) -> Graph:
    """Path graph on n vertices (n-1 edges)."""
    if n < 1:
        raise GraphError("path needs at least one vertex")
    edges = frozenset((i, i + 1) for i in range(n - 1))
    bound = 1 if n <= 2 else 2
    return Graph(n, edges, bound)


def build_star(m: int) -> Graph:
    """Star on m sites: vertex 0 is the center, vertices 1..m-1 are legs."""
    if m < 2:
        raise GraphError("star needs at least two sites")
    edges = frozenset((0, i) for i in range(1, m))
    return Graph(m, edges, m - 1)


def build_triangle() -> Graph:
    return Graph(3, frozenset({(0, 1), (0, 2), (1, 2)}), 2)


def build_grid_torus(L: int) -> Graph:
    """L x L grid with periodic boundary.

    Wrap edges that coincide for L = 2 are collapsed, so every vertex keeps
    the same degree (4 for L >= 3, 2 for L = 2) and the edge set stays simple.
    """
    if L < 2:
        raise GraphError("torus needs L >= 2")
    def vid(i, j):
        return (i % L) * L + (j % L)
    edges = set()
    for i in range(L):
        for j in range(L):
            edges.add(_canonical_edge(vid(i, j), vid(i + 1, j)))
            edges.add(_canonical_edge(vid(i, j), vid(i, j + 1)))
    return Graph(L * L, frozenset(edges), 4 if L > 2 else 2)


def build_random_degree_bounded(n: int, k: int, seed: int) -> Graph:
    """Random simple graph with max degree <= k, deterministic for a seed.

    Uniform candidate-edge proposals, rejected when either endpoint is at the
    degree cap; proposal budget 10*n*k.  A final sweep links components when
    spare degree allows, so the result is connected whenever that is
    achievable within the cap.
    """
    if n < 1 or k < 1:
        raise GraphError("n and k must be positive")
    rng = random.Random(seed)
    target = min(n * k // 2, n * (n - 1) // 2)
    degrees = [0] * n
    edges: set[tuple[int, int]] = set()
    if n >= 2:
        for _ in range(10 * n * k):
            if len(edges) >= target:
                break
            u = rng.randrange(n)
            v = rng.randrange(n)
            if u == v:
                continue
            e = _canonical_edge(u, v)
            if e in edges or degrees[u] >= k or degrees[v] >= k:
                continue
            edges.add(e)
            degrees[u] += 1
            degrees[v] += 1
    # connectivity repair: deterministic scan, capacity permitting
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in sorted(edges):
        parent[find(u)] = find(v)
    roots = sorted({find(x) for x in range(n)})
    while len(roots) > 1:
        merged = False
        for a in range(n):
            if degrees[a] >= k:
                continue
            for b in range(n):
                if find(a) == find(b) or degrees[b] >= k:
                    continue
                e = _canonical_edge(a, b)
                if e in edges:
                    continue
                edges.add(e)
                degrees[a] += 1
                degrees[b] += 1
                parent[find(a)] = find(b)
                merged = True
                break
            if merged:
                break
        if not merged:
            break
        roots = sorted({find(x) for x in range(n)})
    return Graph(n, frozenset(edges), k)


def load_edge_list(text: str) -> Graph:
    """Parse an edge-list document: one "u v" pair per line, '#' comments.

    The declared degree bound is set to the observed maximum degree.
    """
    edges: set[tuple[int, int]] = set()
    max_vertex = -1
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"expected 'u v', got {raw!r}", line_number)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer vertex in {raw!r}", line_number)
        if u < 0 or v < 0:
            raise EdgeListParseError("negative vertex index", line_number)
        if u == v:
            raise EdgeListParseError(f"self-loop at vertex {u}", line_number)
        e = _canonical_edge(u, v)
        if e in edges:
            raise EdgeListParseError(f"duplicate edge {e}", line_number)
        edges.add(e)
        max_vertex = max(max_vertex, u, v)
    if max_vertex < 0:
        raise GraphError("edge list is empty")
    vertex_count = max_vertex + 1
    degrees = [0] * vertex_count
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    return Graph(vertex_count, frozenset(edges), max(degrees))


def serialize_edge_list(graph: Graph) -> str:
    """One 'u v' line per edge, u < v, sorted lexicographically."""
    return "\n".join(f"{u} {v}" for u, v in graph.sorted_edges()) + "\n"
