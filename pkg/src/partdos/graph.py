"""Undirected multigraph with self-loops, edge-list IO and generators.

The edge multiset is stored as an (E, 2) integer array so that samplers can
pick random edge slots in O(1) and rewire endpoints in place.  A self-loop is
a single edge that contributes 2 to its node's degree, so that the identity
sum(degree) == two_e == 2 * n_edges holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GraphFormatError(ValueError):
    """Raised for malformed edge-list input."""


@dataclass
class Graph:
    n_nodes: int
    edges: np.ndarray            # (E, 2) int64, unordered pairs as stored
    degrees: np.ndarray          # (N,) int64, self-loop counts 2
    tokens: list[str] = field(default_factory=list)  # dense id -> original token

    def __post_init__(self):
        self.edges = np.ascontiguousarray(self.edges, dtype=np.int64).reshape(-1, 2)
        self.degrees = np.asarray(self.degrees, dtype=np.int64)
        if not self.tokens:
            self.tokens = [str(i) for i in range(self.n_nodes)]

    @property
    def n_edges(self) -> int:
        return self.edges.shape[0]

    @property
    def two_e(self) -> int:
        return 2 * self.edges.shape[0]

    def copy(self) -> "Graph":
        return Graph(self.n_nodes, self.edges.copy(), self.degrees.copy(),
                     list(self.tokens))

    def stub_lists(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR incidence: for each node the multiset of opposite endpoints.

        A self-loop puts the node twice in its own list, so the list length
        equals the node degree.  Valid only while the edge set is unchanged.
        """
        deg = self.degrees
        indptr = np.zeros(self.n_nodes + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        stubs = np.empty(self.two_e // 1, dtype=np.int64)[: int(deg.sum())]
        fill = indptr[:-1].copy()
        for u, v in self.edges:
            stubs[fill[u]] = v
            fill[u] += 1
            stubs[fill[v]] = u
            fill[v] += 1
        return indptr, stubs

    def to_edge_list_text(self) -> str:
        lines = [f"{self.tokens[u]} {self.tokens[v]}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def _degrees_from_edges(n_nodes: int, edges: np.ndarray) -> np.ndarray:
    deg = np.zeros(n_nodes, dtype=np.int64)
    np.add.at(deg, edges[:, 0], 1)
    np.add.at(deg, edges[:, 1], 1)
    return deg


def load_edge_list(text: str | bytes) -> Graph:
    """Parse whitespace-separated edge-list text into a dense-id Graph.

    Node tokens are mapped to dense ids in first-appearance order.  Lines
    starting with '#' and blank lines are ignored; duplicate lines create
    multi-edges and 'u u' lines create self-loops.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    ids: dict[str, int] = {}
    edge_rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(
                f"line {lineno}: expected 2 node tokens, got {len(parts)}: {raw!r}")
        uv = []
        for tok in parts:
            if tok not in ids:
                ids[tok] = len(ids)
            uv.append(ids[tok])
        edge_rows.append(uv)
    if not edge_rows:
        raise GraphFormatError("empty graph: no edges found")
    edges = np.array(edge_rows, dtype=np.int64)
    n = len(ids)
    tokens = [None] * n
    for tok, i in ids.items():
        tokens[i] = tok
    return Graph(n, edges, _degrees_from_edges(n, edges), tokens)


def load_edge_list_file(path: str | Path) -> Graph:
    return load_edge_list(Path(path).read_text())


def degree_sequence(g: Graph) -> np.ndarray:
    """Per-node degree; self-loops count 2."""
    return g.degrees.copy()


def make_caveman(n_cliques: int, clique_size: int) -> Graph:
    """Connected caveman ring of complete cliques.

    One intra-clique edge per clique is removed and replaced by a link to the
    next clique around the ring, so the total edge count stays
    n_cliques * C(clique_size, 2).  The graph is connected for
    clique_size >= 3 (for clique_size == 2 the rewiring cannot connect the
    ring while preserving the edge count).
    """
    if n_cliques < 2 or clique_size < 2:
        raise ValueError("need n_cliques >= 2 and clique_size >= 2")
    rows = []
    s = clique_size
    for ci in range(n_cliques):
        base = ci * s
        for i in range(s):
            for j in range(i + 1, s):
                if i == 0 and j == 1:
                    continue  # rewired to the ring link below
                rows.append((base + i, base + j))
        nxt = ((ci + 1) % n_cliques) * s
        rows.append((base, nxt + 1))
    n = n_cliques * s
    edges = np.array(rows, dtype=np.int64)
    return Graph(n, edges, _degrees_from_edges(n, edges))


def connected_components(g: Graph) -> list[list[int]]:
    """Components by BFS over the current edge multiset (used by invariant checks)."""
    adj = [[] for _ in range(g.n_nodes)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = np.zeros(g.n_nodes, dtype=bool)
    comps = []
    for start in range(g.n_nodes):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps
