"""Generalized partition quality Q and its exact incremental updates.

Q(c; B) = (1/2E) * sum_ab (S_ab - T_a T_b / 2E) * B_ab

where S_ab sums adjacency entries between groups a and b (a self-loop adds
2 to its diagonal block), T_a sums degrees in group a and B is a symmetric
K x K matrix over {-1, +1}.  With B = +1 on the diagonal and -1 off it,
Q is bounded by 2 * (1 - 1/K).

The incremental delta_* functions are thin wrappers over the numba kernels
used inside the samplers; `recompute` is an independent numpy evaluation and
is the binding oracle for all of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph


class QualityError(ValueError):
    pass


@dataclass
class StructureMatrix:
    b: np.ndarray  # (K, K) int64 over {-1, +1}

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=np.int64)
        if self.b.ndim != 2 or self.b.shape[0] != self.b.shape[1]:
            raise QualityError("structure matrix must be square")
        if not np.all(np.abs(self.b) == 1):
            raise QualityError("structure matrix entries must be +1 or -1")
        if not np.array_equal(self.b, self.b.T):
            raise QualityError("structure matrix must be symmetric")

    @property
    def k(self) -> int:
        return self.b.shape[0]

    def copy(self) -> "StructureMatrix":
        return StructureMatrix(self.b.copy())

    @classmethod
    def assortative(cls, k: int) -> "StructureMatrix":
        return cls(2 * np.eye(k, dtype=np.int64) - 1)

    @classmethod
    def disassortative(cls, k: int) -> "StructureMatrix":
        return cls(1 - 2 * np.eye(k, dtype=np.int64))

    @classmethod
    def preset(cls, name: str, k: int) -> "StructureMatrix":
        if name == "assortative":
            return cls.assortative(k)
        if name == "disassortative":
            return cls.disassortative(k)
        raise QualityError(f"unknown structure preset {name!r}")

    @classmethod
    def from_text(cls, text: str) -> "StructureMatrix":
        """K lines of K entries from {1, -1}; '.' is accepted as -1."""
        rows = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            row = []
            for tok in line.split():
                if tok == ".":
                    row.append(-1)
                else:
                    try:
                        val = int(tok)
                    except ValueError:
                        raise QualityError(f"bad structure entry {tok!r}")
                    if val not in (1, -1):
                        raise QualityError(f"structure entries must be 1 or -1, got {val}")
                    row.append(val)
            rows.append(row)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise QualityError("structure matrix must be K lines of K entries")
        return cls(np.array(rows, dtype=np.int64))

    def to_text(self) -> str:
        return "\n".join(" ".join(str(int(v)) for v in row) for row in self.b) + "\n"


@dataclass
class Labelling:
    c: np.ndarray           # (N,) group index per node
    group_size: np.ndarray  # (K,) counts

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=np.int64)
        self.group_size = np.asarray(self.group_size, dtype=np.int64)

    @property
    def k(self) -> int:
        return self.group_size.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.c.shape[0]

    def copy(self) -> "Labelling":
        return Labelling(self.c.copy(), self.group_size.copy())

    @classmethod
    def from_labels(cls, labels, k: int) -> "Labelling":
        c = np.asarray(labels, dtype=np.int64)
        if c.size and (c.min() < 0 or c.max() >= k):
            raise QualityError("label out of range")
        sizes = np.bincount(c, minlength=k).astype(np.int64)
        if np.any(sizes == 0):
            raise QualityError("labelling must be surjective: every group non-empty")
        return cls(c, sizes)

    @classmethod
    def random_surjective(cls, n_nodes: int, k: int, rng: np.random.Generator) -> "Labelling":
        if k > n_nodes:
            raise QualityError("k may not exceed the node count")
        c = rng.integers(0, k, size=n_nodes)
        # force surjectivity by pinning k distinct nodes
        pins = rng.permutation(n_nodes)[:k]
        c[pins] = np.arange(k)
        return cls.from_labels(c, k)


@dataclass
class QualityState:
    s: np.ndarray  # (K, K) int64 block edge sums
    t: np.ndarray  # (K,) int64 group degree sums
    q: float

    def copy(self) -> "QualityState":
        return QualityState(self.s.copy(), self.t.copy(), self.q)


def recompute(g: Graph, labelling: Labelling, bm: StructureMatrix) -> QualityState:
    """Q and sufficient statistics from scratch (numpy path, the oracle)."""
    if g.n_edges == 0:
        raise QualityError("empty graph")
    k = bm.k
    if labelling.k != k:
        raise QualityError("labelling and structure matrix disagree on K")
    c = labelling.c
    s = np.zeros((k, k), dtype=np.int64)
    cu = c[g.edges[:, 0]]
    cv = c[g.edges[:, 1]]
    np.add.at(s, (cu, cv), 1)
    np.add.at(s, (cv, cu), 1)
    t = np.zeros(k, dtype=np.int64)
    np.add.at(t, c, g.degrees)
    two_e = float(g.two_e)
    qab = s - np.outer(t, t) / two_e
    q = float(np.sum(qab * bm.b) / two_e)
    return QualityState(s, t, q)


def delta_q_label_swap(state: QualityState, g: Graph, labelling: Labelling,
                       bm: StructureMatrix, node: int, to: int) -> float:
    a = int(labelling.c[node])
    if to == a:
        raise QualityError("target group equals current group")
    if labelling.group_size[a] <= 1:
        raise QualityError("moving a singleton's node would empty its group")
    s_i, aii = kernels.node_to_group_edges_scan(g.edges, labelling.c, node, bm.k)
    return kernels.delta_label_swap(state.s, state.t, bm.b, s_i, aii,
                                    g.degrees[node], a, to, float(g.two_e))


def apply_label_swap(state: QualityState, g: Graph, labelling: Labelling,
                     bm: StructureMatrix, node: int, to: int) -> None:
    dq = delta_q_label_swap(state, g, labelling, bm, node, to)
    a = int(labelling.c[node])
    s_i, aii = kernels.node_to_group_edges_scan(g.edges, labelling.c, node, bm.k)
    kernels.apply_label_swap(state.s, state.t, labelling.c, labelling.group_size,
                             s_i, aii, node, a, to, g.degrees[node])
    state.q += dq


def delta_q_edge_swap(state: QualityState, g: Graph, labelling: Labelling,
                      bm: StructureMatrix, e1: int, e2: int) -> float:
    if e1 == e2:
        raise QualityError("edge swap needs two distinct edge slots")
    return kernels.delta_edge_swap(g.edges, labelling.c, bm.b, e1, e2, float(g.two_e))


def apply_edge_swap(state: QualityState, g: Graph, labelling: Labelling,
                    bm: StructureMatrix, e1: int, e2: int) -> None:
    dq = delta_q_edge_swap(state, g, labelling, bm, e1, e2)
    kernels.apply_edge_swap(g.edges, labelling.c, state.s, e1, e2)
    state.q += dq


def delta_q_block_flip(state: QualityState, bm: StructureMatrix,
                       a: int, b: int, two_e: float) -> float:
    return kernels.delta_block_flip(state.s, state.t, bm.b, a, b, two_e)


def apply_block_flip(state: QualityState, bm: StructureMatrix,
                     a: int, b: int, two_e: float) -> None:
    dq = delta_q_block_flip(state, bm, a, b, two_e)
    kernels.apply_block_flip(bm.b, a, b)
    state.q += dq


def q_upper_bound(k: int) -> float:
    """Maximum Q for a partition into k parts under the assortative pattern."""
    return 2.0 * (1.0 - 1.0 / k)
