"""Building blocks from partition ensembles.

From M sampled partitions, W_ij is the fraction of samples in which nodes i
and j share a group.  Candidate blocks at threshold theta are the connected
components of the graph with an edge wherever W_ij > theta (strict); the
component closure makes the set-placement rule deterministic and
order-independent.  Blocks are scored against partitions with completeness,
homogeneity and their harmonic mean (entropies in natural log).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class CoOccurrence:
    w: np.ndarray  # (N, N) symmetric, diagonal 1, entries in [0, 1]

    @property
    def n_nodes(self) -> int:
        return self.w.shape[0]

    def to_csv(self) -> str:
        return "\n".join(",".join("%.17g" % v for v in row) for row in self.w) + "\n"


@dataclass
class BlockSet:
    blocks: list[np.ndarray]  # disjoint sorted node-id arrays covering all nodes
    theta: float

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def assignment(self) -> np.ndarray:
        n = sum(len(b) for b in self.blocks)
        out = np.empty(n, dtype=np.int64)
        for bi, nodes in enumerate(self.blocks):
            out[nodes] = bi
        return out


@dataclass(frozen=True)
class ScoreTriple:
    h: float  # homogeneity
    c: float  # completeness
    v: float  # harmonic mean


def co_occurrence(labels_matrix: np.ndarray) -> CoOccurrence:
    """Same-group frequency matrix over an (M, N) array of labellings."""
    labels_matrix = np.asarray(labels_matrix)
    if labels_matrix.ndim != 2 or labels_matrix.shape[0] < 1:
        raise ValueError("need at least one sample, all over the same node set")
    m, n = labels_matrix.shape
    w = np.zeros((n, n))
    for row in labels_matrix:
        w += row[:, None] == row[None, :]
    w /= m
    return CoOccurrence(w)


def blocks_at_threshold(co: CoOccurrence, theta: float) -> BlockSet:
    """Connected components of the W > theta graph; isolated nodes become singletons."""
    if not 0 <= theta < 1:
        raise ValueError("need 0 <= theta < 1")
    n = co.n_nodes
    adj = co.w > theta
    seen = np.zeros(n, dtype=bool)
    blocks = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = [start]
        while stack:
            u = stack.pop()
            for vv in np.nonzero(adj[u] & ~seen)[0]:
                seen[vv] = True
                comp.append(int(vv))
                stack.append(int(vv))
        blocks.append(np.array(sorted(comp), dtype=np.int64))
    return BlockSet(blocks, theta)


def _entropies(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """H(X), H(Y), H(X|Y), H(Y|X) from the joint count table (natural log)."""
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    nx = xi.max() + 1
    ny = yi.max() + 1
    joint = np.zeros((nx, ny))
    np.add.at(joint, (xi, yi), 1.0)
    total = joint.sum()
    p = joint / total
    px = p.sum(axis=1)
    py = p.sum(axis=0)

    def ent(v):
        v = v[v > 0]
        return float(-(v * np.log(v)).sum())

    hx = ent(px)
    hy = ent(py)
    hxy = ent(p.ravel())
    return hx, hy, hxy - hy, hxy - hx  # H(X), H(Y), H(X|Y), H(Y|X)


def score(blocks: BlockSet | np.ndarray, groups: np.ndarray) -> ScoreTriple:
    """Homogeneity, completeness and their harmonic mean of blocks vs groups.

    completeness = 1 - H(groups | blocks) / H(groups): 1 exactly when every
    block lies wholly inside one group (singleton blocks are always complete).
    homogeneity is the same with the roles swapped: 1 when every group is a
    single whole block.  Degenerate marginals (one block or one group) score 1.
    """
    c_assign = blocks.assignment() if isinstance(blocks, BlockSet) else np.asarray(blocks)
    g_assign = np.asarray(groups)
    if c_assign.shape != g_assign.shape or c_assign.size == 0:
        raise ValueError("blocks and groups must cover the same non-empty node set")
    hc, hg, hc_given_g, hg_given_c = _entropies(c_assign, g_assign)
    degenerate = hc == 0.0 or hg == 0.0
    c = 1.0 if degenerate else 1.0 - hg_given_c / hg
    h = 1.0 if degenerate else 1.0 - hc_given_g / hc
    v = 0.0 if h + c == 0.0 else 2.0 * h * c / (h + c)
    return ScoreTriple(h, c, v)


def default_theta_grid() -> np.ndarray:
    """101 thresholds spanning [0, 1) uniformly."""
    return np.linspace(0.0, 1.0, 102)[:-1]


@dataclass
class SweepRow:
    theta: float
    n_blocks: int
    mean_completeness: float


def threshold_sweep(co: CoOccurrence, labels_matrix: np.ndarray,
                    thetas: np.ndarray | None = None) -> list[SweepRow]:
    """Block count and mean completeness of the samples for each threshold."""
    thetas = default_theta_grid() if thetas is None else np.asarray(thetas)
    if thetas.size and (thetas.min() < 0 or thetas.max() >= 1):
        raise ValueError("theta grid must lie within [0, 1)")
    labels_matrix = np.asarray(labels_matrix)
    rows = []
    for theta in thetas:
        bs = blocks_at_threshold(co, float(theta))
        assign = bs.assignment()
        comp = [score(assign, sample).c for sample in labels_matrix]
        rows.append(SweepRow(float(theta), bs.n_blocks, float(np.mean(comp))))
    return rows


def sweep_to_csv(rows: list[SweepRow]) -> str:
    out = ["theta,n_blocks,mean_completeness"]
    for r in rows:
        out.append("%.17g,%d,%.17g" % (r.theta, r.n_blocks, r.mean_completeness))
    return "\n".join(out) + "\n"
