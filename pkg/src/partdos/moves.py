"""Proposal kernels over the null spaces: label swaps, edge rewiring, block flips.

Each proposal is symmetric.  Label swaps on singleton groups return NoOp (a
counted stay), which keeps surjectivity and proposal symmetry.  The same
decode logic, driven by the same uniforms-per-step layout, runs inside the
numba walk kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .quality import Labelling, StructureMatrix


@dataclass(frozen=True)
class MoveMix:
    p_swap: float = 1.0
    p_rewire: float = 0.0

    def __post_init__(self):
        if self.p_swap < 0 or self.p_rewire < 0 or self.p_swap + self.p_rewire > 1 + 1e-12:
            raise ValueError("need p_swap, p_rewire >= 0 and p_swap + p_rewire <= 1")

    @property
    def p_flip(self) -> float:
        return max(0.0, 1.0 - self.p_swap - self.p_rewire)


@dataclass(frozen=True)
class LabelSwap:
    node: int
    to: int


@dataclass(frozen=True)
class NoOp:
    pass


@dataclass(frozen=True)
class EdgeSwap:
    e1: int
    e2: int


@dataclass(frozen=True)
class BlockFlip:
    a: int
    b: int


Move = LabelSwap | NoOp | EdgeSwap | BlockFlip


def propose_label_swap(labelling: Labelling, rng: np.random.Generator) -> Move:
    """Uniform node, uniform other label; NoOp if the node's group is a singleton."""
    n = labelling.n_nodes
    k = labelling.k
    node = min(int(rng.random() * n), n - 1)
    a = int(labelling.c[node])
    u = rng.random()
    if labelling.group_size[a] == 1:
        return NoOp()
    off = min(int(u * (k - 1)), k - 2)
    to = off if off < a else off + 1
    return LabelSwap(node, to)


def propose_edge_swap(g: Graph, rng: np.random.Generator) -> Move:
    """Two distinct edge slots, uniform without replacement; fixed orientation."""
    e = g.n_edges
    if e < 2:
        raise ValueError("edge swap needs at least 2 edges")
    e1 = min(int(rng.random() * e), e - 1)
    e2 = min(int(rng.random() * (e - 1)), e - 2)
    if e2 >= e1:
        e2 += 1
    return EdgeSwap(e1, e2)


def propose_block_flip(bm: StructureMatrix, rng: np.random.Generator) -> Move:
    """Uniform over the K(K+1)/2 distinct blocks of the symmetric matrix."""
    k = bm.k
    n_blocks = k * (k + 1) // 2
    idx = min(int(rng.random() * n_blocks), n_blocks - 1)
    a = 0
    r = idx
    while r >= k - a:
        r -= k - a
        a += 1
    return BlockFlip(a, a + r)


def propose_mixed(mix: MoveMix, g: Graph, labelling: Labelling,
                  bm: StructureMatrix, rng: np.random.Generator) -> Move:
    u = rng.random()
    if u < mix.p_swap:
        return propose_label_swap(labelling, rng)
    if u < mix.p_swap + mix.p_rewire:
        return propose_edge_swap(g, rng)
    return propose_block_flip(bm, rng)


def label_swap_probability(labelling: Labelling, move: LabelSwap) -> float:
    """Probability of proposing this specific swap: 1 / (N * (K - 1))."""
    return 1.0 / (labelling.n_nodes * (labelling.k - 1))
