"""Sampler state shared by the Wang-Landau estimator and the entropic harvester.

A Sampler owns a private copy of every mutable array (edge list, labelling,
structure matrix, sufficient statistics), the move mix for its null space and
a seed from which per-task RNG streams are derived.  Null spaces:

  labels         partitions of the fixed observed graph
  labels+cm      partitions x degree-preserving rewirings
  labels+B       partitions x structure matrices
  labels+cm+B    all three
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .graph import Graph
from .moves import MoveMix
from .quality import Labelling, QualityState, StructureMatrix, recompute

NULL_SPACES = ("labels", "labels+cm", "labels+B", "labels+cm+B")

# |Q| <= 2 for any state: both the S and the T*T/2E parts of the sum are
# bounded by 2E in absolute value.
Q_ABS_BOUND = 2.0


def default_mix(null: str, p_swap: float | None = None,
                p_rewire: float | None = None) -> MoveMix:
    if null not in NULL_SPACES:
        raise ValueError(f"unknown null space {null!r}; choose from {NULL_SPACES}")
    if null == "labels":
        return MoveMix(1.0, 0.0)
    if null == "labels+cm":
        ps = 0.2 if p_swap is None else p_swap
        pr = (1.0 - ps) if p_rewire is None else p_rewire
        return MoveMix(ps, pr)
    if null == "labels+B":
        ps = 0.2 if p_swap is None else p_swap
        return MoveMix(ps, 0.0)
    ps = 0.2 if p_swap is None else p_swap
    pr = 0.2 if p_rewire is None else p_rewire
    return MoveMix(ps, pr)


@dataclass
class Sampler:
    graph: Graph
    labelling: Labelling
    bm: StructureMatrix
    mix: MoveMix
    seed: int
    state: QualityState = field(init=False)
    indptr: np.ndarray = field(init=False)
    stubs: np.ndarray = field(init=False)

    def __post_init__(self):
        self.state = recompute(self.graph, self.labelling, self.bm)
        self._rebuild_incidence()

    def _rebuild_incidence(self):
        if self.use_csr:
            self.indptr, self.stubs = self.graph.stub_lists()
        else:
            # rewiring invalidates static incidence; kernels fall back to edge scans
            self.indptr = np.zeros(1, dtype=np.int64)
            self.stubs = np.zeros(1, dtype=np.int64)

    @property
    def use_csr(self) -> bool:
        return self.mix.p_rewire == 0.0

    @property
    def k(self) -> int:
        return self.bm.k

    @property
    def two_e(self) -> float:
        return float(self.graph.two_e)

    def copy(self) -> "Sampler":
        s = Sampler(self.graph.copy(), self.labelling.copy(), self.bm.copy(),
                    self.mix, self.seed)
        s.state = self.state.copy()
        return s

    def rng_stream(self, *tags: int) -> np.random.Generator:
        """Independent reproducible stream for a sub-task (window, warm-up...)."""
        return np.random.default_rng([self.seed, *tags])

    def kernel_args(self) -> tuple:
        """Positional argument block shared by every kernel call."""
        return (self.graph.edges, self.indptr, self.stubs, self.use_csr,
                self.graph.degrees, self.labelling.c, self.labelling.group_size,
                self.bm.b, self.state.s, self.state.t)

    def refresh_q(self) -> float:
        """Recompute S, T and q from scratch to cap floating-point drift."""
        S, T = kernels.compute_stats(self.graph.edges, self.graph.degrees,
                                     self.labelling.c, self.k)
        self.state.s[:, :] = S
        self.state.t[:] = T
        self.state.q = kernels.compute_q(S, T, self.bm.b, self.two_e)
        return self.state.q


def make_sampler(graph: Graph, k: int, null: str = "labels",
                 bm: StructureMatrix | None = None, seed: int = 0,
                 p_swap: float | None = None,
                 p_rewire: float | None = None) -> Sampler:
    """Build a sampler with a random surjective start labelling."""
    if k < 2:
        raise ValueError("need K >= 2")
    if bm is None:
        bm = StructureMatrix.assortative(k)
    if bm.k != k:
        raise ValueError("structure matrix size does not match K")
    mix = default_mix(null, p_swap, p_rewire)
    if mix.p_rewire > 0 and graph.n_edges < 2:
        raise ValueError("rewiring null needs at least 2 edges")
    init_rng = np.random.default_rng([seed, 0x1A17])
    labelling = Labelling.random_surjective(graph.n_nodes, k, init_rng)
    return Sampler(graph.copy(), labelling, bm.copy(), mix, seed)
