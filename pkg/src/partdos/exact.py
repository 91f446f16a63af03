"""Brute-force enumeration of small null spaces: the ground truth for the samplers.

Enumeration is restricted to surjective labellings to match the reachable
space of the label-swap kernel (the singleton guard makes non-surjective
states unreachable).  Q values are keyed after rounding to 12 decimals: they
are rationals with denominator (2E)^2, safely separated at that precision
for desk-scale graphs.
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph
from .quality import Labelling, StructureMatrix, recompute


class BudgetError(ValueError):
    pass


@dataclass
class ExactDos:
    values: np.ndarray    # sorted distinct Q values (rounded to 12 decimals)
    counts: np.ndarray    # state count per value
    total: int            # enumerated states
    n_set_partitions: int | None = None  # total / K! for label-symmetric B

    def log_ghat(self) -> np.ndarray:
        return np.log(self.counts) - np.log(self.total)

    def on_grid(self, q_lo: float, q_hi: float, n_bins: int):
        """Bin the exact DOS onto a Wang-Landau grid.

        Returns (log_ghat, active) arrays; normalization is over all
        enumerated states, matching a WL run that reached every bin.
        """
        inv_w = n_bins / (q_hi - q_lo)
        binned = np.zeros(n_bins, dtype=np.int64)
        for q, cnt in zip(self.values, self.counts):
            b = int(np.floor((q - q_lo) * inv_w))
            if not 0 <= b < n_bins:
                raise ValueError(f"exact Q value {q} falls outside the grid")
            binned[b] += cnt
        active = binned > 0
        out = np.full(n_bins, np.nan)
        out[active] = np.log(binned[active]) - math.log(binned.sum())
        return out, active

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("q,count\n")
        for q, c in zip(self.values, self.counts):
            out.write("%.17g,%d\n" % (q, c))
        return out.getvalue()


def enumerate_labellings(g: Graph, k: int, bm: StructureMatrix,
                         budget: int = 10**8) -> ExactDos:
    """Exact DOS over all surjective K-labellings of the fixed graph."""
    n = g.n_nodes
    if k < 1 or k > n:
        raise ValueError("need 1 <= K <= N")
    if k ** n > budget:
        raise BudgetError(f"{k}^{n} states exceed the enumeration budget {budget}")
    vals, cnts, total = kernels.enumerate_labellings_q(
        g.edges, g.degrees, n, k, bm.b, float(g.two_e))
    return ExactDos(vals, cnts, total,
                    n_set_partitions=total // math.factorial(k))


def enumerate_structures(g: Graph, labelling: Labelling, k: int,
                         budget_bits: int = 20) -> ExactDos:
    """Exact DOS over all 2^(K(K+1)/2) symmetric +-1 structure matrices."""
    n_blocks = k * (k + 1) // 2
    if n_blocks > budget_bits:
        raise BudgetError(f"{n_blocks} free blocks exceed the budget of {budget_bits} bits")
    pairs = [(a, b) for a in range(k) for b in range(a, k)]
    counts: dict[float, int] = {}
    total = 0
    for signs in itertools.product((1, -1), repeat=n_blocks):
        b = np.empty((k, k), dtype=np.int64)
        for (a, bb), s in zip(pairs, signs):
            b[a, bb] = s
            b[bb, a] = s
        q = round(recompute(g, labelling, StructureMatrix(b)).q, 12)
        counts[q] = counts.get(q, 0) + 1
        total += 1
    values = np.array(sorted(counts))
    return ExactDos(values, np.array([counts[v] for v in values], dtype=np.int64),
                    total)
