"""Density of states of network-partition quality.

Estimates how many partitions (or rewirings, or structure patterns) of a
network attain each value of the generalized partition quality Q, via the
Wang-Landau flat-histogram algorithm, harvests near-optimal partitions by
entropic sampling, and extracts building blocks from the resulting ensembles.
"""

__version__ = "0.1.0"

from .blocks import (BlockSet, CoOccurrence, ScoreTriple, blocks_at_threshold,
                     co_occurrence, default_theta_grid, score, threshold_sweep)
from .entropic import EntropicConfig, SampleRecord, SampleSet, entropic_sample
from .exact import BudgetError, ExactDos, enumerate_labellings, enumerate_structures
from .graph import Graph, GraphFormatError, load_edge_list, load_edge_list_file, make_caveman
from .moves import MoveMix
from .quality import Labelling, QualityError, QualityState, StructureMatrix, recompute
from .sampler import NULL_SPACES, Sampler, make_sampler
from .wanglandau import (DosGrid, NonConvergenceError, WlConfig, compare,
                         stitch, wl_sweep)

__all__ = [
    "BlockSet", "CoOccurrence", "ScoreTriple", "blocks_at_threshold",
    "co_occurrence", "default_theta_grid", "score", "threshold_sweep",
    "EntropicConfig", "SampleRecord", "SampleSet", "entropic_sample",
    "BudgetError", "ExactDos", "enumerate_labellings", "enumerate_structures",
    "Graph", "GraphFormatError", "load_edge_list", "load_edge_list_file",
    "make_caveman", "MoveMix", "Labelling", "QualityError", "QualityState",
    "StructureMatrix", "recompute", "NULL_SPACES", "Sampler", "make_sampler",
    "DosGrid", "NonConvergenceError", "WlConfig", "compare", "stitch",
    "wl_sweep", "__version__",
]
