import numpy as np
import pytest

from partdos.graph import Graph, load_edge_list
from partdos.quality import Labelling, StructureMatrix

DATA = __import__("pathlib").Path(__file__).resolve().parent.parent / "src" / "partdos" / "data"


def data_file(name: str):
    return DATA / name


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Simple ER instance with at least one edge (a path fallback)."""
    rows = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    if not rows:
        rows = [(i, i + 1) for i in range(n - 1)]
    return load_edge_list("\n".join(f"{u} {v}" for u, v in rows))


@pytest.fixture
def karate() -> Graph:
    return load_edge_list(data_file("karate.txt").read_text())


@pytest.fixture
def er30() -> Graph:
    return load_edge_list(data_file("er_30_02.txt").read_text())


def random_instance(rng, n=None, k=None, assort=True):
    """(graph, labelling, structure) triple for fuzz tests."""
    n = n or int(rng.integers(6, 14))
    k = k or int(rng.integers(2, 5))
    g = random_graph(n, 0.35, rng)
    lab = Labelling.random_surjective(g.n_nodes, k, rng)
    if assort:
        bm = StructureMatrix.assortative(k)
    else:
        b = np.sign(rng.random((k, k)) - 0.5).astype(np.int64)
        b[b == 0] = 1
        b = np.triu(b) + np.triu(b, 1).T
        bm = StructureMatrix(b)
    return g, lab, bm
