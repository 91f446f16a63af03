import numpy as np
import pytest

from partdos.exact import BudgetError, enumerate_labellings, enumerate_structures
from partdos.graph import load_edge_list
from partdos.quality import Labelling, StructureMatrix, recompute


def test_three_node_counts():
    g = load_edge_list("0 1\n1 2\n")
    dos = enumerate_labellings(g, 2, StructureMatrix.assortative(2))
    assert dos.total == 6  # 2^3 - 2 surjective labellings
    assert dos.n_set_partitions == 3  # 2^(3-1) - 1


def test_single_edge_disassortative():
    g = load_edge_list("0 1\n")
    dos = enumerate_labellings(g, 2, StructureMatrix.disassortative(2))
    assert dos.values.tolist() == [1.0]
    assert dos.counts.tolist() == [2]


def test_p4_spectrum():
    g = load_edge_list("0 1\n1 2\n2 3\n")
    dos = enumerate_labellings(g, 2, StructureMatrix.assortative(2))
    assert dos.total == 14
    assert np.allclose(dos.values, [-1.0, -4.0 / 9.0, -1.0 / 9.0, 1.0 / 3.0],
                       atol=1e-12)
    assert dos.counts.tolist() == [2, 6, 4, 2]
    # normalization of log ghat
    assert np.exp(dos.log_ghat()).sum() == pytest.approx(1.0, abs=1e-12)


def test_surjective_identity_k2():
    for text, n in (("0 1\n1 2\n2 3\n3 4\n", 5), ("0 1\n1 2\n2 0\n", 3)):
        g = load_edge_list(text)
        dos = enumerate_labellings(g, 2, StructureMatrix.assortative(2))
        assert dos.total == 2 ** n - 2
        assert dos.n_set_partitions == 2 ** (n - 1) - 1


def test_budget_enforced():
    g = load_edge_list("\n".join(f"{i} {i+1}" for i in range(40)))
    with pytest.raises(BudgetError):
        enumerate_labellings(g, 2, StructureMatrix.assortative(2))


def test_exact_max_not_below_greedy_probe():
    g = load_edge_list("0 1\n1 2\n2 3\n")
    dos = enumerate_labellings(g, 2, StructureMatrix.assortative(2))
    best = max(recompute(g, Labelling.from_labels(c, 2),
                         StructureMatrix.assortative(2)).q
               for c in ([0, 0, 1, 1], [0, 1, 0, 1], [0, 0, 0, 1]))
    assert dos.values.max() >= best - 1e-12


def test_structures_k1_antisymmetry():
    g = load_edge_list("0 1\n1 2\n")
    lab = Labelling.from_labels([0, 0, 0], 1)
    dos = enumerate_structures(g, lab, 1)
    assert dos.total == 2
    assert np.allclose(dos.values, -dos.values[::-1], atol=1e-12)


def test_structures_k2_negation_symmetry():
    g = load_edge_list("0 1\n1 2\n2 0\n0 3\n")
    lab = Labelling.from_labels([0, 0, 1, 1], 2)
    dos = enumerate_structures(g, lab, 2)
    assert dos.total == 8
    # g(q) = g(-q): the value/count table is invariant under negation
    table = dict(zip(np.round(dos.values, 12), dos.counts))
    for q, c in table.items():
        assert table.get(round(-q, 12)) == c
    with pytest.raises(BudgetError):
        enumerate_structures(g, lab, 2, budget_bits=2)


def test_on_grid_binning_roundtrip():
    g = load_edge_list("0 1\n1 2\n2 3\n")
    dos = enumerate_labellings(g, 2, StructureMatrix.assortative(2))
    log_g, active = dos.on_grid(-1.1001, 0.4003, 50)
    assert active.sum() == len(dos.values)
    assert np.exp(log_g[active]).sum() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        dos.on_grid(0.0, 0.4, 10)  # Q=-1 falls outside


def test_csv_format():
    g = load_edge_list("0 1\n")
    dos = enumerate_labellings(g, 2, StructureMatrix.disassortative(2))
    lines = dos.to_csv().splitlines()
    assert lines[0] == "q,count"
    assert lines[1] == "1,2"
