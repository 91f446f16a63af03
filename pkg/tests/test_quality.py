import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from partdos.graph import load_edge_list
from partdos.quality import (Labelling, QualityError, StructureMatrix,
                             apply_block_flip, apply_edge_swap, apply_label_swap,
                             delta_q_block_flip, delta_q_edge_swap,
                             delta_q_label_swap, q_upper_bound, recompute)

from conftest import random_instance


def test_structure_matrix_validation():
    with pytest.raises(QualityError):
        StructureMatrix(np.array([[1, 1], [1, 2]]))
    with pytest.raises(QualityError):
        StructureMatrix(np.array([[1, 1], [-1, 1]]))
    with pytest.raises(QualityError):
        StructureMatrix(np.ones((2, 3)))
    bm = StructureMatrix.assortative(3)
    assert bm.k == 3
    assert np.array_equal(bm.b, -StructureMatrix.disassortative(3).b)


def test_structure_matrix_text_roundtrip():
    bm = StructureMatrix.from_text("1 .\n. 1\n")
    assert np.array_equal(bm.b, [[1, -1], [-1, 1]])
    assert StructureMatrix.from_text(bm.to_text()).b.tolist() == bm.b.tolist()
    with pytest.raises(QualityError):
        StructureMatrix.from_text("1 0\n0 1\n")


def test_labelling_surjectivity():
    with pytest.raises(QualityError):
        Labelling.from_labels([0, 0, 0], 2)
    lab = Labelling.from_labels([0, 1, 0], 2)
    assert list(lab.group_size) == [2, 1]


@given(st.integers(2, 6), st.integers(0, 1000))
def test_random_surjective_is_surjective(k, seed):
    rng = np.random.default_rng(seed)
    lab = Labelling.random_surjective(k + 3, k, rng)
    assert np.all(lab.group_size >= 1)
    assert lab.group_size.sum() == k + 3


def test_single_edge_q_values():
    g = load_edge_list("0 1\n")
    lab = Labelling.from_labels([0, 1], 2)
    dis = StructureMatrix.disassortative(2)
    ass = StructureMatrix.assortative(2)
    assert recompute(g, lab, dis).q == pytest.approx(1.0, abs=1e-12)
    assert recompute(g, lab, ass).q == pytest.approx(-1.0, abs=1e-12)


def test_two_triangles_bridged():
    g = load_edge_list("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n")
    lab = Labelling.from_labels([0, 0, 0, 1, 1, 1], 2)
    st_ = recompute(g, lab, StructureMatrix.assortative(2))
    assert st_.s[0, 0] == st_.s[1, 1] == 6
    assert st_.s[0, 1] == 1
    assert list(st_.t) == [7, 7]
    assert st_.q == pytest.approx(10.0 / 14.0, abs=1e-12)


def test_recompute_conservation_and_antisymmetry():
    rng = np.random.default_rng(7)
    for _ in range(20):
        g, lab, bm = random_instance(rng, assort=False)
        state = recompute(g, lab, bm)
        assert state.t.sum() == g.two_e
        assert state.s.sum() == g.two_e
        neg = recompute(g, lab, StructureMatrix(-bm.b))
        assert neg.q == pytest.approx(-state.q, abs=1e-12)


def test_label_swap_guards():
    g = load_edge_list("0 1\n")
    lab = Labelling.from_labels([0, 1], 2)
    bm = StructureMatrix.assortative(2)
    state = recompute(g, lab, bm)
    with pytest.raises(QualityError):
        delta_q_label_swap(state, g, lab, bm, 1, 0)  # singleton group
    with pytest.raises(QualityError):
        delta_q_label_swap(state, g, lab, bm, 1, 1)  # same group


def test_edge_swap_examples():
    # all four endpoints in one group: B terms cancel
    g = load_edge_list("0 1\n2 3\n4 0\n")
    lab = Labelling.from_labels([0, 0, 0, 0, 1], 2)
    bm = StructureMatrix.assortative(2)
    state = recompute(g, lab, bm)
    assert delta_q_edge_swap(state, g, lab, bm, 0, 1) == pytest.approx(0.0, abs=1e-15)
    # both edges inside opposite groups
    g2 = load_edge_list("0 1\n2 3\n")
    lab2 = Labelling.from_labels([0, 0, 1, 1], 2)
    state2 = recompute(g2, lab2, bm)
    assert delta_q_edge_swap(state2, g2, lab2, bm, 0, 1) == pytest.approx(-8.0 / 4.0, abs=1e-12)
    with pytest.raises(QualityError):
        delta_q_edge_swap(state2, g2, lab2, bm, 1, 1)


def test_block_flip_single_edge_via_recompute():
    g = load_edge_list("0 1\n")
    lab = Labelling.from_labels([0, 1], 2)
    bm = StructureMatrix.assortative(2)
    state = recompute(g, lab, bm)
    dq = delta_q_block_flip(state, bm, 0, 1, float(g.two_e))
    apply_block_flip(state, bm, 0, 1, float(g.two_e))
    fresh = recompute(g, lab, bm)
    assert state.q == pytest.approx(fresh.q, abs=1e-12)
    assert dq == pytest.approx(fresh.q - (-1.0), abs=1e-12)


def test_block_flip_involution():
    rng = np.random.default_rng(3)
    g, lab, bm = random_instance(rng)
    state = recompute(g, lab, bm)
    q0 = state.q
    b0 = bm.b.copy()
    apply_block_flip(state, bm, 0, 0, float(g.two_e))
    apply_block_flip(state, bm, 0, 0, float(g.two_e))
    assert np.array_equal(bm.b, b0)
    assert state.q == pytest.approx(q0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_delta_fuzz_matches_recompute(seed):
    rng = np.random.default_rng(seed)
    g, lab, bm = random_instance(rng, assort=False)
    state = recompute(g, lab, bm)
    for _ in range(30):
        u = rng.random()
        if u < 0.5:
            node = int(rng.integers(g.n_nodes))
            a = int(lab.c[node])
            if lab.group_size[a] <= 1:
                continue
            to = int(rng.integers(bm.k - 1))
            to = to if to < a else to + 1
            apply_label_swap(state, g, lab, bm, node, to)
        elif u < 0.8 and g.n_edges >= 2:
            e1, e2 = rng.choice(g.n_edges, size=2, replace=False)
            apply_edge_swap(state, g, lab, bm, int(e1), int(e2))
        else:
            a = int(rng.integers(bm.k))
            b = int(rng.integers(a, bm.k))
            apply_block_flip(state, bm, a, b, float(g.two_e))
        fresh = recompute(g, lab, bm)
        assert state.q == pytest.approx(fresh.q, abs=1e-9)
        assert np.array_equal(state.s, fresh.s)
        assert np.array_equal(state.t, fresh.t)


def test_q_upper_bound_values():
    assert q_upper_bound(2) == 1.0
    assert q_upper_bound(4) == 1.5
