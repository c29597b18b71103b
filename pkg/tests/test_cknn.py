"""Tests for CkNN graph construction and the edge-list round trip."""

import math

import numpy as np
import pytest

from graphlex import (
    EmbeddingSpace,
    GraphConstructionError,
    SemanticGraph,
    build_cknn,
    connected_component_of,
    connected_components,
    kth_neighbor_distance,
    pairwise_matrices,
    read_edgelist,
    write_edgelist,
)

from conftest import random_space


def tri_space():
    # e1, -e1, e2: tau = 1 (a,b), 0.5 (a,c), 0.5 (b,c)
    return EmbeddingSpace.from_vectors(
        ("a", "b", "c"), np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
    )


class TestKthNeighborDistance:
    def test_values(self):
        mats = pairwise_matrices(tri_space())
        assert kth_neighbor_distance(mats, 0, 1) == pytest.approx(0.5)
        assert kth_neighbor_distance(mats, 0, 2) == pytest.approx(1.0)
        assert kth_neighbor_distance(mats, 2, 2) == pytest.approx(0.5)  # tie at 0.5

    def test_k_out_of_range(self):
        mats = pairwise_matrices(tri_space())
        with pytest.raises(GraphConstructionError, match="k must be in 1..2"):
            kth_neighbor_distance(mats, 0, 3)
        with pytest.raises(GraphConstructionError):
            kth_neighbor_distance(mats, 0, 0)


class TestBuildCknn:
    def test_three_at_120_degrees(self):
        # all pairwise tau equal 1, so the rule compares 1 < delta exactly:
        # delta=1 admits nothing (strict), delta=1.5 admits everything
        v = np.array([
            [1.0, 0.0],
            [-0.5, math.sqrt(3) / 2],
            [-0.5, -math.sqrt(3) / 2],
        ])
        space = EmbeddingSpace.from_vectors(("a", "b", "c"), v)
        mats = pairwise_matrices(space)
        g1 = build_cknn(mats, k=1, delta=1.0)
        assert g1.n_edges == 0
        assert set(g1.isolated_nodes()) == {0, 1, 2}
        g2 = build_cknn(mats, k=1, delta=1.5)
        assert g2.edge_set() == {(0, 1), (0, 2), (1, 2)}

    def test_antipodal_triple_edges_and_weights(self):
        # k=1 distances are all 0.5; at delta=1 no pair passes (0.5 < 0.5 is
        # false, 1 < 0.5 is false); at delta=1.2 the two tau=0.5 pairs pass
        mats = pairwise_matrices(tri_space())
        g1 = build_cknn(mats, k=1, delta=1.0)
        assert g1.n_edges == 0
        g2 = build_cknn(mats, k=1, delta=1.2)
        assert g2.edge_set() == {(0, 2), (1, 2)}
        assert g2.weight(0, 2) == pytest.approx(0.5)  # s = 1 - tau
        assert g2.weight(1, 2) == pytest.approx(0.5)
        assert g2.weight(0, 1) == 0.0

    def test_delta_monotonicity(self):
        rng = np.random.default_rng(8)
        mats = pairwise_matrices(random_space(rng, 25, 6))
        for k in (1, 3, 5):
            small = build_cknn(mats, k=k, delta=0.5).edge_set()
            mid = build_cknn(mats, k=k, delta=1.0).edge_set()
            large = build_cknn(mats, k=k, delta=2.0).edge_set()
            assert small <= mid <= large

    def test_k_monotonicity(self):
        rng = np.random.default_rng(9)
        mats = pairwise_matrices(random_space(rng, 25, 6))
        prev = set()
        for k in (1, 2, 4, 8):
            edges = build_cknn(mats, k=k, delta=1.0).edge_set()
            assert prev <= edges
            prev = edges

    def test_bad_parameters(self):
        mats = pairwise_matrices(tri_space())
        with pytest.raises(GraphConstructionError, match="delta must be positive"):
            build_cknn(mats, k=1, delta=0.0)
        with pytest.raises(GraphConstructionError, match="k must be in"):
            build_cknn(mats, k=3, delta=1.0)

    def test_duplicate_vectors_rejected_without_optin(self):
        space = EmbeddingSpace.from_vectors(
            ("a", "b", "c"),
            np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]]),
            allow_duplicates=True,
        )
        mats = pairwise_matrices(space)
        # duplicates make the k=1 neighbor distance zero for a and b
        mats = type(mats)(
            tau=mats.tau.copy(), s=mats.s.copy(),
            max_raw_distance=mats.max_raw_distance,
            tokens=mats.tokens, allows_duplicates=False,
        )
        with pytest.raises(GraphConstructionError, match="zero k-th neighbor"):
            build_cknn(mats, k=1, delta=1.0)

    def test_duplicate_vectors_isolated_with_optin(self):
        space = EmbeddingSpace.from_vectors(
            ("a", "b", "c"),
            np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]]),
            allow_duplicates=True,
        )
        mats = pairwise_matrices(space)
        with pytest.warns(UserWarning, match="isolated under the strict rule"):
            g = build_cknn(mats, k=1, delta=1.0)
        # tau(a,b) = 0 < delta * sqrt(0 * 0) = 0 is false: twins stay isolated
        assert 0 in g.isolated_nodes() and 1 in g.isolated_nodes()


class TestGraphStructure:
    def test_components(self):
        g = SemanticGraph.from_edges(
            ("a", "b", "c", "d", "e"),
            [(0, 1, 0.5), (1, 2, 0.5), (3, 4, 0.9)],
        )
        assert connected_component_of(g, 0) == [0, 1, 2]
        comps = connected_components(g)
        assert sorted(map(sorted, comps)) == [[0, 1, 2], [3, 4]]

    def test_strengths_and_neighbors(self):
        g = SemanticGraph.from_edges(("a", "b", "c"), [(0, 1, 0.5), (0, 2, 0.25)])
        assert np.allclose(g.strengths(), [0.75, 0.5, 0.25])
        assert list(g.neighbors(0)) == [1, 2]
        assert g.index_of("c") == 2

    def test_from_edges_validation(self):
        with pytest.raises(GraphConstructionError, match="self-loop"):
            SemanticGraph.from_edges(("a", "b"), [(0, 0, 0.5)])
        with pytest.raises(GraphConstructionError, match="duplicate edge"):
            SemanticGraph.from_edges(("a", "b"), [(0, 1, 0.5), (1, 0, 0.5)])
        with pytest.raises(GraphConstructionError, match="outside"):
            SemanticGraph.from_edges(("a", "b"), [(0, 2, 0.5)])
        with pytest.raises(GraphConstructionError, match="weight"):
            SemanticGraph.from_edges(("a", "b"), [(0, 1, 1.5)])


class TestEdgelistRoundtrip:
    def test_weights_survive_exactly(self, tmp_path):
        rng = np.random.default_rng(10)
        mats = pairwise_matrices(random_space(rng, 20, 5))
        g = build_cknn(mats, k=3, delta=1.0)
        path = tmp_path / "graph.tsv"
        write_edgelist(g, path)
        back = read_edgelist(path)
        assert back.n_nodes == g.n_nodes
        assert back.k == 3 and back.delta == 1.0
        # token names define the mapping between the two index spaces
        remap = {i: back.index_of(tok) for i, tok in enumerate(g.node_tokens)}
        for i, j in g.edge_set():
            a, b = remap[i], remap[j]
            assert back.weight(a, b) == g.weight(i, j)  # %.17g is lossless

    def test_isolated_nodes_survive(self, tmp_path):
        g = SemanticGraph.from_edges(("a", "b", "c"), [(0, 1, 0.5)])
        path = tmp_path / "graph.tsv"
        write_edgelist(g, path)
        back = read_edgelist(path)
        assert back.n_nodes == 3
        assert [back.node_tokens[i] for i in back.isolated_nodes()] == ["c"]

    def test_missing_file(self, tmp_path):
        with pytest.raises(GraphConstructionError, match="cannot read"):
            read_edgelist(tmp_path / "nope.tsv")
