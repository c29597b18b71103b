"""Tests for cosine similarity and the normalized distance matrices."""

import numpy as np
import pytest

from graphlex import (
    DegenerateSpaceError,
    EmbeddingSpace,
    cosine_similarity,
    pairwise_matrices,
)
from graphlex.similarity import write_matrix_tsv

from conftest import random_space


class TestCosine:
    def test_orthogonal(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_antipodal(self):
        assert cosine_similarity(np.array([1.0, 0.0]), np.array([-1.0, 0.0])) == -1.0

    def test_scale_invariant(self):
        u = np.array([2.0, 1.0])
        assert cosine_similarity(u, 3.0 * u) == pytest.approx(1.0)


class TestPairwiseMatrices:
    def test_antipodal_triple(self):
        # e1, -e1, e2: raw distances 2, 1, 1 give tau 1, 0.5, 0.5
        space = EmbeddingSpace.from_vectors(
            ("a", "b", "c"), np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]])
        )
        mats = pairwise_matrices(space)
        assert mats.max_raw_distance == pytest.approx(2.0)
        assert mats.tau[0, 1] == pytest.approx(1.0)
        assert mats.tau[0, 2] == pytest.approx(0.5)
        assert mats.tau[1, 2] == pytest.approx(0.5)
        assert mats.s[0, 2] == pytest.approx(0.5)
        assert np.allclose(np.diag(mats.tau), 0.0)
        assert np.allclose(np.diag(mats.s), 1.0)

    def test_symmetry_is_exact(self):
        rng = np.random.default_rng(2)
        mats = pairwise_matrices(random_space(rng, 40, 7))
        assert np.array_equal(mats.tau, mats.tau.T)
        assert np.array_equal(mats.s, mats.s.T)

    def test_range(self):
        rng = np.random.default_rng(3)
        mats = pairwise_matrices(random_space(rng, 30, 5))
        assert mats.tau.min() >= 0.0 and mats.tau.max() == pytest.approx(1.0)
        assert mats.s.min() >= 0.0 and mats.s.max() <= 1.0

    def test_matrices_read_only(self):
        rng = np.random.default_rng(4)
        mats = pairwise_matrices(random_space(rng, 5, 3))
        with pytest.raises(ValueError):
            mats.tau[0, 1] = 0.5

    def test_identical_vectors_degenerate(self):
        space = EmbeddingSpace.from_vectors(
            ("a", "b"), np.array([[1.0, 0.0], [2.0, 0.0]]), allow_duplicates=True
        )
        with pytest.raises(DegenerateSpaceError):
            pairwise_matrices(space)

    def test_tau_is_scale_of_raw(self):
        # tau = raw / max(raw), so ratios of distances are preserved
        rng = np.random.default_rng(5)
        space = random_space(rng, 12, 6)
        mats = pairwise_matrices(space)
        g = np.clip(space.vectors @ space.vectors.T, -1.0, 1.0)
        raw = 1.0 - g
        np.fill_diagonal(raw, 0.0)
        assert np.allclose(mats.tau * mats.max_raw_distance, (raw + raw.T) / 2.0)


class TestMatrixTsv:
    def test_roundtrip_values(self, tmp_path):
        rng = np.random.default_rng(6)
        space = random_space(rng, 4, 3)
        mats = pairwise_matrices(space)
        path = tmp_path / "tau.tsv"
        write_matrix_tsv(mats.tau, space.words, path)
        lines = path.read_text().strip().split("\n")
        assert lines[0].split("\t") == list(space.words)
        row1 = lines[1].split("\t")
        assert row1[0] == space.words[0]
        back = np.array([float(x) for x in row1[1:]])
        assert np.array_equal(back, mats.tau[0])  # 17 significant digits roundtrip
