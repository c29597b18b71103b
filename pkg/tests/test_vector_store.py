"""Tests for embedding loading, normalization, and seed resolution."""

import numpy as np
import pytest

from graphlex import (
    EmbeddingFormatError,
    EmbeddingSpace,
    SeedResolutionError,
    filter_vocabulary,
    load_embeddings,
    resolve_seeds,
    resolve_tokens,
    subset_space,
    unit_normalize,
)

from conftest import corpus_of, unit_rows


class TestUnitNormalize:
    def test_rows_become_unit(self):
        rng = np.random.default_rng(0)
        v = rng.normal(size=(5, 3)) * 7.0
        out = unit_normalize(v)
        assert np.allclose(np.linalg.norm(out, axis=1), 1.0)

    def test_near_zero_row_rejected(self):
        v = np.array([[1.0, 0.0], [1e-15, 0.0]])
        with pytest.raises(EmbeddingFormatError, match="norm"):
            unit_normalize(v)

    def test_min_norm_is_adjustable(self):
        v = np.array([[1.0, 0.0], [1e-6, 0.0]])
        out = unit_normalize(v, min_norm=1e-8)
        assert np.allclose(out[1], [1.0, 0.0])


class TestFromVectors:
    def test_two_by_two(self):
        space = EmbeddingSpace.from_vectors(("a", "b"), np.eye(2))
        assert len(space) == 2
        assert space.dim == 2
        assert "a" in space and "c" not in space
        assert space.index_of("b") == 1
        assert np.allclose(space.vector("a"), [1.0, 0.0])

    def test_vectors_read_only(self):
        space = EmbeddingSpace.from_vectors(("a", "b"), np.eye(2))
        with pytest.raises(ValueError):
            space.vectors[0, 0] = 5.0

    def test_token_row_count_mismatch(self):
        with pytest.raises(EmbeddingFormatError, match="tokens but"):
            EmbeddingSpace.from_vectors(("a",), np.eye(2))

    def test_single_vector_rejected(self):
        with pytest.raises(EmbeddingFormatError, match="at least 2"):
            EmbeddingSpace.from_vectors(("a",), np.array([[1.0, 0.0]]))

    def test_duplicate_token_rejected(self):
        with pytest.raises(EmbeddingFormatError, match="duplicate token"):
            EmbeddingSpace.from_vectors(("a", "a"), np.eye(2))

    def test_duplicate_vectors_rejected_by_default(self):
        v = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]])  # rows 0,1 equal after normalization
        with pytest.raises(EmbeddingFormatError, match="duplicate vectors"):
            EmbeddingSpace.from_vectors(("a", "b", "c"), v)

    def test_duplicate_vectors_allowed_on_request(self):
        v = np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0]])
        space = EmbeddingSpace.from_vectors(("a", "b", "c"), v, allow_duplicates=True)
        assert space.allows_duplicates
        assert np.allclose(space.vector("a"), space.vector("b"))

    def test_unknown_token_lookup(self):
        space = EmbeddingSpace.from_vectors(("a", "b"), np.eye(2))
        with pytest.raises(KeyError):
            space.index_of("zzz")


class TestLoadEmbeddings:
    def test_headerless_file(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("a 1 0\nb 0 1\n")
        space = load_embeddings(path)
        assert space.words == ("a", "b")
        assert space.dim == 2

    def test_word2vec_header(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("2 3\na 1 0 0\nb 0 1 0\n")
        space = load_embeddings(path)
        assert space.words == ("a", "b") and space.dim == 3

    def test_header_row_count_mismatch(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("3 2\na 1 0\nb 0 1\n")
        with pytest.raises(EmbeddingFormatError, match="declares 3 rows"):
            load_embeddings(path)

    def test_header_dim_mismatch(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("2 3\na 1 0\nb 0 1\n")
        with pytest.raises(EmbeddingFormatError, match="dimension 3"):
            load_embeddings(path)

    def test_ragged_rows_rejected(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("a 1 0\nb 0 1 0\n")
        with pytest.raises(EmbeddingFormatError, match="line 2"):
            load_embeddings(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("")
        with pytest.raises(EmbeddingFormatError, match="empty"):
            load_embeddings(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(EmbeddingFormatError, match="cannot read"):
            load_embeddings(tmp_path / "nope.txt")

    def test_non_numeric_coordinate(self, tmp_path):
        path = tmp_path / "emb.txt"
        path.write_text("a 1 zero\nb 0 1\n")
        with pytest.raises(EmbeddingFormatError):
            load_embeddings(path)

    def test_large_header_file_roundtrip(self, tmp_path):
        # vocabulary at realistic scale: 7093 rows, 25 dims
        rng = np.random.default_rng(7)
        n, r = 7093, 25
        v = unit_rows(rng, n, r)
        path = tmp_path / "emb.txt"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{n} {r}\n")
            for i in range(n):
                fh.write("w%05d %s\n" % (i, " ".join("%.8f" % x for x in v[i])))
        space = load_embeddings(path)
        assert len(space) == n
        assert space.dim == r
        assert np.allclose(np.linalg.norm(space.vectors, axis=1), 1.0)


class TestSeedResolution:
    def test_dedupe_preserving_order(self):
        index = {"b": 1, "a": 0, "c": 2}
        seeds = resolve_tokens(index, ["c", "a", "c", "zz", "a"])
        assert seeds.seeds == ("c", "a")
        assert seeds.resolved_indices == (2, 0)
        assert seeds.unresolved == ("zz",)
        assert len(seeds) == 2

    def test_nothing_resolves(self):
        with pytest.raises(SeedResolutionError, match="none of the 2"):
            resolve_tokens({"a": 0}, ["x", "y"])

    def test_partial_resolution_at_scale(self):
        # 215 candidate seeds, 109 present in the vocabulary
        words = tuple(f"w{i}" for i in range(300))
        rng = np.random.default_rng(3)
        space = EmbeddingSpace.from_vectors(words, unit_rows(rng, 300, 8))
        candidates = [f"w{i}" for i in range(109)] + [f"miss{i}" for i in range(106)]
        seeds = resolve_seeds(space, candidates)
        assert len(seeds.seeds) == 109
        assert len(seeds.unresolved) == 106


class TestVocabularyFiltering:
    def test_document_frequency_window(self):
        corpus = corpus_of([
            ("a", ["x", "y"], 1),
            ("b", ["x", "z"], 0),
            ("c", ["x"], None),
        ])
        # x in 3/3 docs, y and z in 1/3 each
        kept = filter_vocabulary(corpus, min_doc_count=1, max_doc_fraction=0.9)
        assert "x" not in kept and "y" in kept and "z" in kept
        kept_all = filter_vocabulary(corpus)
        assert "x" in kept_all

    def test_subset_space(self):
        rng = np.random.default_rng(5)
        space = EmbeddingSpace.from_vectors(("a", "b", "c"), unit_rows(rng, 3, 4))
        sub = subset_space(space, ["c", "a"])
        assert set(sub.words) == {"a", "c"}
        assert np.allclose(sub.vector("c"), space.vector("c"))
