"""Shared builders for the test suite. Everything is seeded and deterministic."""

import numpy as np

from graphlex import Document, EmbeddingSpace, LabeledCorpus


def unit_rows(rng, n, r):
    """Random unit vectors, rows of shape (n, r)."""
    v = rng.normal(size=(n, r))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_space(rng, n, r, prefix="w"):
    words = tuple(f"{prefix}{i}" for i in range(n))
    return EmbeddingSpace.from_vectors(words, unit_rows(rng, n, r))


def corpus_of(triples):
    """Build a LabeledCorpus from (id, tokens, label) triples."""
    docs = tuple(Document(i, tuple(toks), lab) for i, toks, lab in triples)
    return LabeledCorpus(
        documents=docs,
        n_true=sum(1 for d in docs if d.label == 1),
        n_false=sum(1 for d in docs if d.label == 0),
    )
