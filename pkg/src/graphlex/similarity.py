"""Cosine similarity and the max-normalized distance/similarity matrices.

Given unit vectors the raw cosine distance of a pair is 1 - cos. Dividing by
the maximum raw distance over all pairs maps distances onto [0, 1]:

    tau  = (1 - cos) / max_pairs(1 - cos)
    s    = 1 - tau

tau is a symmetric matrix with zero diagonal and at least one off-diagonal
entry exactly 1 (the witness of the max); s is its mirror image with unit
diagonal. Both are dense; vocabularies in the tens of thousands fit in
memory comfortably.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpaceError


def cosine_similarity(u, v):
    """Cosine of the angle between two vectors, clamped to [-1, 1]."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"shape mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine similarity undefined for a zero vector")
    c = float(np.dot(u, v) / (nu * nv))
    return min(1.0, max(-1.0, c))


@dataclass(frozen=True)
class PairwiseMatrices:
    """Dense tau (normalized distance) and s (normalized similarity) matrices."""

    tau: np.ndarray
    s: np.ndarray
    max_raw_distance: float
    tokens: tuple[str, ...] = ()
    allows_duplicates: bool = False

    def __post_init__(self):
        self.tau.setflags(write=False)
        self.s.setflags(write=False)

    @property
    def n(self):
        return self.tau.shape[0]


def pairwise_matrices(space):
    """Compute PairwiseMatrices for an EmbeddingSpace.

    The raw distance matrix is 1 - G with G the (clipped) Gram matrix of the
    unit rows. The upper triangle is the canonical copy so tau and s come out
    exactly symmetric. Raises DegenerateSpaceError when every pairwise
    distance is zero (all vectors identical).
    """
    g = space.vectors @ space.vectors.T
    np.clip(g, -1.0, 1.0, out=g)
    raw = 1.0 - g
    np.fill_diagonal(raw, 0.0)
    # mirror the upper triangle so fp asymmetry from the matmul cannot leak in
    upper = np.triu(raw, 1)
    raw = upper + upper.T
    max_raw = float(raw.max())
    if max_raw <= 0.0:
        raise DegenerateSpaceError(
            "all pairwise distances are zero; tau is undefined for this space"
        )
    tau = raw / max_raw
    s = 1.0 - tau
    np.fill_diagonal(s, 1.0)
    return PairwiseMatrices(
        tau=tau,
        s=s,
        max_raw_distance=max_raw,
        tokens=tuple(space.words),
        allows_duplicates=space.allows_duplicates,
    )


def write_matrix_tsv(matrix, tokens, path):
    """Dump a square token-aligned matrix as TSV (debugging aid).

    First line is a header of tokens; each following line is a token and its
    row at 17 significant digits.
    """
    matrix = np.asarray(matrix)
    n = matrix.shape[0]
    if matrix.shape != (n, n) or n != len(tokens):
        raise ValueError("matrix and token list sizes disagree")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(tokens) + "\n")
        for i, tok in enumerate(tokens):
            row = "\t".join(f"{x:.17g}" for x in matrix[i])
            fh.write(f"{tok}\t{row}\n")
