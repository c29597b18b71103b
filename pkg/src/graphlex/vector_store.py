"""Word-embedding ingestion: loading, validation, normalization, seed resolution.

Supports two text formats, autodetected from the first line:

  * word2vec style: a header "N r" (exactly two integer fields) followed by
    N rows of "token x1 ... xr",
  * GloVe style: no header, every line is "token x1 ... xr".

The token is the first whitespace-delimited field of each row. All vectors
are unit-normalized on load; a vector whose norm falls below min_norm is
rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigError,
    CorpusFormatError,
    EmbeddingFormatError,
    SeedResolutionError,
)


def unit_normalize(vectors, min_norm=1e-12):
    """Return a row-normalized copy of `vectors`.

    Raises EmbeddingFormatError if any row norm is below min_norm.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2:
        raise EmbeddingFormatError("expected a 2-d array of row vectors")
    norms = np.linalg.norm(vectors, axis=1)
    bad = np.flatnonzero(norms < min_norm)
    if bad.size:
        raise EmbeddingFormatError(
            f"{bad.size} vector(s) with norm below {min_norm} (first at row {bad[0]})"
        )
    return vectors / norms[:, None]


@dataclass(frozen=True)
class EmbeddingSpace:
    """An immutable set of unit-normalized word vectors.

    words and vectors are index-aligned; token lookup is a bijection onto
    0..N-1. The vectors array is marked read-only.
    """

    words: tuple[str, ...]
    vectors: np.ndarray
    dim: int
    normalized: bool = True
    allows_duplicates: bool = False
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.words)})
        self.vectors.setflags(write=False)

    def __len__(self):
        return len(self.words)

    def __contains__(self, token):
        return token in self._index

    def index_of(self, token):
        try:
            return self._index[token]
        except KeyError:
            raise KeyError(f"token {token!r} not in vocabulary") from None

    def vector(self, token):
        return self.vectors[self.index_of(token)]

    @classmethod
    def from_vectors(cls, words, vectors, min_norm=1e-12, allow_duplicates=False):
        """Validate and normalize raw (words, vectors) into an EmbeddingSpace."""
        words = tuple(words)
        vectors = unit_normalize(vectors, min_norm=min_norm)
        n, r = vectors.shape
        if len(words) != n:
            raise EmbeddingFormatError(
                f"{len(words)} tokens but {n} vector rows"
            )
        if n < 2:
            raise EmbeddingFormatError(f"need at least 2 vectors, got {n}")
        if r < 1:
            raise EmbeddingFormatError("vectors must have at least 1 dimension")

        seen_tokens = {}
        for i, w in enumerate(words):
            if w in seen_tokens:
                raise EmbeddingFormatError(
                    f"duplicate token {w!r} at rows {seen_tokens[w]} and {i}"
                )
            seen_tokens[w] = i

        if not allow_duplicates:
            # exact bitwise equality after normalization
            seen_vecs = {}
            for i in range(n):
                key = vectors[i].tobytes()
                if key in seen_vecs:
                    j = seen_vecs[key]
                    raise EmbeddingFormatError(
                        f"duplicate vectors for {words[j]!r} and {words[i]!r}; "
                        "pass allow_duplicates=True to keep them"
                    )
                seen_vecs[key] = i

        return cls(
            words=words,
            vectors=vectors,
            dim=r,
            normalized=True,
            allows_duplicates=allow_duplicates,
        )


def _parse_row(line, lineno):
    parts = line.split()
    if len(parts) < 2:
        raise EmbeddingFormatError(f"line {lineno}: expected 'token x1 ...'")
    token = parts[0]
    try:
        coords = [float(x) for x in parts[1:]]
    except ValueError as exc:
        raise EmbeddingFormatError(f"line {lineno}: bad coordinate ({exc})") from exc
    return token, coords


def load_embeddings(path, min_norm=1e-12, allow_duplicates=False):
    """Load an embedding file into an EmbeddingSpace.

    The header is detected by whether the first line has exactly two integer
    fields. Rows whose dimensionality disagrees with the first row (or the
    header) are rejected.
    """
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise EmbeddingFormatError(f"cannot read embeddings {path}: {exc}") from exc

    words = []
    rows = []
    declared = None  # (N, r) from a word2vec header
    dim = None
    with fh:
        first = fh.readline()
        if not first.strip():
            raise EmbeddingFormatError("empty embedding file")
        fields = first.split()
        is_header = len(fields) == 2 and all(
            f.lstrip("+").isdigit() for f in fields
        )
        if is_header:
            declared = (int(fields[0]), int(fields[1]))
            if declared[0] < 2 or declared[1] < 1:
                raise EmbeddingFormatError(
                    f"header declares N={declared[0]}, r={declared[1]}; "
                    "need N >= 2 and r >= 1"
                )
        else:
            token, coords = _parse_row(first, 1)
            words.append(token)
            rows.append(coords)
            dim = len(coords)

        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            token, coords = _parse_row(line, lineno)
            if dim is None:
                dim = len(coords)
            elif len(coords) != dim:
                raise EmbeddingFormatError(
                    f"line {lineno}: {len(coords)} coordinates, expected {dim}"
                )
            words.append(token)
            rows.append(coords)

    if declared is not None:
        n_decl, r_decl = declared
        if len(rows) != n_decl:
            raise EmbeddingFormatError(
                f"header declares {n_decl} rows but file has {len(rows)}"
            )
        if dim != r_decl:
            raise EmbeddingFormatError(
                f"header declares dimension {r_decl} but rows have {dim}"
            )

    if not rows:
        raise EmbeddingFormatError("embedding file has no vector rows")
    matrix = np.array(rows, dtype=np.float64)
    return EmbeddingSpace.from_vectors(
        words, matrix, min_norm=min_norm, allow_duplicates=allow_duplicates
    )


@dataclass(frozen=True)
class SeedDictionary:
    """Seed keywords resolved against a vocabulary.

    seeds holds the resolved tokens in first-occurrence order; unresolved
    holds the deduplicated tokens that were not found, in input order.
    """

    seeds: tuple[str, ...]
    resolved_indices: tuple[int, ...]
    unresolved: tuple[str, ...]

    def __len__(self):
        return len(self.seeds)


def resolve_tokens(vocabulary_index, tokens):
    """Resolve raw seed tokens against a token -> index mapping.

    Deduplicates preserving first occurrence. Raises SeedResolutionError if
    nothing resolves.
    """
    seen = set()
    resolved = []
    indices = []
    unresolved = []
    for tok in tokens:
        if tok in seen:
            continue
        seen.add(tok)
        idx = vocabulary_index.get(tok)
        if idx is None:
            unresolved.append(tok)
        else:
            resolved.append(tok)
            indices.append(idx)
    if not resolved:
        raise SeedResolutionError(
            f"none of the {len(seen)} seed keywords resolve against the vocabulary"
        )
    return SeedDictionary(
        seeds=tuple(resolved),
        resolved_indices=tuple(indices),
        unresolved=tuple(unresolved),
    )


def resolve_seeds(space, tokens):
    """Resolve seed tokens against an EmbeddingSpace vocabulary."""
    return resolve_tokens(space._index, tokens)


def filter_vocabulary(corpus, min_doc_count=1, max_doc_fraction=1.0):
    """Tokens whose document frequency lies in [min_doc_count, max_doc_fraction * |corpus|].

    Used to subset an embedding vocabulary before graph construction.
    """
    if min_doc_count < 1:
        raise ConfigError("min_doc_count must be >= 1")
    if not (0.0 < max_doc_fraction <= 1.0):
        raise ConfigError("max_doc_fraction must be in (0, 1]")
    n_docs = len(corpus)
    if n_docs == 0:
        raise CorpusFormatError("cannot filter vocabulary against an empty corpus")
    from .corpus import document_frequencies

    ceiling = max_doc_fraction * n_docs
    df = document_frequencies(corpus)
    return {tok for tok, c in df.items() if min_doc_count <= c <= ceiling}


def subset_space(space, keep):
    """Restrict an EmbeddingSpace to tokens in `keep`, preserving order."""
    mask = [i for i, w in enumerate(space.words) if w in keep]
    if len(mask) < 2:
        raise EmbeddingFormatError(
            f"vocabulary filter keeps {len(mask)} token(s); need at least 2"
        )
    words = tuple(space.words[i] for i in mask)
    vectors = space.vectors[mask].copy()
    return EmbeddingSpace(
        words=words,
        vectors=vectors,
        dim=space.dim,
        normalized=True,
        allows_duplicates=space.allows_duplicates,
    )
