"""Dictionary expansion strategies.

Every expander maps a resolved seed dictionary to a Dictionary: the seeds
plus an ordered, disjoint set of discovered words with per-word provenance.

  lgde       severability communities around each seed on the CkNN graph;
             a word can be reached through chains of pairwise-similar
             intermediates even when its direct similarity to the seed is low
  threshold  direct cosine neighborhoods, cos(w, v) >= epsilon
  knn        the k most cosine-similar words of each seed
  ikea       iterative thresholding of the mean cosine to the current
             dictionary until a fixpoint
  textrank   weighted PageRank over a sliding-window co-occurrence graph
             built from the documents that contain at least one seed

The similarity baselines score raw cosine on the unit vectors, not the
max-normalized similarity the graph uses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExpansionError
from .severability import communities_for_seeds, walk_kernel


@dataclass(frozen=True)
class Dictionary:
    """Seeds plus discovered words with provenance.

    discovered is ordered (ascending tokens, except textrank which keeps
    rank order) and disjoint from seeds. provenance maps each discovered
    token to a small dict describing how it was found.
    """

    seeds: tuple[str, ...]
    discovered: tuple[str, ...]
    provenance: dict
    method: str
    params: dict
    communities: tuple = ()

    def all_tokens(self):
        return list(self.seeds) + list(self.discovered)

    def __len__(self):
        return len(self.seeds) + len(self.discovered)


def _check_epsilon(epsilon):
    # cosine range; the vacuous threshold -1 admits the whole vocabulary
    if not (-1.0 <= epsilon <= 1.0):
        raise ExpansionError(f"epsilon must be in [-1, 1], got {epsilon}")


def expand_lgde(graph, seeds, t, max_size=100, threads=1):
    """Union of severability communities around each resolved seed.

    seeds is a SeedDictionary resolved against the graph's tokens. Isolated
    seeds contribute singleton communities (nothing discovered).
    """
    if t < 1 or int(t) != t:
        raise ExpansionError(f"t must be a whole number >= 1, got {t}")
    for tok, idx in zip(seeds.seeds, seeds.resolved_indices):
        if not (0 <= idx < graph.n_nodes) or graph.node_tokens[idx] != tok:
            raise ExpansionError(f"seed {tok!r} does not resolve to a graph node")

    kernel = walk_kernel(graph)
    communities = communities_for_seeds(
        kernel, seeds.resolved_indices, int(t), max_size=max_size, threads=threads
    )

    seed_set = set(seeds.seeds)
    found_by = {}
    for seed_token, community in zip(seeds.seeds, communities):
        for idx in community.members:
            token = graph.node_tokens[idx]
            if token in seed_set:
                continue
            found_by.setdefault(token, []).append(seed_token)

    discovered = tuple(sorted(found_by))
    provenance = {tok: {"seeds": found_by[tok]} for tok in discovered}
    return Dictionary(
        seeds=tuple(seeds.seeds),
        discovered=discovered,
        provenance=provenance,
        method="lgde",
        params={"t": int(t), "max_size": max_size, "k": graph.k, "delta": graph.delta},
        communities=tuple(communities),
    )


def expand_threshold(space, seeds, epsilon):
    """Union of direct cosine neighborhoods, cos(w, v) >= epsilon."""
    _check_epsilon(epsilon)
    seed_idx = list(seeds.resolved_indices)
    sims = space.vectors @ space.vectors[seed_idx].T
    np.clip(sims, -1.0, 1.0, out=sims)
    hits = sims >= epsilon

    seed_set = set(seeds.seeds)
    found_by = {}
    for i in np.flatnonzero(hits.any(axis=1)):
        token = space.words[i]
        if token in seed_set:
            continue
        found_by[token] = [seeds.seeds[j] for j in np.flatnonzero(hits[i])]

    discovered = tuple(sorted(found_by))
    provenance = {tok: {"seeds": found_by[tok]} for tok in discovered}
    return Dictionary(
        seeds=tuple(seeds.seeds),
        discovered=discovered,
        provenance=provenance,
        method="threshold",
        params={"epsilon": epsilon},
    )


def expand_knn(space, seeds, k):
    """Union of each seed's k most cosine-similar words (self excluded).

    Similarity ties break to the lower index.
    """
    n = len(space)
    if not (1 <= k <= n - 1):
        raise ExpansionError(f"k must be in 1..{n - 1}, got {k}")

    seed_set = set(seeds.seeds)
    found_by = {}
    for seed_token, idx in zip(seeds.seeds, seeds.resolved_indices):
        sims = space.vectors @ space.vectors[idx]
        np.clip(sims, -1.0, 1.0, out=sims)
        sims[idx] = -np.inf
        # descending similarity, ascending index among ties
        order = np.lexsort((np.arange(n), -sims))
        for j in order[:k]:
            token = space.words[j]
            if token in seed_set:
                continue
            found_by.setdefault(token, []).append(seed_token)

    discovered = tuple(sorted(found_by))
    provenance = {tok: {"seeds": found_by[tok]} for tok in discovered}
    return Dictionary(
        seeds=tuple(seeds.seeds),
        discovered=discovered,
        provenance=provenance,
        method="knn",
        params={"k": k},
    )


def expand_ikea(space, seeds, epsilon, max_iterations=100):
    """Iterative mean-similarity thresholding (batch variant).

    Each round admits every candidate whose mean cosine to the current
    dictionary is >= epsilon, all at once, and stops at a fixpoint or after
    max_iterations rounds.
    """
    _check_epsilon(epsilon)
    if max_iterations < 1:
        raise ExpansionError(f"max_iterations must be >= 1, got {max_iterations}")

    n = len(space)
    member = np.zeros(n, dtype=bool)
    member[list(seeds.resolved_indices)] = True
    sims = space.vectors @ space.vectors.T
    np.clip(sims, -1.0, 1.0, out=sims)

    admitted_round = {}
    rounds = 0
    while rounds < max_iterations:
        rounds += 1
        candidates = np.flatnonzero(~member)
        if candidates.size == 0:
            break
        means = sims[np.ix_(candidates, np.flatnonzero(member))].mean(axis=1)
        qualifying = candidates[means >= epsilon]
        if qualifying.size == 0:
            break
        member[qualifying] = True
        for i in qualifying:
            admitted_round[space.words[i]] = rounds

    seed_set = set(seeds.seeds)
    discovered = tuple(sorted(t for t in admitted_round if t not in seed_set))
    provenance = {tok: {"round": admitted_round[tok]} for tok in discovered}
    return Dictionary(
        seeds=tuple(seeds.seeds),
        discovered=discovered,
        provenance=provenance,
        method="ikea",
        params={"epsilon": epsilon, "max_iterations": max_iterations,
                "rounds": rounds},
    )


def _pagerank(nodes, weights, damping, tol=1e-10, max_iter=10_000):
    """Weighted PageRank on an undirected graph given as a pair-weight dict."""
    n = len(nodes)
    pos = {tok: i for i, tok in enumerate(nodes)}
    w = np.zeros((n, n))
    for (a, b), v in weights.items():
        i, j = pos[a], pos[b]
        w[i, j] += v
        w[j, i] += v
    strength = w.sum(axis=1)
    # nodes come from edges, so strength is positive everywhere
    scores = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    for _ in range(max_iter):
        nxt = teleport + damping * (w.T @ (scores / strength))
        if np.abs(nxt - scores).sum() < tol:
            return nxt
        scores = nxt
    return scores


def expand_textrank(corpus, seeds, window=2, top_k=10, damping=0.85):
    """Top-k non-seed words by weighted PageRank over co-occurrences.

    Only documents containing at least one seed token contribute. Tokens
    co-occur when they are fewer than `window` positions apart; each
    co-occurrence adds 1 to the pair's edge weight (self-pairs are skipped).
    Ranking ties break to the ascending token.
    """
    if window < 2:
        raise ExpansionError(f"window must be >= 2, got {window}")
    if top_k < 1:
        raise ExpansionError(f"top_k must be >= 1, got {top_k}")
    if not (0.0 < damping < 1.0):
        raise ExpansionError(f"damping must be in (0, 1), got {damping}")

    seed_set = set(seeds.seeds)
    qualifying = [d for d in corpus.documents if d.token_set & seed_set]
    if not qualifying:
        raise ExpansionError("no document contains a seed keyword")

    weights = {}
    for doc in qualifying:
        toks = doc.tokens
        for i in range(len(toks)):
            for j in range(i + 1, min(i + window, len(toks))):
                if toks[i] == toks[j]:
                    continue
                key = (toks[i], toks[j]) if toks[i] < toks[j] else (toks[j], toks[i])
                weights[key] = weights.get(key, 0) + 1
    if not weights:
        raise ExpansionError("empty co-occurrence graph (no qualifying token pairs)")

    nodes = sorted({tok for pair in weights for tok in pair})
    scores = _pagerank(nodes, weights, damping)
    ranked = sorted(zip(nodes, scores), key=lambda ts: (-ts[1], ts[0]))

    discovered = []
    provenance = {}
    for rank, (token, score) in enumerate(
        (ts for ts in ranked if ts[0] not in seed_set), start=1
    ):
        if len(discovered) == top_k:
            break
        discovered.append(token)
        provenance[token] = {"rank": rank, "score": float(score)}

    return Dictionary(
        seeds=tuple(seeds.seeds),
        discovered=tuple(discovered),
        provenance=provenance,
        method="textrank",
        params={"window": window, "top_k": top_k, "damping": damping},
    )


def write_dictionary(dictionary, path):
    """Write a dictionary file: seeds first, then discovered, comment-marked."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# seeds ({len(dictionary.seeds)})\n")
        for tok in dictionary.seeds:
            fh.write(tok + "\n")
        fh.write(f"# discovered ({len(dictionary.discovered)})\n")
        for tok in dictionary.discovered:
            fh.write(tok + "\n")


def read_dictionary(path):
    """Read a dictionary file back into (seeds, discovered).

    Files without section comments load as seeds only.
    """
    seeds, discovered = [], []
    target = seeds
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ExpansionError(f"cannot read dictionary {path}: {exc}") from exc
    with fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                section = line[1:].strip().lower()
                if section.startswith("discovered"):
                    target = discovered
                elif section.startswith("seeds"):
                    target = seeds
                continue
            target.append(line)
    if not seeds and not discovered:
        raise ExpansionError(f"dictionary {path} is empty")
    return tuple(seeds), tuple(discovered)
