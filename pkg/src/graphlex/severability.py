"""Diffusion-based local communities via severability.

A discrete random walk on the graph follows the row-stochastic kernel
P = D^-1 A. For a candidate community C and Markov time t, restrict P to C
(call it Q) and score C by two quantities in [0, 1]:

  retention  rho(C, t) = 1^T Q^t 1 / |C|
      the probability that a walk started uniformly in C is still inside
      after t steps;

  mixing     mu(C, t) = 1 - mean_i TV(qbar, Q^t_i / |Q^t_i|)
      one minus the mean total-variation distance between the quasi-
      stationary distribution qbar of Q and the normalized rows of Q^t.
      Rows with zero mass (the walk always escaped) count as TV = 1.

severability is their average sigma = (rho + mu) / 2. A good community holds
the walk and mixes internally before the walk leaks out.

qbar is the dominant left eigenvector of Q normalized to sum 1, computed by
power iteration (tolerance 1e-12, capped at 1e5 iterations). The iteration
runs on the half-lazy map (Q + I)/2, which shares the eigenvector and
converges for periodic restrictions too (an even path oscillates forever
under plain Q).
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CommunityError

POWER_TOL = 1e-12
POWER_MAX_ITER = 100_000
NILPOTENT_FLOOR = 1e-300
BRUTE_FORCE_CAP = 16


@dataclass(frozen=True)
class WalkKernel:
    """Row-stochastic transition kernel of a SemanticGraph.

    transition is CSR over all nodes; rows of isolated nodes (strength zero)
    are empty and their indices are listed in `isolated`. Every stored row
    sums to 1 within 1e-12.
    """

    transition: sp.csr_matrix
    isolated: frozenset[int]
    n_nodes: int
    node_tokens: tuple[str, ...]

    def neighbors(self, i):
        """Indices j with P[i, j] > 0, ascending."""
        t = self.transition
        idx = t.indices[t.indptr[i]:t.indptr[i + 1]]
        dat = t.data[t.indptr[i]:t.indptr[i + 1]]
        return idx[dat > 0]


def walk_kernel(graph):
    """Normalize graph adjacency rows into a WalkKernel.

    Nodes with zero strength (no edges, or only zero-weight boundary edges)
    are recorded as isolated and keep an empty row.
    """
    strengths = np.asarray(graph.adjacency.sum(axis=1)).ravel()
    isolated = frozenset(int(i) for i in np.flatnonzero(strengths == 0.0))
    inv = np.ones_like(strengths)
    nz = strengths > 0
    inv[nz] = 1.0 / strengths[nz]
    transition = sp.diags(inv) @ graph.adjacency
    transition = sp.csr_matrix(transition)
    if isolated:
        # drop any explicit zeros left in the isolated rows
        transition.eliminate_zeros()
    transition.sort_indices()
    return WalkKernel(
        transition=transition,
        isolated=isolated,
        n_nodes=graph.n_nodes,
        node_tokens=tuple(graph.node_tokens),
    )


def _members_connected(kernel, members):
    """BFS connectivity of `members` in the walk structure (P > 0)."""
    members = set(members)
    start = min(members)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for v in kernel.neighbors(u):
                v = int(v)
                if v in members and v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return len(seen) == len(members)


def quasi_stationary(q, tol=POWER_TOL, max_iter=POWER_MAX_ITER):
    """Dominant left eigenvector of a substochastic matrix, sum-normalized.

    Power iteration from the uniform distribution on the half-lazy map
    (q + I)/2. Returns None when the iterate's mass underflows below 1e-300,
    the numerically nilpotent case (only reachable when q is the zero
    matrix, since connected member sets give q a symmetric sparsity pattern).
    """
    c = q.shape[0]
    if c == 1:
        return np.array([1.0])
    x = np.full(c, 1.0 / c)
    for _ in range(max_iter):
        z = x @ q
        mass = z.sum()
        if mass < NILPOTENT_FLOOR:
            return None
        y = 0.5 * (z + x)
        y /= y.sum()
        if np.abs(y - x).sum() <= tol:
            return y
        x = y
    warnings.warn(
        f"quasi-stationary power iteration hit the {max_iter} iteration cap",
        stacklevel=2,
    )
    return x


def severability_score(kernel, members, t):
    """Score a member set at Markov time t.

    Returns (sigma, retention, mixing). Members must be non-empty and induce
    a connected subgraph of the walk structure; t must be a whole number
    >= 1. Rows of Q^t with zero mass contribute TV = 1; if qbar cannot be
    computed because Q is numerically nilpotent, mixing is 0 with a warning.
    """
    members = sorted(set(int(m) for m in members))
    if not members:
        raise CommunityError("empty member set")
    if members[0] < 0 or members[-1] >= kernel.n_nodes:
        raise CommunityError(f"member index outside 0..{kernel.n_nodes - 1}")
    if t < 1 or int(t) != t:
        raise CommunityError(f"t must be a whole number >= 1, got {t}")
    t = int(t)
    if not _members_connected(kernel, members):
        raise CommunityError("members do not induce a connected subgraph")

    q = kernel.transition[np.ix_(members, members)].toarray()
    qt = np.linalg.matrix_power(q, t)
    c = len(members)
    retention = qt.sum() / c

    row_mass = qt.sum(axis=1)
    escaped = row_mass == 0.0
    if escaped.all():
        mixing = 0.0
    else:
        qbar = quasi_stationary(q)
        if qbar is None:
            warnings.warn("restriction is numerically nilpotent; mixing set to 0",
                          stacklevel=2)
            mixing = 0.0
        else:
            safe = np.where(escaped, 1.0, row_mass)
            rows = qt / safe[:, None]
            tv = 0.5 * np.abs(rows - qbar[None, :]).sum(axis=1)
            tv[escaped] = 1.0
            mixing = 1.0 - tv.mean()

    sigma = 0.5 * (retention + mixing)
    clamp = lambda x: min(1.0, max(0.0, float(x)))
    return clamp(sigma), clamp(retention), clamp(mixing)


@dataclass(frozen=True)
class Community:
    """A local community around a seed node."""

    members: frozenset[int]
    seed: int
    t: int
    sigma: float
    retention: float
    mixing: float

    def __len__(self):
        return len(self.members)

    def to_report(self, node_tokens):
        """JSON-ready view with members as tokens (ascending index order)."""
        return {
            "seed": node_tokens[self.seed],
            "t": self.t,
            "members": [node_tokens[i] for i in sorted(self.members)],
            "sigma": self.sigma,
            "retention": self.retention,
            "mixing": self.mixing,
        }


def find_community(kernel, seed, t, max_size=100):
    """Greedy local severability optimization around a seed node.

    Alternates additions and prunes: each round evaluates every boundary
    node and admits the best strictly-improving one (ties to the lowest
    index); after an addition, repeatedly removes whichever single non-seed
    member strictly improves sigma while keeping the set connected. Stops
    when no addition improves sigma or the community reached max_size.

    An isolated seed short-circuits to the singleton with sigma 0.
    """
    seed = int(seed)
    if not (0 <= seed < kernel.n_nodes):
        raise CommunityError(f"seed {seed} outside 0..{kernel.n_nodes - 1}")
    if t < 1 or int(t) != t:
        raise CommunityError(f"t must be a whole number >= 1, got {t}")
    if max_size < 1:
        raise CommunityError(f"max_size must be >= 1, got {max_size}")
    if seed in kernel.isolated:
        return Community(frozenset({seed}), seed, int(t), 0.0, 0.0, 0.0)

    members = {seed}
    sigma, retention, mixing = severability_score(kernel, members, t)

    while len(members) < max_size:
        boundary = set()
        for u in members:
            boundary.update(int(v) for v in kernel.neighbors(u))
        boundary -= members

        best = None
        for v in sorted(boundary):
            cand = severability_score(kernel, members | {v}, t)
            if cand[0] > sigma and (best is None or cand[0] > best[1][0]):
                best = (v, cand)
        if best is None:
            break
        members.add(best[0])
        sigma, retention, mixing = best[1]

        while len(members) > 1:
            best_rm = None
            for v in sorted(members - {seed}):
                reduced = members - {v}
                if not _members_connected(kernel, reduced):
                    continue
                cand = severability_score(kernel, reduced, t)
                if cand[0] > sigma and (best_rm is None or cand[0] > best_rm[1][0]):
                    best_rm = (v, cand)
            if best_rm is None:
                break
            members.remove(best_rm[0])
            sigma, retention, mixing = best_rm[1]

    return Community(frozenset(members), seed, int(t), sigma, retention, mixing)


def brute_force_community(kernel, seed, t, max_size):
    """Exhaustive severability optimum over connected subsets containing seed.

    Enumerates every connected subset of the seed's component (capped at 16
    nodes) with at most max_size members. Ties break to the lexicographically
    smallest sorted member tuple. Reference implementation for tests; the
    greedy optimizer is the production path.
    """
    seed = int(seed)
    if not (0 <= seed < kernel.n_nodes):
        raise CommunityError(f"seed {seed} outside 0..{kernel.n_nodes - 1}")
    if max_size < 1:
        raise CommunityError(f"max_size must be >= 1, got {max_size}")

    comp = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for u in frontier:
            for v in kernel.neighbors(u):
                v = int(v)
                if v not in comp:
                    comp.add(v)
                    nxt.append(v)
        frontier = nxt
    if len(comp) > BRUTE_FORCE_CAP:
        raise CommunityError(
            f"component has {len(comp)} nodes; brute force capped at {BRUTE_FORCE_CAP}"
        )

    others = sorted(comp - {seed})
    best = None
    for bits in range(1 << len(others)):
        members = {seed}
        for pos, node in enumerate(others):
            if bits >> pos & 1:
                members.add(node)
        if len(members) > max_size:
            continue
        if not _members_connected(kernel, members):
            continue
        sigma, retention, mixing = severability_score(kernel, members, t)
        key = tuple(sorted(members))
        if (
            best is None
            or sigma > best[0]
            or (sigma == best[0] and key < best[1])
        ):
            best = (sigma, key, retention, mixing)

    sigma, key, retention, mixing = best
    return Community(frozenset(key), seed, int(t), sigma, retention, mixing)


def communities_for_seeds(kernel, seed_indices, t, max_size=100, threads=1):
    """find_community for every seed, in seed order.

    Thread count never changes results: each search is independent and the
    collection order is the input order.
    """
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(
                pool.map(lambda s: find_community(kernel, s, t, max_size), seed_indices)
            )
    return [find_community(kernel, s, t, max_size) for s in seed_indices]
