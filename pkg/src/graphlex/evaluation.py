"""Quantitative evaluation of expanded dictionaries.

A dictionary W acts as a binary classifier: a document is positive iff its
token set intersects W. Quality is macro-averaged precision/recall/F1 over
both classes. Per-word quality is the likelihood ratio

    LR(w) = P(w in doc | label 1) / P(w in doc | label 0)

with a +inf sentinel when only true documents contain w; words in no labeled
document are undefined and excluded. Two samples of ratios are compared with
a one-sided Mann-Whitney U test (midrank ties, exact enumeration for small
samples, tie-corrected normal approximation otherwise).

The sweep utility grids an expander's parameters, discards points whose
discovered count falls outside a size window, and selects the best train
macro-F1 (ties: smaller dictionary, then lexicographically smaller
parameter tuple).
"""

from __future__ import annotations

import itertools
import math
import statistics
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cknn import build_cknn
from .errors import EvaluationError, SweepError
from .expanders import (
    expand_ikea,
    expand_knn,
    expand_lgde,
    expand_textrank,
    expand_threshold,
)
from .similarity import pairwise_matrices


@dataclass(frozen=True)
class EvalReport:
    macro_precision: float
    macro_recall: float
    macro_f1: float
    tp: int
    fp: int
    tn: int
    fn: int
    dictionary_size: int = 0
    discovered_size: int = 0
    per_class: tuple = ()

    def to_payload(self):
        return {
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "confusion": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
            "dictionary_size": self.dictionary_size,
            "discovered_size": self.discovered_size,
            "per_class": [
                {"label": c, "precision": p, "recall": r, "f1": f}
                for c, p, r, f in self.per_class
            ],
        }


def classify(dictionary, corpus, discovered_only=False):
    """Per-document predictions: 1 iff the document shares a token with W.

    With discovered_only the classifier uses W \\ W0, i.e. only discovered
    words. Returns an int array aligned with corpus.documents.
    """
    if discovered_only:
        tokens = set(dictionary.discovered)
    else:
        tokens = set(dictionary.all_tokens())
    if not any(d.label is not None for d in corpus.documents):
        raise EvaluationError("corpus has no labeled documents")
    return np.array(
        [1 if d.token_set & tokens else 0 for d in corpus.documents], dtype=int
    )


def _class_prf(predictions, labels, cls):
    pred_c = int(np.sum(predictions == cls))
    true_c = int(np.sum(labels == cls))
    tp_c = int(np.sum((predictions == cls) & (labels == cls)))
    if pred_c == 0 and true_c == 0:
        return 1.0, 1.0, 1.0  # vacuously perfect
    precision = tp_c / pred_c if pred_c > 0 else 0.0
    recall = tp_c / true_c if true_c > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def macro_metrics(predictions, labels, dictionary_size=0, discovered_size=0):
    """Macro-averaged P/R/F1 over classes {0, 1} plus the confusion counts.

    Degenerate classes follow a frozen convention: zero predicted positives
    give precision 0 and F1 0, unless the class also has zero true members,
    in which case the class scores 1 across the board.
    """
    predictions = np.asarray(predictions, dtype=int)
    labels = np.asarray(labels, dtype=int)
    if predictions.shape != labels.shape or predictions.size == 0:
        raise EvaluationError("predictions and labels must be equal-length and non-empty")

    per_class = []
    for cls in (1, 0):
        p, r, f = _class_prf(predictions, labels, cls)
        per_class.append((cls, p, r, f))

    tp = int(np.sum((predictions == 1) & (labels == 1)))
    fp = int(np.sum((predictions == 1) & (labels == 0)))
    tn = int(np.sum((predictions == 0) & (labels == 0)))
    fn = int(np.sum((predictions == 0) & (labels == 1)))

    return EvalReport(
        macro_precision=(per_class[0][1] + per_class[1][1]) / 2,
        macro_recall=(per_class[0][2] + per_class[1][2]) / 2,
        macro_f1=(per_class[0][3] + per_class[1][3]) / 2,
        tp=tp, fp=fp, tn=tn, fn=fn,
        dictionary_size=dictionary_size,
        discovered_size=discovered_size,
        per_class=tuple(per_class),
    )


def evaluate(dictionary, corpus, discovered_only=False):
    """Classify the corpus with the dictionary and score the labeled part."""
    predictions = classify(dictionary, corpus, discovered_only=discovered_only)
    labeled_idx = [i for i, d in enumerate(corpus.documents) if d.label is not None]
    labels = np.array([corpus.documents[i].label for i in labeled_idx], dtype=int)
    return macro_metrics(
        predictions[labeled_idx],
        labels,
        dictionary_size=len(dictionary),
        discovered_size=len(dictionary.discovered),
    )


@dataclass(frozen=True)
class WordLikelihood:
    token: str
    lr: float
    p_true: float
    p_false: float
    true_count: int
    false_count: int


def likelihood_ratios_for_tokens(tokens, corpus, haldane=False):
    """Likelihood ratios for an explicit token list, in the given order.

    Words contained in no labeled document are undefined and omitted (the
    Haldane correction makes every word defined, so nothing is omitted
    there). Requires at least one document of each label.
    """
    true_docs = [d for d in corpus.documents if d.label == 1]
    false_docs = [d for d in corpus.documents if d.label == 0]
    if not true_docs or not false_docs:
        raise EvaluationError("need at least one document of each label")
    n_true, n_false = len(true_docs), len(false_docs)

    out = []
    for token in tokens:
        ct = sum(1 for d in true_docs if token in d.token_set)
        cf = sum(1 for d in false_docs if token in d.token_set)
        if haldane:
            p_true = (ct + 0.5) / (n_true + 1)
            p_false = (cf + 0.5) / (n_false + 1)
            lr = p_true / p_false
        else:
            p_true = ct / n_true
            p_false = cf / n_false
            if cf > 0:
                lr = p_true / p_false
            elif ct > 0:
                lr = math.inf
            else:
                continue  # undefined: excluded
        out.append(WordLikelihood(token, lr, p_true, p_false, ct, cf))
    return out


def likelihood_ratios(dictionary, corpus, haldane=False):
    """Likelihood ratios for every word of the dictionary (seeds first)."""
    return likelihood_ratios_for_tokens(dictionary.all_tokens(), corpus, haldane=haldane)


def median_lr(values):
    """Median of likelihood ratios; +inf sorts above every real."""
    values = list(values)
    if not values:
        raise EvaluationError("median of an empty likelihood-ratio sample")
    return float(statistics.median(sorted(values)))


def _midranks(values):
    """1-based midranks; +inf ties at the top like any other shared value."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j + 2) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        i = j + 1
    return ranks


def _exact_tail_counts(scaled_ranks, group_size):
    """Distribution of the scaled rank sum over all size-`group_size` subsets.

    Returns an int64 array d with d[s] = number of subsets whose scaled rank
    sum is s. Counts stay below 2^63 for every n1 * n2 <= 400 split.
    """
    total = sum(scaled_ranks)
    f = np.zeros((group_size + 1, total + 1), dtype=np.int64)
    f[0, 0] = 1
    for r in scaled_ranks:
        for j in range(group_size, 0, -1):
            f[j, r:] += f[j - 1, : total + 1 - r]
    return f[group_size]


def mann_whitney_u(a, b, alternative="greater", method="auto"):
    """Mann-Whitney U test for two real samples (+inf allowed).

    U is the statistic of sample `a` computed from midranks. The exact path
    enumerates the rank-sum distribution over all subset assignments (valid
    under ties) and is taken when n_a * n_b <= 400; otherwise the normal
    approximation with tie-corrected variance and continuity correction is
    used. alternative is "greater" (a stochastically larger, the default),
    "less", or "two-sided". Zero pooled variance yields p = 1 with a warning.

    Returns (u_statistic, p_value).
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    if not a or not b:
        raise EvaluationError("both samples must be non-empty")
    if any(math.isnan(x) for x in a + b):
        raise EvaluationError("samples must not contain NaN")
    if alternative not in ("greater", "less", "two-sided"):
        raise EvaluationError(f"unknown alternative {alternative!r}")
    if method not in ("auto", "exact", "normal"):
        raise EvaluationError(f"unknown method {method!r}")

    n1, n2 = len(a), len(b)
    n = n1 + n2
    pooled = a + b
    ranks = _midranks(pooled)
    r1 = sum(ranks[:n1])
    u1 = r1 - n1 * (n1 + 1) / 2

    degenerate = all(x == pooled[0] for x in pooled)
    if degenerate:
        warnings.warn("all pooled values identical: zero variance, p = 1",
                      stacklevel=2)
        return u1, 1.0

    if method == "auto":
        method = "exact" if n1 * n2 <= 400 else "normal"

    if method == "exact":
        scaled = [int(round(2 * r)) for r in ranks]
        total = sum(scaled)
        r1s = sum(scaled[:n1])
        if n1 <= n2:
            dist = _exact_tail_counts(scaled, n1)
            count_ge = int(dist[r1s:].sum())
            count_le = int(dist[: r1s + 1].sum())
        else:
            # enumerate the smaller group and mirror: R1 >= r <=> R2 <= total - r
            dist = _exact_tail_counts(scaled, n2)
            count_ge = int(dist[: total - r1s + 1].sum())
            count_le = int(dist[total - r1s:].sum())
        n_subsets = int(dist.sum())
        p_greater = count_ge / n_subsets
        p_less = count_le / n_subsets
        if alternative == "greater":
            p = p_greater
        elif alternative == "less":
            p = p_less
        else:
            p = min(1.0, 2.0 * min(p_greater, p_less))
        return u1, p

    # normal approximation with tie correction and continuity correction
    tie_term = 0.0
    seen = {}
    for x in pooled:
        seen[x] = seen.get(x, 0) + 1
    for count in seen.values():
        tie_term += count**3 - count
    var = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if var <= 0:
        warnings.warn("tie-degenerate variance, p = 1", stacklevel=2)
        return u1, 1.0
    sd = math.sqrt(var)
    mean = n1 * n2 / 2.0

    def sf(z):
        return 0.5 * math.erfc(z / math.sqrt(2.0))

    if alternative == "greater":
        p = sf((u1 - mean - 0.5) / sd)
    elif alternative == "less":
        p = sf(-((u1 - mean + 0.5) / sd))
    else:
        shift = u1 - mean
        shift -= 0.5 * (1 if shift > 0 else -1 if shift < 0 else 0)
        p = min(1.0, 2.0 * sf(abs(shift) / sd))
    return u1, p


_PARAM_ORDER = {
    "lgde": ("k", "t"),
    "threshold": ("epsilon",),
    "knn": ("k",),
    "ikea": ("epsilon",),
    "textrank": ("window", "top_k"),
}


@dataclass(frozen=True)
class SweepResult:
    method: str
    grid: tuple
    best: dict
    best_dictionary: object
    min_discovered: int
    max_discovered: int
    evaluate_discovered_only: bool

    def to_payload(self):
        return {
            "method": self.method,
            "constraints": {
                "min_discovered": self.min_discovered,
                "max_discovered": self.max_discovered,
            },
            "evaluate_discovered_only": self.evaluate_discovered_only,
            "best": self.best,
            "grid": list(self.grid),
        }


def sweep(method, param_grid, corpus, *, min_discovered, max_discovered,
          space=None, seeds=None, evaluate_discovered_only=False,
          delta=1.0, max_size=100, max_iterations=100, damping=0.85,
          threads=1):
    """Grid-evaluate an expander and select the best admissible point.

    param_grid maps the method's swept parameter names to value lists; the
    grid is their cartesian product in canonical order (see _PARAM_ORDER).
    A point is admissible when min_discovered <= discovered count <=
    max_discovered. Admissible points are scored by train macro-F1 on
    `corpus` (with W \\ W0 when evaluate_discovered_only). Ties prefer the
    smaller dictionary, then the lexicographically smaller parameter tuple.

    Raises SweepError when no point is admissible (listing attained sizes).
    """
    if method not in _PARAM_ORDER:
        raise SweepError(f"unknown method {method!r}")
    order = _PARAM_ORDER[method]
    if set(param_grid) != set(order):
        raise SweepError(
            f"{method} sweeps over {sorted(order)}, got {sorted(param_grid)}"
        )
    for name in order:
        if not param_grid[name]:
            raise SweepError(f"empty grid for parameter {name!r}")
    if min_discovered < 0 or max_discovered < min_discovered:
        raise SweepError(
            f"bad size window [{min_discovered}, {max_discovered}]"
        )

    if method in ("lgde", "threshold", "knn", "ikea") and (space is None or seeds is None):
        raise SweepError(f"{method} sweep needs an embedding space and seeds")
    if method == "textrank" and seeds is None:
        raise SweepError("textrank sweep needs seeds")

    points = list(itertools.product(*[param_grid[name] for name in order]))

    graphs = {}
    if method == "lgde":
        matrices = pairwise_matrices(space)
        for k in dict.fromkeys(param_grid["k"]):
            graphs[k] = build_cknn(matrices, k, delta)

    def expand_point(point):
        params = dict(zip(order, point))
        if method == "lgde":
            return expand_lgde(graphs[params["k"]], seeds, params["t"],
                               max_size=max_size, threads=1)
        if method == "threshold":
            return expand_threshold(space, seeds, params["epsilon"])
        if method == "knn":
            return expand_knn(space, seeds, params["k"])
        if method == "ikea":
            return expand_ikea(space, seeds, params["epsilon"],
                               max_iterations=max_iterations)
        return expand_textrank(corpus, seeds, window=params["window"],
                               top_k=params["top_k"], damping=damping)

    def eval_point(point):
        dictionary = expand_point(point)
        entry = {
            "params": dict(zip(order, point)),
            "dictionary_size": len(dictionary),
            "discovered_size": len(dictionary.discovered),
            "admissible": min_discovered <= len(dictionary.discovered) <= max_discovered,
            "macro_f1": None,
            "macro_precision": None,
            "macro_recall": None,
        }
        if entry["admissible"]:
            report = evaluate(dictionary, corpus,
                              discovered_only=evaluate_discovered_only)
            entry["macro_f1"] = report.macro_f1
            entry["macro_precision"] = report.macro_precision
            entry["macro_recall"] = report.macro_recall
        return entry, dictionary

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(eval_point, points))
    else:
        results = [eval_point(p) for p in points]

    best_key = None
    best_entry = None
    best_dictionary = None
    for point, (entry, dictionary) in zip(points, results):
        if not entry["admissible"]:
            continue
        key = (-entry["macro_f1"], entry["dictionary_size"], tuple(point))
        if best_key is None or key < best_key:
            best_key = key
            best_entry = entry
            best_dictionary = dictionary

    if best_entry is None:
        attained = ", ".join(
            f"{entry['params']} -> {entry['discovered_size']}"
            for entry, _ in results
        )
        raise SweepError(
            f"no grid point satisfies the size window "
            f"[{min_discovered}, {max_discovered}]; attained: {attained}"
        )

    return SweepResult(
        method=method,
        grid=tuple(entry for entry, _ in results),
        best=best_entry,
        best_dictionary=best_dictionary,
        min_discovered=min_discovered,
        max_discovered=max_discovered,
        evaluate_discovered_only=evaluate_discovered_only,
    )
