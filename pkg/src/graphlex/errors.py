"""Error taxonomy shared across the library and the CLI.

Every failure the library raises on purpose derives from GraphlexError and
carries a short machine-readable category used by the CLI for its single-line
diagnostics.
"""


class GraphlexError(Exception):
    category = "error"


class EmbeddingFormatError(GraphlexError):
    """Unreadable or malformed embedding file, zero-norm or duplicate vectors."""

    category = "embedding-format"


class DegenerateSpaceError(GraphlexError):
    """All pairwise distances are zero; the max-normalization is undefined."""

    category = "degenerate-space"


class SeedResolutionError(GraphlexError):
    """No seed keyword could be resolved against the vocabulary."""

    category = "seed-resolution"


class GraphConstructionError(GraphlexError):
    """Invalid CkNN parameters or inputs (zero k-th distances, bad edge lists)."""

    category = "graph-construction"


class CommunityError(GraphlexError):
    """Invalid community query: disconnected members, bad t, oversized component."""

    category = "community"


class CorpusFormatError(GraphlexError):
    """Malformed corpus record, duplicate document id, or label outside {0,1}."""

    category = "corpus-format"


class ExpansionError(GraphlexError):
    """Expansion cannot run: bad parameters or empty co-occurrence structure."""

    category = "expansion"


class EvaluationError(GraphlexError):
    """Metrics are undefined for the given inputs (no labels, empty samples)."""

    category = "evaluation"


class SweepError(GraphlexError):
    """Every grid point violated the size constraints, or the grid is empty."""

    category = "sweep"


class ConfigError(GraphlexError):
    """Bad CLI configuration: unknown keys, unparsable grids, missing inputs."""

    category = "config"
