"""graphlex: seed dictionary expansion over word-embedding similarity graphs.

Builds a CkNN semantic similarity graph from pre-computed word embeddings and
expands seed keyword dictionaries with diffusion-based local communities,
alongside four classic baselines and a quantitative evaluation harness.
"""

from .cknn import (
    SemanticGraph,
    build_cknn,
    connected_component_of,
    connected_components,
    kth_neighbor_distance,
    read_edgelist,
    write_edgelist,
)
from .corpus import (
    Document,
    LabeledCorpus,
    document_frequencies,
    load_corpus,
    load_stopwords,
    tokenize,
)
from .errors import (
    CommunityError,
    ConfigError,
    CorpusFormatError,
    DegenerateSpaceError,
    EmbeddingFormatError,
    EvaluationError,
    ExpansionError,
    GraphConstructionError,
    GraphlexError,
    SeedResolutionError,
    SweepError,
)
from .evaluation import (
    EvalReport,
    SweepResult,
    WordLikelihood,
    classify,
    evaluate,
    likelihood_ratios,
    likelihood_ratios_for_tokens,
    macro_metrics,
    mann_whitney_u,
    median_lr,
    sweep,
)
from .expanders import (
    Dictionary,
    expand_ikea,
    expand_knn,
    expand_lgde,
    expand_textrank,
    expand_threshold,
    read_dictionary,
    write_dictionary,
)
from .severability import (
    Community,
    WalkKernel,
    brute_force_community,
    find_community,
    quasi_stationary,
    severability_score,
    walk_kernel,
)
from .similarity import PairwiseMatrices, cosine_similarity, pairwise_matrices
from .vector_store import (
    EmbeddingSpace,
    SeedDictionary,
    filter_vocabulary,
    load_embeddings,
    resolve_seeds,
    resolve_tokens,
    subset_space,
    unit_normalize,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
