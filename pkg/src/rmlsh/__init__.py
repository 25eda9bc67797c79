"""Relevance-model retrieval with hyperplane-LSH candidate pruning.

The library estimates query relevance models from pseudo-feedback
documents, optionally restricts the second-pass ranking to documents that
collide with the model vector under random-hyperplane hashing, and
measures the effectiveness/efficiency trade-off that restriction buys.
"""
from .corpus import parse_trec, parse_tsv, read_corpus, tokenize
from .errors import (
    ArtifactExistsError,
    ConfigError,
    CorpusFormatError,
    DuplicateDocnoError,
    EmptyFeedbackError,
    EmptyQueryError,
    IndexFormatError,
    UnjudgedQueryError,
    ZeroVarianceError,
)
from .evaluation import (
    interpolated_rp,
    load_qrels,
    load_run,
    load_topics,
    paired_ttest,
    pareto_frontier,
    precision_at_5,
    sweep,
)
from .index import InvertedIndex, build_index
from .lm import CollectionModel, SmoothingConfig, doc_prob, query_ids, query_likelihood
from .lsh import HyperplaneFamily, LshConfig, LshIndex, build_lsh, candidates, signature
from .relevance import RelevanceModel, estimate_rm, prune, rm_vector
from .retrieval import (
    OpCounter,
    PipelineConfig,
    complexity_estimate,
    kl_rank,
    parse_label,
    run_query,
)

__version__ = "0.1.0"

__all__ = [
    "ArtifactExistsError",
    "CollectionModel",
    "ConfigError",
    "CorpusFormatError",
    "DuplicateDocnoError",
    "EmptyFeedbackError",
    "EmptyQueryError",
    "HyperplaneFamily",
    "IndexFormatError",
    "InvertedIndex",
    "LshConfig",
    "LshIndex",
    "OpCounter",
    "PipelineConfig",
    "RelevanceModel",
    "SmoothingConfig",
    "UnjudgedQueryError",
    "ZeroVarianceError",
    "build_index",
    "build_lsh",
    "candidates",
    "complexity_estimate",
    "doc_prob",
    "estimate_rm",
    "interpolated_rp",
    "kl_rank",
    "load_qrels",
    "load_run",
    "load_topics",
    "paired_ttest",
    "pareto_frontier",
    "parse_label",
    "parse_trec",
    "parse_tsv",
    "precision_at_5",
    "prune",
    "query_ids",
    "query_likelihood",
    "read_corpus",
    "rm_vector",
    "run_query",
    "signature",
    "sweep",
    "tokenize",
    "__version__",
]
