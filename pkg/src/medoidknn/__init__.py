"""Text categorization by weighted kNN over a medoid-condensed training
set: tokenize, weight with tf-idf, purge outliers, cluster each category
around medoids under token edit distance, and classify against the medoid
vectors with cosine similarity."""

from .classifier import (
    DEFAULT_K,
    SCHEMA_VERSION,
    Neighbor,
    Prediction,
    WeightMode,
    classify,
    dudani_weights,
    find_neighbors,
    load_model,
    rank_weights,
    save_model,
)
from .condense import (
    CategoryStats,
    Cluster,
    ClusterModel,
    CondensedModel,
    CondenseParams,
    Representative,
    build_condensed_model,
    build_full_model,
    drop_multilabel,
    kmedoids,
    prune_small_clusters,
    purge_outliers,
)
from .config import PipelineConfig, load_config
from .corpus import (
    Corpus,
    Document,
    Split,
    apply_split,
    filter_categories,
    load_corpus,
    save_corpus,
)
from .errors import (
    DomainError,
    DuplicateId,
    EmptyCategory,
    EmptyModel,
    EmptyResult,
    EmptyResultError,
    EmptyVocabulary,
    InputError,
    InvalidK,
    IoFailure,
    MalformedRecord,
    ModelVersionMismatch,
    NegativeWeight,
    PipelineError,
    UnknownDocId,
    UnsortedInput,
)
from .evaluation import (
    CategoryCounts,
    EvalReport,
    evaluate,
    f1,
    format_table,
    format_tsv,
    precision,
    recall,
)
from .pipeline import (
    TrainResult,
    TrainStats,
    classify_corpus,
    restrict_to_categories,
    train_full_baseline,
    train_pipeline,
    vectorize_document,
)
from .preprocess import (
    ConflationMap,
    conflate_terms,
    load_stopwords,
    normalize,
    tokenize,
)
from .similarity import cosine, cosine_distance, dice, digrams, levenshtein
from .vectorspace import (
    IdfBase,
    SparseVector,
    TermStats,
    Vocabulary,
    Weighting,
    build_vocabulary,
    select_features,
    tfidf_weight,
    vectorize,
    vectorize_with_id,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_K",
    "SCHEMA_VERSION",
    "CategoryCounts",
    "CategoryStats",
    "Cluster",
    "ClusterModel",
    "CondenseParams",
    "CondensedModel",
    "ConflationMap",
    "Corpus",
    "Document",
    "DomainError",
    "DuplicateId",
    "EmptyCategory",
    "EmptyModel",
    "EmptyResult",
    "EmptyResultError",
    "EmptyVocabulary",
    "EvalReport",
    "IdfBase",
    "InputError",
    "InvalidK",
    "IoFailure",
    "MalformedRecord",
    "ModelVersionMismatch",
    "NegativeWeight",
    "Neighbor",
    "PipelineConfig",
    "PipelineError",
    "Prediction",
    "Representative",
    "SparseVector",
    "Split",
    "TermStats",
    "TrainResult",
    "TrainStats",
    "UnknownDocId",
    "UnsortedInput",
    "Vocabulary",
    "WeightMode",
    "Weighting",
    "apply_split",
    "build_condensed_model",
    "build_full_model",
    "build_vocabulary",
    "classify",
    "classify_corpus",
    "conflate_terms",
    "cosine",
    "cosine_distance",
    "dice",
    "digrams",
    "drop_multilabel",
    "dudani_weights",
    "evaluate",
    "f1",
    "filter_categories",
    "find_neighbors",
    "format_table",
    "format_tsv",
    "kmedoids",
    "levenshtein",
    "load_config",
    "load_corpus",
    "load_model",
    "load_stopwords",
    "normalize",
    "precision",
    "prune_small_clusters",
    "purge_outliers",
    "rank_weights",
    "recall",
    "restrict_to_categories",
    "save_corpus",
    "save_model",
    "select_features",
    "tfidf_weight",
    "tokenize",
    "train_full_baseline",
    "train_pipeline",
    "vectorize",
    "vectorize_document",
    "vectorize_with_id",
]
