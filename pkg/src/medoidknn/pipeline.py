"""End-to-end wiring: corpus in, condensed model out, predictions out.

The classification side reads every preprocessing choice (stopword list,
conflation map, token length floor, weighting scheme) back out of the
model so a saved model classifies identically in a fresh process.
"""

from __future__ import annotations

import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .classifier import Prediction, WeightMode, _packed, classify
from .condense import (
    CategoryStats,
    CondensedModel,
    CondenseParams,
    build_condensed_model,
    build_full_model,
    drop_multilabel,
)
from .config import PipelineConfig
from .corpus import Corpus, Document, apply_split, filter_categories
from .preprocess import conflate_terms, load_stopwords, normalize, tokenize
from .vectorspace import (
    Vocabulary,
    Weighting,
    build_vocabulary,
    select_features,
    vectorize_with_id,
)


@dataclass(frozen=True)
class TrainStats:
    n_train: int
    n_test: int
    n_unused: int
    n_dropped_multilabel: int
    removed_categories: tuple[str, ...]
    vocabulary_size: int
    n_selected: int
    n_representatives: int
    categories: tuple[CategoryStats, ...]
    train_seconds: float


@dataclass(frozen=True)
class TrainResult:
    model: CondensedModel
    test: Corpus
    stats: TrainStats


def _token_map(
    docs, stopwords: frozenset[str], min_token_len: int
) -> dict[str, list[str]]:
    return {
        doc.id: tokenize(normalize(doc.text), stopwords, min_token_len)
        for doc in docs
    }


def build_feature_space(
    tokens_by_doc: dict[str, list[str]],
    doc_order: list[str],
    config: PipelineConfig,
) -> Vocabulary:
    """Conflate the training vocabulary, collect term statistics, and keep
    the top-weighted features."""
    frequencies: Counter[str] = Counter()
    for doc_id in doc_order:
        frequencies.update(tokens_by_doc[doc_id])
    conflation = conflate_terms(
        frequencies.keys(), tau=config.conflate_tau, frequencies=frequencies
    )
    vocab = build_vocabulary(
        [tokens_by_doc[doc_id] for doc_id in doc_order],
        conflation,
        config.idf_base,
    )
    return select_features(vocab, config.n_features)


def train_pipeline(corpus: Corpus, config: PipelineConfig) -> TrainResult:
    """Split, filter, featurize, and condense a labeled corpus."""
    started = time.perf_counter()
    train, test, n_unused = apply_split(corpus)
    train, test, removed = filter_categories(train, test)
    single = drop_multilabel(train)
    stopwords = load_stopwords(config.stopwords_path)
    tokens_by_doc = _token_map(single, stopwords, config.min_token_len)
    vocab = build_feature_space(
        tokens_by_doc, [doc.id for doc in single], config
    )
    params = CondenseParams(
        k_fraction=config.k_fraction,
        min_cluster_size=config.min_cluster_size,
        outlier_sigma=config.outlier_sigma,
        edit_cap=config.edit_cap,
        restarts=config.restarts,
        max_iter=config.max_iter,
        seed=config.seed,
        threads=config.threads,
        weighting=config.weighting,
        fallback_full_category=config.fallback_full_category,
    )
    model, cat_stats = build_condensed_model(
        single, tokens_by_doc, vocab, params, stopwords, config.to_dict()
    )
    elapsed = time.perf_counter() - started
    stats = TrainStats(
        n_train=len(single),
        n_test=len(test),
        n_unused=n_unused,
        n_dropped_multilabel=len(train) - len(single),
        removed_categories=tuple(sorted(removed)),
        vocabulary_size=len(vocab.stats),
        n_selected=len(vocab.selected),
        n_representatives=len(model.representatives),
        categories=tuple(cat_stats),
        train_seconds=elapsed,
    )
    return TrainResult(model=model, test=test, stats=stats)


def train_full_baseline(corpus: Corpus, config: PipelineConfig) -> TrainResult:
    """Same feature space, but every training document kept: the
    uncondensed reference the condensed model is compared against."""
    started = time.perf_counter()
    train, test, n_unused = apply_split(corpus)
    train, test, removed = filter_categories(train, test)
    single = drop_multilabel(train)
    stopwords = load_stopwords(config.stopwords_path)
    tokens_by_doc = _token_map(single, stopwords, config.min_token_len)
    vocab = build_feature_space(
        tokens_by_doc, [doc.id for doc in single], config
    )
    model = build_full_model(
        single, tokens_by_doc, vocab, config.weighting, stopwords, config.to_dict()
    )
    elapsed = time.perf_counter() - started
    stats = TrainStats(
        n_train=len(single),
        n_test=len(test),
        n_unused=n_unused,
        n_dropped_multilabel=len(train) - len(single),
        removed_categories=tuple(sorted(removed)),
        vocabulary_size=len(vocab.stats),
        n_selected=len(vocab.selected),
        n_representatives=len(model.representatives),
        categories=(),
        train_seconds=elapsed,
    )
    return TrainResult(model=model, test=test, stats=stats)


def vectorize_document(doc: Document, model: CondensedModel):
    """Vectorize unseen text with the model's own preprocessing choices."""
    cfg = model.config
    tokens = tokenize(
        normalize(doc.text),
        model.stopwords,
        int(cfg.get("min_token_len", 2)),
    )
    scheme = Weighting(cfg.get("weighting", Weighting.TFIDF.value))
    return vectorize_with_id(doc.id, tokens, model.vocabulary, scheme)


def classify_corpus(
    model: CondensedModel,
    docs,
    k: int,
    mode: WeightMode,
    threads: int = 1,
) -> list[Prediction]:
    """Classify documents in input order. Thread count changes wall time
    only, never the predictions."""
    docs = list(docs)
    _packed(model)

    def one(doc: Document) -> Prediction:
        return classify(vectorize_document(doc, model), model, k, mode)

    if threads > 1 and len(docs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, docs))
    return [one(doc) for doc in docs]


def restrict_to_categories(
    corpus: Corpus, categories: frozenset[str] | set[str]
) -> tuple[Corpus, int]:
    """Drop labels outside ``categories`` and then drop documents left with
    no labels at all; returns the survivors and the number dropped."""
    kept = []
    dropped = 0
    for doc in corpus:
        labels = doc.labels & frozenset(categories)
        if labels:
            kept.append(
                Document(id=doc.id, text=doc.text, labels=labels, split=doc.split)
            )
        else:
            dropped += 1
    return Corpus(tuple(kept)), dropped
