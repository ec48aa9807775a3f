"""Vector space model: document-frequency statistics, TF-IDF weighting,
top-n feature selection, and sparse document vectors.

The vocabulary is always built from the training split alone; test
documents are vectorized against it unchanged.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, EmptyVocabulary
from .preprocess import ConflationMap

DEFAULT_N_FEATURES = 2000


class Weighting(enum.Enum):
    TF = "tf"
    TFIDF = "tfidf"


class IdfBase(enum.Enum):
    TEN = "10"
    E = "e"

    def log(self, x: float) -> float:
        return math.log10(x) if self is IdfBase.TEN else math.log(x)


@dataclass(frozen=True)
class TermStats:
    term: str
    term_id: int
    df: int
    cf: int
    idf: float
    selection_weight: float


@dataclass(frozen=True)
class Vocabulary:
    """Per-term statistics plus the selected feature subset.

    Term ids are dense in [0, len(stats)), assigned in lexicographic term
    order for determinism. The conflation map travels with the vocabulary
    so test-time tokens are folded the same way training tokens were.
    """

    stats: dict[str, TermStats]
    n_docs: int
    idf_base: IdfBase = IdfBase.TEN
    selected: tuple[int, ...] = ()
    conflation: ConflationMap = field(default_factory=ConflationMap)

    def __post_init__(self):
        object.__setattr__(
            self,
            "_terms_by_id",
            {s.term_id: s.term for s in self.stats.values()},
        )

    def term_of(self, term_id: int) -> str:
        return self._terms_by_id[term_id]

    def __len__(self) -> int:
        return len(self.stats)


@dataclass(frozen=True)
class SparseVector:
    """Nonnegative sparse document vector; zero weights are never stored."""

    doc_id: str
    entries: dict[int, float]

    def __post_init__(self):
        for term_id, weight in self.entries.items():
            if weight < 0:
                raise DomainError(
                    f"vector {self.doc_id!r}: negative weight at term {term_id}"
                )
            if weight == 0:
                raise DomainError(
                    f"vector {self.doc_id!r}: stored zero weight at term {term_id}"
                )

    def packed(self) -> tuple[np.ndarray, np.ndarray]:
        """(sorted int32 term ids, float64 weights) for the kernel path."""
        ids = np.array(sorted(self.entries), dtype=np.int32)
        vals = np.array([self.entries[i] for i in ids], dtype=np.float64)
        return ids, vals


def tfidf_weight(tf: int, df: int, n_docs: int, base: IdfBase = IdfBase.TEN) -> float:
    """tf * log(N/df). df must lie in [1, N] and tf must be nonnegative."""
    if df < 1 or df > n_docs:
        raise DomainError(f"df must be in [1, N]; got df={df}, N={n_docs}")
    if tf < 0:
        raise DomainError(f"tf must be nonnegative; got {tf}")
    if tf == 0:
        return 0.0
    return tf * base.log(n_docs / df)


def build_vocabulary(
    train_tokens: Sequence[Sequence[str]],
    conflation: ConflationMap | None = None,
    idf_base: IdfBase = IdfBase.TEN,
) -> Vocabulary:
    """Collect per-term df/cf/idf over the training token sequences.

    Tokens are folded through the conflation map before counting, so all
    statistics are per representative. The selection weight of a term is
    the maximum tf*idf it attains in any single document.
    """
    conflation = conflation or ConflationMap()
    n_docs = len(train_tokens)
    df: Counter[str] = Counter()
    cf: Counter[str] = Counter()
    max_tf: dict[str, int] = {}
    for tokens in train_tokens:
        counts = Counter(conflation.apply_all(tokens))
        for term, tf in counts.items():
            df[term] += 1
            cf[term] += tf
            if tf > max_tf.get(term, 0):
                max_tf[term] = tf
    if not df:
        raise EmptyVocabulary("no terms survived preprocessing")
    stats: dict[str, TermStats] = {}
    for term_id, term in enumerate(sorted(df)):
        idf = idf_base.log(n_docs / df[term])
        stats[term] = TermStats(
            term=term,
            term_id=term_id,
            df=df[term],
            cf=cf[term],
            idf=idf,
            selection_weight=max_tf[term] * idf,
        )
    return Vocabulary(
        stats=stats, n_docs=n_docs, idf_base=idf_base, conflation=conflation
    )


def select_features(vocab: Vocabulary, n_features: int = DEFAULT_N_FEATURES) -> Vocabulary:
    """Keep the n_features terms with the largest selection weight.

    Ties break toward higher df, then the lexicographically smaller term,
    so the selection is deterministic and grows monotonically with
    n_features.
    """
    if n_features < 1:
        raise DomainError(f"n_features must be >= 1, got {n_features}")
    ranked = sorted(
        vocab.stats.values(),
        key=lambda s: (-s.selection_weight, -s.df, s.term),
    )
    chosen = tuple(s.term_id for s in ranked[:n_features])
    return replace(vocab, selected=chosen)


def vectorize(
    tokens: Iterable[str],
    vocab: Vocabulary,
    scheme: Weighting = Weighting.TFIDF,
) -> SparseVector:
    """Sparse vector over the selected features only; zero weights (absent
    terms, and tf*idf of ubiquitous terms) are dropped."""
    return vectorize_with_id("", tokens, vocab, scheme)


def vectorize_with_id(
    doc_id: str,
    tokens: Iterable[str],
    vocab: Vocabulary,
    scheme: Weighting = Weighting.TFIDF,
) -> SparseVector:
    selected = set(vocab.selected)
    counts = Counter(vocab.conflation.apply_all(tokens))
    entries: dict[int, float] = {}
    for term, tf in counts.items():
        stat = vocab.stats.get(term)
        if stat is None or stat.term_id not in selected:
            continue
        if scheme is Weighting.TF:
            weight = float(tf)
        else:
            weight = tf * stat.idf
        if weight > 0:
            entries[stat.term_id] = weight
    return SparseVector(doc_id=doc_id, entries=entries)
