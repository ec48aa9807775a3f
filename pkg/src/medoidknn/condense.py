"""Training-set condensation: outlier purging, k-medoids clustering with
token-level edit distance, small-cluster pruning, and assembly of the
condensed model of per-category medoid representatives.

Clustering runs independently per category, so every medoid carries an
unambiguous label and the per-category jobs could run in parallel over the
shared read-only inputs.
"""

from __future__ import annotations

import enum
import hashlib
import math
import random
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .corpus import Corpus, Document
from .errors import DomainError, EmptyCategory, InvalidK
from .vectorspace import SparseVector, Vocabulary, Weighting, vectorize_with_id

DEFAULT_EDIT_CAP = 256
DEFAULT_OUTLIER_SIGMA = 2.0
DEFAULT_K_FRACTION = 0.1
DEFAULT_MIN_CLUSTER_SIZE = 5
DEFAULT_RESTARTS = 5
DEFAULT_MAX_ITER = 100


class DistanceKind(enum.Enum):
    EDIT_DISTANCE_TOKENS = "edit-distance-tokens"
    COSINE_DISTANCE = "cosine-distance"


@dataclass(frozen=True)
class Cluster:
    medoid: int
    members: tuple[int, ...]
    cost: float


@dataclass(frozen=True)
class ClusterModel:
    clusters: tuple[Cluster, ...]
    distance_kind: DistanceKind
    total_cost: float
    cost_history: tuple[float, ...]
    converged: bool


@dataclass(frozen=True)
class Representative:
    vector: SparseVector
    category: str
    source_id: str


@dataclass(frozen=True)
class CondensedModel:
    """The trained artifact: vocabulary, preprocessing state, and labeled
    medoid vectors."""

    vocabulary: Vocabulary
    representatives: tuple[Representative, ...]
    stopwords: frozenset[str]
    config: dict = field(default_factory=dict)

    @property
    def category_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for rep in self.representatives:
            counts[rep.category] = counts.get(rep.category, 0) + 1
        return counts

    @property
    def categories(self) -> list[str]:
        return sorted(self.category_counts)

    @property
    def provenance(self) -> tuple[str, ...]:
        return tuple(rep.source_id for rep in self.representatives)


def drop_multilabel(train: Corpus) -> Corpus:
    """Remove training documents carrying more than one label. Test
    documents are never filtered this way; they keep all labels for
    scoring."""
    return Corpus(tuple(d for d in train if len(d.labels) <= 1))


def _encode_capped(
    token_seqs: Sequence[Sequence[str]], vocab: Vocabulary | None, cap: int
) -> list[np.ndarray]:
    """Token sequences -> int32 id arrays, truncated to ``cap`` tokens.

    Ids come from the vocabulary when available; unseen tokens get fresh
    local ids so equal unknowns still compare equal.
    """
    local: dict[str, int] = {}
    base = len(vocab) if vocab is not None else 0
    out = []
    for tokens in token_seqs:
        tokens = list(tokens)[:cap] if cap else list(tokens)
        ids = np.empty(len(tokens), dtype=np.int32)
        for i, tok in enumerate(tokens):
            stat = vocab.stats.get(tok) if vocab is not None else None
            if stat is not None:
                ids[i] = stat.term_id
            else:
                code = local.get(tok)
                if code is None:
                    code = base + len(local)
                    local[tok] = code
                ids[i] = code
        out.append(ids)
    return out


def _flag_by_mean_distance(matrix: np.ndarray, sigma: float) -> tuple[list[int], list[int]]:
    n = matrix.shape[0]
    if n <= 2:
        return list(range(n)), []
    means = matrix.sum(axis=1) / (n - 1)
    mu = float(means.mean())
    sd = float(means.std())  # population std
    threshold = mu + sigma * sd
    flagged = [i for i in range(n) if means[i] > threshold]
    kept = [i for i in range(n) if means[i] <= threshold]
    return kept, flagged


def purge_outliers(
    token_seqs: Sequence[Sequence[str]],
    cap: int = DEFAULT_EDIT_CAP,
    sigma: float = DEFAULT_OUTLIER_SIGMA,
    threads: int = 1,
) -> tuple[list[int], list[int]]:
    """Flag documents whose mean edit distance to the rest of their
    category exceeds mean + sigma * std of those means.

    Sequences are truncated to ``cap`` tokens before the quadratic distance
    computation. Categories of one or two documents flag nothing.

    Returns (kept indices, flagged indices), both ascending.
    """
    if not token_seqs:
        raise DomainError("purge_outliers needs at least one document")
    seqs = _encode_capped(token_seqs, None, cap)
    matrix = _kernels.pairwise_matrix(seqs, threads=threads)
    return _flag_by_mean_distance(matrix, sigma)


def _assignment(D: np.ndarray, medoids: list[int]):
    """Nearest/second-nearest medoid per item; ties go to the medoid with
    the lower item index (medoids are kept sorted). Each medoid is pinned
    to itself so duplicate items cannot strand a medoid in another
    cluster."""
    med = np.asarray(medoids, dtype=np.intp)
    cols = D[:, med]
    order = np.argsort(cols, axis=1, kind="stable")
    rows = np.arange(D.shape[0])
    d1 = cols[rows, order[:, 0]]
    m1 = med[order[:, 0]]
    if len(med) > 1:
        d2 = cols[rows, order[:, 1]]
    else:
        d2 = np.full(D.shape[0], np.inf)
    m1[med] = med
    d1[med] = 0.0
    return m1, d1, d2


def _best_swap(D: np.ndarray, medoids: list[int], m1, d1, d2):
    """Exact cost delta of every (medoid, candidate) swap in O(n^2),
    returning the best one in scan order (medoid index asc, candidate
    asc)."""
    n = D.shape[0]
    base = np.minimum(D - d1[:, None], 0.0).sum(axis=0)
    deltas = np.empty((len(medoids), n))
    for row, m in enumerate(medoids):
        mask = m1 == m
        if mask.any():
            dm = D[mask]
            d1m = d1[mask][:, None]
            removal = (np.minimum(dm, d2[mask][:, None]) - d1m).sum(axis=0)
            overlap = np.minimum(dm - d1m, 0.0).sum(axis=0)
            deltas[row] = base - overlap + removal
        else:
            deltas[row] = base
    deltas[:, np.asarray(medoids, dtype=np.intp)] = np.inf
    flat = int(np.argmin(deltas))
    row, h = divmod(flat, n)
    return medoids[row], h, float(deltas[row, h])


def _pam_once(D: np.ndarray, k: int, rng: random.Random, max_iter: int):
    n = D.shape[0]
    medoids = sorted(rng.sample(range(n), k))
    m1, d1, d2 = _assignment(D, medoids)
    cost = float(d1.sum())
    history = [cost]
    converged = False
    for _ in range(max_iter):
        out_m, in_h, delta = _best_swap(D, medoids, m1, d1, d2)
        if delta >= -1e-12:
            converged = True
            break
        medoids = sorted(set(medoids) - {out_m} | {in_h})
        m1, d1, d2 = _assignment(D, medoids)
        new_cost = float(d1.sum())
        if new_cost > cost + 1e-9:
            raise AssertionError(
                f"k-medoids cost increased: {cost} -> {new_cost}"
            )
        if new_cost >= cost:
            # No real improvement once recomputed exactly; stop.
            converged = True
            break
        cost = new_cost
        history.append(cost)
    return medoids, m1, cost, history, converged


def kmedoids(
    items: Sequence,
    k: int,
    distance: Callable | None = None,
    *,
    seed: int = 0,
    max_iter: int = DEFAULT_MAX_ITER,
    restarts: int = 1,
    matrix: np.ndarray | None = None,
    distance_kind: DistanceKind = DistanceKind.EDIT_DISTANCE_TOKENS,
) -> ClusterModel:
    """Partition ``items`` around k medoids (PAM).

    Medoids are initialized by seeded sampling without replacement; each
    iteration adopts the single (medoid, non-medoid) swap that most
    reduces the total cost, until no swap improves or ``max_iter`` is hit.
    ``restarts`` independent initializations (seeds seed, seed+1, ...) are
    run and the lowest-cost result kept. Deterministic given the seed.

    Distances come either from the ``distance`` callable or from a
    precomputed symmetric ``matrix``.
    """
    n = len(items)
    if k < 1 or k > n:
        raise InvalidK(f"k must be in [1, {n}], got {k}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter}")
    if matrix is None:
        if distance is None:
            raise DomainError("kmedoids needs a distance function or a matrix")
        matrix = np.zeros((n, n), dtype=np.float64)
        for i in range(n):
            for j in range(i + 1, n):
                d = float(distance(items[i], items[j]))
                matrix[i, j] = d
                matrix[j, i] = d
    else:
        matrix = np.asarray(matrix, dtype=np.float64)

    best = None
    for r in range(max(1, restarts)):
        rng = random.Random(seed + r)
        result = _pam_once(matrix, k, rng, max_iter)
        if best is None or result[2] < best[2]:
            best = result
    medoids, m1, cost, history, converged = best

    clusters = []
    for m in medoids:
        members = tuple(int(i) for i in np.flatnonzero(m1 == m))
        cluster_cost = float(matrix[list(members), m].sum())
        clusters.append(Cluster(medoid=int(m), members=members, cost=cluster_cost))
    return ClusterModel(
        clusters=tuple(clusters),
        distance_kind=distance_kind,
        total_cost=cost,
        cost_history=tuple(history),
        converged=converged,
    )


def prune_small_clusters(model: ClusterModel, min_size: int) -> ClusterModel:
    """Drop clusters with fewer than ``min_size`` members; their members
    leave the model entirely rather than being reassigned."""
    if min_size < 1:
        raise DomainError(f"min_size must be >= 1, got {min_size}")
    surviving = tuple(c for c in model.clusters if len(c.members) >= min_size)
    return ClusterModel(
        clusters=surviving,
        distance_kind=model.distance_kind,
        total_cost=float(sum(c.cost for c in surviving)),
        cost_history=model.cost_history,
        converged=model.converged,
    )


def category_seed(seed: int, category: str) -> int:
    """Stable per-category RNG seed (independent of PYTHONHASHSEED)."""
    digest = hashlib.sha256(category.encode("utf-8")).digest()
    return seed ^ int.from_bytes(digest[:8], "big")


def _single_label(doc: Document) -> str:
    if len(doc.labels) != 1:
        raise DomainError(
            f"document {doc.id!r} has {len(doc.labels)} labels; "
            "training docs must be single-label at this stage"
        )
    return next(iter(doc.labels))


@dataclass(frozen=True)
class CondenseParams:
    k_fraction: float = DEFAULT_K_FRACTION
    min_cluster_size: int = DEFAULT_MIN_CLUSTER_SIZE
    outlier_sigma: float = DEFAULT_OUTLIER_SIGMA
    edit_cap: int = DEFAULT_EDIT_CAP
    restarts: int = DEFAULT_RESTARTS
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = 0
    threads: int = 1
    weighting: Weighting = Weighting.TFIDF
    fallback_full_category: bool = True


@dataclass(frozen=True)
class CategoryStats:
    category: str
    n_documents: int
    n_purged: int
    n_clusters: int
    n_pruned_clusters: int
    n_representatives: int
    used_fallback: bool


def build_condensed_model(
    train: Corpus,
    tokens_by_doc: Mapping[str, Sequence[str]],
    vocab: Vocabulary,
    params: CondenseParams,
    stopwords: frozenset[str] = frozenset(),
    config_snapshot: dict | None = None,
) -> tuple[CondensedModel, list[CategoryStats]]:
    """Condense each category to its cluster medoids.

    Per category: purge outliers, cluster the survivors with k =
    max(1, ceil(k_fraction * n)) under token edit distance, prune clusters
    below the minimum size, and keep each surviving medoid's weighted
    vector. A category whose condensation comes up empty falls back to its
    full purged document set (when enabled) or raises EmptyCategory.
    """
    by_category: dict[str, list[Document]] = {}
    for doc in train:
        by_category.setdefault(_single_label(doc), []).append(doc)

    representatives: list[Representative] = []
    stats: list[CategoryStats] = []
    for category in sorted(by_category):
        docs = by_category[category]
        conflated = [
            vocab.conflation.apply_all(tokens_by_doc[d.id]) for d in docs
        ]
        seqs = _encode_capped(conflated, vocab, params.edit_cap)
        matrix = _kernels.pairwise_matrix(seqs, threads=params.threads)
        kept, flagged = _flag_by_mean_distance(matrix, params.outlier_sigma)

        k_c = max(1, math.ceil(params.k_fraction * len(kept)))
        sub = matrix[np.ix_(kept, kept)]
        clustering = kmedoids(
            kept,
            k_c,
            seed=category_seed(params.seed, category),
            max_iter=params.max_iter,
            restarts=params.restarts,
            matrix=sub,
        )
        pruned = prune_small_clusters(clustering, params.min_cluster_size)

        cat_reps: list[Representative] = []
        for cluster in pruned.clusters:
            doc = docs[kept[cluster.medoid]]
            vec = vectorize_with_id(
                doc.id, conflated[kept[cluster.medoid]], vocab, params.weighting
            )
            if vec.entries:
                cat_reps.append(Representative(vec, category, doc.id))
        used_fallback = False
        if not cat_reps and params.fallback_full_category:
            used_fallback = True
            for position in kept:
                doc = docs[position]
                vec = vectorize_with_id(
                    doc.id, conflated[position], vocab, params.weighting
                )
                if vec.entries:
                    cat_reps.append(Representative(vec, category, doc.id))
        if not cat_reps:
            raise EmptyCategory(category)
        representatives.extend(cat_reps)
        stats.append(
            CategoryStats(
                category=category,
                n_documents=len(docs),
                n_purged=len(flagged),
                n_clusters=len(clustering.clusters),
                n_pruned_clusters=len(clustering.clusters) - len(pruned.clusters),
                n_representatives=len(cat_reps),
                used_fallback=used_fallback,
            )
        )

    model = CondensedModel(
        vocabulary=vocab,
        representatives=tuple(representatives),
        stopwords=stopwords,
        config=dict(config_snapshot or {}),
    )
    return model, stats


def build_full_model(
    train: Corpus,
    tokens_by_doc: Mapping[str, Sequence[str]],
    vocab: Vocabulary,
    weighting: Weighting = Weighting.TFIDF,
    stopwords: frozenset[str] = frozenset(),
    config_snapshot: dict | None = None,
) -> CondensedModel:
    """Uncondensed baseline: every single-label training document with a
    nonzero vector becomes a representative."""
    representatives = []
    for doc in train:
        category = _single_label(doc)
        vec = vectorize_with_id(
            doc.id, vocab.conflation.apply_all(tokens_by_doc[doc.id]), vocab, weighting
        )
        if vec.entries:
            representatives.append(Representative(vec, category, doc.id))
    return CondensedModel(
        vocabulary=vocab,
        representatives=tuple(representatives),
        stopwords=stopwords,
        config=dict(config_snapshot or {}),
    )
