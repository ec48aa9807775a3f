"""Weighted kNN classification over the condensed model, plus model file
persistence.

Neighbors are ranked by ascending cosine distance to the query; votes can
be unweighted, linearly distance-weighted, rank-weighted, or both. The
model file is a versioned JSON document whose floats round-trip exactly.
"""

from __future__ import annotations

import enum
import json
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from . import _kernels
from .condense import CondensedModel, Representative
from .errors import (
    DomainError,
    EmptyModel,
    InputError,
    IoFailure,
    ModelVersionMismatch,
    UnsortedInput,
)
from .preprocess import ConflationMap
from .vectorspace import IdfBase, SparseVector, TermStats, Vocabulary

SCHEMA_VERSION = 1
MODEL_KIND = "medoid-condensed-knn"

DEFAULT_K = 5


class WeightMode(enum.Enum):
    NONE = "none"
    LINEAR = "linear"
    RANK = "rank"
    LINEAR_TIMES_RANK = "linear-rank"


@dataclass(frozen=True)
class Neighbor:
    representative_index: int
    distance: float
    rank: int
    weight: float
    category: str


@dataclass(frozen=True)
class Prediction:
    doc_id: str
    scores: dict[str, float]
    predicted: str
    k_used: int
    weight_mode: WeightMode


class _PackedReps:
    """Representatives flattened to kernel-ready arrays, built once per
    model."""

    __slots__ = ("ids", "vals", "norms", "categories")

    def __init__(self, reps: Sequence[Representative]):
        self.ids = []
        self.vals = []
        self.norms = []
        self.categories = []
        for rep in reps:
            ids, vals = rep.vector.packed()
            self.ids.append(ids)
            self.vals.append(vals)
            self.norms.append(math.sqrt(_kernels.sparse_sqnorm(vals)))
            self.categories.append(rep.category)


def _packed(model: CondensedModel) -> _PackedReps:
    cached = getattr(model, "_packed_reps", None)
    if cached is None:
        cached = _PackedReps(model.representatives)
        object.__setattr__(model, "_packed_reps", cached)
    return cached


def find_neighbors(
    query: SparseVector, model: CondensedModel, k: int
) -> list[Neighbor]:
    """The min(k, n) representatives nearest to the query by cosine
    distance, ranked from 1; distance ties go to the lower representative
    index."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not model.representatives:
        raise EmptyModel("model has no representatives")
    packed = _packed(model)
    q_ids, q_vals = query.packed()
    q_norm = math.sqrt(_kernels.sparse_sqnorm(q_vals))
    n = len(packed.ids)
    distances = []
    for i in range(n):
        r_norm = packed.norms[i]
        if q_norm == 0.0 or r_norm == 0.0:
            sim = 0.0
        else:
            dot = _kernels.sparse_dot(q_ids, q_vals, packed.ids[i], packed.vals[i])
            sim = dot / (q_norm * r_norm)
        distances.append(1.0 - sim)
    order = sorted(range(n), key=lambda i: (distances[i], i))[: min(k, n)]
    return [
        Neighbor(
            representative_index=i,
            distance=distances[i],
            rank=rank,
            weight=0.0,
            category=packed.categories[i],
        )
        for rank, i in enumerate(order, start=1)
    ]


def dudani_weights(distances: Sequence[float]) -> list[float]:
    """Linear distance weights: (d_k - d_i) / (d_k - d_1), or all ones when
    every distance ties (including k = 1). Input must be ascending."""
    if not distances:
        raise DomainError("need at least one distance")
    for a, b in zip(distances, distances[1:]):
        if b < a:
            raise UnsortedInput("distances must be sorted ascending")
    d_first = distances[0]
    d_last = distances[-1]
    if d_last == d_first:
        return [1.0] * len(distances)
    span = d_last - d_first
    return [(d_last - d) / span for d in distances]


def rank_weights(k: int) -> list[float]:
    """Vote weight k - i + 1 for the neighbor at rank i: k, k-1, ..., 1."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    return [float(k - i + 1) for i in range(1, k + 1)]


def _vote(neighbors: list[Neighbor], mode: WeightMode) -> tuple[dict[str, float], str]:
    k_used = len(neighbors)
    if mode is WeightMode.NONE:
        weights = [1.0] * k_used
    elif mode is WeightMode.LINEAR:
        weights = dudani_weights([n.distance for n in neighbors])
    elif mode is WeightMode.RANK:
        weights = rank_weights(k_used)
    else:
        linear = dudani_weights([n.distance for n in neighbors])
        by_rank = rank_weights(k_used)
        weights = [a * b for a, b in zip(linear, by_rank)]
    scores: dict[str, float] = {}
    summed_distance: dict[str, float] = {}
    for neighbor, weight in zip(neighbors, weights):
        scores[neighbor.category] = scores.get(neighbor.category, 0.0) + weight
        summed_distance[neighbor.category] = (
            summed_distance.get(neighbor.category, 0.0) + neighbor.distance
        )
    predicted = min(
        scores, key=lambda c: (-scores[c], summed_distance[c], c)
    )
    return scores, predicted


def classify(
    query: SparseVector,
    model: CondensedModel,
    k: int = DEFAULT_K,
    mode: WeightMode = WeightMode.RANK,
) -> Prediction:
    """Vote the query into the category with the largest accumulated
    neighbor weight. Ties break toward the smaller summed neighbor
    distance, then the lexicographically smaller category."""
    neighbors = find_neighbors(query, model, k)
    scores, predicted = _vote(neighbors, mode)
    return Prediction(
        doc_id=query.doc_id,
        scores=scores,
        predicted=predicted,
        k_used=len(neighbors),
        weight_mode=mode,
    )


def _model_payload(model: CondensedModel) -> dict:
    vocab = model.vocabulary
    terms = [
        [s.term, s.term_id, s.df, s.cf, s.idf, s.selection_weight]
        for s in sorted(vocab.stats.values(), key=lambda s: s.term_id)
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": MODEL_KIND,
        "config": model.config,
        "preprocessing": {
            "stopwords": sorted(model.stopwords),
            "conflation": sorted(vocab.conflation.mapping.items()),
        },
        "vocabulary": {
            "n_docs": vocab.n_docs,
            "idf_base": vocab.idf_base.value,
            "terms": terms,
            "selected": list(vocab.selected),
        },
        "representatives": [
            {
                "category": rep.category,
                "source_id": rep.source_id,
                "entries": [[i, rep.vector.entries[i]] for i in sorted(rep.vector.entries)],
            }
            for rep in model.representatives
        ],
    }


def save_model(model: CondensedModel, path: str | Path) -> None:
    """Write the model as deterministic JSON (sorted keys, exact floats);
    same model in, byte-identical file out. Atomic."""
    payload = _model_payload(model)
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
            fh.write("\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write model {path}: {exc}") from exc


def load_model(path: str | Path) -> CondensedModel:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read model {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"model file {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(payload, dict) or payload.get("kind") != MODEL_KIND:
        raise ModelVersionMismatch(f"{path} is not a {MODEL_KIND} model file")
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ModelVersionMismatch(
            f"model schema v{payload.get('schema_version')} not supported "
            f"(this build reads v{SCHEMA_VERSION})"
        )
    vocab_doc = payload["vocabulary"]
    stats = {}
    for term, term_id, df, cf, idf, selection_weight in vocab_doc["terms"]:
        stats[term] = TermStats(
            term=term,
            term_id=term_id,
            df=df,
            cf=cf,
            idf=idf,
            selection_weight=selection_weight,
        )
    prep = payload["preprocessing"]
    vocab = Vocabulary(
        stats=stats,
        n_docs=vocab_doc["n_docs"],
        idf_base=IdfBase(vocab_doc["idf_base"]),
        selected=tuple(vocab_doc["selected"]),
        conflation=ConflationMap({t: r for t, r in prep["conflation"]}),
    )
    representatives = tuple(
        Representative(
            vector=SparseVector(
                doc_id=rep["source_id"],
                entries={int(i): float(w) for i, w in rep["entries"]},
            ),
            category=rep["category"],
            source_id=rep["source_id"],
        )
        for rep in payload["representatives"]
    )
    return CondensedModel(
        vocabulary=vocab,
        representatives=representatives,
        stopwords=frozenset(prep["stopwords"]),
        config=payload.get("config", {}),
    )
