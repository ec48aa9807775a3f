"""Precision/recall/F1 scoring of category predictions.

Counting is one-vs-rest per category. A prediction is credited when the
predicted category is among the document's gold labels, so multi-label
gold sets are handled without fractional counts.
"""

from __future__ import annotations

import json
from collections.abc import Mapping, Set
from dataclasses import dataclass, field

from .errors import DomainError, UnknownDocId


def precision(tp: int, fp: int) -> float:
    """tp / (tp + fp), or 0 when nothing was predicted positive."""
    denominator = tp + fp
    return tp / denominator if denominator else 0.0


def recall(tp: int, fn: int) -> float:
    """tp / (tp + fn), or 0 when the category has no positives."""
    denominator = tp + fn
    return tp / denominator if denominator else 0.0


def f1(p: float, r: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if p < 0 or r < 0:
        raise DomainError("precision and recall must be nonnegative")
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


@dataclass
class CategoryCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def support(self) -> int:
        return self.tp + self.fn

    def precision(self) -> float:
        return precision(self.tp, self.fp)

    def recall(self) -> float:
        return recall(self.tp, self.fn)

    def f1(self) -> float:
        return f1(self.precision(), self.recall())


@dataclass
class EvalReport:
    counts: dict[str, CategoryCounts]
    n_documents: int
    n_correct: int
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def categories(self) -> list[str]:
        return sorted(self.counts)

    @property
    def accuracy(self) -> float:
        return self.n_correct / self.n_documents if self.n_documents else 0.0

    def micro(self) -> tuple[float, float, float]:
        tp = sum(c.tp for c in self.counts.values())
        fp = sum(c.fp for c in self.counts.values())
        fn = sum(c.fn for c in self.counts.values())
        p = precision(tp, fp)
        r = recall(tp, fn)
        return p, r, f1(p, r)

    def macro(self) -> tuple[float, float, float]:
        cats = self.categories
        if not cats:
            return 0.0, 0.0, 0.0
        n = len(cats)
        p = sum(self.counts[c].precision() for c in cats) / n
        r = sum(self.counts[c].recall() for c in cats) / n
        f = sum(self.counts[c].f1() for c in cats) / n
        return p, r, f

    def to_dict(self) -> dict:
        micro_p, micro_r, micro_f = self.micro()
        macro_p, macro_r, macro_f = self.macro()
        return {
            "categories": {
                c: {
                    "precision": self.counts[c].precision(),
                    "recall": self.counts[c].recall(),
                    "f1": self.counts[c].f1(),
                    "support": self.counts[c].support,
                }
                for c in self.categories
            },
            "micro": {"precision": micro_p, "recall": micro_r, "f1": micro_f},
            "macro": {"precision": macro_p, "recall": macro_r, "f1": macro_f},
            "accuracy": self.accuracy,
            "n_documents": self.n_documents,
            "timings": dict(self.timings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _as_predicted_map(predictions) -> dict[str, str]:
    if isinstance(predictions, Mapping):
        return dict(predictions)
    return {p.doc_id: p.predicted for p in predictions}


def _as_gold_map(gold) -> dict[str, Set[str]]:
    if isinstance(gold, Mapping):
        labels_by_id = dict(gold)
    else:
        labels_by_id = {doc.id: doc.labels for doc in gold}
    for doc_id, labels in labels_by_id.items():
        if not labels:
            raise DomainError(f"gold document {doc_id!r} has no labels")
    return labels_by_id


def evaluate(predictions, gold) -> EvalReport:
    """Score predictions against gold labels, one-vs-rest per category.

    ``predictions`` is a sequence of Prediction values or an id→category
    mapping; ``gold`` is a labeled corpus or an id→labels mapping. Every
    predicted document must appear in the gold set (UnknownDocId
    otherwise); gold documents without a prediction count as misses for
    each of their labels. A gold label the prediction did not pick is a
    miss for that label even when the prediction matches another label of
    the same document.
    """
    predicted = _as_predicted_map(predictions)
    labels_by_id = _as_gold_map(gold)
    for doc_id in predicted:
        if doc_id not in labels_by_id:
            raise UnknownDocId(doc_id)
    counts: dict[str, CategoryCounts] = {}

    def bucket(category: str) -> CategoryCounts:
        if category not in counts:
            counts[category] = CategoryCounts()
        return counts[category]

    n_correct = 0
    for doc_id, labels in labels_by_id.items():
        guess = predicted.get(doc_id)
        if guess is not None and guess in labels:
            n_correct += 1
            bucket(guess).tp += 1
        elif guess is not None:
            bucket(guess).fp += 1
        for label in labels:
            if label != guess:
                bucket(label).fn += 1
    return EvalReport(
        counts=counts, n_documents=len(labels_by_id), n_correct=n_correct
    )


def format_table(report: EvalReport) -> str:
    """Fixed-width text table with one row per category plus micro/macro
    and accuracy footer lines. Four decimal places throughout."""
    rows = [("category", "precision", "recall", "f1", "support")]
    for cat in report.categories:
        c = report.counts[cat]
        rows.append(
            (
                cat,
                f"{c.precision():.4f}",
                f"{c.recall():.4f}",
                f"{c.f1():.4f}",
                str(c.support),
            )
        )
    micro_p, micro_r, micro_f = report.micro()
    macro_p, macro_r, macro_f = report.macro()
    rows.append(
        ("micro", f"{micro_p:.4f}", f"{micro_r:.4f}", f"{micro_f:.4f}", str(report.n_documents))
    )
    rows.append(
        ("macro", f"{macro_p:.4f}", f"{macro_r:.4f}", f"{macro_f:.4f}", "")
    )
    widths = [max(len(r[i]) for r in rows) for i in range(5)]
    lines = []
    for idx, row in enumerate(rows):
        cells = [row[0].ljust(widths[0])]
        cells += [row[i].rjust(widths[i]) for i in range(1, 5)]
        lines.append("  ".join(cells).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    lines.append(f"accuracy  {report.accuracy:.4f}  ({report.n_correct}/{report.n_documents})")
    for name in sorted(report.timings):
        lines.append(f"{name}  {report.timings[name]:.3f}s")
    return "\n".join(lines)


def format_tsv(report: EvalReport) -> str:
    """Tab-separated report: header, one category per row, then micro,
    macro, and accuracy rows."""
    out = ["category\tprecision\trecall\tf1\tsupport"]
    for cat in report.categories:
        c = report.counts[cat]
        out.append(
            f"{cat}\t{c.precision():.4f}\t{c.recall():.4f}\t{c.f1():.4f}\t{c.support}"
        )
    micro_p, micro_r, micro_f = report.micro()
    macro_p, macro_r, macro_f = report.macro()
    out.append(f"micro\t{micro_p:.4f}\t{micro_r:.4f}\t{micro_f:.4f}\t{report.n_documents}")
    out.append(f"macro\t{macro_p:.4f}\t{macro_r:.4f}\t{macro_f:.4f}\t")
    out.append(f"accuracy\t{report.accuracy:.4f}\t\t\t{report.n_documents}")
    return "\n".join(out) + "\n"
