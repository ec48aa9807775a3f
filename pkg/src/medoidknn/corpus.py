"""Labeled corpus loading, train/test splitting, and category hygiene.

The on-disk format is JSON-Lines, one record per line:

    {"id": str, "text": str, "labels": [str, ...], "split": "train"|"test"|"unused"}

UTF-8, no BOM. Corpora are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateId, EmptyResult, IoFailure, MalformedRecord


class Split(enum.Enum):
    TRAIN = "train"
    TEST = "test"
    UNUSED = "unused"


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    labels: frozenset[str]
    split: Split


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def categories(self) -> frozenset[str]:
        out: set[str] = set()
        for doc in self.documents:
            out |= doc.labels
        return frozenset(out)


def _parse_record(line_number: int, raw: str) -> Document:
    try:
        record = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(line_number, f"invalid JSON ({exc.msg})") from exc
    if not isinstance(record, dict):
        raise MalformedRecord(line_number, "record is not an object")
    for field, kind in (("id", str), ("text", str), ("labels", list), ("split", str)):
        if field not in record:
            raise MalformedRecord(line_number, f"missing field {field!r}")
        if not isinstance(record[field], kind):
            raise MalformedRecord(line_number, f"field {field!r} has wrong type")
    labels = record["labels"]
    if any(not isinstance(lab, str) or not lab for lab in labels):
        raise MalformedRecord(line_number, "labels must be nonempty strings")
    if len(set(labels)) != len(labels):
        raise MalformedRecord(line_number, "duplicate labels")
    try:
        split = Split(record["split"])
    except ValueError:
        raise MalformedRecord(
            line_number, f"split must be train|test|unused, got {record['split']!r}"
        ) from None
    if not record["id"]:
        raise MalformedRecord(line_number, "empty id")
    return Document(
        id=record["id"],
        text=record["text"],
        labels=frozenset(labels),
        split=split,
    )


def load_corpus(path: str | Path, format: str = "jsonl") -> Corpus:
    """Read a JSONL corpus, preserving record order.

    Raises MalformedRecord (with the 1-based line number), DuplicateId, or
    IoFailure.
    """
    if format != "jsonl":
        raise MalformedRecord(0, f"unsupported format {format!r}")
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    docs: list[Document] = []
    seen: set[str] = set()
    for line_number, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        doc = _parse_record(line_number, raw)
        if doc.id in seen:
            raise DuplicateId(doc.id)
        seen.add(doc.id)
        docs.append(doc)
    return Corpus(documents=tuple(docs))


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Serialize back to canonical JSONL (labels sorted). Atomic write."""
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            for doc in corpus:
                record = {
                    "id": doc.id,
                    "text": doc.text,
                    "labels": sorted(doc.labels),
                    "split": doc.split.value,
                }
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def apply_split(corpus: Corpus) -> tuple[Corpus, Corpus, int]:
    """Partition by split tag into (train, test, unused_count)."""
    train = [d for d in corpus if d.split is Split.TRAIN]
    test = [d for d in corpus if d.split is Split.TEST]
    unused = len(corpus) - len(train) - len(test)
    return Corpus(tuple(train)), Corpus(tuple(test)), unused


def filter_categories(train: Corpus, test: Corpus) -> tuple[Corpus, Corpus, frozenset[str]]:
    """Keep only categories present in both splits.

    Labels of removed categories are stripped; documents left unlabeled are
    dropped. Raises EmptyResult when no category survives.
    """
    surviving = train.categories & test.categories
    removed = (train.categories | test.categories) - surviving
    if not surviving:
        raise EmptyResult("no category occurs in both the train and test split")

    def strip(corpus: Corpus) -> Corpus:
        docs = []
        for doc in corpus:
            labels = doc.labels & surviving
            if labels:
                if labels != doc.labels:
                    doc = Document(doc.id, doc.text, frozenset(labels), doc.split)
                docs.append(doc)
        return Corpus(tuple(docs))

    return strip(train), strip(test), frozenset(removed)
