"""Shared fixtures: synthetic corpora with known structure."""

from __future__ import annotations

import json
import random

import pytest

from medoidknn import Corpus, Document, Split

TOPIC_WORDS = {
    "metals": [
        "copper", "zinc", "alloy", "smelter", "ore", "ingot",
        "furnace", "mine", "cathode", "refinery",
    ],
    "grain": [
        "wheat", "corn", "harvest", "bushel", "silo", "crop",
        "maize", "sowing", "yield", "farm",
    ],
    "energy": [
        "crude", "barrel", "refining", "pipeline", "petroleum", "rig",
        "drilling", "fuel", "diesel", "tanker",
    ],
}

NOISE_WORDS = [
    "market", "price", "tonne", "report", "week",
    "rose", "fell", "trade", "export", "deal",
]


def synthetic_records(
    n_train_per_cat: int = 20,
    n_test_per_cat: int = 10,
    seed: int = 7,
    doc_len: int = 20,
    noise_fraction: float = 0.1,
) -> list[dict]:
    """Three disjoint topic vocabularies plus shared noise words."""
    rng = random.Random(seed)
    n_noise = max(0, round(doc_len * noise_fraction))
    records = []
    i = 0
    for cat in sorted(TOPIC_WORDS):
        words = TOPIC_WORDS[cat]
        for split, count in (("train", n_train_per_cat), ("test", n_test_per_cat)):
            for _ in range(count):
                body = rng.choices(words, k=doc_len - n_noise)
                body += rng.choices(NOISE_WORDS, k=n_noise)
                rng.shuffle(body)
                records.append(
                    {
                        "id": f"d{i:04d}",
                        "text": " ".join(body),
                        "labels": [cat],
                        "split": split,
                    }
                )
                i += 1
    return records


def records_to_corpus(records: list[dict]) -> Corpus:
    return Corpus(
        tuple(
            Document(
                id=r["id"],
                text=r["text"],
                labels=frozenset(r["labels"]),
                split=Split(r["split"]),
            )
            for r in records
        )
    )


def write_jsonl(path, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")


@pytest.fixture
def topic_corpus() -> Corpus:
    return records_to_corpus(synthetic_records())


@pytest.fixture
def topic_corpus_path(tmp_path):
    path = tmp_path / "corpus.jsonl"
    write_jsonl(path, synthetic_records())
    return path
