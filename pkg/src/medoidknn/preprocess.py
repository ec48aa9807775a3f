"""Text cleaning and term conflation.

Cleaning lowercases, collapses whitespace and strips control characters;
tokens are maximal letter/digit runs. Conflation groups lexically similar
terms by single-link closure over the Dice digram coefficient and maps each
group to one representative, replacing a suffix stemmer.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import DomainError, IoFailure
from .similarity import dice, digrams

_CONTROL_RE = re.compile(r"[\x00-\x08\x0e-\x1f\x7f-\x9f]")
_WHITESPACE_RE = re.compile(r"\s+")
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

DEFAULT_MIN_TOKEN_LEN = 2
DEFAULT_CONFLATION_TAU = 0.6


def normalize(text: str) -> str:
    """Lowercase, collapse whitespace runs to single spaces, drop control
    characters, trim."""
    text = _WHITESPACE_RE.sub(" ", text.lower())
    return _CONTROL_RE.sub("", text).strip()


def tokenize(
    text: str,
    stopwords: frozenset[str] = frozenset(),
    min_token_len: int = DEFAULT_MIN_TOKEN_LEN,
) -> list[str]:
    """Split normalized text into letter/digit runs, dropping stopwords and
    tokens shorter than ``min_token_len``."""
    return [
        tok
        for tok in _TOKEN_RE.findall(text)
        if len(tok) >= min_token_len and tok not in stopwords
    ]


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """One lowercase word per line; ``#`` lines are comments. With no path,
    the packaged English list is used."""
    if path is None:
        data = (
            resources.files("medoidknn")
            .joinpath("data/stopwords_en.txt")
            .read_text(encoding="utf-8")
        )
    else:
        try:
            data = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read stopword file {path}: {exc}") from exc
    words = set()
    for line in data.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


@dataclass(frozen=True)
class ConflationMap:
    """Term -> representative mapping. Identity entries are implicit, so
    ``apply`` is total and idempotent by construction."""

    mapping: dict[str, str] = field(default_factory=dict)

    def apply(self, term: str) -> str:
        return self.mapping.get(term, term)

    def apply_all(self, tokens: Iterable[str]) -> list[str]:
        get = self.mapping.get
        return [get(tok, tok) for tok in tokens]

    def groups(self) -> dict[str, list[str]]:
        """Representative -> sorted members (including itself)."""
        out: dict[str, list[str]] = {}
        for term, rep in self.mapping.items():
            out.setdefault(rep, []).append(term)
        for rep, members in out.items():
            if rep not in members:
                members.append(rep)
            members.sort()
        return out


class _UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, item):
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def conflate_terms(
    vocabulary: Iterable[str],
    tau: float = DEFAULT_CONFLATION_TAU,
    frequencies: Mapping[str, int] | None = None,
) -> ConflationMap:
    """Group terms whose Dice digram similarity reaches ``tau`` (single-link
    closure over the symmetric pair matrix) and map every term to its
    group's representative: the most corpus-frequent member, ties broken by
    shortest then lexicographically smallest.

    ``frequencies`` supplies the corpus counts used to pick representatives;
    terms missing from it count as zero.
    """
    if not 0.0 <= tau <= 1.0:
        raise DomainError(f"tau must be in [0, 1], got {tau}")
    terms = sorted(set(vocabulary))
    freq = frequencies or {}
    uf = _UnionFind(terms)

    if tau == 0.0:
        # Every pair qualifies at tau 0, even digram-less ones.
        for term in terms[1:]:
            uf.union(terms[0], term)
    else:
        dsets = {t: digrams(t) for t in terms}
        by_digram: dict[str, list[str]] = {}
        for t in terms:
            for dg in dsets[t]:
                by_digram.setdefault(dg, []).append(t)
        checked: set[tuple[str, str]] = set()
        for bucket in by_digram.values():
            for i, a in enumerate(bucket):
                la = len(dsets[a])
                for b in bucket[i + 1:]:
                    pair = (a, b)
                    if pair in checked:
                        continue
                    checked.add(pair)
                    lb = len(dsets[b])
                    # shared count is at most min(|A|, |B|)
                    if 2.0 * min(la, lb) / (la + lb) < tau:
                        continue
                    if uf.find(a) == uf.find(b):
                        continue
                    if dice(a, b) >= tau:
                        uf.union(a, b)

    groups: dict[str, list[str]] = {}
    for t in terms:
        groups.setdefault(uf.find(t), []).append(t)
    mapping: dict[str, str] = {}
    for members in groups.values():
        rep = min(members, key=lambda t: (-freq.get(t, 0), len(t), t))
        for t in members:
            if t != rep:
                mapping[t] = rep
    return ConflationMap(mapping)
