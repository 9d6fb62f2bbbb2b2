"""Vocabulary statistics and the negative-sampling table.

The vocabulary assigns dense IDs 0..V-1 in descending count order
(ties broken lexicographically), so shuffling walk lines changes
nothing. The negative table materialises the count^power unigram
distribution as a flat array of token IDs; drawing a uniform slot
draws a token with the right probability to within one slot.
"""

from __future__ import annotations

import os
from collections import Counter
from typing import Iterable, TextIO, Union

import numpy as np

from .errors import ConfigError, EmptyCorpusError

WalkSource = Union[str, os.PathLike, TextIO, Iterable[str]]

DEFAULT_TABLE_SIZE = 10_000_000
DEFAULT_POWER = 0.75


class Vocabulary:
    def __init__(self, tokens: list[str], counts: np.ndarray, total_tokens: int):
        self.tokens = tokens
        self.counts = counts
        self.total_tokens = total_tokens
        self.index = {t: i for i, t in enumerate(tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def id_of(self, token: str) -> int | None:
        return self.index.get(token)

    def count(self, token: str) -> int:
        i = self.index.get(token)
        return 0 if i is None else int(self.counts[i])


def _walk_lines(walks: WalkSource):
    if isinstance(walks, (str, os.PathLike)):
        with open(walks, "rt", encoding="utf-8") as fh:
            yield from fh
        return
    yield from walks


def build_vocabulary(walks: WalkSource, min_count: int = 1) -> Vocabulary:
    """Count walk tokens and keep those seen at least `min_count` times."""
    if min_count < 0:
        raise ConfigError("min_count must be >= 0")
    counter: Counter[str] = Counter()
    for line in _walk_lines(walks):
        counter.update(line.split())
    if not counter:
        raise EmptyCorpusError("walk stream contains no tokens")
    kept = sorted(
        ((t, c) for t, c in counter.items() if c >= min_count),
        key=lambda tc: (-tc[1], tc[0]),
    )
    if not kept:
        raise EmptyCorpusError(f"no token reaches min_count={min_count}")
    tokens = [t for t, _ in kept]
    counts = np.array([c for _, c in kept], dtype=np.int64)
    return Vocabulary(tokens, counts, int(counts.sum()))


class NegativeTable:
    def __init__(self, table: np.ndarray):
        self.table = table

    @property
    def size(self) -> int:
        return int(self.table.shape[0])


def build_negative_table(
    vocab: Vocabulary,
    power: float = DEFAULT_POWER,
    table_size: int = DEFAULT_TABLE_SIZE,
) -> NegativeTable:
    """Fill a token-ID array proportional to count^power, ±1 slot."""
    v = len(vocab)
    if v == 0:
        raise EmptyCorpusError("vocabulary is empty")
    if power <= 0:
        raise ConfigError("power must be > 0")
    if table_size < v:
        raise ConfigError(f"table_size {table_size} smaller than vocabulary {v}")
    weights = vocab.counts.astype(np.float64) ** power
    cum = np.cumsum(weights)
    edges = np.floor(table_size * (cum / cum[-1])).astype(np.int64)
    slots = np.diff(np.concatenate(([0], edges)))
    table = np.repeat(np.arange(v, dtype=np.int32), slots)
    return NegativeTable(table)


def keep_probabilities(vocab: Vocabulary, sample: float) -> np.ndarray:
    """Per-token keep probability for frequent-token subsampling.

    `sample` is the usual threshold (e.g. 1e-3); 0 disables, giving
    probability 1 everywhere.
    """
    if sample < 0:
        raise ConfigError("sample must be >= 0")
    if sample == 0:
        return np.ones(len(vocab), dtype=np.float64)
    threshold = sample * vocab.total_tokens
    freq = vocab.counts.astype(np.float64)
    keep = (np.sqrt(freq / threshold) + 1.0) * threshold / freq
    return np.minimum(keep, 1.0)


def write_vocabulary(vocab: Vocabulary, sink: TextIO) -> int:
    """Dump `token<TAB>count` lines in descending count order."""
    for token, count in zip(vocab.tokens, vocab.counts):
        sink.write(f"{token}\t{int(count)}\n")
    return len(vocab)
