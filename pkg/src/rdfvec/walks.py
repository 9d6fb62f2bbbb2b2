"""Seeded random walks over the knowledge graph.

Every entity with at least one outgoing edge starts `walks_per_node`
walks; each step picks uniformly among the current node's out-edges
and a walk stops early at a sink. A walk token sequence alternates
entity, predicate, entity, ... so a depth-d walk has at most 2d+1
tokens.

Each walk draws from its own splitmix64 stream derived from
(seed, start entity ID, walk index), so output is reproducible
bit-for-bit no matter how work is scheduled across threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, TextIO

import numpy as np

from . import kernels
from .errors import ConfigError, EmptyGraphError, InternalConsistencyError
from .graph import KnowledgeGraph


@dataclass(frozen=True)
class WalkConfig:
    walks_per_node: int = 500
    depth: int = 4  # node hops; max walk length is 2*depth + 1 tokens
    seed: int = 1

    def __post_init__(self):
        if self.walks_per_node < 1:
            raise ConfigError("walks_per_node must be >= 1")
        if self.depth < 1:
            raise ConfigError("depth must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")


class Corpus:
    """Walks as token-ID rows plus the table resolving IDs to strings.

    Token IDs share one space: entity IDs first, then predicate IDs
    shifted past them. Rows are padded with -1 after a truncated walk.
    """

    def __init__(self, tokens: list[str], walks: np.ndarray):
        self.tokens = tokens
        self.walks = walks

    def __len__(self) -> int:
        return self.walks.shape[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        for row in self.walks:
            yield trim_walk(row)


def trim_walk(row: np.ndarray) -> np.ndarray:
    """Strip the -1 padding off one walk row."""
    pad = np.flatnonzero(row < 0)
    return row[: pad[0]] if pad.size else row


def generate_walks(
    graph: KnowledgeGraph,
    config: WalkConfig,
    threads: int = 1,
    backend: str | None = None,
) -> Corpus:
    """Run `walks_per_node` seeded walks from every non-sink entity.

    Rows are ordered by (start entity ID, walk index); entities with no
    outgoing edges start nothing. Output is identical for any `threads`.
    """
    if graph.n_entities == 0:
        raise EmptyGraphError("cannot walk an empty graph")
    offsets, preds, objs = graph.csr()
    starts = np.flatnonzero(np.diff(offsets) > 0).astype(np.int64)
    width = 2 * config.depth + 1
    out = np.full((len(starts) * config.walks_per_node, width), -1, dtype=np.int32)
    pred_base = graph.n_entities

    def run(chunk: np.ndarray, rows: np.ndarray) -> None:
        kernels.fill_walks(
            offsets,
            preds,
            objs,
            chunk,
            config.walks_per_node,
            config.depth,
            config.seed,
            pred_base,
            rows,
            backend=backend,
        )

    if threads <= 1 or len(starts) < 2:
        run(starts, out)
    else:
        # per-walk streams make row contents scheduling-independent
        bounds = np.linspace(0, len(starts), min(threads, len(starts)) + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(
                    run,
                    starts[a:b],
                    out[a * config.walks_per_node : b * config.walks_per_node],
                )
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            for f in futures:
                f.result()

    tokens = list(graph.entities) + list(graph.predicates)
    return Corpus(tokens, out)


def write_walks(corpus: Corpus, sink: TextIO) -> int:
    """Write one space-separated line per walk; returns lines written."""
    n_tokens = len(corpus.tokens)
    lines = 0
    for row in corpus.walks:
        walk = trim_walk(row)
        if walk.size == 0 or walk.max(initial=-1) >= n_tokens or walk.min(initial=0) < 0:
            raise InternalConsistencyError(
                f"walk row {lines} holds token ids outside 0..{n_tokens - 1}"
            )
        sink.write(" ".join(corpus.tokens[t] for t in walk))
        sink.write("\n")
        lines += 1
    return lines
