"""Task harness over entity vectors: analogies, clustering, kNN.

Keeps the learners deliberately small and deterministic: 3CosAdd for
analogies, k-means with plus-plus seeding for clustering (accuracy
under the optimal cluster-to-label matching), and leave-one-out kNN
for classification/regression. Entities missing from the vector
vocabulary count as errors (analogies) or are dropped with a reported
count (labeled datasets).
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO, Union

import numpy as np
from scipy.optimize import linear_sum_assignment

from .embeddings import WordVectors
from .errors import (
    ConfigError,
    DatasetFormatError,
    UndefinedSimilarityError,
    UnknownTokenError,
)

Source = Union[str, os.PathLike, TextIO, Iterable[str]]


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|); raises on zero vectors or shape mismatch."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ConfigError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise UndefinedSimilarityError("cosine similarity of a zero vector is undefined")
    return float(np.dot(u, v) / (nu * nv))


def _rank_target(vectors: WordVectors, target: np.ndarray, exclude: set[str]) -> str:
    norm = np.linalg.norm(target)
    if norm == 0.0:
        raise UndefinedSimilarityError("analogy target vector is zero")
    sims = vectors.unit_matrix() @ (target / norm)
    for tok in exclude:
        i = vectors.index.get(tok)
        if i is not None:
            sims[i] = -np.inf
    best = np.max(sims)
    if not np.isfinite(best):
        raise ConfigError("no candidate tokens left")
    ties = np.flatnonzero(sims == best)
    return min(vectors.tokens[i] for i in ties)


def solve_analogy(vectors: WordVectors, a: str, b: str, c: str) -> str:
    """3CosAdd: the token nearest to vec(b) - vec(a) + vec(c).

    The query tokens themselves are excluded; cosine ties break
    lexicographically.
    """
    for tok in (a, b, c):
        if tok not in vectors:
            raise UnknownTokenError(f"token not in vocabulary: {tok!r}")
    target = (
        vectors.vec(b).astype(np.float64)
        - vectors.vec(a).astype(np.float64)
        + vectors.vec(c).astype(np.float64)
    )
    return _rank_target(vectors, target, {a, b, c})


@dataclass(frozen=True)
class AnalogyResult:
    accuracy: float
    correct: int
    total: int
    oov: int


def evaluate_analogies(
    vectors: WordVectors, quads: Sequence[tuple[str, str, str, str]]
) -> AnalogyResult:
    """Fraction of quadruples solved; OOV quadruples count as wrong."""
    if not quads:
        raise ConfigError("empty analogy set")
    correct = 0
    oov = 0
    for a, b, c, d in quads:
        if any(t not in vectors for t in (a, b, c, d)):
            oov += 1
            continue
        if solve_analogy(vectors, a, b, c) == d:
            correct += 1
    return AnalogyResult(correct / len(quads), correct, len(quads), oov)


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int = 1,
    objective_trace: list | None = None,
) -> np.ndarray:
    """Lloyd's algorithm with plus-plus seeding; returns assignments.

    Runs at most 100 iterations and stops as soon as assignments are
    stable. Empty clusters keep their previous centroid, which keeps
    the within-cluster sum of squares non-increasing; pass a list as
    `objective_trace` to record that sum after each assignment step.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ConfigError("points must be a 2-D array")
    n = pts.shape[0]
    if k < 1 or k > n:
        raise ConfigError(f"k={k} must be in 1..{n}")
    gen = np.random.default_rng(seed)

    centroids = np.empty((k, pts.shape[1]), dtype=np.float64)
    centroids[0] = pts[gen.integers(n)]
    d2 = np.sum((pts - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total > 0.0:
            idx = gen.choice(n, p=d2 / total)
        else:
            idx = gen.integers(n)
        centroids[j] = pts[idx]
        d2 = np.minimum(d2, np.sum((pts - centroids[j]) ** 2, axis=1))

    assign = np.full(n, -1, dtype=np.int64)
    for _ in range(100):
        dist = ((pts[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assign = np.argmin(dist, axis=1)
        if objective_trace is not None:
            objective_trace.append(float(dist[np.arange(n), new_assign].sum()))
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            members = pts[assign == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    return assign


def clustering_accuracy(assignments: Sequence[int], labels: Sequence[str]) -> float:
    """Accuracy under the best one-to-one cluster-to-label matching."""
    if len(assignments) != len(labels):
        raise ConfigError("assignments and labels differ in length")
    if len(labels) == 0:
        raise ConfigError("empty clustering")
    clusters = sorted(set(int(a) for a in assignments))
    names = sorted(set(labels))
    table = np.zeros((len(clusters), len(names)), dtype=np.int64)
    crow = {c: i for i, c in enumerate(clusters)}
    lcol = {l: i for i, l in enumerate(names)}
    for a, l in zip(assignments, labels):
        table[crow[int(a)], lcol[l]] += 1
    rows, cols = linear_sum_assignment(-table)
    return float(table[rows, cols].sum() / len(labels))


@dataclass(frozen=True)
class KnnResult:
    metric: str  # "accuracy" or "rmse"
    value: float
    oov: int


def _neighbor_order(sims_row: np.ndarray) -> np.ndarray:
    # highest similarity first, index ascending on exact ties
    return np.lexsort((np.arange(sims_row.size), -sims_row))


def knn_evaluate(
    vectors: WordVectors,
    data: Sequence[tuple[str, str]],
    k: int = 3,
    task: str = "classify",
) -> KnnResult:
    """Leave-one-out kNN over cosine similarity.

    classify: majority label of the k nearest (ties -> smallest label);
    regress: mean target of the k nearest, scored as RMSE.
    """
    if task not in ("classify", "regress"):
        raise ConfigError(f"unknown task {task!r}")
    if k < 1:
        raise ConfigError("k must be >= 1")
    kept = [(e, l) for e, l in data if e in vectors]
    oov = len(data) - len(kept)
    if not kept:
        raise ConfigError("no in-vocabulary records")
    if len(kept) < k + 1:
        raise ConfigError(f"need at least {k + 1} in-vocabulary records, have {len(kept)}")
    rows = np.stack([vectors.vec(e) for e, _ in kept]).astype(np.float64)
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    if np.any(norms == 0):
        raise UndefinedSimilarityError("zero vector among dataset entities")
    unit = rows / norms
    sims = unit @ unit.T
    np.fill_diagonal(sims, -np.inf)

    if task == "classify":
        labels = [l for _, l in kept]
        hits = 0
        for i in range(len(kept)):
            nn = _neighbor_order(sims[i])[:k]
            tally = Counter(labels[j] for j in nn)
            top = max(tally.values())
            winner = min(l for l, c in tally.items() if c == top)
            hits += winner == labels[i]
        return KnnResult("accuracy", hits / len(kept), oov)

    try:
        targets = np.array([float(l) for _, l in kept], dtype=np.float64)
    except ValueError:
        raise ConfigError("regression labels must be numeric") from None
    errs = np.empty(len(kept), dtype=np.float64)
    for i in range(len(kept)):
        nn = _neighbor_order(sims[i])[:k]
        errs[i] = targets[nn].mean() - targets[i]
    return KnnResult("rmse", float(np.sqrt(np.mean(errs**2))), oov)


def read_labeled(source: Source) -> list[tuple[str, str]]:
    """`entity<TAB>label` lines; `#` comments and blanks skipped."""
    records: list[tuple[str, str]] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise DatasetFormatError(lineno, "expected 'entity<TAB>label'")
        entity, label = parts
        if entity in seen:
            raise DatasetFormatError(lineno, f"duplicate entity {entity!r}")
        seen.add(entity)
        records.append((entity, label))
    return records


def read_analogies(source: Source) -> list[tuple[str, str, str, str]]:
    """`a b c d` lines; `#` comments and blanks skipped."""
    quads: list[tuple[str, str, str, str]] = []
    for lineno, raw in enumerate(_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise DatasetFormatError(lineno, f"expected 4 tokens, found {len(parts)}")
        if len(set(parts)) != 4:
            raise DatasetFormatError(lineno, "analogy tokens must be distinct")
        quads.append(tuple(parts))  # type: ignore[arg-type]
    return quads


def _lines(source: Source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rt", encoding="utf-8") as fh:
            yield from fh
        return
    yield from source
