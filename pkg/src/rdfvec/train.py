"""Skip-gram negative-sampling trainer, classic and order-aware.

Classic mode is plain word2vec SG: one output matrix shared by every
context position. Ordered mode keeps one output matrix per signed
window offset (2*window of them), so predicting the token two steps
ahead uses different weights than predicting the token two steps back.
Everything else — the negative-sampling objective, the update rule,
the learning-rate schedule — is identical between the modes, which is
what makes them comparable on the same walk corpus.

The per-step objective for center c and context x at offset o is

    loss = -ln s(u.v) - sum_n ln s(-u_n.v)

with v the input row of c, u the row of x in the offset's output
matrix, u_n rows of drawn negatives, and s the logistic function. One
step applies the exact gradient of that expression at the pre-update
parameter values, scaled by the current learning rate.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, TextIO, Union

import numpy as np

from . import kernels, rng
from .errors import ConfigError, DivergenceError, EmptyCorpusError
from .vocab import NegativeTable, Vocabulary, keep_probabilities

WalkSource = Union[str, os.PathLike, TextIO, Iterable[str]]

MODES = ("classic", "ordered")
LR_FLOOR_RATIO = 1e-4


@dataclass(frozen=True)
class TrainConfig:
    mode: str = "classic"
    dimension: int = 100
    window: int = 5
    epochs: int = 5
    negatives: int = 5
    initial_lr: float = 0.025
    seed: int = 1
    dynamic_window: bool = True  # classic only; ordered always trains the full window
    threads: int = 1
    sample: float = 0.0  # frequent-token subsampling threshold, 0 = off

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.dimension < 1:
            raise ConfigError("dimension must be >= 1")
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if self.epochs < 1:
            raise ConfigError("epochs must be >= 1")
        if self.negatives < 1:
            raise ConfigError("negatives must be >= 1")
        if self.initial_lr <= 0:
            raise ConfigError("initial_lr must be > 0")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.sample < 0:
            raise ConfigError("sample must be >= 0")


@dataclass
class EmbeddingModel:
    """Input embeddings plus the mode's output matrices.

    `outputs` is (M, V, D): M = 1 in classic mode, 2*window in ordered
    mode, indexed through offset_matrix_map().
    """

    input: np.ndarray
    outputs: np.ndarray
    mode: str

    @property
    def dimension(self) -> int:
        return int(self.input.shape[1])

    @property
    def vocab_size(self) -> int:
        return int(self.input.shape[0])

    @property
    def output_matrices(self) -> list[np.ndarray]:
        return [self.outputs[m] for m in range(self.outputs.shape[0])]


def offset_matrix_map(mode: str, window: int) -> np.ndarray:
    """Map array: slot offset+window -> output matrix index (-1 at 0).

    Classic mode sends every offset to matrix 0. Ordered mode numbers
    the matrices -window..-1 then +1..+window.
    """
    table = np.full(2 * window + 1, -1, dtype=np.int32)
    for o in range(-window, window + 1):
        if o == 0:
            continue
        if mode == "classic":
            table[o + window] = 0
        else:
            table[o + window] = o + window if o < 0 else window + o - 1
    return table


def init_model(
    vocab: Vocabulary,
    config: TrainConfig,
    dtype: np.dtype = np.float32,
) -> EmbeddingModel:
    """Seeded init: uniform input rows in [-0.5/D, 0.5/D], zero outputs."""
    v = len(vocab)
    if v == 0:
        raise ConfigError("vocabulary is empty")
    d = config.dimension
    n_out = 1 if config.mode == "classic" else 2 * config.window
    state = rng.derive_stream(config.seed, rng.STREAM_INIT)
    unit, _ = rng.unit_block(state, v * d)
    inputs = ((unit - 0.5) / d).astype(dtype).reshape(v, d)
    outputs = np.zeros((n_out, v, d), dtype=dtype)
    return EmbeddingModel(input=inputs, outputs=outputs, mode=config.mode)


def _logistic(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


def _softplus(x: float) -> float:
    if x > 0.0:
        return float(x + np.log1p(np.exp(-x)))
    return float(np.log1p(np.exp(x)))


def sgns_step(
    model: EmbeddingModel,
    center: int,
    context: int,
    offset: int,
    negatives: Iterable[int],
    lr: float,
) -> float:
    """One SGD update for a (center, context, negatives) example.

    Selects the output matrix by `offset` in ordered mode (classic mode
    ignores the offset's sign/magnitude beyond it being nonzero),
    applies the exact gradient at the pre-update values, and returns
    the pre-update loss.
    """
    if lr <= 0:
        raise ConfigError("lr must be > 0")
    if offset == 0:
        raise ConfigError("offset 0 is the center itself")
    if model.mode == "classic":
        m = 0
    else:
        window = model.outputs.shape[0] // 2
        if not -window <= offset <= window:
            raise ConfigError(f"offset {offset} outside window {window}")
        m = offset + window if offset < 0 else window + offset - 1
    vrow = model.input[center]
    urow = model.outputs[m, context]
    neg_ids = list(negatives)

    v64 = vrow.astype(np.float64)
    fpos = float(v64 @ urow.astype(np.float64))
    loss = _softplus(-fpos)
    cpos = lr * _logistic(-fpos)
    neg_coef = []
    for nid in neg_ids:
        fneg = float(v64 @ model.outputs[m, nid].astype(np.float64))
        loss += _softplus(fneg)
        neg_coef.append(-lr * _logistic(fneg))
    if not np.isfinite(loss):
        raise DivergenceError(center, context)

    ftype = vrow.dtype.type
    vdelta = ftype(cpos) * urow
    for nid, g in zip(neg_ids, neg_coef):
        vdelta = vdelta + ftype(g) * model.outputs[m, nid]
    urow += ftype(cpos) * vrow
    for nid, g in zip(neg_ids, neg_coef):
        model.outputs[m, nid] += ftype(g) * vrow
    vrow += vdelta
    return loss


def encode_corpus(
    walks: WalkSource, vocab: Vocabulary
) -> tuple[np.ndarray, np.ndarray]:
    """Token-ID arrays for the walk stream: (flat tokens, line offsets).

    Out-of-vocabulary tokens are dropped and do not occupy a window
    slot; lines left empty are dropped entirely.
    """
    ids: list[int] = []
    offsets: list[int] = [0]
    index = vocab.index
    for line in _walk_lines(walks):
        n = 0
        for tok in line.split():
            i = index.get(tok)
            if i is not None:
                ids.append(i)
                n += 1
        if n:
            offsets.append(len(ids))
    tokens = np.array(ids, dtype=np.int32)
    return tokens, np.array(offsets, dtype=np.int64)


def _walk_lines(walks: WalkSource):
    if isinstance(walks, (str, os.PathLike)):
        with open(walks, "rt", encoding="utf-8") as fh:
            yield from fh
        return
    yield from walks


def train(
    walks: WalkSource,
    vocab: Vocabulary,
    neg: NegativeTable,
    config: TrainConfig,
    *,
    model: EmbeddingModel | None = None,
    offset_map: np.ndarray | None = None,
    backend: str | None = None,
) -> tuple[EmbeddingModel, list[float]]:
    """Train over the walk stream; returns (model, per-epoch mean loss).

    With threads=1 the result is bit-identical across runs for a fixed
    seed. threads>1 runs hogwild-style shards over shared matrices and
    trades that determinism for throughput.

    `model` and `offset_map` default to fresh init_model(vocab, config)
    and offset_matrix_map(config.mode, config.window); passing them
    explicitly is meant for diagnostics (e.g. tying all ordered output
    matrices to one shared matrix).
    """
    tokens, offsets = encode_corpus(walks, vocab)
    if tokens.size == 0:
        raise EmptyCorpusError("no in-vocabulary tokens in the walk stream")
    if model is None:
        model = init_model(vocab, config)
    if offset_map is None:
        offset_map = offset_matrix_map(config.mode, config.window)
    ordered = config.mode == "ordered"
    dynamic = bool(config.dynamic_window) and not ordered
    lr_min = config.initial_lr * LR_FLOOR_RATIO
    total = int(config.epochs) * int(tokens.size)
    keep = keep_probabilities(vocab, config.sample) if config.sample > 0 else None

    n_workers = max(1, min(config.threads, offsets.size - 1))
    states = [
        np.array([rng.derive_stream(config.seed, rng.STREAM_TRAIN, w)], dtype=np.uint64)
        for w in range(n_workers)
    ]

    losses: list[float] = []
    for epoch in range(config.epochs):
        ep_tokens, ep_offsets = tokens, offsets
        if keep is not None:
            ep_tokens, ep_offsets = _subsample(tokens, offsets, keep, config.seed, epoch)
            if ep_tokens.size == 0:
                losses.append(0.0)
                continue
        processed0 = epoch * int(tokens.size)
        loss_sum, steps = _run_epoch(
            ep_tokens,
            ep_offsets,
            model,
            offset_map,
            ordered,
            dynamic,
            config,
            neg,
            lr_min,
            processed0,
            total,
            states,
            n_workers,
            backend,
        )
        losses.append(loss_sum / steps if steps else 0.0)

    if not np.isfinite(model.input).all() or not np.isfinite(model.outputs).all():
        raise DivergenceError(-1, -1)
    return model, losses


def _run_epoch(
    tokens,
    offsets,
    model,
    offset_map,
    ordered,
    dynamic,
    config,
    neg,
    lr_min,
    processed0,
    total,
    states,
    n_workers,
    backend,
):
    n_lines = offsets.size - 1
    shards = []
    bounds = np.linspace(0, n_lines, min(n_workers, n_lines) + 1, dtype=int)
    for w, (a, b) in enumerate(zip(bounds[:-1], bounds[1:])):
        if b > a:
            shards.append((w, offsets[a : b + 1], int(processed0 + offsets[a])))

    err_boxes = [np.zeros(3, dtype=np.int64) for _ in shards]

    def run(shard_idx: int):
        w, shard_offsets, shard_processed0 = shards[shard_idx]
        return kernels.sgns_epoch(
            tokens,
            shard_offsets,
            model.input,
            model.outputs,
            offset_map,
            ordered,
            dynamic,
            config.window,
            config.negatives,
            neg.table,
            config.initial_lr,
            lr_min,
            shard_processed0,
            total,
            states[w],
            err_boxes[shard_idx],
            backend=backend,
        )

    if len(shards) == 1:
        results = [run(0)]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=len(shards)) as pool:
            results = list(pool.map(run, range(len(shards))))

    loss_sum = sum(r[0] for r in results)
    steps = sum(r[1] for r in results)
    for box in err_boxes:
        if box[0]:
            raise DivergenceError(int(box[1]), int(box[2]))
    return loss_sum, steps


def _subsample(tokens, offsets, keep, seed, epoch):
    """Drop frequent tokens for one epoch, keeping line structure."""
    state = rng.derive_stream(seed, rng.STREAM_SUBSAMPLE, epoch)
    draws, _ = rng.unit_block(state, tokens.size)
    mask = draws < keep[tokens]
    new_tokens = tokens[mask]
    counts = np.add.reduceat(mask.astype(np.int64), offsets[:-1]) if offsets.size > 1 else []
    new_offsets = [0]
    for c in counts:
        if c:
            new_offsets.append(new_offsets[-1] + int(c))
    return new_tokens, np.array(new_offsets, dtype=np.int64)
