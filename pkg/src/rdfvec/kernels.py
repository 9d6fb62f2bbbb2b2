"""Hot numeric kernels: random walks and skip-gram negative sampling.

Two interchangeable backends:

* ``numba`` -- @njit-compiled loops, the default whenever numba imports
  cleanly. Kernels are compiled with ``nogil=True`` so callers can run
  them from a thread pool (parallel walk generation, hogwild training).
* ``numpy`` -- pure numpy/python reference path, also the fallback when
  numba is missing.

Set ``RDFVEC_PURE_NUMPY=1`` to force the numpy path; the active default
is reported in ``BACKEND``. Both paths consume identical splitmix64
streams (see rng.py): walk output is bit-identical across backends,
training matches up to float rounding (the dot products accumulate in
a different order).

``benchmarks/bench_kernels.py`` times one backend against the other.
"""

from __future__ import annotations

import os

import numpy as np

from . import rng
from .errors import ConfigError

ENV_FLAG = "RDFVEC_PURE_NUMPY"

try:
    if os.environ.get(ENV_FLAG, "").strip() not in ("", "0"):
        raise ImportError("numpy backend forced via " + ENV_FLAG)
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"

_U_GOLDEN = np.uint64(rng.GOLDEN)
_U_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_U_MIX2 = np.uint64(0x94D049BB133111EB)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U_TAG_WALKS = np.uint64(rng.STREAM_WALKS)


def resolve_backend(backend: str | None = None) -> str:
    b = backend or BACKEND
    if b not in ("numba", "numpy"):
        raise ConfigError(f"unknown backend {b!r}")
    if b == "numba" and not HAS_NUMBA:
        raise ConfigError("numba backend requested but numba is not available")
    return b


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(cache=True, inline="always")
    def _mix64_nb(z):
        z = (z ^ (z >> _U30)) * _U_MIX1
        z = (z ^ (z >> _U27)) * _U_MIX2
        return z ^ (z >> _U31)

    @njit(cache=True, inline="always")
    def _derive_nb(seed, tag, a, b):
        s = _mix64_nb(seed)
        s = _mix64_nb(s ^ tag)
        s = _mix64_nb(s ^ a)
        s = _mix64_nb(s ^ b)
        return s

    @njit(cache=True)
    def _rng_block_nb(seed, tag, a, b, n):
        # test hook: n successive draws from the derived stream
        out = np.empty(n, dtype=np.uint64)
        state = _derive_nb(np.uint64(seed), np.uint64(tag), np.uint64(a), np.uint64(b))
        for i in range(n):
            state = state + _U_GOLDEN
            out[i] = _mix64_nb(state)
        return out

    @njit(cache=True, nogil=True)
    def _walks_nb(offsets, preds, objs, starts, walks_per_node, depth, seed, pred_base, out):
        tag = _U_TAG_WALKS
        useed = np.uint64(seed)
        for s in range(starts.shape[0]):
            e0 = starts[s]
            for w in range(walks_per_node):
                state = _derive_nb(useed, tag, np.uint64(e0), np.uint64(w))
                row = s * walks_per_node + w
                cur = np.int64(e0)
                out[row, 0] = np.int32(cur)
                pos = 1
                for _hop in range(depth):
                    lo = offsets[cur]
                    deg = offsets[cur + 1] - lo
                    if deg == 0:
                        break
                    state = state + _U_GOLDEN
                    r = _mix64_nb(state)
                    k = lo + np.int64(r % np.uint64(deg))
                    out[row, pos] = np.int32(pred_base + preds[k])
                    cur = np.int64(objs[k])
                    out[row, pos + 1] = np.int32(cur)
                    pos += 2

    @njit(cache=True, inline="always")
    def _sigmoid_nb(x):
        if x >= 0.0:
            return 1.0 / (1.0 + np.exp(-x))
        e = np.exp(x)
        return e / (1.0 + e)

    @njit(cache=True, inline="always")
    def _softplus_nb(x):
        if x > 0.0:
            return x + np.log1p(np.exp(-x))
        return np.log1p(np.exp(x))

    @njit(cache=True, nogil=True)
    def _sgns_epoch_nb(
        tokens,
        offsets,
        in_mat,
        out_mats,
        offmap,
        ordered,
        dynamic,
        window,
        negatives,
        table,
        lr0,
        lr_min,
        processed0,
        total,
        state_box,
        err_box,
    ):
        state = state_box[0]
        dim = in_mat.shape[1]
        tsize = table.shape[0]
        loss_sum = 0.0
        steps = np.int64(0)
        processed = processed0
        vdelta = np.empty(dim, dtype=np.float32)
        neg_ids = np.empty(negatives, dtype=np.int64)
        neg_coef = np.empty(negatives, dtype=np.float64)
        for li in range(offsets.shape[0] - 1):
            lo = offsets[li]
            length = offsets[li + 1] - lo
            for i in range(length):
                center = np.int64(tokens[lo + i])
                alpha = lr0 * (1.0 - processed / total)
                if alpha < lr_min:
                    alpha = lr_min
                processed += 1
                eff = window
                if dynamic and not ordered:
                    state = state + _U_GOLDEN
                    eff = np.int64(1) + np.int64(_mix64_nb(state) % np.uint64(window))
                jlo = i - eff
                if jlo < 0:
                    jlo = 0
                jhi = i + eff
                if jhi > length - 1:
                    jhi = length - 1
                vrow = in_mat[center]
                for j in range(jlo, jhi + 1):
                    if j == i:
                        continue
                    ctx = np.int64(tokens[lo + j])
                    m = np.int64(0)
                    if ordered:
                        m = np.int64(offmap[j - i + window])
                    urow = out_mats[m, ctx]
                    fpos = 0.0
                    for d in range(dim):
                        fpos += np.float64(vrow[d]) * np.float64(urow[d])
                    step_loss = _softplus_nb(-fpos)
                    cpos = alpha * _sigmoid_nb(-fpos)
                    for k in range(negatives):
                        cand = np.int64(-1)
                        for _try in range(100):
                            state = state + _U_GOLDEN
                            cand = np.int64(table[np.int64(_mix64_nb(state) % np.uint64(tsize))])
                            if cand != ctx:
                                break
                        nrow = out_mats[m, cand]
                        fneg = 0.0
                        for d in range(dim):
                            fneg += np.float64(vrow[d]) * np.float64(nrow[d])
                        step_loss += _softplus_nb(fneg)
                        neg_ids[k] = cand
                        neg_coef[k] = -alpha * _sigmoid_nb(fneg)
                    if not np.isfinite(step_loss):
                        err_box[0] = 1
                        err_box[1] = center
                        err_box[2] = ctx
                        state_box[0] = state
                        return loss_sum, steps, processed
                    loss_sum += step_loss
                    steps += 1
                    # gradients use the pre-update rows: fold v's delta first
                    c32 = np.float32(cpos)
                    for d in range(dim):
                        vdelta[d] = c32 * urow[d]
                    for k in range(negatives):
                        g32 = np.float32(neg_coef[k])
                        nrow = out_mats[m, neg_ids[k]]
                        for d in range(dim):
                            vdelta[d] += g32 * nrow[d]
                    for d in range(dim):
                        urow[d] += c32 * vrow[d]
                    for k in range(negatives):
                        g32 = np.float32(neg_coef[k])
                        nrow = out_mats[m, neg_ids[k]]
                        for d in range(dim):
                            nrow[d] += g32 * vrow[d]
                    for d in range(dim):
                        vrow[d] += vdelta[d]
        state_box[0] = state
        return loss_sum, steps, processed


# ---------------------------------------------------------------------------
# numpy fallback backend
# ---------------------------------------------------------------------------


def _walks_np(offsets, preds, objs, starts, walks_per_node, depth, seed, pred_base, out):
    for s in range(starts.shape[0]):
        e0 = int(starts[s])
        for w in range(walks_per_node):
            state = rng.derive_stream(seed, rng.STREAM_WALKS, e0, w)
            row = s * walks_per_node + w
            cur = e0
            out[row, 0] = cur
            pos = 1
            for _hop in range(depth):
                lo = int(offsets[cur])
                deg = int(offsets[cur + 1]) - lo
                if deg == 0:
                    break
                r, state = rng.next_u64(state)
                k = lo + r % deg
                out[row, pos] = pred_base + int(preds[k])
                cur = int(objs[k])
                out[row, pos + 1] = cur
                pos += 2


def _sgns_epoch_np(
    tokens,
    offsets,
    in_mat,
    out_mats,
    offmap,
    ordered,
    dynamic,
    window,
    negatives,
    table,
    lr0,
    lr_min,
    processed0,
    total,
    state_box,
    err_box,
):
    state = int(state_box[0])
    tsize = table.shape[0]
    loss_sum = 0.0
    steps = 0
    processed = int(processed0)
    for li in range(offsets.shape[0] - 1):
        lo = int(offsets[li])
        length = int(offsets[li + 1]) - lo
        for i in range(length):
            center = int(tokens[lo + i])
            alpha = max(lr0 * (1.0 - processed / total), lr_min)
            processed += 1
            eff = window
            if dynamic and not ordered:
                r, state = rng.next_u64(state)
                eff = 1 + r % window
            jlo = max(0, i - eff)
            jhi = min(length - 1, i + eff)
            vrow = in_mat[center]
            for j in range(jlo, jhi + 1):
                if j == i:
                    continue
                ctx = int(tokens[lo + j])
                m = int(offmap[j - i + window]) if ordered else 0
                urow = out_mats[m, ctx]
                v64 = vrow.astype(np.float64)
                fpos = float(v64 @ urow.astype(np.float64))
                step_loss = _softplus(-fpos)
                cpos = alpha * _sigmoid(-fpos)
                neg_ids = np.empty(negatives, dtype=np.int64)
                neg_coef = np.empty(negatives, dtype=np.float64)
                for k in range(negatives):
                    cand = -1
                    for _try in range(100):
                        r, state = rng.next_u64(state)
                        cand = int(table[r % tsize])
                        if cand != ctx:
                            break
                    fneg = float(v64 @ out_mats[m, cand].astype(np.float64))
                    step_loss += _softplus(fneg)
                    neg_ids[k] = cand
                    neg_coef[k] = -alpha * _sigmoid(fneg)
                if not np.isfinite(step_loss):
                    err_box[0] = 1
                    err_box[1] = center
                    err_box[2] = ctx
                    state_box[0] = np.uint64(state)
                    return loss_sum, steps, processed
                loss_sum += step_loss
                steps += 1
                c32 = np.float32(cpos)
                vdelta = c32 * urow
                for k in range(negatives):
                    vdelta += np.float32(neg_coef[k]) * out_mats[m, neg_ids[k]]
                urow += c32 * vrow
                for k in range(negatives):
                    out_mats[m, neg_ids[k]] += np.float32(neg_coef[k]) * vrow
                vrow += vdelta
    state_box[0] = np.uint64(state)
    return loss_sum, steps, processed


def _sigmoid(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


def _softplus(x: float) -> float:
    if x > 0.0:
        return float(x + np.log1p(np.exp(-x)))
    return float(np.log1p(np.exp(x)))


# ---------------------------------------------------------------------------
# dispatchers
# ---------------------------------------------------------------------------


def fill_walks(
    offsets: np.ndarray,
    preds: np.ndarray,
    objs: np.ndarray,
    starts: np.ndarray,
    walks_per_node: int,
    depth: int,
    seed: int,
    pred_base: int,
    out: np.ndarray,
    backend: str | None = None,
) -> None:
    """Fill `out` (rows = walks, -1 padded) with token IDs for all walks."""
    if resolve_backend(backend) == "numba":
        _walks_nb(offsets, preds, objs, starts, walks_per_node, depth, np.uint64(seed), pred_base, out)
    else:
        _walks_np(offsets, preds, objs, starts, walks_per_node, depth, seed, pred_base, out)


def sgns_epoch(
    tokens: np.ndarray,
    offsets: np.ndarray,
    in_mat: np.ndarray,
    out_mats: np.ndarray,
    offmap: np.ndarray,
    ordered: bool,
    dynamic: bool,
    window: int,
    negatives: int,
    table: np.ndarray,
    lr0: float,
    lr_min: float,
    processed0: int,
    total: int,
    state_box: np.ndarray,
    err_box: np.ndarray,
    backend: str | None = None,
) -> tuple[float, int, int]:
    """One pass over the encoded corpus; returns (loss_sum, steps, processed).

    Divergence is signalled through `err_box` = [flag, center, context].
    """
    impl = _sgns_epoch_nb if resolve_backend(backend) == "numba" else _sgns_epoch_np
    return impl(
        tokens,
        offsets,
        in_mat,
        out_mats,
        offmap,
        ordered,
        dynamic,
        window,
        negatives,
        table,
        lr0,
        lr_min,
        processed0,
        total,
        state_box,
        err_box,
    )


def rng_block(seed: int, tag: int, a: int, b: int, n: int, backend: str | None = None) -> np.ndarray:
    """n raw draws from a derived stream (cross-backend parity checks)."""
    if resolve_backend(backend) == "numba":
        return _rng_block_nb(
            np.uint64(seed & rng.MASK64), np.uint64(tag), np.uint64(a), np.uint64(b), n
        )
    state = rng.derive_stream(seed, tag, a, b)
    out = np.empty(n, dtype=np.uint64)
    for i in range(n):
        v, state = rng.next_u64(state)
        out[i] = v
    return out
