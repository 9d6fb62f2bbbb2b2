"""Counter-based pseudo-randomness (splitmix64).

All randomness in the package flows through these streams so that walk
generation, model initialisation and single-threaded training are
reproducible bit-for-bit for a fixed seed, independent of worker
scheduling and of the numba/numpy backend choice.

A stream is a bare 64-bit state; each draw advances the state by the
golden-ratio increment and avalanches it. Streams for unrelated
consumers (walks, init, training, subsampling) are derived by folding
small integer tags into the seed, which makes them independent without
any shared mutable generator object.

The scalar helpers here are the pure-Python reference; the numba
kernels re-implement the same arithmetic on machine uint64 (see
kernels.py) and are tested to produce identical streams.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# stream tags: keep unrelated consumers on disjoint streams
STREAM_WALKS = 1
STREAM_INIT = 2
STREAM_TRAIN = 3
STREAM_SUBSAMPLE = 4

# uniform doubles use the top 53 bits
_INV53 = 2.0 ** -53


def mix64(z: int) -> int:
    """Avalanche a 64-bit value (splitmix64 finaliser)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive_stream(seed: int, tag: int, a: int = 0, b: int = 0) -> int:
    """Initial state of an independent stream for (seed, tag, a, b)."""
    state = mix64(seed & MASK64)
    state = mix64(state ^ (tag & MASK64))
    state = mix64(state ^ (a & MASK64))
    state = mix64(state ^ (b & MASK64))
    return state


def next_u64(state: int) -> tuple[int, int]:
    """Draw one 64-bit value; returns (value, new_state)."""
    state = (state + GOLDEN) & MASK64
    return mix64(state), state


def next_below(state: int, n: int) -> tuple[int, int]:
    """Draw an integer uniform in [0, n); returns (value, new_state)."""
    value, state = next_u64(state)
    return value % n, state


def next_unit(state: int) -> tuple[float, int]:
    """Draw a float uniform in [0, 1); returns (value, new_state)."""
    value, state = next_u64(state)
    return (value >> 11) * _INV53, state


def _mix64_array(z: np.ndarray) -> np.ndarray:
    # uint64 array arithmetic wraps silently, unlike uint64 scalars
    z = z.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX2)
    z ^= z >> np.uint64(31)
    return z


def unit_block(state: int, n: int) -> tuple[np.ndarray, int]:
    """Draw `n` uniform [0, 1) floats at once.

    Equivalent to `n` successive next_unit() calls; returns the array
    and the advanced state.
    """
    counters = np.arange(1, n + 1, dtype=np.uint64)
    counters *= np.uint64(GOLDEN)
    counters += np.uint64(state & MASK64)
    values = _mix64_array(counters)
    out = (values >> np.uint64(11)).astype(np.float64) * _INV53
    return out, (state + n * GOLDEN) & MASK64
