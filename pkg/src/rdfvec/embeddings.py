"""Word2vec-style text interchange for trained embeddings.

Format: a `V D` header line, then one `token x1 .. xD` line per token
in vocabulary-ID order, single spaces, `\\n` terminators, six decimal
places per coordinate. Only the input matrix travels; output matrices
are training state.
"""

from __future__ import annotations

import os
from typing import TextIO, Union

import numpy as np

from .errors import (
    ConfigError,
    EmbeddingFormatError,
    ExportError,
    UnknownTokenError,
)
from .train import EmbeddingModel
from .vocab import Vocabulary

Source = Union[str, os.PathLike, TextIO]


def export_text(model: EmbeddingModel, vocab: Vocabulary, sink: TextIO) -> int:
    """Write the model's input vectors; returns the record count."""
    v, d = model.input.shape
    if v != len(vocab):
        raise ConfigError(f"model holds {v} rows but vocabulary has {len(vocab)} tokens")
    sink.write(f"{v} {d}\n")
    for i, token in enumerate(vocab.tokens):
        if any(c.isspace() for c in token):
            raise ExportError(f"token contains whitespace: {token!r}")
        row = model.input[i]
        sink.write(token)
        for x in row:
            sink.write(f" {x:.6f}")
        sink.write("\n")
    return v


def import_text(source: Source) -> tuple[list[str], np.ndarray]:
    """Read an embedding file back; returns (tokens, float32 matrix)."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rt", encoding="utf-8") as fh:
            return import_text(fh)
    header = source.readline()
    parts = header.split()
    if len(parts) != 2:
        raise EmbeddingFormatError(1, "header must be 'vocab_size dimension'")
    try:
        v, d = int(parts[0]), int(parts[1])
    except ValueError:
        raise EmbeddingFormatError(1, "non-numeric header field") from None
    if v < 0 or d < 1:
        raise EmbeddingFormatError(1, f"bad header counts {v} {d}")
    tokens: list[str] = []
    seen: set[str] = set()
    matrix = np.empty((v, d), dtype=np.float32)
    lineno = 1
    for raw in source:
        lineno += 1
        if not raw.strip():
            continue
        if len(tokens) >= v:
            raise EmbeddingFormatError(lineno, f"more than {v} records")
        fields = raw.split()
        if len(fields) != d + 1:
            raise EmbeddingFormatError(lineno, f"expected {d} values, found {len(fields) - 1}")
        token = fields[0]
        if token in seen:
            raise EmbeddingFormatError(lineno, f"duplicate token {token!r}")
        try:
            matrix[len(tokens)] = [float(x) for x in fields[1:]]
        except ValueError:
            raise EmbeddingFormatError(lineno, "non-numeric vector field") from None
        seen.add(token)
        tokens.append(token)
    if len(tokens) != v:
        raise EmbeddingFormatError(lineno + 1, f"header promised {v} records, found {len(tokens)}")
    return tokens, matrix


class WordVectors:
    """Token-keyed view over an imported vector table."""

    def __init__(self, tokens: list[str], matrix: np.ndarray):
        if len(tokens) != matrix.shape[0]:
            raise ConfigError("token list and matrix row count differ")
        self.tokens = tokens
        self.matrix = matrix
        self.index = {t: i for i, t in enumerate(tokens)}
        self._unit: np.ndarray | None = None

    @classmethod
    def from_file(cls, path: Source) -> "WordVectors":
        return cls(*import_text(path))

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def vec(self, token: str) -> np.ndarray:
        i = self.index.get(token)
        if i is None:
            raise UnknownTokenError(f"token not in vocabulary: {token!r}")
        return self.matrix[i]

    def unit_matrix(self) -> np.ndarray:
        """Rows scaled to unit norm (float64); zero rows stay zero."""
        if self._unit is None:
            m = self.matrix.astype(np.float64)
            norms = np.linalg.norm(m, axis=1, keepdims=True)
            self._unit = np.divide(m, norms, out=np.zeros_like(m), where=norms > 0)
        return self._unit
