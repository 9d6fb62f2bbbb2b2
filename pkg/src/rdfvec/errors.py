"""Exception types shared across the package."""


class RdfvecError(Exception):
    """Base class for all rdfvec errors."""


class GraphParseError(RdfvecError):
    """Malformed N-Triples input. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidIdError(RdfvecError):
    """An entity or predicate ID does not exist in its table."""


class EmptyGraphError(RdfvecError):
    """Operation requires a graph with at least one entity."""


class EmptyCorpusError(RdfvecError):
    """Walk stream contained no usable tokens."""


class ConfigError(RdfvecError, ValueError):
    """Invalid configuration value or combination of values."""


class InternalConsistencyError(RdfvecError):
    """A token ID could not be resolved back to its string."""


class DivergenceError(RdfvecError):
    """Training produced a non-finite value."""

    def __init__(self, center: int, context: int):
        super().__init__(
            f"non-finite update involving center token id {center} "
            f"and context token id {context}"
        )
        self.center = center
        self.context = context


class ExportError(RdfvecError):
    """Model export failed (e.g. a token contains whitespace)."""


class EmbeddingFormatError(RdfvecError):
    """Malformed embedding file. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DatasetFormatError(RdfvecError):
    """Malformed evaluation dataset file. Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownTokenError(RdfvecError, KeyError):
    """Query token is absent from the vocabulary."""

    def __str__(self):  # KeyError quotes its arg; keep the plain message
        return Exception.__str__(self)


class UndefinedSimilarityError(RdfvecError):
    """Cosine similarity is undefined (zero vector involved)."""
