"""Knowledge-graph embeddings from random walks.

Pipeline: parse an N-Triples graph, run seeded random walks from every
entity, and train skip-gram negative-sampling embeddings over the walk
corpus — either classic (one shared output matrix) or order-aware (one
output matrix per window offset, so context position matters). Ships
with a word2vec-compatible text format and a small evaluation harness
(analogies, clustering, kNN).
"""

__version__ = "0.1.0"

from .embeddings import WordVectors, export_text, import_text
from .errors import (
    ConfigError,
    DatasetFormatError,
    DivergenceError,
    EmbeddingFormatError,
    EmptyCorpusError,
    EmptyGraphError,
    ExportError,
    GraphParseError,
    InternalConsistencyError,
    InvalidIdError,
    RdfvecError,
    UndefinedSimilarityError,
    UnknownTokenError,
)
from .eval import (
    AnalogyResult,
    KnnResult,
    clustering_accuracy,
    cosine,
    evaluate_analogies,
    kmeans,
    knn_evaluate,
    read_analogies,
    read_labeled,
    solve_analogy,
)
from .graph import KnowledgeGraph, Triple, load_graph, parse_ntriples
from .train import (
    EmbeddingModel,
    TrainConfig,
    init_model,
    offset_matrix_map,
    sgns_step,
    train,
)
from .vocab import (
    NegativeTable,
    Vocabulary,
    build_negative_table,
    build_vocabulary,
    write_vocabulary,
)
from .walks import Corpus, WalkConfig, generate_walks, write_walks

__all__ = [
    "__version__",
    "AnalogyResult",
    "ConfigError",
    "Corpus",
    "DatasetFormatError",
    "DivergenceError",
    "EmbeddingFormatError",
    "EmbeddingModel",
    "EmptyCorpusError",
    "EmptyGraphError",
    "ExportError",
    "GraphParseError",
    "InternalConsistencyError",
    "InvalidIdError",
    "KnnResult",
    "KnowledgeGraph",
    "NegativeTable",
    "RdfvecError",
    "TrainConfig",
    "Triple",
    "UndefinedSimilarityError",
    "UnknownTokenError",
    "Vocabulary",
    "WalkConfig",
    "WordVectors",
    "build_negative_table",
    "build_vocabulary",
    "clustering_accuracy",
    "cosine",
    "evaluate_analogies",
    "export_text",
    "generate_walks",
    "import_text",
    "init_model",
    "kmeans",
    "knn_evaluate",
    "load_graph",
    "offset_matrix_map",
    "parse_ntriples",
    "read_analogies",
    "read_labeled",
    "sgns_step",
    "solve_analogy",
    "train",
    "write_vocabulary",
    "write_walks",
]
