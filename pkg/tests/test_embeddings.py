import io

import numpy as np
import pytest

from rdfvec import (
    ConfigError,
    EmbeddingFormatError,
    ExportError,
    UnknownTokenError,
    export_text,
    import_text,
)
from rdfvec.embeddings import WordVectors
from rdfvec.train import EmbeddingModel
from rdfvec.vocab import Vocabulary


def make_model(matrix):
    matrix = np.asarray(matrix, dtype=np.float32)
    return EmbeddingModel(
        input=matrix,
        outputs=np.zeros((1,) + matrix.shape, dtype=np.float32),
        mode="classic",
    )


def make_vocab(tokens):
    return Vocabulary(tokens, np.ones(len(tokens), dtype=np.int64), len(tokens))


def test_export_header_and_line_count():
    model = make_model([[0.25, -0.5, 1.0], [0.0, 2.0, -3.5]])
    sink = io.StringIO()
    assert export_text(model, make_vocab(["a", "b"]), sink) == 2
    lines = sink.getvalue().splitlines()
    assert len(lines) == 3
    assert lines[0] == "2 3"
    assert lines[1] == "a 0.250000 -0.500000 1.000000"


def test_round_trip_within_tolerance():
    gen = np.random.default_rng(3)
    matrix = gen.normal(0, 1.5, (7, 5)).astype(np.float32)
    vocab = make_vocab([f"tok{i}" for i in range(7)])
    sink = io.StringIO()
    export_text(make_model(matrix), vocab, sink)
    tokens, back = import_text(io.StringIO(sink.getvalue()))
    assert tokens == vocab.tokens
    assert np.abs(back - matrix).max() <= 1e-6


def test_export_rejects_whitespace_token():
    model = make_model([[0.1], [0.2]])
    with pytest.raises(ExportError) as exc:
        export_text(model, make_vocab(["ok", "bad token"]), io.StringIO())
    assert "bad token" in str(exc.value)


def test_export_size_mismatch():
    model = make_model([[0.1], [0.2]])
    with pytest.raises(ConfigError):
        export_text(model, make_vocab(["only"]), io.StringIO())


def test_import_header_record_mismatch():
    text = "3 5\n" + "a 1 2 3 4 5\nb 1 2 3 4 5\n"
    with pytest.raises(EmbeddingFormatError):
        import_text(io.StringIO(text))


def test_import_short_record():
    text = "2 3\na 1.0 2.0 3.0\nb 1.0 2.0\n"
    with pytest.raises(EmbeddingFormatError) as exc:
        import_text(io.StringIO(text))
    assert exc.value.line == 3


def test_import_non_numeric_field():
    text = "1 2\na 1.0 oops\n"
    with pytest.raises(EmbeddingFormatError) as exc:
        import_text(io.StringIO(text))
    assert exc.value.line == 2


def test_import_duplicate_token():
    text = "2 1\na 1.0\na 2.0\n"
    with pytest.raises(EmbeddingFormatError) as exc:
        import_text(io.StringIO(text))
    assert exc.value.line == 3


def test_import_bad_header():
    with pytest.raises(EmbeddingFormatError):
        import_text(io.StringIO("banana\n"))
    with pytest.raises(EmbeddingFormatError):
        import_text(io.StringIO("2 x\n"))


def test_import_extra_records():
    text = "1 1\na 1.0\nb 2.0\n"
    with pytest.raises(EmbeddingFormatError):
        import_text(io.StringIO(text))


def test_import_from_path(tmp_path):
    path = tmp_path / "vectors.txt"
    path.write_text("2 2\nfoo 1.0 0.0\nbar 0.0 1.0\n", encoding="utf-8")
    tokens, matrix = import_text(path)
    assert tokens == ["foo", "bar"]
    assert matrix.shape == (2, 2)


def test_word_vectors_lookup(tmp_path):
    path = tmp_path / "vectors.txt"
    path.write_text("2 2\nfoo 1.0 0.0\nbar 0.0 1.0\n", encoding="utf-8")
    vecs = WordVectors.from_file(path)
    assert len(vecs) == 2
    assert "foo" in vecs
    assert vecs.vec("bar").tolist() == [0.0, 1.0]
    with pytest.raises(UnknownTokenError):
        vecs.vec("baz")


def test_unit_matrix_handles_zero_rows():
    vecs = WordVectors(["z", "u"], np.array([[0.0, 0.0], [3.0, 4.0]], dtype=np.float32))
    unit = vecs.unit_matrix()
    assert np.all(unit[0] == 0.0)
    assert np.allclose(np.linalg.norm(unit[1]), 1.0)
