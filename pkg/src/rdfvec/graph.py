"""N-Triples ingestion and the interned knowledge graph.

The graph is a directed labeled multigraph over interned string tables:
entity IRIs and predicate IRIs each map to dense integer IDs in order
of first appearance. Adjacency keeps, per entity, the ordered list of
(predicate ID, object entity ID) pairs, which is the substrate walks
sample from.

Triples whose object is a literal are counted but kept out of the
walkable structure entirely (they intern nothing): walks are over
entities, and a subject or predicate seen only next to literals can
never appear in a walk.
"""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO, Union

import numpy as np

from .errors import GraphParseError, InvalidIdError

# str means raw N-Triples content; paths go through load_graph()
LineSource = Union[str, TextIO, Iterable[str]]


@dataclass(frozen=True)
class Triple:
    """One RDF statement. `object` is an IRI unless `object_is_literal`."""

    subject: str
    predicate: str
    object: str
    object_is_literal: bool = False


class Interner:
    """Dense string<->ID table, IDs assigned in first-appearance order."""

    def __init__(self):
        self._strings: list[str] = []
        self._ids: dict[str, int] = {}

    def intern(self, s: str) -> int:
        i = self._ids.get(s)
        if i is None:
            i = len(self._strings)
            self._ids[s] = i
            self._strings.append(s)
        return i

    def lookup(self, s: str) -> int | None:
        return self._ids.get(s)

    def __getitem__(self, i: int) -> str:
        if not 0 <= i < len(self._strings):
            raise InvalidIdError(f"no interned string with id {i}")
        return self._strings[i]

    def __len__(self) -> int:
        return len(self._strings)

    def __contains__(self, s: str) -> bool:
        return s in self._ids

    def __iter__(self) -> Iterator[str]:
        return iter(self._strings)

    def __eq__(self, other) -> bool:
        return isinstance(other, Interner) and self._strings == other._strings


class KnowledgeGraph:
    """Interned, adjacency-indexed labeled multigraph.

    Immutable after construction; safe for any number of concurrent
    readers. `triple_count` covers every parsed statement, including
    literal-object ones that have no adjacency entry.
    """

    def __init__(self):
        self.entities = Interner()
        self.predicates = Interner()
        self._adjacency: list[list[tuple[int, int]]] = []
        self._edge_log: list[tuple[int, int, int]] = []  # input order, for serialization
        self.triple_count = 0
        self.literal_count = 0
        self._csr: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None

    @classmethod
    def from_triples(cls, triples: Iterable[Triple]) -> "KnowledgeGraph":
        g = cls()
        for t in triples:
            g._add(t)
        return g

    def _add(self, t: Triple) -> None:
        self.triple_count += 1
        if t.object_is_literal:
            self.literal_count += 1
            return
        s = self.entities.intern(t.subject)
        if s == len(self._adjacency):
            self._adjacency.append([])
        p = self.predicates.intern(t.predicate)
        o = self.entities.intern(t.object)
        if o == len(self._adjacency):
            self._adjacency.append([])
        self._adjacency[s].append((p, o))
        self._edge_log.append((s, p, o))
        self._csr = None

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    @property
    def n_predicates(self) -> int:
        return len(self.predicates)

    @property
    def n_edges(self) -> int:
        return len(self._edge_log)

    def out_edges(self, entity_id: int) -> list[tuple[int, int]]:
        """Ordered (predicate ID, object entity ID) pairs leaving an entity."""
        if not 0 <= entity_id < len(self._adjacency):
            raise InvalidIdError(f"no entity with id {entity_id}")
        return list(self._adjacency[entity_id])

    def out_degree(self, entity_id: int) -> int:
        if not 0 <= entity_id < len(self._adjacency):
            raise InvalidIdError(f"no entity with id {entity_id}")
        return len(self._adjacency[entity_id])

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Adjacency as (offsets[E+1] int64, predicate IDs, object IDs)."""
        if self._csr is None:
            e = self.n_entities
            offsets = np.zeros(e + 1, dtype=np.int64)
            for i, adj in enumerate(self._adjacency):
                offsets[i + 1] = offsets[i] + len(adj)
            preds = np.empty(offsets[-1], dtype=np.int32)
            objs = np.empty(offsets[-1], dtype=np.int32)
            k = 0
            for adj in self._adjacency:
                for p, o in adj:
                    preds[k] = p
                    objs[k] = o
                    k += 1
            self._csr = (offsets, preds, objs)
        return self._csr

    def serialize_triples(self, sink: TextIO) -> int:
        """Write the walkable triples back out as N-Triples, in input order.

        Literal-object statements are not retained and therefore not
        emitted; re-parsing the output reproduces this graph exactly
        (same IDs, same adjacency).
        """
        n = 0
        for s, p, o in self._edge_log:
            sink.write(
                f"{_term(self.entities[s])} {_term(self.predicates[p])} "
                f"{_term(self.entities[o])} .\n"
            )
            n += 1
        return n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KnowledgeGraph)
            and self.entities == other.entities
            and self.predicates == other.predicates
            and self._edge_log == other._edge_log
        )


def _term(s: str) -> str:
    return s if s.startswith("_:") else f"<{s}>"


def _scan_term(line: str, pos: int, lineno: int, *, object_pos: bool):
    """Parse one term starting at `pos`; returns (value, is_literal, end)."""
    n = len(line)
    while pos < n and line[pos] in " \t":
        pos += 1
    if pos >= n:
        raise GraphParseError(lineno, "unexpected end of statement")
    ch = line[pos]
    if ch == "<":
        end = line.find(">", pos + 1)
        if end == -1:
            raise GraphParseError(lineno, "unbalanced angle brackets")
        iri = line[pos + 1 : end]
        if any(c in " \t<" for c in iri):
            raise GraphParseError(lineno, f"malformed IRI: <{iri}>")
        return iri, False, end + 1
    if ch == "_" and line.startswith("_:", pos):
        end = pos
        while end < n and line[end] not in " \t":
            end += 1
        label = line[pos:end]
        if label.endswith("."):  # statement terminator glued to the label
            label = label[:-1]
            end -= 1
        return label, False, end
    if ch == '"':
        if not object_pos:
            raise GraphParseError(lineno, "literal not allowed here")
        end = pos + 1
        while end < n:
            if line[end] == "\\":
                end += 2
                continue
            if line[end] == '"':
                break
            end += 1
        if end >= n:
            raise GraphParseError(lineno, "unterminated literal")
        value = line[pos + 1 : end]
        end += 1
        # datatype / language tags are accepted and discarded
        if line.startswith("^^", end):
            close = line.find(">", end + 2)
            if not line.startswith("^^<", end) or close == -1:
                raise GraphParseError(lineno, "malformed datatype tag")
            end = close + 1
        elif line.startswith("@", end):
            while end < n and line[end] not in " \t":
                end += 1
        return value, True, end
    raise GraphParseError(lineno, f"unexpected character {ch!r}")


def parse_triple_line(line: str, lineno: int) -> Triple | None:
    """Parse one N-Triples statement; None for blank/comment lines."""
    line = line.rstrip("\r\n").rstrip()
    stripped = line.lstrip()
    if not stripped or stripped.startswith("#"):
        return None
    subj, _, pos = _scan_term(line, 0, lineno, object_pos=False)
    pred, _, pos = _scan_term(line, pos, lineno, object_pos=False)
    if pred.startswith("_:"):
        raise GraphParseError(lineno, "predicate must be an IRI")
    obj, obj_is_lit, pos = _scan_term(line, pos, lineno, object_pos=True)
    rest = line[pos:].strip()
    if rest != ".":
        raise GraphParseError(lineno, "missing terminal '.'")
    return Triple(subj, pred, obj, object_is_literal=obj_is_lit)


def iter_triples(source: LineSource) -> Iterator[Triple]:
    """Stream triples out of N-Triples lines, skipping blanks/comments."""
    for lineno, raw in enumerate(_as_lines(source), start=1):
        t = parse_triple_line(raw, lineno)
        if t is not None:
            yield t


def parse_ntriples(source: LineSource) -> KnowledgeGraph:
    """Parse an N-Triples character stream into a KnowledgeGraph.

    Empty input is a valid empty graph. Malformed statements raise
    GraphParseError with the 1-based line number.
    """
    return KnowledgeGraph.from_triples(iter_triples(source))


def load_graph(path: str | os.PathLike) -> KnowledgeGraph:
    """Parse an N-Triples file; `.gz` suffixed files are gunzipped."""
    if str(path).endswith(".gz"):
        with gzip.open(path, "rt", encoding="utf-8") as fh:
            return parse_ntriples(fh)
    with open(path, "rt", encoding="utf-8") as fh:
        return parse_ntriples(fh)


def _as_lines(source: LineSource) -> Iterable[str]:
    if isinstance(source, str):
        return io.StringIO(source)  # raw N-Triples content; use load_graph() for paths
    if isinstance(source, os.PathLike):
        raise TypeError("parse_ntriples() takes content or a stream; use load_graph() for paths")
    return source
