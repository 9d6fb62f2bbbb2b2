import io

import numpy as np
import pytest

from rdfvec import (
    ConfigError,
    EmptyGraphError,
    InternalConsistencyError,
    WalkConfig,
    generate_walks,
    parse_ntriples,
    write_walks,
)
from rdfvec.walks import Corpus, trim_walk
from tests.conftest import EX, corpus_lines


def walk_strings(corpus):
    return [" ".join(corpus.tokens[t] for t in walk) for walk in corpus]


def test_city_graph_depth2_only_two_walks(city_graph):
    corpus = generate_walks(city_graph, WalkConfig(walks_per_node=50, depth=2, seed=3))
    ham = EX + "Hamburg"
    from_hamburg = {w for w in walk_strings(corpus) if w.startswith(ham + " ")}
    assert from_hamburg == {
        f"{EX}Hamburg {EX}country {EX}Germany {EX}leader {EX}Angela_Merkel",
        f"{EX}Hamburg {EX}leader {EX}Peter_Tschentscher {EX}residence {EX}Hamburg",
    }


def test_chain_truncates_at_sink():
    g = parse_ntriples(
        "<http://ex/A> <http://ex/p> <http://ex/B> .\n"
        "<http://ex/B> <http://ex/q> <http://ex/C> .\n"
    )
    corpus = generate_walks(g, WalkConfig(walks_per_node=3, depth=4, seed=11))
    a_walks = {w for w in walk_strings(corpus) if w.startswith(EX + "A ")}
    assert a_walks == {f"{EX}A {EX}p {EX}B {EX}q {EX}C"}


def test_depth1_edge_choice_is_uniform(city_graph):
    corpus = generate_walks(city_graph, WalkConfig(walks_per_node=10_000, depth=1, seed=5))
    ham = EX + "Hamburg"
    hamburg_walks = [w for w in walk_strings(corpus) if w.startswith(ham + " ")]
    assert len(hamburg_walks) == 10_000
    took_country = sum(f" {EX}country " in w for w in hamburg_walks)
    # binomial p=1/2 over Hamburg's two out-edges
    assert 0.49 <= took_country / 10_000 <= 0.51


def test_walk_count_covers_non_sinks():
    g = parse_ntriples(
        "<http://ex/A> <http://ex/p> <http://ex/B> .\n"
        "<http://ex/C> <http://ex/p> <http://ex/B> .\n"
    )
    corpus = generate_walks(g, WalkConfig(walks_per_node=7, depth=3, seed=1))
    # B is a sink: only A and C start walks
    assert len(corpus) == 7 * 2


def test_walks_replay_against_graph(city_graph):
    g = city_graph
    corpus = generate_walks(g, WalkConfig(walks_per_node=20, depth=4, seed=9))
    pred_base = g.n_entities
    for walk in corpus:
        assert walk.size % 2 == 1
        assert walk.size <= 2 * 4 + 1
        assert walk[0] < pred_base and walk[-1] < pred_base
        for k in range(0, walk.size - 2, 2):
            step = (int(walk[k + 1]) - pred_base, int(walk[k + 2]))
            assert step in g.out_edges(int(walk[k]))


def test_deterministic_across_threads(city_graph):
    cfg = WalkConfig(walks_per_node=25, depth=3, seed=42)
    one = generate_walks(city_graph, cfg, threads=1)
    many = generate_walks(city_graph, cfg, threads=3)
    assert np.array_equal(one.walks, many.walks)
    assert corpus_lines(one) == corpus_lines(many)


def test_byte_identical_reruns(city_graph):
    cfg = WalkConfig(walks_per_node=10, depth=4, seed=7)
    a = corpus_lines(generate_walks(city_graph, cfg))
    b = corpus_lines(generate_walks(city_graph, cfg))
    assert a == b


def test_seed_changes_walks(city_graph):
    a = generate_walks(city_graph, WalkConfig(100, 4, seed=1))
    b = generate_walks(city_graph, WalkConfig(100, 4, seed=2))
    assert not np.array_equal(a.walks, b.walks)


def test_empty_graph_rejected():
    with pytest.raises(EmptyGraphError):
        generate_walks(parse_ntriples(""), WalkConfig(1, 1, 0))


def test_config_validation():
    with pytest.raises(ConfigError):
        WalkConfig(walks_per_node=0)
    with pytest.raises(ConfigError):
        WalkConfig(depth=0)
    with pytest.raises(ConfigError):
        WalkConfig(seed=-1)


def test_write_walks_single_line():
    corpus = Corpus(
        [EX + "Hamburg", EX + "Germany", EX + "country"],
        np.array([[0, 2, 1]], dtype=np.int32),
    )
    sink = io.StringIO()
    assert write_walks(corpus, sink) == 1
    assert sink.getvalue() == f"{EX}Hamburg {EX}country {EX}Germany\n"


def test_write_walks_empty_corpus():
    sink = io.StringIO()
    assert write_walks(Corpus([], np.empty((0, 3), dtype=np.int32)), sink) == 0
    assert sink.getvalue() == ""


def test_write_walks_three_lines_newline_terminated(city_graph):
    corpus = generate_walks(city_graph, WalkConfig(walks_per_node=1, depth=2, seed=1))
    keep = Corpus(corpus.tokens, corpus.walks[:3])
    sink = io.StringIO()
    assert write_walks(keep, sink) == 3
    text = sink.getvalue()
    assert text.endswith("\n")
    assert len(text.splitlines()) == 3


def test_write_walks_unresolvable_id():
    corpus = Corpus(["a"], np.array([[0, 5, 0]], dtype=np.int32))
    with pytest.raises(InternalConsistencyError):
        write_walks(corpus, io.StringIO())


def test_trim_walk():
    row = np.array([3, 4, 5, -1, -1], dtype=np.int32)
    assert trim_walk(row).tolist() == [3, 4, 5]
    full = np.array([3, 4, 5], dtype=np.int32)
    assert trim_walk(full).tolist() == [3, 4, 5]
