"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one PASS line (visible under `pytest -s` or `-v`);
runtime budgets are asserted alongside the numeric tolerances.
"""

import io
import time

import numpy as np
import pytest
from scipy.stats import chisquare

from rdfvec import (
    TrainConfig,
    WalkConfig,
    build_negative_table,
    build_vocabulary,
    clustering_accuracy,
    evaluate_analogies,
    generate_walks,
    import_text,
    init_model,
    kmeans,
    parse_ntriples,
    sgns_step,
    train,
)
from rdfvec.cli import main
from rdfvec.embeddings import WordVectors
from rdfvec.graph import KnowledgeGraph
from rdfvec.synthetic import capital_graph, role_graph, to_ntriples
from rdfvec.train import EmbeddingModel
from rdfvec.vocab import Vocabulary
from tests.conftest import CITY_NT, corpus_lines

SEEDS = (1, 2, 3, 4, 5)


def _reference_loss(v, u, negrows):
    def sp(x):
        return np.log1p(np.exp(-abs(x))) + max(x, 0.0)

    total = sp(-float(v @ u))
    for row in negrows:
        total += sp(float(v @ row))
    return total


def test_criterion_1_gradient_correctness():
    start = time.time()
    gen = np.random.default_rng(20240917)
    v_size, dim, window, n_neg, h = 10, 8, 3, 3, 1e-5
    worst = 0.0
    for _ in range(50):
        for mode in ("classic", "ordered"):
            mats = 1 if mode == "classic" else 2 * window
            inp = gen.normal(0.0, 0.3, (v_size, dim))
            out = gen.normal(0.0, 0.3, (mats, v_size, dim))
            center = int(gen.integers(v_size))
            context = int(gen.integers(v_size))
            offset = int(gen.choice([o for o in range(-window, window + 1) if o]))
            negs = [int(n) for n in gen.integers(v_size, size=n_neg)]
            negs = [n if n != context else (n + 1) % v_size for n in negs]
            lr = 0.1
            m = 0 if mode == "classic" else (offset + window if offset < 0 else window + offset - 1)

            model = EmbeddingModel(input=inp.copy(), outputs=out.copy(), mode=mode)
            sgns_step(model, center, context, offset, negs, lr)
            g_in = (inp - model.input) / lr
            g_out = (out - model.outputs) / lr

            def loss_at(inp2, out2):
                return _reference_loss(
                    inp2[center], out2[m, context], [out2[m, n] for n in negs]
                )

            coords = [("in", (center, d)) for d in range(dim)]
            coords += [("out", (m, context, d)) for d in range(dim)]
            coords += [("out", (m, n, d)) for n in set(negs) for d in range(dim)]
            for kind, idx in coords:
                arr = inp if kind == "in" else out
                plus, minus = arr.copy(), arr.copy()
                plus[idx] += h
                minus[idx] -= h
                if kind == "in":
                    fd = (loss_at(plus, out) - loss_at(minus, out)) / (2 * h)
                    an = g_in[idx]
                else:
                    fd = (loss_at(inp, plus) - loss_at(inp, minus)) / (2 * h)
                    an = g_out[idx]
                worst = max(worst, abs(an - fd) / max(abs(an), abs(fd), 1e-8))
    elapsed = time.time() - start
    assert worst < 1e-4, f"max relative gradient error {worst:.3e}"
    assert elapsed < 60, f"criterion 1 took {elapsed:.1f}s"
    print(f"\nPASS criterion 1: gradient correctness (max rel err {worst:.2e}, {elapsed:.1f}s)")


def test_criterion_2_mode_equivalence():
    start = time.time()
    triples, _ = role_graph(8, seed=0)
    graph = KnowledgeGraph.from_triples(triples)
    lines = corpus_lines(generate_walks(graph, WalkConfig(50, 3, seed=4)))
    vocab = build_vocabulary(lines)
    table = build_negative_table(vocab, table_size=10**5)

    classic_cfg = TrainConfig(
        mode="classic", dimension=24, window=5, epochs=1, seed=11, dynamic_window=False
    )
    ordered_cfg = TrainConfig(
        mode="ordered", dimension=24, window=5, epochs=1, seed=11, dynamic_window=False
    )
    classic_model, _ = train(lines, vocab, table, classic_cfg)

    tied = init_model(vocab, classic_cfg)  # one shared output matrix
    tied.mode = "ordered"
    tied_map = np.zeros(2 * ordered_cfg.window + 1, dtype=np.int32)
    tied_map[ordered_cfg.window] = -1
    ordered_model, _ = train(lines, vocab, table, ordered_cfg, model=tied, offset_map=tied_map)

    diff = max(
        float(np.abs(classic_model.input - ordered_model.input).max()),
        float(np.abs(classic_model.outputs - ordered_model.outputs).max()),
    )
    elapsed = time.time() - start
    assert diff < 1e-6, f"tied ordered vs classic max abs diff {diff:.3e}"
    assert elapsed < 60, f"criterion 2 took {elapsed:.1f}s"
    print(f"\nPASS criterion 2: mode equivalence oracle (max abs diff {diff:.2e}, {elapsed:.1f}s)")


def _train_vectors(lines, vocab, table, mode, seed):
    cfg = TrainConfig(mode=mode, dimension=50, window=5, epochs=5, seed=seed)
    model, _ = train(lines, vocab, table, cfg)
    return WordVectors(vocab.tokens, model.input.copy())


def test_criterion_3_role_separation_clustering():
    start = time.time()
    triples, labels = role_graph(20, seed=0)
    graph = KnowledgeGraph.from_triples(triples)
    accs = {"classic": [], "ordered": []}
    for seed in SEEDS:
        lines = corpus_lines(generate_walks(graph, WalkConfig(500, 4, seed)))
        vocab = build_vocabulary(lines)
        table = build_negative_table(vocab, table_size=10**6)
        for mode in accs:
            vecs = _train_vectors(lines, vocab, table, mode, seed)
            entities = [e for e in labels if e in vecs]
            points = np.stack([vecs.vec(e) for e in entities]).astype(np.float64)
            assign = kmeans(points, 3, seed=seed)
            accs[mode].append(clustering_accuracy(assign, [labels[e] for e in entities]))
    med_classic = float(np.median(accs["classic"]))
    med_ordered = float(np.median(accs["ordered"]))
    elapsed = time.time() - start
    assert med_ordered >= 0.85, f"ordered clustering ACC median {med_ordered:.3f} < 0.85"
    assert med_ordered >= med_classic - 0.02, (
        f"ordered {med_ordered:.3f} trails classic {med_classic:.3f} by more than 0.02"
    )
    assert elapsed < 300, f"criterion 3 took {elapsed:.1f}s"
    print(
        f"\nPASS criterion 3: role-separation clustering "
        f"(classic {med_classic:.3f}, ordered {med_ordered:.3f}, {elapsed:.1f}s)"
    )


def test_criterion_4_analogy_replication():
    start = time.time()
    triples, quads = capital_graph(20, 40, seed=0)
    graph = KnowledgeGraph.from_triples(triples)
    accs = {"classic": [], "ordered": []}
    for seed in SEEDS:
        lines = corpus_lines(generate_walks(graph, WalkConfig(500, 4, seed)))
        vocab = build_vocabulary(lines)
        table = build_negative_table(vocab, table_size=10**6)
        for mode in accs:
            vecs = _train_vectors(lines, vocab, table, mode, seed)
            accs[mode].append(evaluate_analogies(vecs, quads).accuracy)
    med_classic = float(np.median(accs["classic"]))
    med_ordered = float(np.median(accs["ordered"]))
    elapsed = time.time() - start
    assert med_ordered >= 0.80, f"ordered analogy accuracy median {med_ordered:.3f} < 0.80"
    assert med_ordered >= med_classic - 0.05, (
        f"ordered {med_ordered:.3f} trails classic {med_classic:.3f} by more than 0.05"
    )
    assert elapsed < 300, f"criterion 4 took {elapsed:.1f}s"
    print(
        f"\nPASS criterion 4: capital-country analogies "
        f"(classic {med_classic:.3f}, ordered {med_ordered:.3f}, {elapsed:.1f}s)"
    )


def test_criterion_5_walk_validity_fuzz():
    start = time.time()
    gen = np.random.default_rng(555)
    for trial in range(200):
        n_nodes = int(gen.integers(1, 101))
        n_edges = int(gen.integers(1, 501))
        lines = [
            f"<http://ex/n{gen.integers(n_nodes)}> <http://ex/p{gen.integers(6)}> "
            f"<http://ex/n{gen.integers(n_nodes)}> ."
            for _ in range(n_edges)
        ]
        graph = parse_ntriples("\n".join(lines) + "\n")
        cfg = WalkConfig(
            walks_per_node=int(gen.integers(1, 8)),
            depth=int(gen.integers(1, 7)),
            seed=int(gen.integers(2**63)),
        )
        corpus = generate_walks(graph, cfg)
        edges = {
            (e, p, o)
            for e in range(graph.n_entities)
            for p, o in graph.out_edges(e)
        }
        non_sinks = sum(graph.out_degree(e) > 0 for e in range(graph.n_entities))
        assert len(corpus) == cfg.walks_per_node * non_sinks, f"trial {trial} count"
        base = graph.n_entities
        for walk in corpus:
            assert walk.size % 2 == 1 and walk.size <= 2 * cfg.depth + 1
            assert walk[0] < base and walk[-1] < base
            for k in range(0, walk.size - 2, 2):
                assert (int(walk[k]), int(walk[k + 1]) - base, int(walk[k + 2])) in edges
            if walk.size < 2 * cfg.depth + 1:  # truncated: must have hit a sink
                assert graph.out_degree(int(walk[-1])) == 0
    elapsed = time.time() - start
    print(f"\nPASS criterion 5: walk validity fuzzing (200 graphs, {elapsed:.1f}s)")


def test_criterion_6_negative_table_chi_square():
    ranks = np.arange(1, 101, dtype=np.float64)
    counts = np.round(10_000 / ranks).astype(np.int64)  # Zipfian
    vocab = Vocabulary([f"t{i:03d}" for i in range(100)], counts, int(counts.sum()))
    table = build_negative_table(vocab)  # default 10^7 slots
    gen = np.random.default_rng(606)
    draws = table.table[gen.integers(0, table.size, 10**6)]
    observed = np.bincount(draws, minlength=100)
    weights = counts.astype(np.float64) ** 0.75
    expected = weights / weights.sum() * 10**6
    result = chisquare(observed, expected)
    assert result.pvalue > 0.001, f"chi-square p={result.pvalue:.5f}"
    print(f"\nPASS criterion 6: negative-table fidelity (chi2 p={result.pvalue:.3f})")


def test_criterion_7_determinism_and_round_trip(tmp_path):
    graph_file = tmp_path / "graph.nt"
    graph_file.write_text(CITY_NT, encoding="utf-8")
    walk_a, walk_b = tmp_path / "walks_a.txt", tmp_path / "walks_b.txt"
    for out in (walk_a, walk_b):
        assert main(["walk", str(graph_file), "-o", str(out), "--walks", "60",
                     "--depth", "4", "--seed", "12", "--threads", "1"]) == 0
    assert walk_a.read_bytes() == walk_b.read_bytes(), "walk files differ between runs"

    model_a, model_b = tmp_path / "model_a.txt", tmp_path / "model_b.txt"
    for out in (model_a, model_b):
        assert main(["train", str(walk_a), "-o", str(out), "--dim", "24",
                     "--mode", "ordered", "--seed", "12", "--threads", "1"]) == 0
    assert model_a.read_bytes() == model_b.read_bytes(), "model files differ between runs"

    tokens, matrix = import_text(model_a)
    sink = io.StringIO()
    vocab = Vocabulary(tokens, np.ones(len(tokens), dtype=np.int64), len(tokens))
    remodel = EmbeddingModel(
        input=matrix, outputs=np.zeros((1,) + matrix.shape, np.float32), mode="classic"
    )
    from rdfvec import export_text

    export_text(remodel, vocab, sink)
    tokens2, matrix2 = import_text(io.StringIO(sink.getvalue()))
    assert tokens2 == tokens
    diff = float(np.abs(matrix2 - matrix).max())
    assert diff <= 1e-6, f"round-trip max coordinate diff {diff:.2e}"
    print(f"\nPASS criterion 7: determinism and round-trip (diff {diff:.2e})")


def test_criterion_8_training_dynamics():
    start = time.time()
    lines = ["a p b q c r d s e\n"] * 1000
    vocab = build_vocabulary(lines)
    table = build_negative_table(vocab, table_size=10**5)
    for mode in ("classic", "ordered"):
        for seed in SEEDS:
            cfg = TrainConfig(mode=mode, dimension=16, window=5, epochs=5, seed=seed)
            _, losses = train(lines, vocab, table, cfg)
            assert losses[4] < losses[0], (
                f"{mode} seed {seed}: epoch-5 loss {losses[4]:.4f} "
                f">= epoch-1 loss {losses[0]:.4f}"
            )
    elapsed = time.time() - start
    print(f"\nPASS criterion 8: training dynamics (both modes, 5/5 seeds, {elapsed:.1f}s)")
