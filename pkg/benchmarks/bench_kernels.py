"""Benchmark the numba kernels against the pure-numpy fallback.

Times walk generation and one training epoch on a synthetic graph
under both backends and prints throughput plus speedup. The fallback
gets a scaled-down share of the work (it is orders of magnitude
slower); rates are normalised per unit of work so the comparison stays
fair.

Run:  python benchmarks/bench_kernels.py [--entities 200] [--walks 100]
"""

import argparse
import io
import time

import numpy as np

from rdfvec import (
    TrainConfig,
    WalkConfig,
    build_negative_table,
    build_vocabulary,
    generate_walks,
    train,
)
from rdfvec import kernels
from rdfvec.graph import KnowledgeGraph
from rdfvec.synthetic import role_graph
from rdfvec.walks import write_walks


def time_walks(graph, config, backend, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        corpus = generate_walks(graph, config, backend=backend)
        best = min(best, time.perf_counter() - start)
    steps = sum((w.size - 1) // 2 for w in corpus)
    return best, steps


def time_epoch(lines, vocab, table, config, backend):
    start = time.perf_counter()
    _, losses = train(lines, vocab, table, config, backend=backend)
    elapsed = time.perf_counter() - start
    tokens = sum(len(l.split()) for l in lines) * config.epochs
    return elapsed, tokens, losses[-1]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--entities", type=int, default=200, help="entities per class (x3 classes)")
    parser.add_argument("--walks", type=int, default=100, help="walks per entity")
    parser.add_argument("--depth", type=int, default=4)
    parser.add_argument("--dim", type=int, default=64)
    parser.add_argument("--numpy-fraction", type=float, default=0.05,
                        help="share of the corpus the numpy fallback trains on")
    args = parser.parse_args()

    if not kernels.HAS_NUMBA:
        raise SystemExit("numba unavailable; nothing to compare against")

    triples, _ = role_graph(args.entities, seed=0)
    graph = KnowledgeGraph.from_triples(triples)
    wcfg = WalkConfig(args.walks, args.depth, seed=1)
    print(f"graph: {graph.n_entities} entities, {graph.n_edges} edges; "
          f"{args.walks} walks/entity, depth {args.depth}")

    # warm-up triggers JIT compilation so timings measure steady state
    generate_walks(graph, WalkConfig(1, 1, seed=0), backend="numba")

    t_nb, steps = time_walks(graph, wcfg, "numba")
    t_np, _ = time_walks(graph, wcfg, "numpy", repeat=1)
    print("\nwalk generation")
    print(f"  numba : {t_nb:9.4f}s  ({steps / t_nb / 1e6:7.2f} M steps/s)")
    print(f"  numpy : {t_np:9.4f}s  ({steps / t_np / 1e6:7.2f} M steps/s)")
    print(f"  speedup: {t_np / t_nb:.0f}x")

    corpus = generate_walks(graph, wcfg)
    sink = io.StringIO()
    write_walks(corpus, sink)
    lines = sink.getvalue().splitlines(keepends=True)
    vocab = build_vocabulary(lines)
    table = build_negative_table(vocab, table_size=10**6)
    tcfg = TrainConfig(mode="ordered", dimension=args.dim, window=5, epochs=1, seed=1)

    train(lines[:50], vocab, table, tcfg, backend="numba")  # JIT warm-up
    e_nb, tok_nb, loss_nb = time_epoch(lines, vocab, table, tcfg, "numba")
    small = lines[: max(1, int(len(lines) * args.numpy_fraction))]
    e_np, tok_np, loss_np = time_epoch(small, vocab, table, tcfg, "numpy")
    rate_nb = tok_nb / e_nb
    rate_np = tok_np / e_np
    print(f"\nordered-mode training, one epoch over {tok_nb} tokens "
          f"(numpy share: {len(small)} of {len(lines)} lines)")
    print(f"  numba : {e_nb:8.3f}s  ({rate_nb / 1e3:7.1f} K tokens/s, mean loss {loss_nb:.4f})")
    print(f"  numpy : {e_np:8.3f}s  ({rate_np / 1e3:7.1f} K tokens/s, mean loss {loss_np:.4f})")
    print(f"  speedup: {rate_nb / rate_np:.0f}x")


if __name__ == "__main__":
    main()
