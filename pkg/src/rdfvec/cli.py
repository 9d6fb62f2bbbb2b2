"""Command-line pipeline: walk -> train -> eval / nearest.

Stages hand off through plain files (a walk file between `walk` and
`train`, an embedding text file between `train` and the rest), so both
training modes can consume the exact same walks. Metrics go to stdout
as TAB-separated lines; progress and config echo go to stderr. Output
files are written to a temp path and renamed, so a failed stage never
leaves a truncated file behind.
"""

from __future__ import annotations

import argparse
import difflib
import os
import sys
import tempfile
from contextlib import contextmanager

import numpy as np

from . import __version__
from .embeddings import WordVectors, export_text
from .errors import ConfigError, RdfvecError, UnknownTokenError
from .eval import (
    clustering_accuracy,
    evaluate_analogies,
    kmeans,
    knn_evaluate,
    read_analogies,
    read_labeled,
)
from .graph import load_graph
from .train import TrainConfig, train
from .vocab import (
    DEFAULT_POWER,
    DEFAULT_TABLE_SIZE,
    build_negative_table,
    build_vocabulary,
    write_vocabulary,
)
from .walks import WalkConfig, generate_walks, write_walks

DEFAULTS = {
    "walks": 500,
    "depth": 4,
    "mode": "classic",
    "dim": 100,
    "window": 5,
    "epochs": 5,
    "negatives": 5,
    "lr": 0.025,
    "min_count": 1,
    "sample": 0.0,
    "table_size": DEFAULT_TABLE_SIZE,
    "power": DEFAULT_POWER,
    "seed": 1,
    "threads": 1,
    "k": 3,
}


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def load_config_file(path: str) -> dict[str, str]:
    """key=value lines; `#` comments and blanks skipped."""
    values: dict[str, str] = {}
    with open(path, "rt", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


class _Resolver:
    """Effective settings: hard default < config file < explicit flag."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.file_values = load_config_file(args.config) if getattr(args, "config", None) else {}

    def get(self, key: str, cast):
        flag = getattr(self.args, key, None)
        if flag is not None:
            return flag
        if key in self.file_values:
            try:
                return cast(self.file_values[key])
            except (ValueError, argparse.ArgumentTypeError) as e:
                raise ConfigError(f"config file value for {key}: {e}") from None
        return DEFAULTS[key]


@contextmanager
def atomic_output(path: str):
    """Open a temp file next to `path`, renamed over it only on success."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=os.path.basename(path) + ".", dir=directory)
    fh = os.fdopen(fd, "wt", encoding="utf-8", newline="")
    try:
        yield fh
        fh.close()
        os.replace(tmp, path)
    except BaseException:
        fh.close()
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def cmd_walk(args: argparse.Namespace) -> int:
    cfg = _Resolver(args)
    walks = cfg.get("walks", _positive_int)
    depth = cfg.get("depth", _positive_int)
    seed = cfg.get("seed", _nonneg_int)
    threads = cfg.get("threads", _positive_int)
    print(f"walks={walks} depth={depth} seed={seed} threads={threads}", file=sys.stderr)
    graph = load_graph(args.graph)
    corpus = generate_walks(graph, WalkConfig(walks, depth, seed), threads=threads)
    with atomic_output(args.out) as fh:
        lines = write_walks(corpus, fh)
    print(f"entities\t{graph.n_entities}")
    print(f"walks\t{lines}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    cfg = _Resolver(args)
    config = TrainConfig(
        mode=cfg.get("mode", str),
        dimension=cfg.get("dim", _positive_int),
        window=cfg.get("window", _positive_int),
        epochs=cfg.get("epochs", _positive_int),
        negatives=cfg.get("negatives", _positive_int),
        initial_lr=cfg.get("lr", _positive_float),
        seed=cfg.get("seed", _nonneg_int),
        dynamic_window=not args.no_dynamic_window,
        threads=cfg.get("threads", _positive_int),
        sample=cfg.get("sample", _nonneg_float),
    )
    min_count = cfg.get("min_count", _nonneg_int)
    table_size = cfg.get("table_size", _positive_int)
    power = cfg.get("power", _positive_float)
    print(
        f"mode={config.mode} dim={config.dimension} window={config.window} "
        f"epochs={config.epochs} negatives={config.negatives} lr={config.initial_lr} "
        f"seed={config.seed} threads={config.threads}",
        file=sys.stderr,
    )
    with open(args.walks, "rt", encoding="utf-8") as fh:
        vocabulary = build_vocabulary(fh, min_count=min_count)
    table = build_negative_table(vocabulary, power=power, table_size=table_size)
    model, losses = train(args.walks, vocabulary, table, config)
    for epoch, loss in enumerate(losses, start=1):
        print(f"{epoch}\t{loss:.6f}", file=sys.stderr)
    if args.dump_vocab:
        with atomic_output(args.dump_vocab) as fh:
            write_vocabulary(vocabulary, fh)
    with atomic_output(args.model) as fh:
        records = export_text(model, vocabulary, fh)
    print(f"vocab\t{len(vocabulary)}")
    print(f"vectors\t{records}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = _Resolver(args)
    seed = cfg.get("seed", _nonneg_int)
    k = cfg.get("k", _positive_int)
    vectors = WordVectors.from_file(args.model)
    if args.task == "analogy":
        result = evaluate_analogies(vectors, read_analogies(args.dataset))
        print(f"accuracy\t{result.accuracy:.6f}")
        print(f"oov\t{result.oov}")
        return 0
    records = read_labeled(args.dataset)
    if args.task == "cluster":
        kept = [(e, l) for e, l in records if e in vectors]
        oov = len(records) - len(kept)
        if not kept:
            raise ConfigError("no in-vocabulary records")
        n_clusters = args.k if args.k is not None else len({l for _, l in kept})
        points = np.stack([vectors.vec(e) for e, _ in kept]).astype(np.float64)
        assignments = kmeans(points, n_clusters, seed=seed)
        acc = clustering_accuracy(assignments, [l for _, l in kept])
        print(f"acc\t{acc:.6f}")
        print(f"oov\t{oov}")
        return 0
    task = {"classify": "classify", "regress": "regress"}[args.task]
    result = knn_evaluate(vectors, records, k=k, task=task)
    print(f"{result.metric}\t{result.value:.6f}")
    print(f"oov\t{result.oov}")
    return 0


def cmd_nearest(args: argparse.Namespace) -> int:
    cfg = _Resolver(args)
    k = cfg.get("k", _positive_int)
    vectors = WordVectors.from_file(args.model)
    if args.token not in vectors:
        close = difflib.get_close_matches(args.token, vectors.tokens, n=5, cutoff=0.4)
        hint = f"; close spellings: {', '.join(close)}" if close else ""
        raise UnknownTokenError(f"token not in vocabulary: {args.token!r}{hint}")
    target = vectors.vec(args.token).astype(np.float64)
    norm = np.linalg.norm(target)
    if norm == 0:
        raise ConfigError(f"token {args.token!r} has a zero vector")
    sims = vectors.unit_matrix() @ (target / norm)
    order = sorted(
        (i for i in range(len(vectors)) if vectors.tokens[i] != args.token),
        key=lambda i: (-sims[i], vectors.tokens[i]),
    )
    for i in order[:k]:
        print(f"{vectors.tokens[i]}\t{sims[i]:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdfvec",
        description="Knowledge-graph embeddings from random walks "
        "(classic and order-aware skip-gram).",
    )
    parser.add_argument("--version", action="version", version=f"rdfvec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key=value file; explicit flags take precedence")
        p.add_argument(
            "--seed", type=_nonneg_int, help=f"RNG seed (default: {DEFAULTS['seed']})"
        )

    w = sub.add_parser("walk", help="generate random walks from an N-Triples graph")
    w.add_argument("graph", help="N-Triples file (.gz supported)")
    w.add_argument("-o", "--out", required=True, help="walk file to write")
    w.add_argument(
        "--walks", type=_positive_int,
        help=f"walks per entity (default: {DEFAULTS['walks']})",
    )
    w.add_argument(
        "--depth", type=_positive_int,
        help=f"node hops per walk (default: {DEFAULTS['depth']})",
    )
    w.add_argument(
        "--threads", type=_positive_int,
        help=f"worker threads, output independent of it (default: {DEFAULTS['threads']})",
    )
    add_common(w)
    w.set_defaults(func=cmd_walk)

    t = sub.add_parser("train", help="train embeddings from a walk file")
    t.add_argument("walks", help="walk file from the walk stage")
    t.add_argument("-o", "--model", required=True, help="embedding text file to write")
    t.add_argument(
        "--mode", choices=("classic", "ordered"),
        help=f"training objective (default: {DEFAULTS['mode']})",
    )
    t.add_argument(
        "--dim", type=_positive_int,
        help=f"embedding dimension (default: {DEFAULTS['dim']})",
    )
    t.add_argument(
        "--window", type=_positive_int,
        help=f"context window size (default: {DEFAULTS['window']})",
    )
    t.add_argument(
        "--epochs", type=_positive_int,
        help=f"training epochs (default: {DEFAULTS['epochs']})",
    )
    t.add_argument(
        "--negatives", type=_positive_int,
        help=f"negative samples per context (default: {DEFAULTS['negatives']})",
    )
    t.add_argument(
        "--lr", type=_positive_float,
        help=f"initial learning rate (default: {DEFAULTS['lr']})",
    )
    t.add_argument(
        "--min-count", type=_nonneg_int,
        help=f"drop tokens rarer than this (default: {DEFAULTS['min_count']})",
    )
    t.add_argument(
        "--sample", type=_nonneg_float,
        help=f"frequent-token subsampling threshold, 0 = off (default: {DEFAULTS['sample']})",
    )
    t.add_argument(
        "--table-size", type=_positive_int,
        help=f"negative-sampling table slots (default: {DEFAULTS['table_size']})",
    )
    t.add_argument(
        "--power", type=_positive_float,
        help=f"unigram distribution exponent (default: {DEFAULTS['power']})",
    )
    t.add_argument(
        "--no-dynamic-window", action="store_true",
        help="classic mode: always use the full window instead of a "
        "per-center uniform draw from 1..window (ordered mode always does)",
    )
    t.add_argument(
        "--threads", type=_positive_int,
        help=f"hogwild workers; >1 is nondeterministic (default: {DEFAULTS['threads']})",
    )
    t.add_argument("--dump-vocab", help="also write token<TAB>count lines here")
    add_common(t)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="score a model on a task dataset")
    e.add_argument("model", help="embedding text file")
    e.add_argument("task", choices=("analogy", "cluster", "classify", "regress"))
    e.add_argument("dataset", help="task file: 'a b c d' lines or entity<TAB>label lines")
    e.add_argument(
        "--k", type=_positive_int,
        help=f"neighbors for kNN, clusters for k-means "
        f"(default: {DEFAULTS['k']} / number of labels)",
    )
    add_common(e)
    e.set_defaults(func=cmd_eval)

    n = sub.add_parser("nearest", help="print the most similar tokens")
    n.add_argument("model", help="embedding text file")
    n.add_argument("token", help="query token")
    n.add_argument(
        "--k", type=_positive_int,
        help=f"number of neighbors (default: {DEFAULTS['k']})",
    )
    add_common(n)
    n.set_defaults(func=cmd_nearest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; the contract here is 0/1
        return 0 if not e.code else 1
    try:
        return args.func(args)
    except RdfvecError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
