"""Command-line pipeline: sample | embed | propagate | eval-node | eval-link
| sweep | bench.

Flags override config-file values ("key = value" lines) which override
defaults; every run echoes its resolved configuration to stderr.  Machine
output (JSON reports, CSV sweep tables, bench tables) goes to stdout; human
progress notes go to stderr.  Exit code 0 on success, 1 on any handled error
(printed as a single ``neighbor2vec: error [category] ...`` line), 2 on
usage errors.
"""

import argparse
import json
import shutil
import sys
import time
from dataclasses import asdict, replace

import numpy as np

from . import bench as bench_mod
from . import embedding_io
from .config import RunConfig, _FIELDS, _coerce, load_config_file, resolve
from .errors import ConfigError, DataError, Neighbor2vecError
from .graph import Graph, IngestOptions, load_edge_list, load_node_map
from .harness import run_link_prediction, run_node_classification
from .metrics import COMBINERS
from .mlp import MlpConfig
from .parallel import default_threads
from .propagation import METHODS, PropagationConfig, propagate
from .sampling import baseline_random_walk_corpus, generate_corpus
from .tasks import LinkTask, NodeLabelTask, load_edge_split, load_labels, load_node_split
from .trainer import TrainConfig, train

SWEEPABLE = ("n_sample", "num", "dim", "rate", "iterations", "negatives", "epochs", "alpha")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _require(cfg: RunConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise ConfigError(f"missing required option --{name.replace('_', '-')}")


def _threads(cfg: RunConfig) -> int:
    return cfg.threads if cfg.threads is not None else default_threads()


def _load_graph(cfg: RunConfig) -> Graph:
    _require(cfg, "input")
    opts = IngestOptions(
        directed=cfg.directed,
        weighted=cfg.weighted,
        comment_prefix=cfg.comment_prefix,
        dedupe=cfg.dedupe,
    )
    g = load_edge_list(cfg.input, opts)
    _say(f"graph: {g.num_nodes} nodes, {g.num_edges} edges, avg degree {g.average_degree():.2f}")
    return g


def _train_config(cfg: RunConfig) -> TrainConfig:
    return TrainConfig(
        dim=cfg.dim,
        window=cfg.resolved_window(),
        negatives=cfg.negatives,
        alpha=cfg.alpha,
        min_alpha=cfg.min_alpha,
        linear_decay=not cfg.fixed_alpha,
        epochs=cfg.epochs,
        noise_exponent=cfg.noise_exponent,
        seed=cfg.seed,
        threads=_threads(cfg),
    )


def _mlp_config(cfg: RunConfig) -> MlpConfig:
    return MlpConfig(
        hidden_dims=cfg.resolved_hidden(),
        dropout=cfg.dropout,
        epochs=cfg.mlp_epochs,
        lr=cfg.lr,
        batch=cfg.batch,
        seed=cfg.seed,
    )


def _build_corpus(cfg: RunConfig, g: Graph):
    t0 = time.perf_counter()
    if cfg.strategy == "no-walk":
        corpus = generate_corpus(g, num=cfg.num, n_sample=cfg.n_sample, seed=cfg.seed, threads=_threads(cfg))
    elif cfg.strategy == "random-walk":
        corpus = baseline_random_walk_corpus(
            g, cfg.walk_len, cfg.walks_per_node, seed=cfg.seed, threads=_threads(cfg)
        )
    else:
        raise ConfigError(f"strategy must be 'no-walk' or 'random-walk', got {cfg.strategy!r}")
    dt = time.perf_counter() - t0
    _say(
        f"corpus: {len(corpus)} sentences (num={corpus.num}, n_sample={corpus.n_sample}) in {dt:.2f}s"
    )
    return corpus


def cmd_sample(cfg: RunConfig) -> int:
    _require(cfg, "output")
    g = _load_graph(cfg)
    corpus = _build_corpus(cfg, g)
    corpus.save_text(cfg.output)
    _say(f"wrote corpus to {cfg.output}")
    return 0


def cmd_embed(cfg: RunConfig) -> int:
    _require(cfg, "output")
    g = _load_graph(cfg)
    corpus = _build_corpus(cfg, g)
    stats = {}
    t0 = time.perf_counter()
    matrix = train(corpus, g, _train_config(cfg), stats_out=stats)
    _say(f"train: {stats['total_pairs']} pair updates in {time.perf_counter() - t0:.2f}s")
    embedding_io.write(matrix, cfg.output, binary=cfg.binary)
    _say(f"wrote embeddings to {cfg.output}")
    return 0


def cmd_propagate(cfg: RunConfig) -> int:
    _require(cfg, "embeddings", "output")
    g = _load_graph(cfg)
    pcfg = PropagationConfig(rate=cfg.rate, iterations=cfg.iterations, method=cfg.method)
    try:
        pcfg.validate()
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if pcfg.rate == 0.0 or pcfg.iterations == 0:
        # pure passthrough: copy the file so the output is byte-identical
        shutil.copyfile(cfg.embeddings, cfg.output)
        _say("rate/iterations is zero: copied input unchanged")
        return 0
    matrix = embedding_io.read(cfg.embeddings, binary=cfg.binary)
    out = propagate(g, matrix, pcfg, threads=_threads(cfg))
    embedding_io.write(out, cfg.output, binary=cfg.binary)
    _say(f"wrote smoothed embeddings to {cfg.output}")
    return 0


def _node_task(cfg: RunConfig, g: Graph) -> NodeLabelTask:
    _require(cfg, "labels", "train_split", "test_split")
    id_map = load_node_map(cfg.node_map) if cfg.node_map else None
    labels = load_labels(cfg.labels, g.num_nodes, id_map)
    splits = {"train": load_node_split(cfg.train_split), "test": load_node_split(cfg.test_split)}
    if cfg.valid_split:
        splits["valid"] = load_node_split(cfg.valid_split)
    num_classes = cfg.num_classes if cfg.num_classes is not None else int(labels.max()) + 1
    return NodeLabelTask(labels=labels, splits=splits, num_classes=num_classes)


def _link_task(cfg: RunConfig, g: Graph) -> LinkTask:
    _require(cfg, "test_pos", "test_neg")
    train_edges = load_edge_split(cfg.train_edges) if cfg.train_edges else g.edge_array()
    return LinkTask(
        train_edges=train_edges,
        test_pos=load_edge_split(cfg.test_pos),
        test_neg=load_edge_split(cfg.test_neg),
        valid_pos=load_edge_split(cfg.valid_pos) if cfg.valid_pos else None,
        valid_neg=load_edge_split(cfg.valid_neg) if cfg.valid_neg else None,
        metric=cfg.metric,
    )


def _emit_report(cfg: RunConfig, report: dict, command: str) -> None:
    report["run_config"] = {"command": command, **asdict(cfg)}
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if cfg.report:
        with open(cfg.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        _say(f"wrote report to {cfg.report}")


def _read_embeddings_for(cfg: RunConfig, g: Graph) -> np.ndarray:
    _require(cfg, "embeddings")
    matrix = embedding_io.read(cfg.embeddings, binary=cfg.binary)
    if matrix.shape[0] != g.num_nodes:
        raise DataError(f"{matrix.shape[0]} embedding rows for a {g.num_nodes}-node graph")
    return matrix


def cmd_eval_node(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    matrix = _read_embeddings_for(cfg, g)
    report = run_node_classification(g, matrix, _node_task(cfg, g), _mlp_config(cfg), runs=cfg.runs)
    _emit_report(cfg, report, "eval-node")
    return 0


def cmd_eval_link(cfg: RunConfig) -> int:
    if cfg.combiner not in COMBINERS:
        raise ConfigError(f"combiner must be one of {COMBINERS}")
    g = _load_graph(cfg)
    matrix = _read_embeddings_for(cfg, g)
    report = run_link_prediction(
        g, matrix, _link_task(cfg, g), _mlp_config(cfg), runs=cfg.runs, combiner=cfg.combiner
    )
    _emit_report(cfg, report, "eval-link")
    return 0


def _pipeline_metric(cfg: RunConfig, g: Graph) -> dict:
    """embed -> propagate -> eval, returning the eval report."""
    corpus = _build_corpus(cfg, g)
    matrix = train(corpus, g, _train_config(cfg))
    pcfg = PropagationConfig(rate=cfg.rate, iterations=cfg.iterations, method=cfg.method)
    matrix = propagate(g, matrix, pcfg, threads=_threads(cfg))
    if cfg.task == "node":
        return run_node_classification(g, matrix, _node_task(cfg, g), _mlp_config(cfg), runs=cfg.runs)
    if cfg.task == "link":
        return run_link_prediction(
            g, matrix, _link_task(cfg, g), _mlp_config(cfg), runs=cfg.runs, combiner=cfg.combiner
        )
    raise ConfigError(f"task must be 'node' or 'link', got {cfg.task!r}")


def cmd_sweep(cfg: RunConfig) -> int:
    _require(cfg, "param", "values")
    if cfg.param not in SWEEPABLE:
        raise ConfigError(f"param must be one of {SWEEPABLE}")
    values = [_coerce(cfg.param, raw.strip()) for raw in str(cfg.values).split(",") if raw.strip()]
    if not values:
        raise ConfigError("values is empty")
    if cfg.method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    g = _load_graph(cfg)
    lines = ["param,value,metric,mean,std"]
    for value in values:
        point = replace(cfg, **{cfg.param: value})
        report = _pipeline_metric(point, g)
        lines.append(
            f"{cfg.param},{value},{report['metric']},{report['mean']:.6f},{report['std']:.6f}"
        )
        _say(f"sweep {cfg.param}={value}: {report['metric']} {report['mean']:.4f}")
    table = "\n".join(lines)
    print(table)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(table + "\n")
    return 0


def cmd_bench(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    thread_list = [int(x) for x in str(cfg.thread_list).split(",") if x.strip()]
    backends = [b.strip() for b in str(cfg.backends).split(",") if b.strip()]
    for b in backends:
        if b not in ("numba", "numpy"):
            raise ConfigError(f"backends must name 'numba' and/or 'numpy', got {b!r}")
    tcfg = _train_config(cfg)
    rows = bench_mod.compare_backends(
        g,
        backends,
        thread_list,
        tcfg,
        num=cfg.num,
        n_sample=cfg.n_sample,
        seed=cfg.seed,
        repeats=cfg.repeats,
    )
    base = {r["backend"]: r["total_s"] for r in rows if r["threads"] == thread_list[0]}
    print(f"{'backend':>8} {'threads':>7} {'corpus_s':>10} {'train_s':>10} {'total_s':>10} {'speedup':>8}")
    for r in rows:
        speedup = base[r["backend"]] / r["total_s"] if r["total_s"] > 0 else float("inf")
        print(
            f"{r['backend']:>8} {r['threads']:>7d} {r['corpus_s']:>10.3f} {r['train_s']:>10.3f} "
            f"{r['total_s']:>10.3f} {speedup:>8.2f}"
        )
    if cfg.report:
        with open(cfg.report, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    return 0


HANDLERS = {
    "sample": cmd_sample,
    "embed": cmd_embed,
    "propagate": cmd_propagate,
    "eval-node": cmd_eval_node,
    "eval-link": cmd_eval_link,
    "sweep": cmd_sweep,
    "bench": cmd_bench,
}


def _add_flag(sp, name, **kwargs):
    sp.add_argument(name, default=None, **kwargs)


def _add_bool(sp, name):
    sp.add_argument(name, default=None, action=argparse.BooleanOptionalAction)


def _add_common(sp):
    _add_flag(sp, "--config", help="key = value config file (flags override it)")
    _add_flag(sp, "--seed", type=int)
    _add_flag(sp, "--threads", type=int, help="defaults to $NEIGHBOR2VEC_THREADS or 1")
    sp.add_argument("input", nargs="?", default=None, help="edge-list file")
    _add_bool(sp, "--directed")
    _add_bool(sp, "--weighted")
    _add_flag(sp, "--comment-prefix", dest="comment_prefix")
    _add_bool(sp, "--dedupe")


def _add_sampling(sp):
    _add_flag(sp, "--num", type=int, help="neighbor cap; default max(8, ceil(avg degree))")
    _add_flag(sp, "--n-sample", dest="n_sample", type=int)
    _add_flag(sp, "--strategy", choices=["no-walk", "random-walk"])
    _add_flag(sp, "--walk-len", dest="walk_len", type=int)
    _add_flag(sp, "--walks-per-node", dest="walks_per_node", type=int)


def _add_training(sp):
    _add_flag(sp, "--dim", type=int)
    _add_flag(sp, "--window", help="integer or 'full'")
    _add_flag(sp, "--negatives", type=int)
    _add_flag(sp, "--alpha", type=float)
    _add_flag(sp, "--min-alpha", dest="min_alpha", type=float)
    _add_bool(sp, "--fixed-alpha")
    _add_flag(sp, "--epochs", type=int)
    _add_flag(sp, "--noise-exponent", dest="noise_exponent", type=float)


def _add_propagation(sp):
    _add_flag(sp, "--rate", type=float)
    _add_flag(sp, "--iterations", type=int)
    _add_flag(sp, "--method", choices=list(METHODS))


def _add_mlp(sp):
    _add_flag(sp, "--hidden", help="two hidden widths, e.g. 256,256")
    _add_flag(sp, "--dropout", type=float)
    _add_flag(sp, "--mlp-epochs", dest="mlp_epochs", type=int)
    _add_flag(sp, "--lr", type=float)
    _add_flag(sp, "--batch", type=int)
    _add_flag(sp, "--runs", type=int)
    _add_flag(sp, "--report", help="also write the JSON report here")


def _add_node_task(sp):
    _add_flag(sp, "--labels", help="node_id<TAB>class_id lines")
    _add_flag(sp, "--train-split", dest="train_split")
    _add_flag(sp, "--valid-split", dest="valid_split")
    _add_flag(sp, "--test-split", dest="test_split")
    _add_flag(sp, "--num-classes", dest="num_classes", type=int)
    _add_flag(sp, "--node-map", dest="node_map")


def _add_link_task(sp):
    _add_flag(sp, "--train-edges", dest="train_edges")
    _add_flag(sp, "--valid-pos", dest="valid_pos")
    _add_flag(sp, "--valid-neg", dest="valid_neg")
    _add_flag(sp, "--test-pos", dest="test_pos")
    _add_flag(sp, "--test-neg", dest="test_neg")
    _add_flag(sp, "--metric", help="roc_auc | mrr | hits@K")
    _add_flag(sp, "--combiner", choices=list(COMBINERS))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="neighbor2vec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", help="dump a sampled corpus, one sentence per line")
    _add_common(sp)
    _add_sampling(sp)
    _add_flag(sp, "--output")

    sp = sub.add_parser("embed", help="edge list -> corpus -> trained embeddings")
    _add_common(sp)
    _add_sampling(sp)
    _add_training(sp)
    _add_flag(sp, "--output")
    _add_bool(sp, "--binary")

    sp = sub.add_parser("propagate", help="smooth an embedding file over the graph")
    _add_common(sp)
    _add_propagation(sp)
    _add_flag(sp, "--embeddings")
    _add_flag(sp, "--output")
    _add_bool(sp, "--binary")

    sp = sub.add_parser("eval-node", help="10-run MLP node classification")
    _add_common(sp)
    _add_node_task(sp)
    _add_mlp(sp)
    _add_flag(sp, "--embeddings")
    _add_bool(sp, "--binary")

    sp = sub.add_parser("eval-link", help="10-run MLP link prediction")
    _add_common(sp)
    _add_link_task(sp)
    _add_mlp(sp)
    _add_flag(sp, "--embeddings")
    _add_bool(sp, "--binary")

    sp = sub.add_parser("sweep", help="rerun the full pipeline across one parameter")
    _add_common(sp)
    _add_sampling(sp)
    _add_training(sp)
    _add_propagation(sp)
    _add_mlp(sp)
    _add_node_task(sp)
    _add_link_task(sp)
    _add_flag(sp, "--param", choices=list(SWEEPABLE))
    _add_flag(sp, "--values", help="comma-separated values for --param")
    _add_flag(sp, "--task", choices=["node", "link"])
    _add_flag(sp, "--output", help="also write the CSV table here")

    sp = sub.add_parser("bench", help="time corpus generation and training per thread count")
    _add_common(sp)
    _add_sampling(sp)
    _add_training(sp)
    _add_flag(sp, "--thread-list", dest="thread_list", help="e.g. 1,2,4")
    _add_flag(sp, "--backends", help="numba and/or numpy, comma-separated")
    _add_flag(sp, "--repeats", type=int)
    _add_flag(sp, "--report", help="write rows as JSON here")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = load_config_file(args.config) if args.config else {}
        cli_values = {k: v for k, v in vars(args).items() if k in _FIELDS}
        cfg = resolve(file_values, cli_values)
        cfg.echo(args.command)
        return HANDLERS[args.command](cfg)
    except Neighbor2vecError as e:
        print(f"neighbor2vec: error [{e.category}] {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"neighbor2vec: error [config] {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"neighbor2vec: error [io] {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
