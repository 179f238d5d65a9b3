"""Command-line front end.

Subcommands: select, oracle, verify, bench, gen, graph. Reports go to the
--out file or stdout; diagnostics go to stderr as a single machine-parsable
line. Exit codes: 0 success, 1 usage error, 2 data error, 3 verification
failure.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import baselines, verify
from .dataset import (
    EmbeddingSet,
    WeightVector,
    load_embeddings,
    load_probabilities,
    load_weights,
    margin_weights,
    METRICS,
)
from .errors import DukeError, MissingFile, SizeMismatch, UsageError
from .instances import KINDS, SyntheticSpec, gen_clusters
from .nngraph import build_knn_graph, export_graph
from .oracle import brute_force_kcenter, brute_force_weighted
from .parallel import STRATEGIES, make_partition, parallel_weighted_kcenter
from .report import Report, fmt_float
from .wkcenter import (
    SelectionConfig,
    SubsetSolution,
    default_lambda,
    evaluate_solution,
    gamma_bounds,
    greedy_kcenter,
    make_gamma_grid,
    weighted_kcenter,
    weighted_kcenter_pq,
)

METHODS = ("duke", "duke-pq", "parallel", "greedy-kcenter", "random",
           "margin", "submodular")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; the contract wants 1
    def error(self, message):
        raise UsageError(message=message.replace(",", ";"))


def _now_ms() -> float:
    return time.perf_counter() * 1000.0


def _load_inputs(args) -> tuple[EmbeddingSet, WeightVector]:
    try:
        emb = load_embeddings(args.embeddings, fmt=args.format, dim=args.dim,
                              header=args.header)
    except (FileNotFoundError, IsADirectoryError, PermissionError):
        raise MissingFile(path=args.embeddings) from None
    try:
        if args.weights:
            weights = load_weights(args.weights, fmt=args.format,
                                   header=args.header)
        elif args.probs:
            probs = load_probabilities(args.probs, fmt=args.format,
                                       classes=args.classes,
                                       header=args.header)
            weights = margin_weights(probs)
        else:
            weights = WeightVector(np.zeros(emb.n))
    except (FileNotFoundError, IsADirectoryError, PermissionError):
        raise MissingFile(path=args.weights or args.probs) from None
    if weights.n != emb.n:
        raise SizeMismatch(expected=emb.n, got=weights.n)
    return emb, weights


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--embeddings", required=True)
    p.add_argument("--format", default="csv", choices=("csv", "raw-float32"))
    p.add_argument("--dim", type=int, default=None,
                   help="row width for raw-float32 embeddings")
    p.add_argument("--header", action="store_true")
    p.add_argument("--weights", default=None)
    p.add_argument("--probs", default=None)
    p.add_argument("--classes", type=int, default=None,
                   help="row width for raw-float32 probabilities")
    p.add_argument("--metric", default="cosine-distance", choices=METRICS)


def _emit(report: Report, out: str | None) -> None:
    text = report.to_text()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config_echo(rep: Report, args, pairs) -> None:
    for key, value in pairs:
        rep.add("config", key, value)


def _solution_block(rep: Report, sol: SubsetSolution) -> None:
    rep.add("solution", "algorithm", sol.algorithm)
    rep.add("solution", "indices", sol.indices)
    rep.add("solution", "radius_term", sol.radius_term)
    rep.add("solution", "weight_term", sol.weight_term)
    rep.add("solution", "objective", sol.objective)
    rep.add("solution", "gamma_used", sol.gamma_used)
    for key in sorted(sol.extra):
        value = sol.extra[key]
        if isinstance(value, dict):
            continue
        rep.add("solution", key, value)


def cmd_select(args) -> tuple[Report, int]:
    t0 = _now_ms()
    emb, weights = _load_inputs(args)
    t_load = _now_ms() - t0

    k = args.k
    lam = args.lambda_ if args.lambda_ is not None else default_lambda(k)
    metric = args.metric
    rep = Report()
    _config_echo(rep, args, [
        ("command", "select"), ("method", args.method), ("k", k),
        ("lambda", lam), ("metric", metric), ("seed", args.seed),
        ("n", emb.n), ("dim", emb.dim),
        ("gamma", "search" if args.gamma is None else fmt_float(args.gamma)),
        ("gamma_grid", args.gamma_grid), ("machines", args.machines),
        ("partition", args.partition), ("knn", args.knn),
        ("neighborhood", args.neighborhood), ("lambda_s", args.lambda_s),
    ])

    t1 = _now_ms()
    graph_ms = 0.0
    method = args.method
    graph = None
    if method == "duke-pq" and args.neighborhood == "knn-graph":
        g0 = _now_ms()
        graph = build_knn_graph(emb, args.knn, metric)
        graph_ms = _now_ms() - g0

    def run_fixed(gamma: float) -> SubsetSolution:
        cfg = SelectionConfig(k=k, lambda_=lam, gamma=gamma, metric=metric,
                              seed=args.seed)
        if method == "duke":
            return weighted_kcenter(emb, metric, weights, cfg)
        if method == "duke-pq":
            return weighted_kcenter_pq(emb, metric, weights, cfg, graph=graph,
                                       neighborhood_mode=args.neighborhood)
        plan = make_partition(emb.n, args.machines, seed=args.seed,
                              strategy=args.partition)
        return parallel_weighted_kcenter(emb, metric, weights, cfg, plan)

    if method in ("duke", "duke-pq", "parallel"):
        if args.gamma is not None:
            sol = run_fixed(args.gamma)
        else:
            lo, hi = gamma_bounds(emb, metric, weights, k)
            grid = make_gamma_grid(lo, hi, args.gamma_grid)
            sol = None
            for g in grid:
                cand = run_fixed(float(g))
                rep.add("trace", f"gamma_{fmt_float(g)}", cand.objective)
                if sol is None or cand.objective < sol.objective:
                    sol = cand
    elif method == "greedy-kcenter":
        sol = greedy_kcenter(emb, metric, k, start=args.start)
    elif method == "random":
        sol = baselines.random_select(emb.n, k, args.seed)
    elif method == "margin":
        sol = baselines.margin_select(weights, k)
    elif method == "submodular":
        g0 = _now_ms()
        graph = build_knn_graph(emb, args.knn, metric)
        graph_ms = _now_ms() - g0
        sims = baselines.edge_similarities(graph)
        utils = baselines.utility_from_weights(weights)
        sol = baselines.submodular_greedy(graph, utils, sims, args.lambda_s, k)
    else:
        raise UsageError(method=method)

    sol = evaluate_solution(emb, metric, weights, lam, sol)
    select_ms = _now_ms() - t1
    _solution_block(rep, sol)
    rep.add("timing", "load_ms", t_load)
    rep.add("timing", "graph_ms", graph_ms)
    rep.add("timing", "select_ms", select_ms)
    rep.add("timing", "total_ms", _now_ms() - t0)
    return rep, 0


def cmd_oracle(args) -> tuple[Report, int]:
    t0 = _now_ms()
    emb, weights = _load_inputs(args)
    k = args.k
    lam = args.lambda_ if args.lambda_ is not None else default_lambda(k)
    rep = Report()
    _config_echo(rep, args, [
        ("command", "oracle"), ("k", k), ("lambda", lam),
        ("metric", args.metric), ("kcenter", args.kcenter),
        ("n", emb.n), ("dim", emb.dim),
    ])
    if args.kcenter:
        res = brute_force_kcenter(emb, args.metric, k, weights=weights)
    else:
        res = brute_force_weighted(emb, args.metric, weights, k, lam)
    rep.add("oracle", "best_subset", list(res.best_subset))
    rep.add("oracle", "radius_term", res.radius_term)
    rep.add("oracle", "weight_term", res.weight_term)
    rep.add("oracle", "objective", res.objective)
    rep.add("oracle", "enumerated", res.enumerated)
    rep.add("timing", "total_ms", _now_ms() - t0)
    return rep, 0


def cmd_verify(args) -> tuple[Report, int]:
    t0 = _now_ms()
    summary = verify.run_full(trials=args.trials,
                              pq_instances=args.pq_instances,
                              parallel_trials=args.parallel_trials,
                              seed=args.seed, n_max=args.n_max,
                              k_max=args.k_max)
    rep = Report()
    _config_echo(rep, args, [
        ("command", "verify"), ("trials", args.trials),
        ("pq_instances", args.pq_instances),
        ("parallel_trials", args.parallel_trials),
        ("n_max", args.n_max), ("k_max", args.k_max), ("seed", args.seed),
    ])
    for stat in summary.stats:
        worst = "n/a" if stat.worst == float("-inf") else fmt_float(stat.worst)
        status = "pass" if stat.passed else "FAIL"
        rep.add("verify", stat.name,
                f"{status} checks={stat.checks} violations={len(stat.violations)} worst={worst}")
    rep.add("verify", "overall", "pass" if summary.passed else "FAIL")
    rep.add("timing", "total_ms", _now_ms() - t0)
    if not summary.passed:
        rep.add("verify", "replay_out", args.replay_out)
        with open(args.replay_out, "w", encoding="utf-8") as fh:
            for v in summary.all_violations():
                fh.write(v + "\n\n")
        return rep, 3
    return rep, 0


def cmd_bench(args) -> tuple[Report, int]:
    t0 = _now_ms()
    sizes = [int(s) for s in args.sizes.split(",") if s]
    ks = [int(s) for s in args.ks.split(",")] if args.ks else [args.k]
    rep = Report()
    _config_echo(rep, args, [
        ("command", "bench"), ("sizes", sizes), ("ks", ks),
        ("dim", args.dim), ("metric", args.metric), ("seed", args.seed),
        ("repeats", args.repeats),
    ])

    def time_once(fn) -> float:
        best = float("inf")
        for _ in range(args.repeats):
            s = _now_ms()
            fn()
            best = min(best, _now_ms() - s)
        return best

    # warm the numeric kernels so the first measured size is not charged
    # for lazy initialization
    warm, warm_w = gen_clusters(SyntheticSpec(kind="uniform-cube", n=2048,
                                              dim=args.dim, seed=args.seed))
    weighted_kcenter_pq(warm, args.metric, warm_w,
                        SelectionConfig(k=min(8, warm.n), lambda_=0.1,
                                        gamma=1.0, metric=args.metric))

    pq_times: dict[tuple[int, int], float] = {}
    for n in sizes:
        emb, weights = gen_clusters(SyntheticSpec(
            kind="uniform-cube", n=n, dim=args.dim, seed=args.seed))
        for k in ks:
            lo, hi = gamma_bounds(emb, args.metric, weights, k)
            gamma = float(np.sqrt(max(lo, 1e-12) * max(hi, lo, 1e-12)))
            cfg = SelectionConfig(k=k, lambda_=default_lambda(k), gamma=gamma,
                                  metric=args.metric)
            pq_ms = time_once(lambda: weighted_kcenter_pq(
                emb, args.metric, weights, cfg))
            greedy_ms = time_once(lambda: greedy_kcenter(
                emb, args.metric, k, start=0))
            pq_times[(n, k)] = pq_ms
            tag = f"n{n}_k{k}"
            rep.add("bench", f"{tag}_gamma", gamma)
            rep.add("bench", f"{tag}_pq_ms", pq_ms)
            rep.add("bench", f"{tag}_greedy_ms", greedy_ms)
    for k in ks:
        for prev, cur in zip(sizes, sizes[1:]):
            ratio = pq_times[(cur, k)] / pq_times[(prev, k)]
            rep.add("bench", f"ratio_k{k}_n{cur}_over_n{prev}", ratio)
    for n in sizes:
        for prev, cur in zip(ks, ks[1:]):
            ratio = pq_times[(n, cur)] / pq_times[(n, prev)]
            rep.add("bench", f"ratio_n{n}_k{cur}_over_k{prev}", ratio)
    rep.add("timing", "total_ms", _now_ms() - t0)
    return rep, 0


def cmd_gen(args) -> tuple[Report, int]:
    spec = SyntheticSpec(kind=args.kind, n=args.n, dim=args.gen_dim,
                         clusters=args.clusters, spread=args.spread,
                         seed=args.seed, weight_scheme=args.weight_scheme)
    emb, weights = gen_clusters(spec)
    np.savetxt(args.points_out, emb.features, delimiter=",", fmt="%.17g")
    if args.weights_out:
        np.savetxt(args.weights_out, weights.values, fmt="%.17g")
    rep = Report()
    _config_echo(rep, args, [
        ("command", "gen"), ("kind", args.kind), ("n", emb.n),
        ("dim", emb.dim), ("clusters", args.clusters),
        ("spread", args.spread), ("seed", args.seed),
        ("weight_scheme", args.weight_scheme),
        ("points_out", args.points_out),
        ("weights_out", args.weights_out or ""),
    ])
    return rep, 0


def cmd_graph(args) -> tuple[Report, int]:
    t0 = _now_ms()
    emb, _ = _load_inputs(args)
    graph = build_knn_graph(emb, args.knn, args.metric)
    with open(args.graph_out, "w", encoding="utf-8") as fh:
        export_graph(graph, fh)
    rep = Report()
    _config_echo(rep, args, [
        ("command", "graph"), ("knn", args.knn), ("metric", args.metric),
        ("n", emb.n), ("k_effective", graph.k_effective),
        ("graph_out", args.graph_out),
    ])
    rep.add("timing", "total_ms", _now_ms() - t0)
    return rep, 0


def build_parser() -> _Parser:
    parser = _Parser(prog="duke",
                     description="weighted k-center subset selection")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_sel = sub.add_parser("select", help="run a selection method")
    _add_data_flags(p_sel)
    p_sel.add_argument("--k", type=int, required=True)
    p_sel.add_argument("--method", default="duke", choices=METHODS)
    p_sel.add_argument("--lambda", dest="lambda_", type=float, default=None)
    p_sel.add_argument("--gamma", type=float, default=None)
    p_sel.add_argument("--gamma-grid", type=int, default=8)
    p_sel.add_argument("--machines", type=int, default=1)
    p_sel.add_argument("--partition", default="round-robin",
                       choices=STRATEGIES)
    p_sel.add_argument("--seed", type=int, default=0)
    p_sel.add_argument("--knn", type=int, default=10)
    p_sel.add_argument("--neighborhood", default="exact-ball",
                       choices=("exact-ball", "knn-graph"))
    p_sel.add_argument("--lambda-s", dest="lambda_s", type=float, default=0.9)
    p_sel.add_argument("--start", type=int, default=0)
    p_sel.add_argument("--out", default=None)
    p_sel.set_defaults(fn=cmd_select)

    p_or = sub.add_parser("oracle", help="exact optimum by enumeration")
    _add_data_flags(p_or)
    p_or.add_argument("--k", type=int, required=True)
    p_or.add_argument("--lambda", dest="lambda_", type=float, default=None)
    p_or.add_argument("--kcenter", action="store_true",
                      help="optimize the radius alone (lambda = 0)")
    p_or.add_argument("--out", default=None)
    p_or.set_defaults(fn=cmd_oracle)

    p_ver = sub.add_parser("verify", help="randomized property suites")
    p_ver.add_argument("--trials", type=int, default=200)
    p_ver.add_argument("--pq-instances", type=int, default=500)
    p_ver.add_argument("--parallel-trials", type=int, default=60)
    p_ver.add_argument("--n-max", type=int, default=14)
    p_ver.add_argument("--k-max", type=int, default=6)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--out", default=None)
    p_ver.add_argument("--replay-out", default="duke-replay.txt")
    p_ver.set_defaults(fn=cmd_verify)

    p_ben = sub.add_parser("bench", help="time the selector across sizes")
    p_ben.add_argument("--sizes", default="25000,50000,100000,200000")
    p_ben.add_argument("--k", type=int, default=100)
    p_ben.add_argument("--ks", default=None,
                       help="comma list; overrides --k for a k ladder")
    p_ben.add_argument("--dim", type=int, default=64)
    p_ben.add_argument("--metric", default="cosine-distance", choices=METRICS)
    p_ben.add_argument("--seed", type=int, default=0)
    p_ben.add_argument("--repeats", type=int, default=3)
    p_ben.add_argument("--out", default=None)
    p_ben.set_defaults(fn=cmd_bench)

    p_gen = sub.add_parser("gen", help="write a synthetic instance")
    p_gen.add_argument("--kind", default="clusters", choices=KINDS)
    p_gen.add_argument("--n", type=int, default=100)
    p_gen.add_argument("--dim", dest="gen_dim", type=int, default=2)
    p_gen.add_argument("--clusters", type=int, default=4)
    p_gen.add_argument("--spread", type=float, default=1.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--weight-scheme", default="uniform",
                       choices=("uniform", "per-cluster", "distance-proxy"))
    p_gen.add_argument("--points-out", required=True)
    p_gen.add_argument("--weights-out", default=None)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(fn=cmd_gen)

    p_gr = sub.add_parser("graph", help="export the kNN graph")
    _add_data_flags(p_gr)
    p_gr.add_argument("--knn", type=int, default=10)
    p_gr.add_argument("--graph-out", required=True)
    p_gr.add_argument("--out", default=None)
    p_gr.set_defaults(fn=cmd_graph)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report, code = args.fn(args)
        _emit(report, args.out)
        return code
    except DukeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
