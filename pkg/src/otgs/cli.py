"""``otgs`` command line.

Exit codes: 0 success, 2 invalid arguments, 3 infeasible instance,
4 file I/O or format error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .constructions import (
    decide, infomax_oracle, make_clique_gadget, make_monotonicity_gadget,
    monotonicity_certificate, sample_dataset,
)
from .datasets import SyntheticSpec, gen_synthetic, image_dataset, read_dataset, write_dataset
from .errors import DatasetFormatError, InfeasibleError, ValidationError
from .evaluation import METHODS, canonical_method, fit_summarizer, run_experiment, summarize_testset
from .graph import Graph
from .info import conditional_mi, kl_bernoulli_edge, mi_continuous, mi_discrete

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 0, 2, 3, 4


def _floats(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _edge_list(text):
    edges = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            u, v = tok.split("-")
            edges.append((int(u), int(v)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad edge {tok!r}; use u-v") from None
    return edges


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("OTGS_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"OTGS_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


def _manifest(path, args):
    data = {k: v for k, v in vars(args).items() if k != "func"}
    data["version"] = __version__
    Path(str(path) + ".manifest.json").write_text(json.dumps(data, indent=2, default=str) + "\n")


def _clique_base(args):
    n = args.n if args.n is not None else 1 + max((max(e) for e in args.edges), default=-1)
    return Graph.from_edges(n, args.edges)


def cmd_gen(args):
    if args.kind == "synthetic":
        spec = SyntheticSpec(args.nodes, args.graphs, edge_prob_class0=args.edge_prob0,
                             edge_prob_class1=args.edge_prob1, seed=args.seed)
        data = gen_synthetic(spec)
    elif args.kind == "gadget-monotone":
        data = sample_dataset(make_monotonicity_gadget(args.n, args.const), args.samples, args.seed)
    elif args.kind == "gadget-clique":
        data = sample_dataset(make_clique_gadget(_clique_base(args)), args.samples, args.seed)
    else:
        images = np.load(args.images)
        labels = np.load(args.labels)
        data = image_dataset(images, labels)
    write_dataset(data, args.out)
    _manifest(args.out, args)
    print(f"wrote {data.m} graphs (n={data.n}, d={data.d}) to {args.out}")


def cmd_summarize(args):
    method = canonical_method(args.method)
    if method == "random-subset" and args.seed is None:
        raise ValidationError("--seed is required for the random-subset method")
    train = read_dataset(args.train)
    test = read_dataset(args.test) if args.test else train
    model = fit_summarizer(train, args.kappa, method, seed=args.seed,
                           sensitivity_fraction=args.sensitivity_fraction, bins=args.bins)
    out = summarize_testset(model, test, threads=_threads(args))
    write_dataset(out, args.out)
    _manifest(args.out, args)
    if model.support is not None:
        support_path = args.support_out or str(args.out) + ".support"
        Path(support_path).write_text("".join(f"{v}\n" for v in model.support))
        print(f"support ({len(model.support)} vertices) -> {support_path}")
    else:
        print("per-graph summaries; no shared support")
    print(f"summarized {out.m} graphs to n={out.n} -> {args.out}")


def cmd_oracle(args):
    if args.gadget == "clique":
        model = make_clique_gadget(_clique_base(args))
    else:
        model = make_monotonicity_gadget(args.n, args.const)
    res = infomax_oracle(model, args.k)
    print(f"best subset: {' '.join(map(str, res.best_subset))}")
    print(f"exact MI (bits): {res.best_mi:.7f}")
    if args.gamma is not None:
        # compare at the printed precision
        bit = int(round(res.best_mi, 7) >= args.gamma - 1e-12)
        print(f"decision (MI >= {args.gamma:g}): {bit}")


def cmd_demo_monotonicity(args):
    c = monotonicity_certificate(args.n, args.const, args.k)
    print(f"gadget n={args.n} const={args.const:g} k={args.k}")
    print(f"greedy support        {c.greedy_support}")
    print(f"greedy flow cost      {c.greedy_cost:.7f}")
    print(f"greedy subset MI      {c.greedy_mi:.7f}")
    print(f"oracle support        {c.oracle_support}")
    print(f"oracle MI             {c.oracle_mi:.7f}")
    print(f"oracle support cost   {c.oracle_cost:.7f}")
    print(f"violation: {'PASS' if c.violated else 'FAIL'}")


def cmd_evaluate(args):
    train = read_dataset(args.train)
    if args.test:
        test = read_dataset(args.test)
    else:
        perm = np.random.default_rng(args.seed).permutation(train.m)
        cut = int(round(train.m * (1 - args.test_fraction)))
        train, test = train.subset(perm[:cut]), train.subset(perm[cut:])
    report = run_experiment(train, test, args.kappas, args.methods, seed=args.seed, folds=args.folds,
                            trials=args.trials, sensitivity_fraction=args.sensitivity_fraction,
                            threads=_threads(args), bins=args.bins)
    if args.csv:
        report.write_csv(args.csv)
        _manifest(args.csv, args)
    print(report.format_table())


def cmd_mi(args):
    data = read_dataset(args.data)
    y = data.labels
    if args.edge:
        (u, v), = args.edge
        e = data.edge_samples(u, v)
        print(f"I(E_{u},{v}; C) = {mi_discrete(e, y).value:.7f} bits")
        print(f"KL(E|C=0 || E|C=1) = {kl_bernoulli_edge(e, y):.7f} bits")
        return
    xv = data.features[:, args.node, :]
    if args.given is None:
        print(f"I(X_{args.node}; C) = {mi_continuous(xv, y, args.bins).value:.7f} bits")
    else:
        xw = data.features[:, args.given, :]
        print(f"I(X_{args.node}; C | X_{args.given}) = {conditional_mi(xv, xw, y, args.bins).value:.7f} bits")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="otgs", description="Supervised optimal-transport graph summarization.",
                                formatter_class=fmt)
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--threads", type=int, default=None, help="worker threads (env OTGS_THREADS, else all cores)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a dataset file", formatter_class=fmt)
    g.add_argument("kind", choices=["synthetic", "gadget-monotone", "gadget-clique", "grid"])
    g.add_argument("--out", required=True, help="output .ndjson path")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--nodes", type=int, default=100)
    g.add_argument("--graphs", type=int, default=1500)
    g.add_argument("--edge-prob0", type=float, default=0.5)
    g.add_argument("--edge-prob1", type=float, default=0.9)
    g.add_argument("--n", type=int, default=None, help="gadget vertex count")
    g.add_argument("--const", type=float, default=0.4)
    g.add_argument("--edges", type=_edge_list, default=[], help="clique gadget base edges, e.g. 0-1,1-2")
    g.add_argument("--samples", type=int, default=20000)
    g.add_argument("--images", help=".npy array of shape (m, H, W)")
    g.add_argument("--labels", help=".npy array of m binary labels")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("summarize", help="fit on train, summarize test", formatter_class=fmt)
    s.add_argument("--train", required=True)
    s.add_argument("--test", default=None, help="defaults to the training file")
    s.add_argument("--out", required=True)
    s.add_argument("--support-out", default=None, help="defaults to OUT.support")
    s.add_argument("--kappa", type=float, required=True)
    s.add_argument("--method", default="supervised", help=f"one of {', '.join(METHODS)}")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--sensitivity-fraction", type=float, default=None)
    s.add_argument("--bins", type=int, default=None)
    s.set_defaults(func=cmd_summarize)

    o = sub.add_parser("oracle", help="exact most-informative subset of a gadget", formatter_class=fmt)
    o.add_argument("--gadget", choices=["clique", "monotone"], default="clique")
    o.add_argument("--edges", type=_edge_list, default=[])
    o.add_argument("--n", type=int, default=None)
    o.add_argument("--const", type=float, default=0.4)
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--gamma", type=float, default=None)
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("demo-monotonicity", help="compression vs. most informative subset", formatter_class=fmt)
    d.add_argument("--n", type=int, default=10)
    d.add_argument("--const", type=float, default=0.4)
    d.add_argument("--k", type=int, default=2)
    d.set_defaults(func=cmd_demo_monotonicity)

    e = sub.add_parser("evaluate", help="accuracy/timing sweep", formatter_class=fmt)
    e.add_argument("--train", required=True)
    e.add_argument("--test", default=None, help="if omitted, split --train")
    e.add_argument("--test-fraction", type=float, default=0.5)
    e.add_argument("--kappas", type=_floats, default=[0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    e.add_argument("--methods", type=lambda t: t.split(","), default=["supervised", "random-subset", "none"])
    e.add_argument("--folds", type=int, default=5)
    e.add_argument("--trials", type=int, default=5)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--sensitivity-fraction", type=float, default=None)
    e.add_argument("--bins", type=int, default=None)
    e.add_argument("--csv", default=None)
    e.set_defaults(func=cmd_evaluate)

    m = sub.add_parser("mi", help="ad-hoc estimates on a dataset file", formatter_class=fmt)
    m.add_argument("--data", required=True)
    grp = m.add_mutually_exclusive_group(required=True)
    grp.add_argument("--node", type=int)
    grp.add_argument("--edge", type=_edge_list)
    m.add_argument("--given", type=int, default=None)
    m.add_argument("--bins", type=int, default=None)
    m.set_defaults(func=cmd_mi)
    return p


def _validate(args):
    if args.threads is not None and args.threads < 1:
        raise ValidationError("--threads must be positive")
    if args.command == "gen":
        if args.seed is None and args.kind != "grid":
            raise ValidationError("--seed is required for stochastic generation")
        if args.kind == "gadget-monotone" and args.n is None:
            args.n = 10
        if args.kind == "gadget-clique" and not args.edges and args.n is None:
            raise ValidationError("gadget-clique needs --edges or --n")
        if args.kind == "grid" and not (args.images and args.labels):
            raise ValidationError("grid needs --images and --labels")
    if args.command == "oracle":
        if args.gadget == "monotone" and args.n is None:
            args.n = 10
        if args.gadget == "clique" and not args.edges and args.n is None:
            raise ValidationError("clique oracle needs --edges or --n")
    if args.command == "mi" and args.edge is not None and len(args.edge) != 1:
        raise ValidationError("--edge takes a single pair u-v")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        args.func(args)
    except (DatasetFormatError, OSError) as exc:
        print(f"otgs: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InfeasibleError as exc:
        print(f"otgs: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ValidationError, ValueError) as exc:
        print(f"otgs: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
