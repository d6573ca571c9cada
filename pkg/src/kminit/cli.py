"""Command-line front end.

    kminit cluster --dataset iris --method OP
    kminit bench   --manifest data/manifest.json --output report/
    kminit inspect --dataset wine
    kminit trace   --dataset ruspini --method V --k 4 --no-normalize
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bench import build_report, emit_report, run_benchmark
from .dataset import (DATA_DIR_ENV, bundled_manifest_path, class_count, cluster_count,
                      min_max_normalize, read_manifest, resolve_dataset)
from .errors import KMInitError, MissingLabels
from .initializers import HIERARCHICAL_RULES, METHOD_ORDER, SeededRng, get_method, hierarchical_tree
from .lloyd import KMeansConfig, run_kmeans


def _common(p: argparse.ArgumentParser, dataset=True):
    if dataset:
        p.add_argument("--dataset", required=True,
                       help="file path, manifest name/ID, or bundled name (ruspini, iris, wine)")
    p.add_argument("--manifest", help="JSON dataset manifest")
    p.add_argument("--no-normalize", dest="normalize", action="store_false",
                   help="skip min-max normalization")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kminit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="run one initializer followed by k-means")
    _common(p)
    p.add_argument("--method", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rng", default="mt19937", choices=("mt19937", "pcg64"))
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=100)

    p = sub.add_parser("bench", help="run the full benchmark protocol and write a report")
    _common(p, dataset=False)
    p.add_argument("--dataset", action="append", default=[],
                   help="dataset to include (repeatable); defaults to every manifest entry")
    p.add_argument("--methods", default=",".join(METHOD_ORDER))
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="base seed")
    p.add_argument("--rng", default="mt19937", choices=("mt19937", "pcg64"))
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--compare", default="rounded", choices=("rounded", "exact"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", required=True)

    p = sub.add_parser("inspect", help="print N, D, K' and raw attribute ranges")
    p.add_argument("--dataset", required=True)
    p.add_argument("--manifest")

    p = sub.add_parser("trace", help="print the split sequence of a divisive method")
    _common(p)
    p.add_argument("--method", required=True, choices=tuple(HIERARCHICAL_RULES))
    p.add_argument("--k", type=int)
    p.add_argument("--bins", type=int, default=256)
    return parser


def _load(args, ref):
    ds = resolve_dataset(ref, args.manifest).load()
    return min_max_normalize(ds) if args.normalize else ds


def _k(args, ds) -> int:
    if args.k is not None:
        return args.k
    try:
        return cluster_count(ds)
    except MissingLabels:
        raise MissingLabels(f"dataset {ds.name!r} has no class column; pass --k") from None


def _axis_label(ds, axis) -> str:
    if isinstance(axis, str):
        return axis.upper()
    if ds.d <= 3:
        return "XYZ"[axis]
    return ds.attributes[axis]


def cmd_cluster(args) -> int:
    ds = _load(args, args.dataset)
    method = get_method(args.method)
    k = _k(args, ds)
    cfg = KMeansConfig(max_iters=args.max_iters, epsilon=args.epsilon)
    start = time.process_time()
    centers = method(ds, k, SeededRng(args.seed, args.rng), args.bins)
    res = run_kmeans(ds, centers, cfg)
    cpu_ms = (time.process_time() - start) * 1000.0
    print(f"dataset={ds.name} method={method.code} k={k} n={ds.n} d={ds.d}")
    print(f"initial_sse={res.initial_sse:.6f}")
    print(f"final_sse={res.final_sse:.6f}")
    print(f"iterations={res.iterations}")
    print(f"cpu_ms={cpu_ms:.0f}")
    return 0


def cmd_inspect(args) -> int:
    ds = resolve_dataset(args.dataset, args.manifest).load()
    try:
        kp = str(class_count(ds))
    except MissingLabels:
        kp = "-"
    print(f"N={ds.n} D={ds.d} K'={kp}")
    if ds.dropped_rows:
        print(f"dropped_rows={ds.dropped_rows}")
    lo, hi = ds.attr_min, ds.attr_max
    for j, name in enumerate(ds.attributes):
        print(f"{name}\t{lo[j]:.6g}\t{hi[j]:.6g}")
    return 0


def cmd_trace(args) -> int:
    ds = _load(args, args.dataset)
    k = _k(args, ds)
    axis_rule, split_rule = HIERARCHICAL_RULES[args.method]
    _, records = hierarchical_tree(ds, k, axis_rule, split_rule, args.bins)
    for i, rec in enumerate(records, start=1):
        line = (f"split {i}: node {rec.node} (SSE {rec.node_sse:.6f}, "
                f"{rec.left_size + rec.right_size} points) "
                f"{_axis_label(ds, rec.axis)} @ {rec.threshold:.6f} -> "
                f"SSE {rec.left_sse:.6f} + {rec.right_sse:.6f}")
        if rec.otsu_bin is not None:
            line += f" [otsu bin {rec.otsu_bin}, mean bin {rec.mean_bin}]"
        print(line)
    return 0


def cmd_bench(args) -> int:
    manifest = args.manifest
    if manifest is None:
        env_dir = os.environ.get(DATA_DIR_ENV)
        candidate = Path(env_dir) / "manifest.json" if env_dir else None
        manifest = candidate if candidate and candidate.is_file() else bundled_manifest_path()
    entries = read_manifest(manifest)
    if args.dataset:
        entries = [resolve_dataset(ref, manifest) for ref in args.dataset]
    datasets = []
    for entry in entries:
        ds = entry.load()
        if ds.labels is None and ds.k_override is None:
            print(f"skipping {ds.name}: no class labels and no k", file=sys.stderr)
            continue
        datasets.append(min_max_normalize(ds) if args.normalize else ds)
    methods = [get_method(m.strip()).code for m in args.methods.split(",") if m.strip()]
    cfg = KMeansConfig(max_iters=args.max_iters, epsilon=args.epsilon)
    records = run_benchmark(datasets, methods, runs_random=args.runs, base_seed=args.seed,
                            cfg=cfg, bins=args.bins, rng_algorithm=args.rng, jobs=args.jobs)
    report = build_report(records, methods, datasets, mode=args.compare)
    paths = emit_report(report, args.output)
    failed = sum(r.failed for r in records)
    print(f"{len(records)} runs on {len(datasets)} datasets ({failed} failed); "
          f"wrote {len(paths)} files to {args.output}")
    for (a, b), counts in report.relative.items():
        for crit, (w, s, bt) in counts.items():
            print(f"{a} vs {b} {crit}: worse={w} same={s} better={bt}")
    return 0


COMMANDS = {"cluster": cmd_cluster, "bench": cmd_bench, "inspect": cmd_inspect, "trace": cmd_trace}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    np.seterr(all="ignore")
    try:
        return COMMANDS[args.command](args)
    except (KMInitError, FileNotFoundError, ValueError) as exc:
        print(f"kminit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
