"""Benchmark protocol: repeated runs, per-method statistics, normalized
ratios, overall summaries, pairwise comparisons and report files."""

from __future__ import annotations

import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .dataset import Dataset, cluster_count
from .errors import KMInitError, ReportIOError
from .initializers import METHOD_ORDER, SeededRng, get_method
from .lloyd import KMeansConfig, run_kmeans

CRITERIA = ("initial_sse", "final_sse", "iterations", "cpu_ms")
NORMALIZED_CRITERIA = ("initial_sse", "final_sse", "iterations")
STATISTICS = ("min", "mean", "stdev")


@dataclass
class RunRecord:
    dataset: str
    method: str
    seed: Optional[int]
    initial_sse: float = math.nan
    final_sse: float = math.nan
    iterations: int = 0
    cpu_ms: int = 0
    failed: bool = False
    error: str = ""

    @property
    def key(self):
        return (self.dataset, self.method, -1 if self.seed is None else self.seed)


def run_once(ds: Dataset, method: str, seed: Optional[int], cfg: KMeansConfig,
             k: Optional[int] = None, bins: int = 256, rng_algorithm: str = "mt19937") -> RunRecord:
    m = get_method(method)
    rec = RunRecord(dataset=ds.name, method=m.code, seed=seed if m.is_random else None)
    k = cluster_count(ds) if k is None else k
    rng = SeededRng(seed, rng_algorithm) if m.is_random else None
    start = time.process_time()
    try:
        centers = m(ds, k, rng, bins)
        result = run_kmeans(ds, centers, cfg)
    except KMInitError as exc:
        rec.failed = True
        rec.error = f"{type(exc).__name__}: {exc}"
        return rec
    elapsed = time.process_time() - start
    rec.initial_sse = result.initial_sse
    rec.final_sse = result.final_sse
    rec.iterations = result.iterations
    rec.cpu_ms = int(round(elapsed * 1000.0))
    return rec


_WORKER_DATA: Dict[str, Dataset] = {}


def _init_worker(datasets):
    _WORKER_DATA.clear()
    _WORKER_DATA.update({ds.name: ds for ds in datasets})


def _run_task(task):
    name, method, seed, cfg, bins, algo = task
    return run_once(_WORKER_DATA[name], method, seed, cfg, bins=bins, rng_algorithm=algo)


def run_benchmark(datasets: Sequence[Dataset], methods: Sequence[str] = METHOD_ORDER,
                  runs_random: int = 100, base_seed: int = 0,
                  cfg: KMeansConfig = KMeansConfig(), bins: int = 256,
                  rng_algorithm: str = "mt19937", jobs: int = 1, progress=None) -> List[RunRecord]:
    """Random methods run ``runs_random`` times with seeds ``base_seed + r``;
    deterministic methods run once.  Records come back sorted by
    (dataset order, method order, seed) whatever ``jobs`` is."""
    if runs_random < 1:
        raise ValueError("runs_random must be at least 1")
    methods = [get_method(m).code for m in methods]
    tasks = []
    for ds in datasets:
        for code in methods:
            seeds = ([base_seed + r for r in range(runs_random)]
                     if get_method(code).is_random else [None])
            tasks.extend((ds.name, code, s, cfg, bins, rng_algorithm) for s in seeds)

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                 initargs=(list(datasets),)) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=8))
    else:
        _init_worker(datasets)
        records = []
        for task in tasks:
            records.append(_run_task(task))
            if progress is not None:
                progress(records[-1])

    ds_rank = {ds.name: i for i, ds in enumerate(datasets)}
    m_rank = {m: i for i, m in enumerate(methods)}
    records.sort(key=lambda r: (ds_rank[r.dataset], m_rank[r.method],
                                -1 if r.seed is None else r.seed))
    return records


# --- statistics ----------------------------------------------------------

@dataclass(frozen=True)
class Summary:
    min: float
    mean: float
    stdev: float
    count: int

    def get(self, statistic: str) -> float:
        return getattr(self, statistic)


def describe(values: Iterable[float]) -> Summary:
    """Min, mean and sample standard deviation in one Welford pass."""
    n = 0
    mean = 0.0
    m2 = 0.0
    lo = math.inf
    for v in values:
        n += 1
        delta = v - mean
        mean += delta / n
        m2 += delta * (v - mean)
        lo = min(lo, v)
    if n == 0:
        return Summary(math.nan, math.nan, math.nan, 0)
    stdev = math.sqrt(m2 / (n - 1)) if n > 1 else 0.0
    return Summary(lo, mean, stdev, n)


@dataclass(frozen=True)
class MethodStats:
    dataset: str
    method: str
    is_random: bool
    criteria: Dict[str, Summary]
    failures: int = 0

    def __getitem__(self, criterion: str) -> Summary:
        return self.criteria[criterion]


def compute_stats(records: Iterable[RunRecord]) -> Dict[Tuple[str, str], MethodStats]:
    grouped: Dict[Tuple[str, str], List[RunRecord]] = {}
    for rec in records:
        grouped.setdefault((rec.dataset, rec.method), []).append(rec)
    out = {}
    for (dsname, method), recs in grouped.items():
        ok = [r for r in recs if not r.failed]
        if not ok:
            continue
        crit = {c: describe(float(getattr(r, c)) for r in ok) for c in CRITERIA}
        out[(dsname, method)] = MethodStats(dsname, method, get_method(method).is_random,
                                            crit, failures=len(recs) - len(ok))
    return out


def _datasets_of(stats) -> List[str]:
    seen = []
    for ds, _ in stats:
        if ds not in seen:
            seen.append(ds)
    return seen


def _methods_of(stats) -> List[str]:
    present = {m for _, m in stats}
    return [m for m in METHOD_ORDER if m in present]


def _ratio(value: float, best: float) -> float:
    if best == 0.0:
        return 1.0 if value == 0.0 else math.inf
    return value / best


def normalize_criteria(stats: Dict[Tuple[str, str], MethodStats]):
    """Divide each method's statistic by the best (least) one on the dataset.

    Returns ``{(dataset, criterion, statistic): {method: ratio}}``.  Standard
    deviations are normalized over random methods only, dividing by the
    least nonzero value; a zero standard deviation scores 1.
    """
    out = {}
    methods = _methods_of(stats)
    for dsname in _datasets_of(stats):
        for crit in NORMALIZED_CRITERIA:
            for stat in STATISTICS:
                vals = {}
                for m in methods:
                    st = stats.get((dsname, m))
                    if st is None or (stat == "stdev" and not st.is_random):
                        continue
                    vals[m] = st[crit].get(stat)
                if not vals:
                    continue
                if stat == "stdev":
                    nonzero = [v for v in vals.values() if v > 0]
                    if not nonzero:
                        ratios = {m: 1.0 for m in vals}
                    else:
                        best = min(nonzero)
                        ratios = {m: max(1.0, v / best) for m, v in vals.items()}
                else:
                    best = min(vals.values())
                    ratios = {m: _ratio(v, best) for m, v in vals.items()}
                out[(dsname, crit, stat)] = ratios
    return out


def summarize(normalized) -> Dict[Tuple[str, str], Dict[str, Optional[float]]]:
    """Overall score per (statistic, criterion) and method: the mean over
    datasets of normalized min/mean, the median of normalized stdev.
    Methods without a stdev entry (deterministic ones) map to ``None``."""
    methods = [m for m in METHOD_ORDER
               if any(m in ratios for ratios in normalized.values())]
    out = {}
    for stat in STATISTICS:
        for crit in NORMALIZED_CRITERIA:
            row = {}
            for m in methods:
                vals = [r[m] for (ds, c, s), r in normalized.items()
                        if c == crit and s == stat and m in r]
                if not vals:
                    row[m] = None
                elif stat == "stdev":
                    row[m] = float(statistics.median(vals))
                else:
                    row[m] = float(statistics.fmean(vals))
            out[(stat, crit)] = row
    return out


def _round_half_up(x: float) -> float:
    return math.floor(x + 0.5)


def relative_compare(stats, method_a: str, method_b: str,
                     criteria: Sequence[str] = NORMALIZED_CRITERIA, mode: str = "rounded"):
    """Count datasets where ``method_a``'s mean is worse than / same as /
    better than ``method_b``'s (lower is better for every criterion).

    ``mode="rounded"`` compares values rounded to integers, like the printed
    tables; ``mode="exact"`` compares raw values.
    """
    if mode not in ("rounded", "exact"):
        raise ValueError(f"unknown comparison mode {mode!r}")
    out = {}
    for crit in criteria:
        worse = same = better = 0
        for dsname in _datasets_of(stats):
            a, b = stats.get((dsname, method_a)), stats.get((dsname, method_b))
            if a is None or b is None:
                continue
            va, vb = a[crit].mean, b[crit].mean
            if mode == "rounded":
                va, vb = _round_half_up(va), _round_half_up(vb)
            if va > vb:
                worse += 1
            elif va == vb:
                same += 1
            else:
                better += 1
        out[crit] = (worse, same, better)
    return out


BOX_FIELDS = ("min", "q1", "median", "q3", "max", "mean")


def box_summary(values: Sequence[float]) -> Dict[str, float]:
    v = np.asarray(values, dtype=np.float64)
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    return {"min": float(v.min()), "q1": float(q1), "median": float(med),
            "q3": float(q3), "max": float(v.max()), "mean": float(v.mean())}


def boxplot_data(normalized):
    """Six-number summaries of each method's normalized values across datasets,
    one entry per (method, criterion, statistic)."""
    rows = []
    for m in METHOD_ORDER:
        for crit in NORMALIZED_CRITERIA:
            for stat in STATISTICS:
                vals = [r[m] for (ds, c, s), r in normalized.items()
                        if c == crit and s == stat and m in r]
                if vals:
                    rows.append(((m, crit, stat), box_summary(vals)))
    return rows


DEFAULT_PAIRS = (("OV", "V"), ("OP", "P"))


@dataclass
class BenchReport:
    records: List[RunRecord]
    datasets: List[str]
    methods: List[str]
    stats: Dict[Tuple[str, str], MethodStats]
    normalized: dict
    summary: dict
    relative: Dict[Tuple[str, str], dict]
    boxplots: list
    table_ids: Dict[str, Optional[int]] = field(default_factory=dict)


def build_report(records: Sequence[RunRecord], methods: Optional[Sequence[str]] = None,
                 datasets: Optional[Sequence[Dataset]] = None, mode: str = "rounded",
                 pairs=DEFAULT_PAIRS) -> BenchReport:
    stats = compute_stats(records)
    if methods is None:
        present = {r.method for r in records}
        methods = [m for m in METHOD_ORDER if m in present]
    names = []
    for r in records:
        if r.dataset not in names:
            names.append(r.dataset)
    normalized = normalize_criteria(stats)
    relative = {(a, b): relative_compare(stats, a, b, mode=mode)
                for a, b in pairs if a in methods and b in methods}
    ids = {ds.name: ds.table_id for ds in datasets} if datasets else {}
    return BenchReport(
        records=list(records), datasets=names, methods=list(methods), stats=stats,
        normalized=normalized, summary=summarize(normalized), relative=relative,
        boxplots=boxplot_data(normalized), table_ids=ids,
    )


# --- report files --------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return "--"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.6f}"
    return str(v)


def _write(path: Path, lines: Iterable[str]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def emit_report(report: BenchReport, directory) -> List[Path]:
    """Write the report into ``directory`` and return the created paths.

    Files: ``runs.jsonl`` (one record per run), ``table_<criterion>.tsv``
    (min/mean/stdev per dataset and method), ``normalized.tsv``,
    ``summary.tsv``, ``relative.tsv`` and ``boxplot.tsv``.
    """
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if not os.access(out, os.W_OK):
            raise PermissionError(f"{out} is not writable")
        return _emit(report, out)
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {out}: {exc}") from exc


def _emit(report: BenchReport, out: Path) -> List[Path]:
    written = []
    methods = report.methods

    p = out / "runs.jsonl"
    _write(p, (json.dumps(asdict(r), sort_keys=True) for r in report.records))
    written.append(p)

    for crit in CRITERIA:
        p = out / f"table_{crit}.tsv"
        lines = ["\t".join(["id", "dataset", "statistic", *methods])]
        for dsname in report.datasets:
            tid = report.table_ids.get(dsname)
            for stat in STATISTICS:
                cells = []
                for m in methods:
                    st = report.stats.get((dsname, m))
                    cells.append(_fmt(st[crit].get(stat)) if st else "--")
                lines.append("\t".join([_fmt(tid) if tid is not None else "-", dsname, stat, *cells]))
        _write(p, lines)
        written.append(p)

    p = out / "normalized.tsv"
    lines = ["\t".join(["dataset", "criterion", "statistic", *methods])]
    for (dsname, crit, stat), ratios in report.normalized.items():
        lines.append("\t".join([dsname, crit, stat, *(_fmt(ratios.get(m)) for m in methods)]))
    _write(p, lines)
    written.append(p)

    p = out / "summary.tsv"
    lines = ["\t".join(["statistic", "criterion", *methods])]
    for (stat, crit), row in report.summary.items():
        if not row:
            continue
        lines.append("\t".join([stat, crit, *(_fmt(row.get(m)) for m in methods)]))
    _write(p, lines)
    written.append(p)

    p = out / "relative.tsv"
    lines = ["\t".join(["method", "baseline", "criterion", "worse", "same", "better"])]
    for (a, b), counts in report.relative.items():
        for crit, (w, s, bt) in counts.items():
            lines.append("\t".join([a, b, crit, str(w), str(s), str(bt)]))
    _write(p, lines)
    written.append(p)

    p = out / "boxplot.tsv"
    lines = ["\t".join(["method", "criterion", "statistic", *BOX_FIELDS])]
    for (m, crit, stat), box in report.boxplots:
        lines.append("\t".join([m, crit, stat, *(_fmt(box[f]) for f in BOX_FIELDS)]))
    _write(p, lines)
    written.append(p)

    failed = [r for r in report.records if r.failed]
    p = out / "failures.tsv"
    _write(p, ["\t".join(["dataset", "method", "seed", "error"])]
           + ["\t".join([r.dataset, r.method, _fmt(r.seed), r.error]) for r in failed])
    written.append(p)
    return written
