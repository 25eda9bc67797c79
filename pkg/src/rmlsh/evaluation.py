"""Effectiveness and efficiency measurement over ranked runs.

Covers the headline metric (precision at rank 5), the 11-point interpolated
recall-precision curve, paired significance testing, wall-clock averaging,
percentage deltas against a baseline, and the configuration sweep that
produces effectiveness-vs-operations trade-off tables.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
from pathlib import Path
import time
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import stats as _scipy_stats

from .errors import ConfigError, UnjudgedQueryError, ZeroVarianceError
from .index import InvertedIndex
from .lm import CollectionModel, query_ids
from .lsh import LshIndex, build_lsh
from .retrieval import OpCounter, PipelineConfig, RankedList, run_query

Qrels = dict[str, dict[str, int]]

RECALL_POINTS = np.linspace(0.0, 1.0, 11)


def load_qrels(path: str | Path) -> Qrels:
    """Parse `qid 0 docno grade` lines; duplicate (qid, docno) pairs error."""
    qrels: Qrels = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ConfigError(f"{path}:{lineno}: expected `qid 0 docno grade`")
        qid, _, docno, grade = parts
        per_q = qrels.setdefault(qid, {})
        if docno in per_q:
            raise ConfigError(f"{path}:{lineno}: duplicate judgment ({qid}, {docno})")
        per_q[docno] = int(grade)
    return qrels


def load_topics(path: str | Path) -> list[tuple[str, str]]:
    """Parse `qid<TAB>query text` lines in file order."""
    topics = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise ConfigError(f"{path}:{lineno}: expected qid<TAB>query text")
        qid, text = line.split("\t", 1)
        topics.append((qid.strip(), text))
    return topics


def precision_at_5(ranked: RankedList, qrels: Qrels, qid: str) -> float:
    """|relevant among top 5| / 5; short lists pad with non-relevant."""
    if qid not in qrels:
        raise UnjudgedQueryError(f"unjudged query: {qid}")
    judged = qrels[qid]
    hits = sum(1 for docno, _ in ranked[:5] if judged.get(docno, 0) > 0)
    return hits / 5.0


def interpolated_rp(ranked: RankedList, qrels: Qrels, qid: str) -> np.ndarray:
    """11-point interpolation: P(r) = max precision at any recall >= r."""
    if qid not in qrels:
        raise UnjudgedQueryError(f"unjudged query: {qid}")
    judged = qrels[qid]
    n_rel = sum(1 for grade in judged.values() if grade > 0)
    if n_rel == 0:
        raise ConfigError(f"query {qid} has no relevant documents")
    recalls = []
    precisions = []
    found = 0
    for rank, (docno, _) in enumerate(ranked, 1):
        if judged.get(docno, 0) > 0:
            found += 1
            recalls.append(found / n_rel)
            precisions.append(found / rank)
    out = np.zeros(11)
    for i, r in enumerate(RECALL_POINTS):
        best = 0.0
        for rec, prec in zip(recalls, precisions):
            if rec >= r - 1e-12 and prec > best:
                best = prec
        out[i] = best
    return out


def paired_ttest(a: Sequence[float], b: Sequence[float]) -> tuple[float, float]:
    """Two-tailed paired Student t on per-query differences.

    The statistic is computed here; only the t CDF comes from scipy.
    """
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.size != y.size or x.size < 2:
        raise ConfigError("paired t-test needs two equal-length samples, n >= 2")
    d = x - y
    n = d.size
    sd = float(np.std(d, ddof=1))
    if sd == 0.0:
        raise ZeroVarianceError("zero variance in paired differences")
    t = float(np.mean(d)) / (sd / math.sqrt(n))
    p = 2.0 * float(_scipy_stats.t.sf(abs(t), n - 1))
    return t, p


def wall_clock(run: Callable[[], object], repetitions: int = 5) -> tuple[float, list[float]]:
    """Mean of R end-to-end timings; the raw timings are returned alongside."""
    if repetitions < 1:
        raise ConfigError(f"repetitions must be >= 1, got {repetitions}")
    raw = []
    for _ in range(repetitions):
        start = time.perf_counter()
        run()
        raw.append(time.perf_counter() - start)
    return sum(raw) / len(raw), raw


def percent_diff(x: float, base: float) -> float:
    if base == 0:
        raise ConfigError("percent_diff base must be non-zero")
    return (x - base) / base * 100.0


def format_percent(x: float) -> str:
    return f"{x:.2f}"


@dataclass
class SweepRow:
    label: str
    p_at_5: float | None
    postings_ops: int | None
    wall_clock_s: float | None
    error: str | None = None


def _ensure_lsh(
    config: PipelineConfig, index: InvertedIndex, cache: dict
) -> LshIndex | None:
    if config.lsh is None:
        return None
    key = (config.lsh.bits, config.lsh.tables, config.lsh.seed, config.lsh.weighting)
    if key not in cache:
        cache[key] = build_lsh(index, config.lsh)
    return cache[key]


def run_config(
    config: PipelineConfig,
    topics: Sequence[tuple[str, str]],
    index: InvertedIndex,
    lsh: LshIndex | None,
    collection: CollectionModel,
    jobs: int = 1,
) -> list[tuple[str, RankedList, OpCounter, float]]:
    """Evaluate every topic under one config; output order = topic order."""

    def one(topic: tuple[str, str]):
        qid, text = topic
        q = query_ids(index, text)
        ranked, counter, seconds = run_query(q, config, index, lsh, collection)
        return qid, ranked, counter, seconds

    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, topics))
    return [one(topic) for topic in topics]


def sweep(
    grid: Sequence[PipelineConfig],
    topics: Sequence[tuple[str, str]],
    qrels: Qrels,
    index: InvertedIndex,
    collection: CollectionModel | None = None,
    jobs: int = 1,
) -> list[SweepRow]:
    """One row per config (mean P@5, total ops, mean seconds), ops ascending.

    A failing config becomes a row with an error marker instead of aborting
    the sweep. LSH indexes are built once per distinct build configuration.
    """
    if not grid:
        raise ConfigError("empty sweep grid")
    if collection is None:
        collection = CollectionModel.from_index(index)
    cache: dict = {}
    rows = []
    for config in grid:
        label = config.label()
        try:
            lsh = _ensure_lsh(config, index, cache)
            results = run_config(config, topics, index, lsh, collection, jobs=jobs)
            p5 = [precision_at_5(ranked, qrels, qid) for qid, ranked, _, _ in results]
            ops = sum(counter.postings_ops for _, _, counter, _ in results)
            secs = [seconds for _, _, _, seconds in results]
            rows.append(SweepRow(label, sum(p5) / len(p5), ops, sum(secs) / len(secs)))
        except Exception as exc:  # noqa: BLE001 - row-level isolation is the contract
            rows.append(SweepRow(label, None, None, None, f"{type(exc).__name__}: {exc}"))
    rows.sort(key=lambda r: (r.postings_ops is None, r.postings_ops or 0, r.label))
    return rows


def sweep_csv(rows: Sequence[SweepRow], omit_timing: bool = False) -> str:
    out = ["label,p_at_5,postings_ops,wall_clock_s,error"]
    for r in rows:
        if r.error is not None:
            out.append(f"\"{r.label}\",,,,\"{r.error}\"")
            continue
        wall = "" if omit_timing else f"{r.wall_clock_s:.6f}"
        out.append(f"\"{r.label}\",{r.p_at_5:.6f},{r.postings_ops},{wall},")
    return "".join(line + "\n" for line in out)


def pareto_frontier(rows: Iterable[SweepRow]) -> list[SweepRow]:
    """Rows not dominated in (P@5 up, ops down); skips error rows."""
    valid = [r for r in rows if r.error is None]
    frontier = []
    for r in valid:
        dominated = any(
            (o.p_at_5 >= r.p_at_5 and o.postings_ops < r.postings_ops)
            or (o.p_at_5 > r.p_at_5 and o.postings_ops <= r.postings_ops)
            for o in valid
        )
        if not dominated:
            frontier.append(r)
    return frontier


@dataclass
class ReportRow:
    label: str
    mean_p5: float
    p5_pct: float | None
    postings_ops: int | None
    ops_pct: float | None
    wall_s: float | None
    wall_pct: float | None
    t_p: float | None
    per_query_p5: dict[str, float]


@dataclass
class EvalReport:
    rows: list[ReportRow]
    baseline_label: str
    rp_curves: dict[str, np.ndarray]
    qids: list[str]

    def render_text(self) -> str:
        header = (
            f"{'label':<28} {'P@5':>7} {'dP@5%':>8} {'ops':>12} {'dops%':>8} "
            f"{'wall_s':>9} {'dwall%':>8} {'p':>8}"
        )
        lines = [header, "-" * len(header)]
        for r in self.rows:
            lines.append(
                f"{r.label:<28} {r.mean_p5:>7.4f} {_fmt_pct(r.p5_pct):>8} "
                f"{_fmt_int(r.postings_ops):>12} {_fmt_pct(r.ops_pct):>8} "
                f"{_fmt_float(r.wall_s):>9} {_fmt_pct(r.wall_pct):>8} "
                f"{_fmt_p(r.t_p):>8}"
            )
        lines.append("")
        lines.append(f"baseline: {self.baseline_label}; {len(self.qids)} queries")
        return "".join(line + "\n" for line in lines)

    def render_csv(self) -> str:
        out = ["label,p_at_5,p5_pct,postings_ops,ops_pct,wall_s,wall_pct,t_p"]
        for r in self.rows:
            out.append(
                f"\"{r.label}\",{r.mean_p5:.6f},{_csv_opt(r.p5_pct)},"
                f"{r.postings_ops if r.postings_ops is not None else ''},"
                f"{_csv_opt(r.ops_pct)},{_csv_opt(r.wall_s)},{_csv_opt(r.wall_pct)},"
                f"{_csv_opt(r.t_p)}"
            )
        return "".join(line + "\n" for line in out)


def _fmt_pct(x: float | None) -> str:
    return format_percent(x) if x is not None else "-"


def _fmt_int(x: int | None) -> str:
    return f"{x:,}" if x is not None else "-"


def _fmt_float(x: float | None) -> str:
    return f"{x:.4f}" if x is not None else "-"


def _fmt_p(x: float | None) -> str:
    return f"{x:.4f}" if x is not None else "-"


def _csv_opt(x: float | None) -> str:
    return f"{x:.6f}" if x is not None else ""


def evaluate_runs(
    runs: Sequence[tuple[str, dict[str, RankedList]]],
    qrels: Qrels,
    baseline: str | None = None,
    efficiency: dict[str, tuple[int | None, float | None]] | None = None,
) -> EvalReport:
    """Compare runs (label -> per-query ranking) against a baseline run.

    efficiency maps labels to (total postings_ops, mean wall seconds) pulled
    from sidecar files; either part may be missing.
    """
    if not runs:
        raise ConfigError("no runs to evaluate")
    labels = [label for label, _ in runs]
    if baseline is None:
        baseline = labels[0]
    if baseline not in labels:
        raise ConfigError(f"baseline {baseline!r} is not among the runs")
    qids = sorted(qrels)
    efficiency = efficiency or {}
    per_label_p5: dict[str, dict[str, float]] = {}
    rp_curves: dict[str, np.ndarray] = {}
    for label, by_qid in runs:
        p5 = {}
        curves = []
        for qid in qids:
            ranked = by_qid.get(qid, [])
            p5[qid] = precision_at_5(ranked, qrels, qid)
            curves.append(interpolated_rp(ranked, qrels, qid))
        per_label_p5[label] = p5
        rp_curves[label] = np.mean(np.stack(curves), axis=0)
    base_p5 = per_label_p5[baseline]
    base_mean = sum(base_p5.values()) / len(qids)
    base_ops, base_wall = efficiency.get(baseline, (None, None))
    rows = []
    for label, _ in runs:
        p5 = per_label_p5[label]
        mean_p5 = sum(p5.values()) / len(qids)
        ops, wall = efficiency.get(label, (None, None))
        if label == baseline:
            rows.append(
                ReportRow(label, mean_p5, None, ops, None, wall, None, None, p5)
            )
            continue
        t_p: float | None
        try:
            _, t_p = paired_ttest(
                [p5[q] for q in qids], [base_p5[q] for q in qids]
            )
        except ZeroVarianceError:
            t_p = None
        rows.append(
            ReportRow(
                label,
                mean_p5,
                percent_diff(mean_p5, base_mean) if base_mean else None,
                ops,
                percent_diff(ops, base_ops) if ops is not None and base_ops else None,
                wall,
                percent_diff(wall, base_wall)
                if wall is not None and base_wall
                else None,
                t_p,
                p5,
            )
        )
    return EvalReport(rows, baseline, rp_curves, qids)


def load_run(path: str | Path) -> tuple[str, dict[str, RankedList]]:
    """Read a run file back into (tag, qid -> ranked list)."""
    by_qid: dict[str, RankedList] = {}
    tag = ""
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise ConfigError(f"{path}:{lineno}: expected 6 whitespace-split fields")
        qid, _, docno, _, score, tag = parts
        by_qid.setdefault(qid, []).append((docno, float(score)))
    return tag, by_qid
