"""The four retrieval systems behind one entry point, with exact op counting.

run_query drives the two-step pipeline: estimate and prune a relevance
model from feedback documents, then rank documents against it. The "lm"
system skips expansion and ranks by query likelihood alone. "rm" ranks the
whole collection, "rrm" only hashing candidates (home buckets), "mp-rrm"
candidates from home plus probed neighbor buckets.

Scoring in kl_rank is negative cross-entropy, sum_w P(w|Q) log p(w|D).
The dropped relevance-model entropy term is constant per query, so the
ordering equals ordering by ascending KL divergence. The background part
of every document's score is computed analytically and only matching
(term, doc) postings entries add corrections; the counter counts exactly
those entries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import re
import time
from typing import Sequence
import warnings

import numpy as np

from .errors import ConfigError
from .index import InvertedIndex
from .lm import CollectionModel, SmoothingConfig, ql_scores
from .lsh import LshConfig, LshIndex, candidates
from .relevance import RelevanceModel, estimate_rm, prune, rm_vector

RankedList = list[tuple[str, float]]

_SYSTEMS = ("lm", "rm", "rrm", "mp-rrm")
_LABEL_NAMES = {"lm": "LM", "rm": "RM-baseline", "rrm": "RRM", "mp-rrm": "MP-RRM"}
_NAME_SYSTEMS = {name: system for system, name in _LABEL_NAMES.items()}
_LABEL_RE = re.compile(r"^(LM|RM-baseline|RRM|MP-RRM)\s?(?:\((\d+(?:,\d+)*)\))?$")


@dataclass
class OpCounter:
    """Scored postings entries and candidate-set size, with per-query detail."""

    postings_ops: int = 0
    candidate_size: int = 0
    per_query: dict[str, "OpCounter"] = field(default_factory=dict)

    def bump(self, entries: int) -> None:
        self.postings_ops += int(entries)

    def absorb(self, qid: str, other: "OpCounter") -> None:
        self.postings_ops += other.postings_ops
        self.candidate_size += other.candidate_size
        self.per_query[qid] = other


@dataclass(frozen=True)
class PipelineConfig:
    system: str = "rm"
    terms: int = 200
    fb_docs: int = 50
    lsh: LshConfig | None = None
    fb_smoothing: SmoothingConfig = SmoothingConfig("jm", lam=0.5)
    rank_smoothing: SmoothingConfig = SmoothingConfig("dirichlet", mu=1000.0)
    depth: int = 1000

    def __post_init__(self):
        if self.system not in _SYSTEMS:
            raise ConfigError(f"unknown system: {self.system!r}")
        if self.terms < 1:
            raise ConfigError(f"terms must be >= 1, got {self.terms}")
        if self.fb_docs < 1:
            raise ConfigError(f"fb_docs must be >= 1, got {self.fb_docs}")
        if self.depth < 1:
            raise ConfigError(f"depth must be >= 1, got {self.depth}")
        needs_lsh = self.system in ("rrm", "mp-rrm")
        if needs_lsh and self.lsh is None:
            raise ConfigError(f"system {self.system} requires an lsh config")
        if not needs_lsh and self.lsh is not None:
            raise ConfigError(f"system {self.system} does not take an lsh config")
        if self.system == "rrm" and self.lsh.probes != 0:
            raise ConfigError("rrm probes its home bucket only (probes must be 0)")

    def label(self) -> str:
        """Display label, e.g. `RM-baseline (200)` or `MP-RRM (200,9,18,4)`."""
        name = _LABEL_NAMES[self.system]
        if self.system == "lm":
            return name
        if self.system == "rm":
            return f"{name} ({self.terms})"
        if self.system == "rrm":
            return f"{name} ({self.terms},{self.lsh.bits},{self.lsh.tables})"
        return (
            f"{name} ({self.terms},{self.lsh.bits},{self.lsh.tables},{self.lsh.probes})"
        )

    def tag(self) -> str:
        """Run-file tag: the label without spaces (run files are whitespace-split)."""
        return self.label().replace(" ", "")


def parse_label(text: str) -> dict:
    """Invert label()/tag() into {system, terms, bits, tables, probes}."""
    m = _LABEL_RE.match(text.strip())
    if not m:
        raise ConfigError(f"unparseable label: {text!r}")
    system = _NAME_SYSTEMS[m.group(1)]
    nums = [int(x) for x in m.group(2).split(",")] if m.group(2) else []
    arity = {"lm": 0, "rm": 1, "rrm": 3, "mp-rrm": 4}[system]
    if len(nums) != arity:
        raise ConfigError(f"label {text!r} needs {arity} numbers, got {len(nums)}")
    out = {"system": system, "terms": None, "bits": None, "tables": None, "probes": None}
    keys = ("terms", "bits", "tables", "probes")
    for key, value in zip(keys, nums):
        out[key] = value
    return out


def kl_rank(
    rm: RelevanceModel,
    scope: np.ndarray | None,
    index: InvertedIndex,
    smoothing: SmoothingConfig,
    collection: CollectionModel | None = None,
    counter: OpCounter | None = None,
    depth: int | None = None,
) -> RankedList:
    """Rank the documents in scope against an expanded query.

    scope is an ascending doc_id array, or None for the whole collection.
    Every scoped document gets the analytic background score even when it
    matches no query term, so scope size alone decides inclusion.
    """
    if scope is None:
        scope = np.arange(index.nd, dtype=np.int64)
    else:
        scope = np.asarray(scope, dtype=np.int64)
    if scope.size == 0:
        raise ValueError("no candidates")
    if collection is None:
        collection = CollectionModel.from_index(index)
    pc = collection.p[rm.term_ids]
    dl = index.doc_lengths
    if smoothing.kind == "jm":
        lam = smoothing.lam
        if not lam < 1.0:
            raise ConfigError("postings-driven scoring requires jm lambda < 1")
        base = float(np.add.reduce(rm.weights * np.log((1.0 - lam) * pc)))
        scores = np.full(scope.size, base)
    else:
        mu = smoothing.mu
        total_weight = float(np.add.reduce(rm.weights))
        base = float(np.add.reduce(rm.weights * np.log(mu * pc)))
        scores = base - total_weight * np.log(dl[scope] + mu)
    matched = 0
    last = scope.size - 1
    for j in range(rm.term_ids.size):
        dids, cnts = index.postings(int(rm.term_ids[j]))
        if dids.size == 0:
            continue
        pos = np.searchsorted(scope, dids)
        pos_c = np.minimum(pos, last)
        hit = scope[pos_c] == dids
        if not np.any(hit):
            continue
        at = pos_c[hit]
        tf = cnts[hit]
        pw = float(rm.weights[j])
        pcw = float(pc[j])
        if smoothing.kind == "jm":
            bg = (1.0 - smoothing.lam) * pcw
            delta = np.log(smoothing.lam * tf / dl[dids[hit]] + bg) - np.log(bg)
        else:
            floor = smoothing.mu * pcw
            delta = np.log(tf + floor) - np.log(floor)
        scores[at] += pw * delta
        matched += int(at.size)
    if counter is not None:
        counter.bump(matched)
        counter.candidate_size = int(scope.size)
    return _order(scores, scope, index, depth)


def _order(
    scores: np.ndarray, scope: np.ndarray, index: InvertedIndex, depth: int | None
) -> RankedList:
    # descending score, ties by ascending docno
    order = np.lexsort((index.docno_rank[scope], -scores))
    if depth is not None:
        order = order[:depth]
    return [(index.docnos[scope[i]], float(scores[i])) for i in order]


def run_query(
    q: Sequence[int],
    config: PipelineConfig,
    index: InvertedIndex,
    lsh: LshIndex | None = None,
    collection: CollectionModel | None = None,
) -> tuple[RankedList, OpCounter, float]:
    """Run one query end to end; wall clock covers estimation and ranking."""
    needs_lsh = config.system in ("rrm", "mp-rrm")
    if needs_lsh and lsh is None:
        raise ConfigError(f"system {config.system} requires a built LSH index")
    if not needs_lsh and lsh is not None:
        raise ConfigError(f"system {config.system} does not take an LSH index")
    if collection is None:
        collection = CollectionModel.from_index(index)
    counter = OpCounter()
    start = time.perf_counter()
    if config.system == "lm":
        scores, ops = ql_scores(q, index, config.rank_smoothing, collection)
        counter.bump(ops)
        counter.candidate_size = index.nd
        ranked = _order(scores, np.arange(index.nd, dtype=np.int64), index, config.depth)
        return ranked, counter, time.perf_counter() - start
    rm = prune(
        estimate_rm(q, index, config.fb_smoothing, config.fb_docs, collection),
        config.terms,
    )
    if config.system == "rm":
        scope = np.arange(index.nd, dtype=np.int64)
    else:
        scope = candidates(rm_vector(rm), lsh, config.lsh)
        if scope.size == 0:
            warnings.warn(f"empty candidate set for query {list(q)!r}")
            counter.candidate_size = 0
            return [], counter, time.perf_counter() - start
    ranked = kl_rank(rm, scope, index, config.rank_smoothing, collection, counter, config.depth)
    return ranked, counter, time.perf_counter() - start


def complexity_estimate(qs: float, nd: float, ds: float, vs: float) -> float:
    """Expected scored entries per query: qs * nd * ds / vs."""
    for name, value in (("qs", qs), ("nd", nd), ("ds", ds), ("vs", vs)):
        if value <= 0:
            raise ConfigError(f"{name} must be positive, got {value}")
    return qs * nd * ds / vs


def format_run(results: Sequence[tuple[str, RankedList]], tag: str) -> str:
    """TREC run lines `qid Q0 docno rank score tag`, rank from 1, score %.6f."""
    lines = []
    for qid, ranked in results:
        for rank, (docno, score) in enumerate(ranked, 1):
            lines.append(f"{qid} Q0 {docno} {rank} {score:.6f} {tag}")
    return "".join(line + "\n" for line in lines)


EFFICIENCY_COLUMNS = (
    "qid",
    "system",
    "terms",
    "bits",
    "tables",
    "probes",
    "candidates",
    "postings_ops",
    "wall_clock_ms",
)


def efficiency_rows(
    results: Sequence[tuple[str, OpCounter, float]],
    config: PipelineConfig,
    omit_timing: bool = False,
) -> list[list[str]]:
    """One sidecar CSV row per query; timing left blank when omitted."""
    has_lsh = config.lsh is not None
    rows = []
    for qid, counter, seconds in results:
        rows.append(
            [
                qid,
                config.system,
                "" if config.system == "lm" else str(config.terms),
                str(config.lsh.bits) if has_lsh else "",
                str(config.lsh.tables) if has_lsh else "",
                str(config.lsh.probes) if has_lsh else "",
                str(counter.candidate_size),
                str(counter.postings_ops),
                "" if omit_timing else f"{seconds * 1000.0:.3f}",
            ]
        )
    return rows
