"""Smoothed unigram document models and query-likelihood scoring.

Two smoothing families cover both pipeline stages:

    jm:        p(w|D) = lam * tf/|D| + (1 - lam) * p(w|C)
    dirichlet: p(w|D) = (tf + mu * p(w|C)) / (|D| + mu)

Likelihoods accumulate in log space. The postings-driven scorer in
ql_scores splits each document score into a background part, computable
without touching the document, plus a correction for every (term, doc)
postings match, so scoring all documents costs one postings walk per
query term instead of a pass over the whole collection.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
import math
from typing import Sequence

import numpy as np

from .corpus import tokenize
from .errors import ConfigError, EmptyQueryError
from .index import Document, InvertedIndex


@dataclass(frozen=True)
class SmoothingConfig:
    """kind is "jm" (lam in (0, 1], 1.0 disables smoothing, test-only) or
    "dirichlet" (mu > 0)."""

    kind: str
    lam: float = 0.5
    mu: float = 1000.0

    def __post_init__(self):
        if self.kind not in ("jm", "dirichlet"):
            raise ConfigError(f"unknown smoothing kind: {self.kind!r}")
        if self.kind == "jm" and not 0.0 < self.lam <= 1.0:
            raise ConfigError(f"jm lambda must lie in (0, 1], got {self.lam}")
        if self.kind == "dirichlet" and not self.mu > 0.0:
            raise ConfigError(f"dirichlet mu must be positive, got {self.mu}")


@dataclass(frozen=True, eq=False)
class CollectionModel:
    """Background distribution p(w|C) = cf(w) / total_tokens."""

    p: np.ndarray

    @classmethod
    def from_index(cls, index: InvertedIndex) -> "CollectionModel":
        return cls(index.cf / index.total_tokens)


def query_ids(index: InvertedIndex, text: str) -> list[int]:
    """Tokenize a query and map to term ids, silently dropping unknown terms."""
    return [
        index.term_to_id[tok]
        for tok in tokenize(text)
        if tok in index.term_to_id
    ]


def doc_prob(
    w: int, doc: Document, smoothing: SmoothingConfig, collection: CollectionModel
) -> float:
    """Smoothed p(w|D). Out-of-vocabulary w yields 0.0; callers must skip it."""
    if w < 0 or w >= collection.p.size:
        return 0.0
    tf = doc.term_counts.get(w, 0)
    pc = float(collection.p[w])
    if smoothing.kind == "jm":
        return smoothing.lam * tf / doc.length + (1.0 - smoothing.lam) * pc
    return (tf + smoothing.mu * pc) / (doc.length + smoothing.mu)


def query_likelihood(
    q: Sequence[int],
    doc: Document,
    smoothing: SmoothingConfig,
    collection: CollectionModel,
) -> float:
    """Sum of log doc_prob over query terms (duplicates count twice)."""
    effective = [w for w in q if 0 <= w < collection.p.size]
    if not effective:
        raise EmptyQueryError("empty effective query")
    total = 0.0
    for w in effective:
        p = doc_prob(w, doc, smoothing, collection)
        total += math.log(p) if p > 0.0 else float("-inf")
    return total


def ql_scores(
    q: Sequence[int],
    index: InvertedIndex,
    smoothing: SmoothingConfig,
    collection: CollectionModel,
) -> tuple[np.ndarray, int]:
    """Query-likelihood scores for every document at once.

    Returns (scores, matched) where matched counts the (term, doc) postings
    entries that received a correction, i.e. the work actually done.
    """
    vs = index.vs
    qtf = Counter(w for w in q if 0 <= w < vs)
    if not qtf:
        raise EmptyQueryError("empty effective query")
    tids = sorted(qtf)
    mult = np.array([float(qtf[t]) for t in tids])
    pc = collection.p[np.asarray(tids, dtype=np.int64)]
    matched = 0
    if smoothing.kind == "jm":
        lam = smoothing.lam
        if not lam < 1.0:
            raise ConfigError("postings-driven scoring requires jm lambda < 1")
        base = float(np.add.reduce(mult * np.log((1.0 - lam) * pc)))
        scores = np.full(index.nd, base)
        for t, m, pcw in zip(tids, mult, pc):
            dids, cnts = index.postings(t)
            if dids.size == 0:
                continue
            bg = (1.0 - lam) * pcw
            delta = np.log(lam * cnts / index.doc_lengths[dids] + bg) - math.log(bg)
            scores[dids] += m * delta
            matched += int(dids.size)
    else:
        mu = smoothing.mu
        qlen = float(np.add.reduce(mult))
        const = float(np.add.reduce(mult * np.log(mu * pc)))
        scores = const - qlen * np.log(index.doc_lengths + mu)
        for t, m, pcw in zip(tids, mult, pc):
            dids, cnts = index.postings(t)
            if dids.size == 0:
                continue
            delta = np.log(cnts + mu * pcw) - math.log(mu * pcw)
            scores[dids] += m * delta
            matched += int(dids.size)
    return scores, matched
