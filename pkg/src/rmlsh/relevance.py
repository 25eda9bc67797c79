"""Relevance model estimation from feedback documents, pruning, vectorizing.

The estimate is the classic mixture P(w|Q) = sum_D P(D|Q) * p(w|D) over the
top feedback documents, with P(D|Q) the softmax of the documents' query log
likelihoods (uniform prior). Support is restricted to terms that occur in
the feedback documents and the result is renormalized, so weights always
sum to one.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Iterator, Sequence

import numpy as np

from .errors import ConfigError, EmptyFeedbackError, EmptyQueryError
from .index import InvertedIndex
from .lm import CollectionModel, SmoothingConfig, ql_scores


@dataclass(frozen=True, eq=False)
class RelevanceModel:
    """Term weights sorted by (weight desc, term_id asc); weights sum to 1."""

    term_ids: np.ndarray
    weights: np.ndarray
    source_query: tuple[int, ...]
    fb_docs: int

    @property
    def t(self) -> int:
        return int(self.term_ids.size)

    def items(self) -> Iterator[tuple[int, float]]:
        for tid, w in zip(self.term_ids, self.weights):
            yield int(tid), float(w)

    def as_dict(self) -> dict[int, float]:
        return dict(self.items())


def estimate_rm(
    q: Sequence[int],
    index: InvertedIndex,
    smoothing: SmoothingConfig,
    fb_docs: int,
    collection: CollectionModel | None = None,
) -> RelevanceModel:
    """Unpruned relevance model from the top fb_docs feedback documents."""
    if fb_docs < 1:
        raise ConfigError(f"fb_docs must be >= 1, got {fb_docs}")
    if collection is None:
        collection = CollectionModel.from_index(index)
    try:
        scores, _ = ql_scores(q, index, smoothing, collection)
    except EmptyQueryError as exc:
        # a query with no usable terms retrieves nothing
        raise EmptyFeedbackError("empty feedback set") from exc
    # same ordering rule as ranked output: score desc, docno asc
    order = np.lexsort((index.docno_rank, -scores))
    top = order[: min(fb_docs, order.size)]
    if top.size == 0:
        raise EmptyFeedbackError("empty feedback set")
    ll = scores[top]
    p_doc = np.exp(ll - ll.max())
    p_doc /= np.add.reduce(p_doc)

    acc = np.zeros(index.vs)
    support = np.zeros(index.vs, dtype=bool)
    if smoothing.kind == "jm":
        lam = smoothing.lam
        for d, pd in zip(top, p_doc):
            tids, cnts = index.doc_slice(int(d))
            support[tids] = True
            acc[tids] += pd * lam * (cnts / index.doc_lengths[d])
        sup = np.nonzero(support)[0]
        weights = acc[sup] + (1.0 - lam) * collection.p[sup]
    else:
        mu = smoothing.mu
        bg_mass = 0.0
        for d, pd in zip(top, p_doc):
            tids, cnts = index.doc_slice(int(d))
            support[tids] = True
            denom = index.doc_lengths[d] + mu
            acc[tids] += pd * (cnts / denom)
            bg_mass += pd / denom
        sup = np.nonzero(support)[0]
        weights = acc[sup] + mu * collection.p[sup] * bg_mass
    weights /= np.add.reduce(weights)
    order = np.lexsort((sup, -weights))
    return RelevanceModel(sup[order], weights[order], tuple(int(w) for w in q), int(top.size))


def prune(rm: RelevanceModel, t: int) -> RelevanceModel:
    """Keep the t heaviest terms (ties already broken by term id), renormalize."""
    if t < 1:
        raise ConfigError(f"t must be >= 1, got {t}")
    k = min(t, rm.term_ids.size)
    ids = rm.term_ids[:k]
    w = rm.weights[:k]
    return RelevanceModel(ids, w / np.add.reduce(w), rm.source_query, rm.fb_docs)


def rm_vector(rm: RelevanceModel) -> tuple[np.ndarray, np.ndarray]:
    """Sparse unit vector (term_ids ascending, L2-normalized weights)."""
    order = np.argsort(rm.term_ids)
    ids = rm.term_ids[order]
    v = rm.weights[order]
    norm = math.sqrt(np.add.reduce(v * v))
    return ids, v * (1.0 / norm)


def rm_tsv(rm: RelevanceModel, index: InvertedIndex, head: int | None = None) -> str:
    """Dump as `term<TAB>weight` lines, heaviest first."""
    n = rm.t if head is None else min(head, rm.t)
    return "".join(
        f"{index.terms[int(rm.term_ids[i])]}\t{rm.weights[i]:.8g}\n" for i in range(n)
    )
