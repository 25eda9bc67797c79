"""Synthetic clustered corpora with queries and judgments, for benchmarks.

Each document is assigned one topic; its tokens are drawn from that topic's
Zipf-weighted private vocabulary with probability topic_mix, otherwise from
a shared background vocabulary. Topic vocabularies are disjoint, so a
topic's top terms make a natural query and topic membership supplies the
relevance judgments. Everything is a pure function of the seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class SynthConfig:
    docs: int = 2000
    topics: int = 25
    topic_terms: int = 60
    background_terms: int = 1200
    doc_len_mean: float = 150.0
    topic_mix: float = 0.65
    query_len: int = 3
    seed: int = 7

    def __post_init__(self):
        if self.docs < self.topics or self.topics < 1:
            raise ConfigError("need docs >= topics >= 1")
        if not 0.0 < self.topic_mix < 1.0:
            raise ConfigError("topic_mix must lie in (0, 1)")
        if self.query_len < 1 or self.query_len > self.topic_terms:
            raise ConfigError("query_len must lie in [1, topic_terms]")


def _zipf(n: int, s: float = 1.1) -> np.ndarray:
    w = np.arange(1, n + 1, dtype=np.float64) ** -s
    return w / w.sum()


def generate(
    cfg: SynthConfig,
) -> tuple[list[tuple[str, str]], list[tuple[str, str]], dict[str, dict[str, int]]]:
    """Return (documents, topics, qrels).

    documents are (docno, text); topics are (qid, query text); qrels marks
    every document of the query's topic relevant with grade 1.
    """
    rng = np.random.default_rng(cfg.seed)
    topic_vocab = [
        [f"t{k:02d}x{j:03d}" for j in range(cfg.topic_terms)] for k in range(cfg.topics)
    ]
    bg_vocab = [f"b{j:04d}" for j in range(cfg.background_terms)]
    p_topic = _zipf(cfg.topic_terms)
    p_bg = _zipf(cfg.background_terms)

    docs: list[tuple[str, str]] = []
    members: dict[int, list[str]] = {k: [] for k in range(cfg.topics)}
    for i in range(cfg.docs):
        topic = i % cfg.topics
        docno = f"SYN-{i:05d}"
        members[topic].append(docno)
        length = max(20, int(rng.poisson(cfg.doc_len_mean)))
        topical = rng.random(length) < cfg.topic_mix
        n_topical = int(topical.sum())
        t_draw = rng.choice(cfg.topic_terms, size=n_topical, p=p_topic)
        b_draw = rng.choice(cfg.background_terms, size=length - n_topical, p=p_bg)
        tokens = np.empty(length, dtype=object)
        tokens[topical] = [topic_vocab[topic][j] for j in t_draw]
        tokens[~topical] = [bg_vocab[j] for j in b_draw]
        docs.append((docno, " ".join(tokens)))

    topics: list[tuple[str, str]] = []
    qrels: dict[str, dict[str, int]] = {}
    for k in range(cfg.topics):
        qid = str(101 + k)
        topics.append((qid, " ".join(topic_vocab[k][: cfg.query_len])))
        qrels[qid] = {docno: 1 for docno in members[k]}
    return docs, topics, qrels


def write_corpus_tsv(docs: list[tuple[str, str]]) -> str:
    return "".join(f"{docno}\t{text}\n" for docno, text in docs)


def write_topics_tsv(topics: list[tuple[str, str]]) -> str:
    return "".join(f"{qid}\t{text}\n" for qid, text in topics)


def write_qrels(qrels: dict[str, dict[str, int]]) -> str:
    lines = []
    for qid in sorted(qrels):
        for docno in sorted(qrels[qid]):
            lines.append(f"{qid} 0 {docno} {qrels[qid][docno]}")
    return "".join(line + "\n" for line in lines)
