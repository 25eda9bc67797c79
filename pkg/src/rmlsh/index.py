"""Inverted index construction, collection statistics, and persistence."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
import json
from pathlib import Path
import shutil
from typing import Iterable, Iterator

import numpy as np

from .corpus import tokenize
from .errors import (
    ArtifactExistsError,
    CorpusFormatError,
    DuplicateDocnoError,
    IndexFormatError,
)

_FORMAT = "rmlsh-index"
_VERSION = 1


@dataclass(frozen=True)
class CollectionStats:
    nd: int
    ds: float
    vs: int
    total_tokens: int


@dataclass(frozen=True)
class Document:
    doc_id: int
    docno: str
    term_counts: dict[int, int]
    length: int


class InvertedIndex:
    """Term-major and document-major views over one tokenized collection.

    Both views are CSR-style triples over dense ids: doc_id follows corpus
    file order, term_id follows first occurrence. Postings for a term are
    (doc_id, count) pairs sorted by doc_id. Instances are immutable after
    construction and safe to share across threads.
    """

    def __init__(
        self,
        docnos: list[str],
        terms: list[str],
        doc_indptr: np.ndarray,
        doc_term_ids: np.ndarray,
        doc_term_counts: np.ndarray,
        dropped: list[str] | None = None,
    ):
        self.docnos = list(docnos)
        self.terms = list(terms)
        self.term_to_id = {t: i for i, t in enumerate(self.terms)}
        self.doc_indptr = np.asarray(doc_indptr, dtype=np.int64)
        self.doc_term_ids = np.asarray(doc_term_ids, dtype=np.int64)
        self.doc_term_counts = np.asarray(doc_term_counts, dtype=np.int64)
        self.dropped = list(dropped or [])
        self._finalize()

    def _finalize(self) -> None:
        nd, vs = len(self.docnos), len(self.terms)
        entry_docs = np.repeat(
            np.arange(nd, dtype=np.int64), np.diff(self.doc_indptr)
        )
        self.doc_lengths = np.zeros(nd, dtype=np.int64)
        np.add.at(self.doc_lengths, entry_docs, self.doc_term_counts)
        self.total_tokens = int(self.doc_term_counts.sum())
        # term-major mirror: stable sort keeps doc_id ascending within a term
        order = np.argsort(self.doc_term_ids, kind="stable")
        self.post_doc_ids = entry_docs[order]
        self.post_counts = self.doc_term_counts[order]
        self.df = np.bincount(self.doc_term_ids, minlength=vs).astype(np.int64)
        self.post_indptr = np.zeros(vs + 1, dtype=np.int64)
        np.cumsum(self.df, out=self.post_indptr[1:])
        self.cf = np.zeros(vs, dtype=np.int64)
        np.add.at(self.cf, self.doc_term_ids, self.doc_term_counts)
        # rank of each doc's docno under plain string order, for tie-breaking
        by_docno = sorted(range(nd), key=self.docnos.__getitem__)
        self.docno_rank = np.empty(nd, dtype=np.int64)
        self.docno_rank[np.asarray(by_docno, dtype=np.int64)] = np.arange(nd)

    @property
    def nd(self) -> int:
        return len(self.docnos)

    @property
    def vs(self) -> int:
        return len(self.terms)

    @property
    def stats(self) -> CollectionStats:
        nd = self.nd
        return CollectionStats(nd, self.total_tokens / nd, self.vs, self.total_tokens)

    def postings(self, term_id: int) -> tuple[np.ndarray, np.ndarray]:
        """(doc_ids, counts) for one term, doc_ids ascending."""
        s, e = self.post_indptr[term_id], self.post_indptr[term_id + 1]
        return self.post_doc_ids[s:e], self.post_counts[s:e]

    def doc_slice(self, doc_id: int) -> tuple[np.ndarray, np.ndarray]:
        """(term_ids, counts) for one document, term_ids ascending."""
        s, e = self.doc_indptr[doc_id], self.doc_indptr[doc_id + 1]
        return self.doc_term_ids[s:e], self.doc_term_counts[s:e]

    def document(self, doc_id: int) -> Document:
        tids, cnts = self.doc_slice(doc_id)
        return Document(
            doc_id=doc_id,
            docno=self.docnos[doc_id],
            term_counts={int(t): int(c) for t, c in zip(tids, cnts)},
            length=int(self.doc_lengths[doc_id]),
        )

    def documents(self) -> Iterator[Document]:
        for doc_id in range(self.nd):
            yield self.document(doc_id)

    def save(self, out_dir: str | Path, force: bool = False) -> Path:
        """Persist to a directory of plain text files plus meta.json."""
        out = Path(out_dir)
        if out.exists():
            if not force:
                raise ArtifactExistsError(f"{out} already exists (use force to overwrite)")
            shutil.rmtree(out)
        out.mkdir(parents=True)
        meta = {
            "format": _FORMAT,
            "version": _VERSION,
            "nd": self.nd,
            "vs": self.vs,
            "total_tokens": self.total_tokens,
            "dropped": self.dropped,
        }
        (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        stats = self.stats
        (out / "stats.txt").write_text(
            f"nd = {stats.nd}\n"
            f"ds = {stats.ds!r}\n"
            f"vs = {stats.vs}\n"
            f"total_tokens = {stats.total_tokens}\n"
        )
        (out / "vocab.tsv").write_text("".join(t + "\n" for t in self.terms))
        with (out / "docs.tsv").open("w") as fh:
            for doc_id, docno in enumerate(self.docnos):
                tids, cnts = self.doc_slice(doc_id)
                pairs = " ".join(f"{t}:{c}" for t, c in zip(tids, cnts))
                fh.write(f"{docno}\t{pairs}\n")
        return out

    @classmethod
    def load(cls, in_dir: str | Path) -> "InvertedIndex":
        src = Path(in_dir)
        meta_path = src / "meta.json"
        if not meta_path.is_file():
            raise IndexFormatError(f"{src} is not an index directory (no meta.json)")
        meta = json.loads(meta_path.read_text())
        if meta.get("format") != _FORMAT or meta.get("version") != _VERSION:
            raise IndexFormatError(
                f"{src}: unsupported format {meta.get('format')!r} "
                f"version {meta.get('version')!r}"
            )
        terms = (src / "vocab.tsv").read_text().splitlines()
        docnos: list[str] = []
        indptr = [0]
        tids: list[int] = []
        cnts: list[int] = []
        for line in (src / "docs.tsv").read_text().splitlines():
            docno, _, pairs = line.partition("\t")
            docnos.append(docno)
            for pair in pairs.split():
                t, _, c = pair.partition(":")
                tids.append(int(t))
                cnts.append(int(c))
            indptr.append(len(tids))
        index = cls(
            docnos,
            terms,
            np.asarray(indptr, dtype=np.int64),
            np.asarray(tids, dtype=np.int64),
            np.asarray(cnts, dtype=np.int64),
            dropped=meta.get("dropped", []),
        )
        if index.nd != meta["nd"] or index.vs != meta["vs"] or index.total_tokens != meta["total_tokens"]:
            raise IndexFormatError(f"{src}: contents disagree with meta.json")
        return index


def build_index(
    docs: Iterable[tuple[str, str]], stopwords: Iterable[str] | None = None
) -> InvertedIndex:
    """Tokenize and index (docno, text) pairs in the order given.

    Documents that tokenize to nothing are dropped and recorded on the
    returned index. Duplicate docnos are an error, dropped ones included.
    """
    stop = frozenset(stopwords) if stopwords else None
    term_to_id: dict[str, int] = {}
    terms: list[str] = []
    docnos: list[str] = []
    seen: set[str] = set()
    indptr = [0]
    all_tids: list[int] = []
    all_cnts: list[int] = []
    dropped: list[str] = []
    for docno, text in docs:
        if docno in seen:
            raise DuplicateDocnoError(f"duplicate docno: {docno}")
        seen.add(docno)
        counts: Counter[int] = Counter()
        for tok in tokenize(text, stop):
            tid = term_to_id.get(tok)
            if tid is None:
                tid = len(terms)
                term_to_id[tok] = tid
                terms.append(tok)
            counts[tid] += 1
        if not counts:
            dropped.append(docno)
            continue
        docnos.append(docno)
        for tid in sorted(counts):
            all_tids.append(tid)
            all_cnts.append(counts[tid])
        indptr.append(len(all_tids))
    if not docnos:
        raise CorpusFormatError("no indexable documents (all tokenized to zero terms)")
    return InvertedIndex(
        docnos,
        terms,
        np.asarray(indptr, dtype=np.int64),
        np.asarray(all_tids, dtype=np.int64),
        np.asarray(all_cnts, dtype=np.int64),
        dropped=dropped,
    )
