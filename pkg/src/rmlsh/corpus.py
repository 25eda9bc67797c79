"""Parsing of TREC-style SGML and TSV corpus files, plus tokenization."""
from __future__ import annotations

import gzip
from pathlib import Path
import re
from typing import IO, Iterable, Iterator

from .errors import CorpusFormatError

_TOKEN = re.compile(r"[a-z0-9]+")
_GZIP_MAGIC = b"\x1f\x8b"


def tokenize(text: str, stopwords: Iterable[str] | None = None) -> list[str]:
    """Lowercase and split on non-alphanumeric runs; optionally drop stopwords."""
    tokens = _TOKEN.findall(text.lower())
    if stopwords:
        stop = frozenset(stopwords)
        return [t for t in tokens if t not in stop]
    return tokens


def parse_trec(stream: bytes | IO[bytes]) -> Iterator[tuple[str, str]]:
    """Yield (docno, text) per <DOC> element of a TREC SGML byte stream.

    The docno is whitespace-trimmed and the text is the concatenation of all
    <TEXT> bodies in the element. Errors report absolute byte offsets.
    """
    data = stream if isinstance(stream, bytes) else stream.read()
    pos = 0
    while True:
        start = data.find(b"<DOC>", pos)
        if start < 0:
            return
        end = data.find(b"</DOC>", start + 5)
        if end < 0:
            raise CorpusFormatError(f"unclosed <DOC> at byte offset {start}")
        nested = data.find(b"<DOC>", start + 5, end)
        if nested >= 0:
            raise CorpusFormatError(f"nested <DOC> at byte offset {nested}")
        no_open = data.find(b"<DOCNO>", start, end)
        if no_open < 0:
            raise CorpusFormatError(f"<DOC> at byte offset {start} has no <DOCNO>")
        no_close = data.find(b"</DOCNO>", no_open, end)
        if no_close < 0:
            raise CorpusFormatError(f"unclosed <DOCNO> at byte offset {no_open}")
        docno = data[no_open + 7 : no_close].decode("utf-8", "replace").strip()
        if not docno:
            raise CorpusFormatError(f"empty <DOCNO> at byte offset {no_open}")
        texts = []
        tpos = start
        while True:
            t_open = data.find(b"<TEXT>", tpos, end)
            if t_open < 0:
                break
            t_close = data.find(b"</TEXT>", t_open, end)
            if t_close < 0:
                raise CorpusFormatError(f"unclosed <TEXT> at byte offset {t_open}")
            texts.append(data[t_open + 6 : t_close].decode("utf-8", "replace"))
            tpos = t_close + 7
        yield docno, "\n".join(texts)
        pos = end + 6


def parse_tsv(data: bytes, name: str = "<tsv>") -> Iterator[tuple[str, str]]:
    """Yield (docno, text) from `docno<TAB>text` lines; blank lines skipped."""
    text = data.decode("utf-8", "replace")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if "\t" not in line:
            raise CorpusFormatError(f"{name}:{lineno}: expected docno<TAB>text")
        docno, body = line.split("\t", 1)
        docno = docno.strip()
        if not docno:
            raise CorpusFormatError(f"{name}:{lineno}: empty docno")
        yield docno, body


def read_corpus_file(path: str | Path) -> list[tuple[str, str]]:
    """Read one corpus file, sniffing gzip by magic bytes and SGML by markup."""
    raw = Path(path).read_bytes()
    if raw[:2] == _GZIP_MAGIC:
        raw = gzip.decompress(raw)
    if raw.lstrip()[:1] == b"<":
        return list(parse_trec(raw))
    return list(parse_tsv(raw, name=str(path)))


def read_corpus(paths: Iterable[str | Path]) -> Iterator[tuple[str, str]]:
    """Chain documents from several corpus files in the order given."""
    for path in paths:
        yield from read_corpus_file(path)
