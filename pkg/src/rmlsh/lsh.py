"""Random-hyperplane (cosine) hashing over sparse term vectors.

Hyperplane components are never stored: component (table, bit, term) is
derived on demand by chaining a 64-bit avalanche mix over the seed, table,
bit and term id, mapping the result to (0, 1), and pushing it through the
inverse normal CDF. That keeps memory flat in the vocabulary size, makes
every artifact a pure function of the seed, and lets sparse dot products
touch only the terms a vector actually has.

Bit i of a code is the sign of projection i and does not depend on the
total bit count, so codes at b+1 bits extend codes at b bits. All row sums
go through np.add.reduceat so the one-vector and whole-collection paths
produce bit-identical projections.
"""
from __future__ import annotations

from dataclasses import dataclass
import json
from pathlib import Path
import shutil
import warnings

import numpy as np
from scipy.special import ndtri

from .errors import ArtifactExistsError, ConfigError, IndexFormatError
from .index import InvertedIndex

_FORMAT = "rmlsh-lsh"
_VERSION = 1

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)

SparseVector = tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class LshConfig:
    """bits per code, number of tables, extra probes per table, seed."""

    bits: int
    tables: int
    probes: int = 0
    seed: int = 42
    weighting: str = "tf"

    def __post_init__(self):
        if not 0 <= self.bits <= 63:
            raise ConfigError(f"bits must lie in [0, 63], got {self.bits}")
        if self.tables < 1:
            raise ConfigError(f"tables must be >= 1, got {self.tables}")
        shell = (1 << self.bits) - 1
        if not 0 <= self.probes <= shell:
            raise ConfigError(
                f"probes must lie in [0, {shell}] for {self.bits} bits, got {self.probes}"
            )
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit value, got {self.seed}")
        if self.weighting not in ("tf", "tfidf"):
            raise ConfigError(f"unknown weighting: {self.weighting!r}")


def _mix(x):
    # splitmix64 finalizer; unsigned wraparound is intentional
    with np.errstate(over="ignore"):
        x = x + _GAMMA
        x = (x ^ (x >> np.uint64(30))) * _MIX1
        x = (x ^ (x >> np.uint64(27))) * _MIX2
        return x ^ (x >> np.uint64(31))


@dataclass(frozen=True)
class HyperplaneFamily:
    """Seeded derivation rule (table, bit, term) -> standard normal component."""

    seed: int

    def _bit_key(self, table: int, bit: int) -> np.uint64:
        h = _mix(np.uint64(self.seed))
        h = _mix(h ^ np.uint64(table))
        return _mix(h ^ np.uint64(bit))

    def components(self, table: int, bit: int, term_ids: np.ndarray) -> np.ndarray:
        key = self._bit_key(table, bit)
        h = _mix(key ^ term_ids.astype(np.uint64))
        u = ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
        return ndtri(u)

    def projections(self, vec: SparseVector, table: int, bits: int) -> np.ndarray:
        """z_i = sum_w v[w] * r[table, i, w] for i in range(bits)."""
        ids, vals = vec
        ids = np.asarray(ids, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        head = np.array([0], dtype=np.int64)
        z = np.empty(bits)
        for i in range(bits):
            prod = self.components(table, i, ids) * vals
            z[i] = np.add.reduceat(prod, head)[0] if prod.size else 0.0
        return z

    def batch_codes(
        self,
        indptr: np.ndarray,
        term_ids: np.ndarray,
        values: np.ndarray,
        table: int,
        bits: int,
    ) -> np.ndarray:
        """Codes for every row of a CSR block (rows must be non-empty)."""
        n = indptr.size - 1
        codes = np.zeros(n, dtype=np.uint64)
        if bits == 0 or n == 0:
            return codes
        starts = indptr[:-1]
        for i in range(bits):
            prod = self.components(table, i, term_ids) * values
            z = np.add.reduceat(prod, starts)
            with np.errstate(over="ignore"):
                codes |= (z >= 0.0).astype(np.uint64) << np.uint64(i)
        return codes


def _code_from_projections(z: np.ndarray) -> int:
    code = 0
    for i in range(z.size):
        if z[i] >= 0.0:
            code |= 1 << i
    return code


def _check_vector(vec: SparseVector) -> SparseVector:
    ids, vals = vec
    ids = np.asarray(ids, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if ids.size == 0 or not np.any(vals):
        raise ValueError("unhashable zero vector")
    return ids, vals


def signature(vec: SparseVector, table: int, config: LshConfig) -> int:
    """b-bit hash code of a sparse vector under one table's hyperplanes."""
    vec = _check_vector(vec)
    if config.bits == 0:
        return 0
    fam = HyperplaneFamily(config.seed)
    return _code_from_projections(fam.projections(vec, table, config.bits))


def flip_order(z: np.ndarray) -> np.ndarray:
    """Bit indices by ascending |z| (least confident first), ties by index."""
    return np.lexsort((np.arange(z.size), np.abs(z)))


def probe_plan(vec: SparseVector, table: int, config: LshConfig) -> list[int]:
    """Home code plus the first `probes` single-bit flips, least-confident bit
    first; all entries distinct and at hamming distance exactly 1 from home."""
    vec = _check_vector(vec)
    if config.bits == 0:
        return [0]
    fam = HyperplaneFamily(config.seed)
    z = fam.projections(vec, table, config.bits)
    home = _code_from_projections(z)
    flips = flip_order(z)[: config.probes]
    return [home] + [home ^ (1 << int(i)) for i in flips]


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


def _idf(index: InvertedIndex) -> np.ndarray:
    # strictly positive so no document can lose all its components
    return np.log((1.0 + index.nd) / (1.0 + index.df)) + 1.0


def doc_vector(
    index: InvertedIndex, doc_id: int, weighting: str = "tf"
) -> SparseVector:
    """L2-normalized sparse vector of one document (tf or tf-idf weighted)."""
    tids, cnts = index.doc_slice(doc_id)
    vals = cnts / index.doc_lengths[doc_id]
    if weighting == "tfidf":
        vals = vals * _idf(index)[tids]
    elif weighting != "tf":
        raise ConfigError(f"unknown weighting: {weighting!r}")
    norm2 = np.add.reduceat(vals * vals, np.array([0], dtype=np.int64))[0]
    return tids, vals * (1.0 / np.sqrt(norm2))


class LshIndex:
    """L independent hash tables mapping code -> ascending doc_id bucket."""

    def __init__(self, config: LshConfig, tables: list[dict[int, np.ndarray]], nd: int):
        self.config = config
        self.tables = tables
        self.nd = nd

    def bucket(self, table: int, code: int) -> np.ndarray:
        return self.tables[table].get(code, _EMPTY_BUCKET)

    def bucket_sizes(self, table: int) -> np.ndarray:
        sizes = [b.size for _, b in sorted(self.tables[table].items())]
        return np.asarray(sizes, dtype=np.int64)

    def save(self, out_dir: str | Path, force: bool = False) -> Path:
        out = Path(out_dir)
        if out.exists():
            if not force:
                raise ArtifactExistsError(f"{out} already exists (use force to overwrite)")
            shutil.rmtree(out)
        out.mkdir(parents=True)
        cfg = self.config
        meta = {
            "format": _FORMAT,
            "version": _VERSION,
            "bits": cfg.bits,
            "tables": cfg.tables,
            "probes": cfg.probes,
            "seed": cfg.seed,
            "weighting": cfg.weighting,
            "nd": self.nd,
        }
        (out / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        with (out / "buckets.tsv").open("w") as fh:
            for t, table in enumerate(self.tables):
                for code in sorted(table):
                    docs = ",".join(str(d) for d in table[code])
                    fh.write(f"{t}\t{code}\t{docs}\n")
        return out

    @classmethod
    def load(cls, in_dir: str | Path) -> "LshIndex":
        src = Path(in_dir)
        meta_path = src / "meta.json"
        if not meta_path.is_file():
            raise IndexFormatError(f"{src} is not an LSH directory (no meta.json)")
        meta = json.loads(meta_path.read_text())
        if meta.get("format") != _FORMAT or meta.get("version") != _VERSION:
            raise IndexFormatError(
                f"{src}: unsupported format {meta.get('format')!r} "
                f"version {meta.get('version')!r}"
            )
        config = LshConfig(
            bits=meta["bits"],
            tables=meta["tables"],
            probes=meta["probes"],
            seed=meta["seed"],
            weighting=meta["weighting"],
        )
        tables: list[dict[int, np.ndarray]] = [{} for _ in range(config.tables)]
        for line in (src / "buckets.tsv").read_text().splitlines():
            t, code, docs = line.split("\t")
            bucket = np.asarray([int(d) for d in docs.split(",")], dtype=np.int64)
            tables[int(t)][int(code)] = bucket
        return cls(config, tables, meta["nd"])


_EMPTY_BUCKET = np.empty(0, dtype=np.int64)


def build_lsh(index: InvertedIndex, config: LshConfig) -> LshIndex:
    """Hash every document into one bucket per table.

    Vector values are built exactly as doc_vector builds them, so bucket
    membership can be cross-checked per document against signature().
    """
    fam = HyperplaneFamily(config.seed)
    indptr = index.doc_indptr
    tids = index.doc_term_ids
    row_lens = np.diff(indptr)
    vals = index.doc_term_counts / np.repeat(index.doc_lengths, row_lens)
    if config.weighting == "tfidf":
        vals = vals * _idf(index)[tids]
    norm2 = np.add.reduceat(vals * vals, indptr[:-1])
    hashable = norm2 > 0.0
    if not np.all(hashable):
        skipped = [index.docnos[d] for d in np.nonzero(~hashable)[0]]
        warnings.warn(f"skipping {len(skipped)} zero-vector documents: {skipped[:5]}")
        norm2 = np.where(hashable, norm2, 1.0)
    vals = vals * np.repeat(1.0 / np.sqrt(norm2), row_lens)
    keep = np.nonzero(hashable)[0]
    tables: list[dict[int, np.ndarray]] = []
    for t in range(config.tables):
        codes = fam.batch_codes(indptr, tids, vals, t, config.bits)[keep]
        # stable sort keeps doc ids ascending within each bucket
        order = np.argsort(codes, kind="stable")
        sorted_codes = codes[order]
        sorted_docs = keep[order]
        cuts = np.nonzero(np.diff(sorted_codes))[0] + 1
        starts = np.concatenate(([0], cuts)) if sorted_codes.size else []
        table: dict[int, np.ndarray] = {}
        for docs_chunk, start in zip(np.split(sorted_docs, cuts), starts):
            table[int(sorted_codes[start])] = docs_chunk
        tables.append(table)
    return LshIndex(config, tables, index.nd)


def candidates(
    vec: SparseVector, lsh: LshIndex, config: LshConfig | None = None
) -> np.ndarray:
    """Deduplicated ascending doc ids from every probed bucket of every table.

    A config override may lower tables or change probes; bits, seed and
    weighting must match the artifact.
    """
    cfg = config if config is not None else lsh.config
    built = lsh.config
    if (cfg.bits, cfg.seed, cfg.weighting) != (built.bits, built.seed, built.weighting):
        raise ConfigError(
            f"config (bits={cfg.bits}, seed={cfg.seed}, weighting={cfg.weighting}) "
            f"does not match the built artifact (bits={built.bits}, "
            f"seed={built.seed}, weighting={built.weighting})"
        )
    if cfg.tables > built.tables:
        raise ConfigError(f"artifact has {built.tables} tables, {cfg.tables} requested")
    parts = []
    for t in range(cfg.tables):
        for code in probe_plan(vec, t, cfg):
            bucket = lsh.bucket(t, code)
            if bucket.size:
                parts.append(bucket)
    if not parts:
        return _EMPTY_BUCKET
    return np.unique(np.concatenate(parts))
