"""Command-line surface: index, hash, search, evaluate, sweep, synth, inspect.

Every flag has a config-file twin: `--config FILE` reads an INI-style
`key = value` section named after the command (dashes and underscores are
interchangeable in keys), explicit command-line flags override it, and
built-in defaults fill the rest. Exit codes: 0 success, 2 usage or input
error, 3 refusing to overwrite existing state, 1 unexpected failure.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import sys
from pathlib import Path

import numpy as np

from . import evaluation, report, synth
from .corpus import read_corpus
from .errors import ArtifactExistsError, ConfigError
from .index import InvertedIndex, build_index
from .lm import CollectionModel, SmoothingConfig, query_ids
from .lsh import LshConfig, LshIndex, build_lsh
from .relevance import estimate_rm, prune, rm_tsv
from .retrieval import (
    EFFICIENCY_COLUMNS,
    PipelineConfig,
    efficiency_rows,
    format_run,
    run_query,
)

_REQUIRED = object()

# Per-command defaults; _REQUIRED entries must arrive via flag or config file.
_DEFAULTS: dict[str, dict] = {
    "index": {
        "corpus": _REQUIRED,
        "out": _REQUIRED,
        "stopwords": None,
        "force": False,
    },
    "hash": {
        "index": _REQUIRED,
        "bits": _REQUIRED,
        "tables": 18,
        "seed": 42,
        "weighting": "tf",
        "out": None,
        "force": False,
    },
    "search": {
        "index": _REQUIRED,
        "topics": _REQUIRED,
        "system": _REQUIRED,
        "out": _REQUIRED,
        "terms": 200,
        "fb_docs": 50,
        "bits": None,
        "tables": 18,
        "probes": 0,
        "seed": 42,
        "weighting": "tf",
        "lsh": None,
        "depth": 1000,
        "fb_smoothing": "jm",
        "fb_lambda": 0.5,
        "fb_mu": 1000.0,
        "rank_smoothing": "dirichlet",
        "rank_lambda": 0.5,
        "rank_mu": 1000.0,
        "run_tag": None,
        "repeats": 1,
        "jobs": 1,
        "omit_timing": False,
    },
    "evaluate": {
        "runs": _REQUIRED,
        "qrels": _REQUIRED,
        "baseline": None,
        "out": None,
    },
    "sweep": {
        "experiment": _REQUIRED,
        "out": "sweep",
        "jobs": 1,
        "omit_timing": False,
    },
    "synth": {
        "out": _REQUIRED,
        "docs": 2000,
        "topics": 25,
        "topic_terms": 60,
        "background_terms": 1200,
        "doc_len_mean": 150.0,
        "topic_mix": 0.65,
        "query_len": 3,
        "seed": 7,
        "force": False,
    },
    "inspect.vocab": {"index": _REQUIRED, "head": 20},
    "inspect.rm": {
        "index": _REQUIRED,
        "query": _REQUIRED,
        "terms": 200,
        "fb_docs": 50,
        "fb_smoothing": "jm",
        "fb_lambda": 0.5,
        "fb_mu": 1000.0,
        "head": 20,
    },
    "inspect.buckets": {"lsh": _REQUIRED, "table": None, "figure": None},
}

# Types for keys whose default value does not carry one.
_EXPLICIT_TYPES: dict[str, dict[str, type]] = {
    "index": {"corpus": list, "out": str, "stopwords": str},
    "hash": {"index": str, "bits": int, "out": str},
    "search": {
        "index": str,
        "topics": str,
        "system": str,
        "out": str,
        "bits": int,
        "lsh": str,
        "run_tag": str,
    },
    "evaluate": {"runs": list, "qrels": str, "baseline": str, "out": str},
    "sweep": {"experiment": str},
    "synth": {"out": str},
    "inspect.vocab": {"index": str},
    "inspect.rm": {"index": str, "query": str},
    "inspect.buckets": {"lsh": str, "table": int, "figure": str},
}

_TRUE_WORDS = ("1", "true", "yes", "on")
_FALSE_WORDS = ("0", "false", "no", "off")


def _key_type(command: str, key: str) -> type:
    explicit = _EXPLICIT_TYPES.get(command, {})
    if key in explicit:
        return explicit[key]
    default = _DEFAULTS[command][key]
    if default is None or default is _REQUIRED:
        return str
    return type(default)


def _coerce(command: str, key: str, raw: str):
    kind = _key_type(command, key)
    if kind is bool:
        lowered = raw.strip().lower()
        if lowered in _TRUE_WORDS:
            return True
        if lowered in _FALSE_WORDS:
            return False
        raise ConfigError(f"config key {key}: expected a boolean, got {raw!r}")
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    if kind is list:
        return raw.split()
    return raw


def _read_ini(path: str | Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    found = parser.read(path)
    if not found:
        raise ConfigError(f"config file not found: {path}")
    return parser


def resolve_options(args: argparse.Namespace, command: str) -> dict:
    """defaults < config file section < explicit command-line flags."""
    merged = dict(_DEFAULTS[command])
    config_path = getattr(args, "config", None)
    if config_path:
        parser = _read_ini(config_path)
        if parser.has_section(command):
            for key, raw in parser.items(command):
                dest = key.replace("-", "_")
                if dest not in merged:
                    raise ConfigError(f"[{command}] has unknown key {key!r}")
                merged[dest] = _coerce(command, dest, raw)
    for dest, value in vars(args).items():
        if dest in ("func", "config", "command", "what"):
            continue
        if value is not None:
            merged[dest] = value
    missing = [k for k, v in merged.items() if v is _REQUIRED]
    if missing:
        flags = ", ".join("--" + m.replace("_", "-") for m in sorted(missing))
        raise ConfigError(f"{command}: missing required option(s): {flags}")
    return merged


def _smoothing(kind: str, lam: float, mu: float) -> SmoothingConfig:
    return SmoothingConfig(kind, lam=lam, mu=mu)


def _default_lsh_dir(index_dir: str, bits: int, tables: int, seed: int, weighting: str) -> Path:
    return Path(index_dir) / f"lsh_b{bits}_L{tables}_s{seed}_{weighting}"


def cmd_index(opt: dict) -> int:
    stopwords = None
    if opt["stopwords"]:
        stopwords = Path(opt["stopwords"]).read_text().split()
    for path in opt["corpus"]:
        if not Path(path).exists():
            raise ConfigError(f"corpus path does not exist: {path}")
    index = build_index(read_corpus(opt["corpus"]), stopwords=stopwords)
    out = index.save(opt["out"], force=opt["force"])
    stats = index.stats
    print(f"indexed {stats.nd} documents, {stats.vs} terms, "
          f"{stats.total_tokens} tokens (ds = {stats.ds:.2f}) -> {out}")
    if index.dropped:
        print(f"dropped {len(index.dropped)} zero-token documents: "
              f"{' '.join(index.dropped[:10])}")
    return 0


def cmd_hash(opt: dict) -> int:
    index = InvertedIndex.load(opt["index"])
    config = LshConfig(
        bits=opt["bits"], tables=opt["tables"], probes=0,
        seed=opt["seed"], weighting=opt["weighting"],
    )
    lsh = build_lsh(index, config)
    out = opt["out"] or _default_lsh_dir(
        opt["index"], config.bits, config.tables, config.seed, config.weighting
    )
    lsh.save(out, force=opt["force"])
    sizes = [lsh.bucket_sizes(t) for t in range(config.tables)]
    pooled = np.concatenate(sizes)
    print(f"hashed {index.nd} documents into {config.tables} tables "
          f"at {config.bits} bits -> {out}")
    print(f"buckets per table: min {min(s.size for s in sizes)}, "
          f"max {max(s.size for s in sizes)}; occupancy mean {pooled.mean():.2f}, "
          f"max {pooled.max()}")
    return 0


def _search_system_config(opt: dict) -> PipelineConfig:
    system = opt["system"]
    lsh_cfg = None
    if system in ("rrm", "mp-rrm"):
        if opt["bits"] is None:
            raise ConfigError(f"system {system} requires --bits")
        probes = opt["probes"] if system == "mp-rrm" else 0
        lsh_cfg = LshConfig(
            bits=opt["bits"], tables=opt["tables"], probes=probes,
            seed=opt["seed"], weighting=opt["weighting"],
        )
    elif opt["bits"] is not None:
        raise ConfigError(f"--bits is only meaningful for rrm/mp-rrm, not {system}")
    return PipelineConfig(
        system=system,
        terms=opt["terms"],
        fb_docs=opt["fb_docs"],
        lsh=lsh_cfg,
        fb_smoothing=_smoothing(opt["fb_smoothing"], opt["fb_lambda"], opt["fb_mu"]),
        rank_smoothing=_smoothing(opt["rank_smoothing"], opt["rank_lambda"], opt["rank_mu"]),
        depth=opt["depth"],
    )


def cmd_search(opt: dict) -> int:
    index = InvertedIndex.load(opt["index"])
    config = _search_system_config(opt)
    lsh = None
    if config.lsh is not None:
        lsh_dir = opt["lsh"] or _default_lsh_dir(
            opt["index"], config.lsh.bits, config.lsh.tables,
            config.lsh.seed, config.lsh.weighting,
        )
        if not Path(lsh_dir).exists():
            raise ConfigError(
                f"no LSH artifact at {lsh_dir}; run `rmlsh hash` first"
            )
        lsh = LshIndex.load(lsh_dir)
    topics = evaluation.load_topics(opt["topics"])
    collection = CollectionModel.from_index(index)
    repeats = opt["repeats"]

    def one(topic: tuple[str, str]):
        qid, text = topic
        q = query_ids(index, text)
        outcomes = [run_query(q, config, index, lsh, collection) for _ in range(repeats)]
        ranked, counter, _ = outcomes[0]
        seconds = sum(o[2] for o in outcomes) / repeats
        return qid, ranked, counter, seconds

    if opt["jobs"] > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=opt["jobs"]) as pool:
            results = list(pool.map(one, topics))
    else:
        results = [one(topic) for topic in topics]

    tag = opt["run_tag"] or config.tag()
    run_path = Path(opt["out"] + ".run")
    run_path.write_text(format_run([(qid, ranked) for qid, ranked, _, _ in results], tag))
    eff_path = Path(opt["out"] + ".eff.csv")
    with eff_path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(EFFICIENCY_COLUMNS)
        writer.writerows(
            efficiency_rows(
                [(qid, counter, seconds) for qid, _, counter, seconds in results],
                config,
                omit_timing=opt["omit_timing"],
            )
        )
    total_ops = sum(counter.postings_ops for _, _, counter, _ in results)
    print(f"{config.label()}: {len(results)} queries, {total_ops} postings ops "
          f"-> {run_path}, {eff_path}")
    return 0


def _read_efficiency_sidecar(run_path: Path) -> tuple[int | None, float | None]:
    name = run_path.name
    base = name[:-4] if name.endswith(".run") else name
    sidecar = run_path.with_name(base + ".eff.csv")
    if not sidecar.is_file():
        return None, None
    ops = 0
    walls: list[float] = []
    complete = True
    with sidecar.open(newline="") as fh:
        for row in csv.DictReader(fh):
            ops += int(row["postings_ops"])
            if row["wall_clock_ms"]:
                walls.append(float(row["wall_clock_ms"]) / 1000.0)
            else:
                complete = False
    wall = sum(walls) / len(walls) if walls and complete else None
    return ops, wall


def cmd_evaluate(opt: dict) -> int:
    qrels = evaluation.load_qrels(opt["qrels"])
    runs = []
    efficiency = {}
    labels_by_path = {}
    for path in opt["runs"]:
        tag, by_qid = evaluation.load_run(path)
        if not tag:
            raise ConfigError(f"{path}: empty run file")
        if any(tag == label for label, _ in runs):
            raise ConfigError(f"duplicate run tag {tag!r} (from {path})")
        runs.append((tag, by_qid))
        labels_by_path[str(path)] = tag
        efficiency[tag] = _read_efficiency_sidecar(Path(path))
    baseline = None
    if opt["baseline"]:
        baseline = labels_by_path.get(str(opt["baseline"]))
        if baseline is None:
            raise ConfigError("--baseline must name one of the --runs paths")
    rep = evaluation.evaluate_runs(runs, qrels, baseline=baseline, efficiency=efficiency)
    text = rep.render_text()
    print(text, end="")
    if opt["out"]:
        Path(opt["out"] + ".txt").write_text(text)
        Path(opt["out"] + ".csv").write_text(rep.render_csv())
        figure = report.save_rp_figure(rep.rp_curves, opt["out"] + "_rp.png")
        print(f"wrote {opt['out']}.txt, {opt['out']}.csv, {figure}")
    return 0


def _parse_grid_section(parser: configparser.ConfigParser) -> list[PipelineConfig]:
    if not parser.has_section("grid"):
        raise ConfigError("experiment file needs a [grid] section")
    grid = {k.replace("-", "_"): v for k, v in parser.items("grid")}
    defaults = {}
    if parser.has_section("defaults"):
        defaults = {k.replace("-", "_"): v for k, v in parser.items("defaults")}

    def values(key: str, fallback: str) -> list[str]:
        raw = grid.get(key) or defaults.get(key) or fallback
        return raw.replace(",", " ").split()

    systems = values("systems", "rm")
    terms_list = [int(x) for x in values("terms", "200")]
    bits_list = [int(x) for x in values("bits", "8")]
    tables_list = [int(x) for x in values("tables", "18")]
    probes_list = [int(x) for x in values("probes", "1")]
    fb_docs = int((grid.get("fb_docs") or defaults.get("fb_docs") or "50"))
    depth = int((grid.get("depth") or defaults.get("depth") or "1000"))
    seed = int((grid.get("seed") or defaults.get("seed") or "42"))
    weighting = (grid.get("weighting") or defaults.get("weighting") or "tf").strip()
    fb_s = _smoothing(
        defaults.get("fb_smoothing", "jm"),
        float(defaults.get("fb_lambda", 0.5)),
        float(defaults.get("fb_mu", 1000.0)),
    )
    rank_s = _smoothing(
        defaults.get("rank_smoothing", "dirichlet"),
        float(defaults.get("rank_lambda", 0.5)),
        float(defaults.get("rank_mu", 1000.0)),
    )

    configs: list[PipelineConfig] = []
    seen: set[str] = set()

    def push(config: PipelineConfig) -> None:
        label = config.label()
        if label not in seen:
            seen.add(label)
            configs.append(config)

    common = dict(fb_docs=fb_docs, fb_smoothing=fb_s, rank_smoothing=rank_s, depth=depth)
    for system in systems:
        if system == "lm":
            push(PipelineConfig(system="lm", **common))
        elif system == "rm":
            for t in terms_list:
                push(PipelineConfig(system="rm", terms=t, **common))
        elif system in ("rrm", "mp-rrm"):
            for t in terms_list:
                for b in bits_list:
                    for L in tables_list:
                        if system == "rrm":
                            lsh_cfg = LshConfig(bits=b, tables=L, probes=0,
                                                seed=seed, weighting=weighting)
                            push(PipelineConfig(system="rrm", terms=t, lsh=lsh_cfg, **common))
                            continue
                        for p in probes_list:
                            shell = (1 << b) - 1
                            clamped = min(p, shell)
                            if clamped != p:
                                print(f"warning: probes {p} exceeds the hamming-1 "
                                      f"shell at {b} bits, clamped to {clamped}",
                                      file=sys.stderr)
                            lsh_cfg = LshConfig(bits=b, tables=L, probes=clamped,
                                                seed=seed, weighting=weighting)
                            push(PipelineConfig(system="mp-rrm", terms=t, lsh=lsh_cfg, **common))
        else:
            raise ConfigError(f"[grid] systems has unknown system {system!r}")
    return configs


def cmd_sweep(opt: dict) -> int:
    parser = _read_ini(opt["experiment"])
    if not parser.has_section("data"):
        raise ConfigError("experiment file needs a [data] section")
    data = {k: v for k, v in parser.items("data")}
    for key in ("index", "topics", "qrels"):
        if key not in data:
            raise ConfigError(f"[data] section needs {key}")
    index = InvertedIndex.load(data["index"])
    topics = evaluation.load_topics(data["topics"])
    qrels = evaluation.load_qrels(data["qrels"])
    grid = _parse_grid_section(parser)
    rows = evaluation.sweep(grid, topics, qrels, index, jobs=opt["jobs"])
    csv_path = Path(opt["out"] + ".csv")
    csv_path.write_text(evaluation.sweep_csv(rows, omit_timing=opt["omit_timing"]))
    figure = report.save_tradeoff_figure(rows, opt["out"] + ".png")
    for row in rows:
        if row.error is None:
            print(f"{row.label:<28} P@5 {row.p_at_5:.4f} ops {row.postings_ops}")
        else:
            print(f"{row.label:<28} ERROR {row.error}")
    print(f"wrote {csv_path}, {figure}")
    return 0


def cmd_synth(opt: dict) -> int:
    cfg = synth.SynthConfig(
        docs=opt["docs"],
        topics=opt["topics"],
        topic_terms=opt["topic_terms"],
        background_terms=opt["background_terms"],
        doc_len_mean=opt["doc_len_mean"],
        topic_mix=opt["topic_mix"],
        query_len=opt["query_len"],
        seed=opt["seed"],
    )
    out = Path(opt["out"])
    if out.exists() and not opt["force"]:
        raise ArtifactExistsError(f"{out} already exists (use --force to overwrite)")
    docs, topics, qrels = synth.generate(cfg)
    out.mkdir(parents=True, exist_ok=True)
    (out / "corpus.tsv").write_text(synth.write_corpus_tsv(docs))
    (out / "topics.tsv").write_text(synth.write_topics_tsv(topics))
    (out / "qrels.txt").write_text(synth.write_qrels(qrels))
    print(f"wrote {cfg.docs} documents, {cfg.topics} topics -> {out}")
    return 0


def cmd_inspect_vocab(opt: dict) -> int:
    index = InvertedIndex.load(opt["index"])
    order = np.argsort(-index.cf, kind="stable")[: opt["head"]]
    print("term\tdf\tcf")
    for tid in order:
        print(f"{index.terms[tid]}\t{index.df[tid]}\t{index.cf[tid]}")
    return 0


def cmd_inspect_rm(opt: dict) -> int:
    index = InvertedIndex.load(opt["index"])
    q = query_ids(index, opt["query"])
    smoothing = _smoothing(opt["fb_smoothing"], opt["fb_lambda"], opt["fb_mu"])
    rm = prune(estimate_rm(q, index, smoothing, opt["fb_docs"]), opt["terms"])
    print("term\tweight")
    print(rm_tsv(rm, index, head=opt["head"]), end="")
    return 0


def cmd_inspect_buckets(opt: dict) -> int:
    lsh = LshIndex.load(opt["lsh"])
    tables = range(lsh.config.tables) if opt["table"] is None else [opt["table"]]
    print("table\tbuckets\tmin\tmean\tmax")
    sizes = []
    for t in tables:
        s = lsh.bucket_sizes(t)
        sizes.append(s)
        print(f"{t}\t{s.size}\t{s.min()}\t{s.mean():.2f}\t{s.max()}")
    if opt["figure"]:
        figure = report.save_bucket_histogram(sizes, opt["figure"])
        print(f"wrote {figure}")
    return 0


_HANDLERS = {
    "index": cmd_index,
    "hash": cmd_hash,
    "search": cmd_search,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
    "inspect.vocab": cmd_inspect_vocab,
    "inspect.rm": cmd_inspect_rm,
    "inspect.buckets": cmd_inspect_buckets,
}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="rmlsh", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="INI file with a [%s] section" % name)
        return p

    p = add("index", "tokenize corpora and build the inverted index")
    p.add_argument("--corpus", nargs="+", help="corpus files (TREC SGML, gz, or TSV)")
    p.add_argument("--out", help="index output directory")
    p.add_argument("--stopwords", help="optional stopword list, one per line")
    p.add_argument("--force", action="store_true", default=None)

    p = add("hash", "hash every document into LSH buckets")
    p.add_argument("--index", help="index directory")
    p.add_argument("--bits", type=int)
    p.add_argument("--tables", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--weighting", choices=("tf", "tfidf"))
    p.add_argument("--out", help="artifact directory (default: under the index)")
    p.add_argument("--force", action="store_true", default=None)

    p = add("search", "run topics through one retrieval system")
    p.add_argument("--index")
    p.add_argument("--topics")
    p.add_argument("--system", choices=("lm", "rm", "rrm", "mp-rrm"))
    p.add_argument("--out", help="output prefix for .run and .eff.csv")
    p.add_argument("--terms", type=int)
    p.add_argument("--fb-docs", type=int)
    p.add_argument("--bits", type=int)
    p.add_argument("--tables", type=int)
    p.add_argument("--probes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--weighting", choices=("tf", "tfidf"))
    p.add_argument("--lsh", help="LSH artifact directory (default: under the index)")
    p.add_argument("--depth", type=int)
    p.add_argument("--fb-smoothing", choices=("jm", "dirichlet"))
    p.add_argument("--fb-lambda", type=float)
    p.add_argument("--fb-mu", type=float)
    p.add_argument("--rank-smoothing", choices=("jm", "dirichlet"))
    p.add_argument("--rank-lambda", type=float)
    p.add_argument("--rank-mu", type=float)
    p.add_argument("--run-tag", help="override the tag written into the run file")
    p.add_argument("--repeats", type=int, help="timing repetitions per query")
    p.add_argument("--jobs", type=int)
    p.add_argument("--omit-timing", action="store_true", default=None)

    p = add("evaluate", "score runs against qrels and a baseline")
    p.add_argument("--runs", nargs="+")
    p.add_argument("--qrels")
    p.add_argument("--baseline", help="path of the baseline run (default: first)")
    p.add_argument("--out", help="output prefix for .txt/.csv/_rp.png")

    p = add("sweep", "run a config grid and emit the trade-off table")
    p.add_argument("--experiment", help="experiment INI file")
    p.add_argument("--out", help="output prefix for .csv/.png")
    p.add_argument("--jobs", type=int)
    p.add_argument("--omit-timing", action="store_true", default=None)

    p = add("synth", "generate a clustered synthetic corpus")
    p.add_argument("--out")
    p.add_argument("--docs", type=int)
    p.add_argument("--topics", type=int)
    p.add_argument("--topic-terms", type=int)
    p.add_argument("--background-terms", type=int)
    p.add_argument("--doc-len-mean", type=float)
    p.add_argument("--topic-mix", type=float)
    p.add_argument("--query-len", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--force", action="store_true", default=None)

    insp = sub.add_parser("inspect", help="dump artifact internals as TSV")
    insp_sub = insp.add_subparsers(dest="what", required=True)

    p = insp_sub.add_parser("vocab")
    p.add_argument("--config")
    p.add_argument("--index")
    p.add_argument("--head", type=int)

    p = insp_sub.add_parser("rm")
    p.add_argument("--config")
    p.add_argument("--index")
    p.add_argument("--query")
    p.add_argument("--terms", type=int)
    p.add_argument("--fb-docs", type=int)
    p.add_argument("--fb-smoothing", choices=("jm", "dirichlet"))
    p.add_argument("--fb-lambda", type=float)
    p.add_argument("--fb-mu", type=float)
    p.add_argument("--head", type=int)

    p = insp_sub.add_parser("buckets")
    p.add_argument("--config")
    p.add_argument("--lsh")
    p.add_argument("--table", type=int)
    p.add_argument("--figure", help="write an occupancy histogram PNG here")

    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command
    if command == "inspect":
        command = f"inspect.{args.what}"
    try:
        options = resolve_options(args, command)
        return _HANDLERS[command](options)
    except ArtifactExistsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort exit code mapping
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
