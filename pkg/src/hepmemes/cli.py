"""Command-line front end: ingest, analyze, memes, report, oracle-check, convert-names.

Exit codes: 0 ok, 1 oracle mismatch, 2 input error, 3 snapshot exists
(use --force), 4 invalid configuration, 5 insufficient data for
correlations (bundle still written).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .corpus import Corpus, IngestError, load_corpus, read_snapshot, write_snapshot
from .correlation import InsufficientData
from .gender import GenderConfig, convert_count_table, load_name_table, paper_genders
from .memes import MemeLexicon, StopwordList, paper_tokens, word_frequency_ranking
from .oracle import run_oracle_check
from .report import SUMMARY_FILE, AnalysisSettings, format_summary, run_analysis, write_bundle

log = logging.getLogger("hepmemes")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_EXISTS = 3
EXIT_CONFIG = 4
EXIT_INSUFFICIENT = 5


class InputError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"hepmemes: {msg}", file=sys.stderr)


def _require_file(path: str | None, what: str) -> Path:
    if not path:
        raise InputError(f"no {what} given")
    p = Path(path)
    if not p.exists():
        raise InputError(f"{what} not found: {p}")
    return p


def _config(args: argparse.Namespace) -> RunConfig:
    overrides = {
        k: getattr(args, k, None)
        for k in (
            "abstracts", "edges", "name_table", "stopwords", "lexicon", "output_dir", "snapshot",
            "gender_threshold", "min_count", "meme_threshold", "universe_mode", "self_citation_match", "threads",
        )
    }
    if getattr(args, "include_title", False):
        overrides["include_title"] = True
    return load_config(args.config, overrides)


def _load_corpus(cfg: RunConfig) -> Corpus:
    """Prefer raw inputs when both are given, else the snapshot."""
    if cfg.abstracts or cfg.edges:
        abstracts = _require_file(cfg.abstracts, "abstracts path")
        edges = _require_file(cfg.edges, "edges file")
        return load_corpus(abstracts, edges, workers=cfg.workers)
    snap = cfg.snapshot_dir
    if not snap.exists():
        raise InputError(f"no snapshot at {snap}; run 'hepmemes ingest' or pass --abstracts/--edges")
    return read_snapshot(snap)


def cmd_ingest(args: argparse.Namespace) -> int:
    cfg = _config(args)
    abstracts = _require_file(cfg.abstracts, "abstracts path")
    edges = _require_file(cfg.edges, "edges file")
    snap = cfg.snapshot_dir
    if snap.exists() and any(snap.iterdir()) and not args.force:
        _err(f"snapshot already exists at {snap}; pass --force to overwrite")
        return EXIT_EXISTS
    corpus = load_corpus(abstracts, edges, workers=cfg.workers)
    write_snapshot(corpus, snap)
    report = corpus.report.to_dict()
    if not args.verbose:
        report["skipped"] = report["skipped"][:20]
    print(json.dumps(report, indent=2, sort_keys=True))
    print(f"snapshot written to {snap}", file=sys.stderr)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = _config(args)
    table = load_name_table(_require_file(cfg.name_table, "name table"))
    lexicon = MemeLexicon.from_file(_require_file(cfg.lexicon, "lexicon")) if cfg.lexicon else MemeLexicon.default()
    corpus = _load_corpus(cfg)
    settings = AnalysisSettings(
        gender=GenderConfig(threshold=cfg.gender_threshold, min_count=cfg.min_count),
        meme_threshold=cfg.meme_threshold,
        include_title=cfg.include_title,
        universe_mode=cfg.universe_mode,  # type: ignore[arg-type]
        self_citation_match=cfg.self_citation_match,
        workers=cfg.workers,
    )
    result = run_analysis(corpus, table, lexicon, settings)
    write_bundle(result, cfg.output_dir)
    print(format_summary(result.summary))
    for w in result.warnings:
        log.warning(w)
    if result.insufficient:
        _err("insufficient data for: " + "; ".join(result.insufficient))
        return EXIT_INSUFFICIENT
    return EXIT_OK


def cmd_memes(args: argparse.Namespace) -> int:
    cfg = _config(args)
    corpus = _load_corpus(cfg)
    stop = StopwordList.from_file(_require_file(cfg.stopwords, "stopword file")) if cfg.stopwords else StopwordList.default()
    universe = corpus.ids
    if args.universe == "gendered":
        table = load_name_table(_require_file(cfg.name_table, "name table"))
        from .authorship import parse_authors

        genders = paper_genders(corpus, parse_authors(corpus), table, GenderConfig(cfg.gender_threshold, cfg.min_count))
        universe = frozenset(p for p, g in genders.items() if g.known)
    tokens = paper_tokens(corpus, include_title=cfg.include_title)
    ranking = word_frequency_ranking(corpus, universe, stop, args.mode, tokens=tokens)
    if args.top:
        ranking = ranking[: args.top]
    n = len(universe)
    out = sys.stdout
    out.write("rank\ttoken\tcount\trelative_frequency\n")
    for rank, (tok, count) in enumerate(ranking, start=1):
        rel = f"{count / n:.6f}" if n and args.mode == "papers" else "NA"
        out.write(f"{rank}\t{tok}\t{count}\t{rel}\n")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _config(args)
    path = Path(cfg.output_dir) / SUMMARY_FILE
    if not path.exists():
        raise InputError(f"no report bundle at {cfg.output_dir} (missing {SUMMARY_FILE}); run 'hepmemes analyze'")
    print(format_summary(json.loads(path.read_text(encoding="utf-8"))))
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    if args.trials < 0:
        raise ConfigError("--trials must be >= 0")
    if args.trials == 0:
        log.warning("0 trials requested; nothing checked")
        print("oracle-check: PASS (vacuous, 0 trials)")
        return EXIT_OK
    failures = run_oracle_check(args.seed, args.trials, corrupt=args.corrupt)
    if not failures:
        print(f"oracle-check: PASS ({args.trials} trials x 4 filters, seed {args.seed})")
        return EXIT_OK
    first = failures[0]
    print(f"oracle-check: FAIL ({len(failures)} mismatches, seed {args.seed})")
    print(f"trial {first.trial} filter {first.mode.value}: expected {first.expected} got {first.got}")
    print("fixture:")
    print(first.instance.to_json())
    return EXIT_MISMATCH


def cmd_convert_names(args: argparse.Namespace) -> int:
    n = convert_count_table(_require_file(args.src, "count table"), args.dst)
    print(f"wrote {n} names to {args.dst}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hepmemes", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--output-dir", help=f"report/snapshot directory (env {'HEPMEMES_OUTPUT_DIR'})")
    common.add_argument("--snapshot", help="corpus snapshot directory (default OUTPUT_DIR/snapshot)")
    common.add_argument("--abstracts", help="cit-HepTh-abstracts directory or tarball")
    common.add_argument("--edges", help="cit-HepTh edge list")
    common.add_argument("--threads", type=int, help="worker threads, 0 = all cores")
    common.add_argument("-v", "--verbose", action="store_true")

    gender = argparse.ArgumentParser(add_help=False)
    gender.add_argument("--name-table", help="name,proportion_female,count file")
    gender.add_argument("--gender-threshold", type=float)
    gender.add_argument("--min-count", type=int)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="parse the dataset into a snapshot")
    p.add_argument("--force", action="store_true", help="overwrite an existing snapshot")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", parents=[common, gender], help="run the full analysis and write the report bundle")
    p.add_argument("--lexicon", help="meme lexicon file, one meme per line")
    p.add_argument("--meme-threshold", type=float)
    p.add_argument("--include-title", action="store_true", help="detect memes in titles too")
    p.add_argument("--universe-mode", choices=["all", "citing"])
    p.add_argument("--self-citation-match", choices=["first", "any"])
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("memes", parents=[common, gender], help="word-frequency ranking of abstracts")
    p.add_argument("--stopwords", help="stopword file, one token per line")
    p.add_argument("--mode", choices=["papers", "occurrences"], default="papers")
    p.add_argument("--universe", choices=["all", "gendered"], default="all")
    p.add_argument("--top", type=int, default=0)
    p.add_argument("--include-title", action="store_true")
    p.set_defaults(func=cmd_memes)

    p = sub.add_parser("report", parents=[common], help="re-print the summary of an existing bundle")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("oracle-check", help="compare propagation counts to the brute-force oracle")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_oracle_check, config=None)

    p = sub.add_parser("convert-names", help="turn a male/female count CSV into a name table")
    p.add_argument("src")
    p.add_argument("dst")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_convert_names, config=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        _err(f"invalid configuration: {exc}")
        return EXIT_CONFIG
    except (InputError, OSError, IngestError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    except InsufficientData as exc:
        _err(f"insufficient data: {exc}")
        return EXIT_INSUFFICIENT
    except ValueError as exc:
        _err(f"invalid input: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
