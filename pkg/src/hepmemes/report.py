"""Run the full analysis over a corpus and write the delimited report bundle.

Bundle layout (tab-separated, one header row each):

    table1.tsv            row, all, gendered
    table2.tsv            row, all, female, male, missing
    self_citation.tsv     group, rate
    distributions.tsv     author_id, n_papers, citations_made, citations_received
    authors.tsv           author_id, normalized_full, given, n_papers, citations_made, citations_received, gender
    correlations.tsv      name, value, n_used, n_skipped, status
    meme_frequencies.tsv  rank, meme, count, relative_frequency, count_gendered, relative_frequency_gendered
    score_table.tsv       meme, f_g, f_F, f_M, d_mm, d_to_m, d_mn, d_not_m, P_g, P_F, P_M
    summary.json          headline numbers
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .authorship import assign_author_ids, parse_authors
from .corpus import Corpus
from .correlation import DegenerateVariance, InsufficientData
from .gender import (
    Gender,
    GenderConfig,
    NameGenderTable,
    classify_given_name,
    gender_coverage_report,
    paper_genders,
)
from .memes import MemeLexicon, StopwordList, build_carrier_index, paper_tokens, select_memes_above
from .propagation import (
    SCORE_TABLE_COLUMNS,
    MemeScores,
    UniverseMode,
    format_score,
    frequency_propagation_correlation,
    gendered_score_table,
    score_table_rows,
)
from .stats import (
    TABLE1_ROWS,
    EmptyEdgeSet,
    author_centered_summary,
    author_correlations,
    author_distributions,
    link_averages,
    paper_centered_summary,
    self_citation_rate,
)

log = logging.getLogger(__name__)

SUMMARY_FILE = "summary.json"


@dataclass
class AnalysisSettings:
    gender: GenderConfig = field(default_factory=GenderConfig)
    meme_threshold: float = 0.08
    include_title: bool = False
    universe_mode: UniverseMode = "all"
    self_citation_match: str = "first"
    workers: int = 1


@dataclass
class AnalysisResult:
    tables: dict[str, list[list[str]]]
    summary: dict
    insufficient: list[str]
    warnings: list[str]
    score_table: list[MemeScores]


def _fmt(x: float) -> str:
    return format_score(x) if isinstance(x, float) else str(x)


def run_analysis(
    corpus: Corpus,
    name_table: NameGenderTable,
    lexicon: MemeLexicon,
    settings: AnalysisSettings = AnalysisSettings(),
) -> AnalysisResult:
    cfg = settings.gender
    warnings: list[str] = []
    insufficient: list[str] = []
    tables: dict[str, list[list[str]]] = {}

    authors = parse_authors(corpus)
    genders = paper_genders(corpus, authors, name_table, cfg)
    records = assign_author_ids(corpus, authors)

    t1 = paper_centered_summary(corpus, genders)
    tables["table1"] = [["row", "all", "gendered"]] + [[r, str(t1["all"][r]), str(t1["gendered"][r])] for r in TABLE1_ROWS]

    t2 = author_centered_summary(corpus, authors, genders, name_table, cfg)
    tables["table2"] = [["row", "all", "female", "male", "missing"]]
    for key in ("first_authors", "second_authors"):
        c = t2[key]
        tables["table2"].append([key, str(c["all"]), str(c["female"]), str(c["male"]), str(c["missing"])])
    for key in ("pct_citing", "pct_cited"):
        c = t2[key]
        tables["table2"].append([key, _fmt(100.0), _fmt(c["female"]), _fmt(c["male"]), "NA"])

    coverage = gender_coverage_report(corpus, authors, genders)

    self_cite: dict[str, float] = {}
    for group, g in (("all", None), ("female", Gender.FEMALE), ("male", Gender.MALE)):
        try:
            self_cite[group] = self_citation_rate(corpus, authors, genders, g, match=settings.self_citation_match)
        except EmptyEdgeSet:
            self_cite[group] = math.nan
    tables["self_citation"] = [["group", "rate"]] + [[k, _fmt(v)] for k, v in self_cite.items()]

    dist = author_distributions(records)
    tables["distributions"] = [["author_id", "n_papers", "citations_made", "citations_received"]] + [
        [str(v) for v in row]
        for row in zip(dist["author_id"], dist["n_papers"], dist["citations_made"], dist["citations_received"])
    ]
    tables["authors"] = [["author_id", "normalized_full", "given", "n_papers", "citations_made", "citations_received", "gender"]]
    for aid, rec in sorted(records.items()):
        g = classify_given_name(rec.name.given, name_table, cfg)
        tables["authors"].append([
            str(aid), rec.name.normalized_full, rec.name.given, str(rec.n_papers),
            str(rec.citations_made), str(rec.citations_received), g.value,
        ])
    links = link_averages(corpus, authors)

    correlations: list[list[str]] = [["name", "value", "n_used", "n_skipped", "status"]]
    try:
        for k, v in author_correlations(records).items():
            correlations.append([k, _fmt(v), str(len(records)), "0", "ok"])
    except (InsufficientData, DegenerateVariance) as exc:
        insufficient.append(f"author correlations: {exc}")
        for k in ("r_papers_made", "r_papers_received", "r_made_received"):
            correlations.append([k, "NA", str(len(records)), "0", type(exc).__name__])

    tokens = paper_tokens(corpus, include_title=settings.include_title)
    all_index = build_carrier_index(corpus, None, lexicon, tokens=tokens)
    gendered = frozenset(p for p, g in genders.items() if g.known)
    g_index = all_index.restrict(gendered)
    tables["meme_frequencies"] = [["rank", "meme", "count", "relative_frequency", "count_gendered", "relative_frequency_gendered"]]
    ranked = sorted(lexicon, key=lambda m: (-len(all_index[m]), m))
    for rank, m in enumerate(ranked, start=1):
        n_all, n_g = len(all_index[m]), len(g_index[m])
        tables["meme_frequencies"].append([
            str(rank), m, str(n_all),
            _fmt(n_all / len(all_index.universe) if all_index.universe else math.nan),
            str(n_g),
            _fmt(n_g / len(g_index.universe) if g_index.universe else math.nan),
        ])

    selected = select_memes_above(g_index, settings.meme_threshold)
    if not selected:
        warnings.append(f"no meme has gendered relative frequency above {settings.meme_threshold}; score table is empty")
    score_table = gendered_score_table(
        corpus, all_index, selected, genders, universe_mode=settings.universe_mode, workers=settings.workers
    )
    tables["score_table"] = [list(SCORE_TABLE_COLUMNS)] + score_table_rows(score_table)

    fp_corr: dict[str, dict] = {}
    if selected:
        for which in ("g", "F", "M"):
            name = f"r_f{which}_P{which}"
            try:
                res = frequency_propagation_correlation(score_table, which)
                correlations.append([name, _fmt(res.r), str(res.n_used), str(res.n_skipped), "ok"])
                fp_corr[which] = {"r": res.r, "n_used": res.n_used, "n_skipped": res.n_skipped}
            except (InsufficientData, DegenerateVariance) as exc:
                insufficient.append(f"{name}: {exc}")
                correlations.append([name, "NA", "0", "0", type(exc).__name__])
                fp_corr[which] = {"r": None, "error": str(exc)}
    tables["correlations"] = correlations

    def clean(x):
        return None if isinstance(x, float) and not math.isfinite(x) else x

    summary = {
        "ingest": corpus.report.to_dict() | {"skipped": len(corpus.report.skipped)},
        "table1": t1,
        "table2": t2,
        "coverage": coverage,
        "self_citation": {k: clean(v) for k, v in self_cite.items()},
        "link_averages": links,
        "author_correlations": {r[0]: (None if r[1] == "NA" else float(r[1])) for r in correlations[1:4]},
        "n_authors": len(records),
        "selected_memes": selected,
        "frequency_propagation_correlation": fp_corr,
        "scores": {
            s.meme: {"f_g": s.f_g, "P_g": clean(s.P_g), "P_F": clean(s.P_F), "P_M": clean(s.P_M)} for s in score_table
        },
        "insufficient": insufficient,
        "warnings": warnings,
    }
    return AnalysisResult(tables=tables, summary=summary, insufficient=insufficient, warnings=warnings, score_table=score_table)


def write_bundle(result: AnalysisResult, out_dir: str | os.PathLike) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, rows in result.tables.items():
        path = out / f"{name}.tsv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, delimiter="\t", lineterminator="\n").writerows(rows)
        written.append(path)
    path = out / SUMMARY_FILE
    path.write_text(json.dumps(result.summary, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    written.append(path)
    return written


def format_summary(summary: dict) -> str:
    t1 = summary["table1"]
    cov = summary["coverage"]
    lines = [
        f"papers {t1['all']['n_papers']}  citations {t1['all']['n_citations']}",
        f"gendered papers {t1['gendered']['n_papers']} ({cov['pct_gendered_papers']:.1f}%)  "
        f"gendered links {t1['gendered']['n_citations']} ({cov['pct_gendered_links']:.1f}%)",
        f"first authors {summary['n_authors']}  avg papers per gendered author {cov['avg_papers_per_gendered_author']:.2f}",
        f"female citing {cov['pct_female_citing']:.1f}%  female cited {cov['pct_female_cited']:.1f}%",
    ]
    sc = summary["self_citation"]
    lines.append("self citations " + "  ".join(f"{k} {'NA' if v is None else f'{100 * v:.1f}%'}" for k, v in sc.items()))
    la = summary["link_averages"]
    lines.append(f"mean in-links {la['mean_in_links']:.2f}  mean out-links {la['mean_out_links']:.2f}")
    ac = summary["author_correlations"]
    lines.append("author correlations " + "  ".join(f"{k} {'NA' if v is None else f'{v:.3f}'}" for k, v in ac.items()))
    for which, res in summary["frequency_propagation_correlation"].items():
        r = res.get("r")
        lines.append(f"r(f_{which}, P_{which}) = {'NA' if r is None else f'{r:.3f}'}" + (
            f"  ({res['n_skipped']} skipped)" if res.get("n_skipped") else ""))
    if summary["scores"]:
        lines.append(f"{'meme':<16}{'f_g':>9}{'P_g':>9}{'P_F':>9}{'P_M':>9}")
        for meme, s in summary["scores"].items():
            cells = [format_score(math.nan if v is None else v) for v in (s["f_g"], s["P_g"], s["P_F"], s["P_M"])]
            lines.append(f"{meme:<16}" + "".join(f"{c[:8]:>9}" for c in cells))
    for w in summary["warnings"]:
        lines.append(f"warning: {w}")
    for w in summary["insufficient"]:
        lines.append(f"insufficient data: {w}")
    return "\n".join(lines)
