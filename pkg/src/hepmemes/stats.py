"""Descriptive statistics of the corpus: paper and author tables, self-citations, correlations."""

from __future__ import annotations

from collections import defaultdict
from typing import Literal

from .authorship import AuthorName, AuthorRecord, first_authors
from .corpus import Corpus, citing_cited_summary
from .correlation import pearson
from .gender import (
    Gender,
    GenderConfig,
    NameGenderTable,
    classify_given_name,
    first_author_activity,
    gendered_papers,
)


class EmptyEdgeSet(ValueError):
    pass


TABLE1_ROWS = ("n_papers", "n_citations", "n_citing", "n_cited", "n_union", "n_intersection")


def paper_centered_summary(corpus: Corpus, genders: dict[int, Gender]) -> dict[str, dict[str, int]]:
    gendered = gendered_papers(genders)
    out = {}
    for column, universe in (("all", corpus.ids), ("gendered", gendered)):
        counts = citing_cited_summary(corpus, universe)
        n_links = sum(1 for a, b in corpus.graph.edges if a in universe and b in universe)
        out[column] = {"n_papers": len(universe), "n_citations": n_links, **counts}
    return out


def _count_by_gender(names: dict[str, AuthorName], table: NameGenderTable, cfg: GenderConfig) -> dict[str, int]:
    counts = {"all": len(names), "female": 0, "male": 0, "missing": 0}
    for name in names.values():
        g = classify_given_name(name.given, table, cfg)
        counts[{Gender.FEMALE: "female", Gender.MALE: "male", Gender.UNKNOWN: "missing"}[g]] += 1
    return counts


def author_centered_summary(
    corpus: Corpus,
    authors: dict[int, list[AuthorName]],
    genders: dict[int, Gender],
    table: NameGenderTable,
    cfg: GenderConfig = GenderConfig(),
) -> dict[str, dict[str, float]]:
    """Distinct first / second authors by gender, plus gender shares among citing and cited first authors."""
    firsts = {n[0].normalized_full: n[0] for n in authors.values() if n}
    seconds = {n[1].normalized_full: n[1] for n in authors.values() if len(n) > 1}
    activity = first_author_activity(corpus, first_authors(authors), genders)

    def shares(flag: int) -> dict[str, float]:
        f = sum(1 for v in activity.values() if v[flag] and v[0] is Gender.FEMALE)
        m = sum(1 for v in activity.values() if v[flag] and v[0] is Gender.MALE)
        tot = f + m
        return {"female": 100.0 * f / tot if tot else 0.0, "male": 100.0 * m / tot if tot else 0.0}

    return {
        "first_authors": _count_by_gender(firsts, table, cfg),
        "second_authors": _count_by_gender(seconds, table, cfg),
        "pct_citing": shares(1),
        "pct_cited": shares(2),
    }


def self_citation_rate(
    corpus: Corpus,
    authors: dict[int, list[AuthorName]],
    genders: dict[int, Gender] | None = None,
    gender: Gender | None = None,
    match: Literal["first", "any"] = "first",
) -> float:
    """Share of citations whose two papers have the same first author.

    With ``gender`` set, only edges whose citing paper has a first author of
    that gender are counted, in numerator and denominator alike.
    ``match="any"`` counts any shared author name instead.
    """
    if gender is not None and genders is None:
        raise ValueError("gender filter needs paper genders")
    total = same = 0
    for a, b in corpus.graph.edges:
        if gender is not None and genders.get(a, Gender.UNKNOWN) is not gender:
            continue
        total += 1
        na, nb = authors.get(a) or [], authors.get(b) or []
        if not na or not nb:
            continue
        if match == "first":
            same += na[0].normalized_full == nb[0].normalized_full
        else:
            same += bool({x.normalized_full for x in na} & {y.normalized_full for y in nb})
    if total == 0:
        raise EmptyEdgeSet("no citations match the filter")
    return same / total


def author_distributions(records: dict[int, AuthorRecord]) -> dict[str, list[int]]:
    ids = sorted(records)
    return {
        "author_id": ids,
        "n_papers": [records[i].n_papers for i in ids],
        "citations_made": [records[i].citations_made for i in ids],
        "citations_received": [records[i].citations_received for i in ids],
    }


def author_correlations(records: dict[int, AuthorRecord]) -> dict[str, float]:
    d = author_distributions(records)
    return {
        "r_papers_made": pearson(d["n_papers"], d["citations_made"]),
        "r_papers_received": pearson(d["n_papers"], d["citations_received"]),
        "r_made_received": pearson(d["citations_made"], d["citations_received"]),
    }


def link_averages(corpus: Corpus, authors: dict[int, list[AuthorName]]) -> dict[str, float]:
    """Mean in/out degree of the first-author citation network.

    The network has one link per ordered pair of distinct authors with at
    least one citation between their papers. The in-degree mean runs over
    authors with an in-link, the out-degree mean over authors with an
    out-link.
    """
    firsts = first_authors(authors)
    out_links: dict[str, set[str]] = defaultdict(set)
    in_links: dict[str, set[str]] = defaultdict(set)
    for a, b in corpus.graph.edges:
        na, nb = firsts.get(a), firsts.get(b)
        if na is None or nb is None or na.normalized_full == nb.normalized_full:
            continue
        out_links[na.normalized_full].add(nb.normalized_full)
        in_links[nb.normalized_full].add(na.normalized_full)
    n_links = sum(len(v) for v in out_links.values())
    return {
        "n_author_links": n_links,
        "mean_in_links": n_links / len(in_links) if in_links else 0.0,
        "mean_out_links": n_links / len(out_links) if out_links else 0.0,
    }
