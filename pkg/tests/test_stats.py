import pytest

from conftest import make_corpus
from hepmemes.authorship import assign_author_ids, parse_authors
from hepmemes.correlation import DegenerateVariance
from hepmemes.gender import Gender, paper_genders
from hepmemes.stats import (
    EmptyEdgeSet,
    author_centered_summary,
    author_correlations,
    author_distributions,
    link_averages,
    paper_centered_summary,
    self_citation_rate,
)


def _prepared(corpus, table):
    authors = parse_authors(corpus)
    return authors, paper_genders(corpus, authors, table)


class TestTable1:
    def test_chain(self, name_table):
        c = make_corpus({1: ("Maria Rossi", ""), 2: ("John Smith", ""), 3: ("X. Y", "")}, [(1, 2), (2, 3)])
        _, genders = _prepared(c, name_table)
        t = paper_centered_summary(c, genders)
        assert t["all"] == {"n_papers": 3, "n_citations": 2, "n_citing": 2, "n_cited": 2, "n_union": 3, "n_intersection": 1}
        assert t["gendered"] == {"n_papers": 2, "n_citations": 1, "n_citing": 1, "n_cited": 1, "n_union": 2, "n_intersection": 0}

    def test_empty(self):
        c = make_corpus({}, [])
        t = paper_centered_summary(c, {})
        assert all(v == 0 for col in t.values() for v in col.values())

    def test_gendered_le_all(self, toy_corpus, name_table):
        _, genders = _prepared(toy_corpus, name_table)
        t = paper_centered_summary(toy_corpus, genders)
        for k in t["all"]:
            assert t["gendered"][k] <= t["all"][k]
        assert t["gendered"]["n_citations"] == 9


class TestTable2:
    def test_toy(self, toy_corpus, name_table):
        authors, genders = _prepared(toy_corpus, name_table)
        t = author_centered_summary(toy_corpus, authors, genders, name_table)
        # maria rossi, john smith, peter pan, a. nonymous, paul dirac, elena ferrari, kim lee
        assert t["first_authors"] == {"all": 7, "female": 2, "male": 3, "missing": 2}
        assert t["second_authors"] == {"all": 1, "female": 1, "male": 0, "missing": 0}
        assert t["pct_citing"]["female"] == pytest.approx(40.0)
        assert t["pct_cited"]["female"] == pytest.approx(25.0)
        for key in ("first_authors", "second_authors"):
            row = t[key]
            assert row["female"] + row["male"] + row["missing"] == row["all"]

    def test_single_authored(self, name_table):
        c = make_corpus({1: ("Maria Rossi", ""), 2: ("John Smith", "")}, [(1, 2)])
        authors, genders = _prepared(c, name_table)
        t = author_centered_summary(c, authors, genders, name_table)
        assert t["second_authors"] == {"all": 0, "female": 0, "male": 0, "missing": 0}


class TestSelfCitation:
    def test_all_same(self, name_table):
        c = make_corpus({1: ("Maria Rossi", ""), 2: ("Maria Rossi and John Smith", ""), 3: ("Maria Rossi", "")}, [(1, 2), (2, 3)])
        authors, _ = _prepared(c, name_table)
        assert self_citation_rate(c, authors) == 1.0

    def test_all_distinct(self, name_table):
        c = make_corpus({1: ("Maria Rossi", ""), 2: ("John Smith", "")}, [(1, 2)])
        authors, _ = _prepared(c, name_table)
        assert self_citation_rate(c, authors) == 0.0

    def test_toy_and_gender_filter(self, toy_corpus, name_table):
        authors, genders = _prepared(toy_corpus, name_table)
        # 3 -> 1 (maria rossi) and 9 -> 2 (john smith)
        assert self_citation_rate(toy_corpus, authors) == pytest.approx(2 / 12)
        # citing female first author: 3->1, 8->6, 8->3
        assert self_citation_rate(toy_corpus, authors, genders, Gender.FEMALE) == pytest.approx(1 / 3)
        # seven links leave male-authored papers; one of them is 9 -> 2
        assert self_citation_rate(toy_corpus, authors, genders, Gender.MALE) == pytest.approx(1 / 7)

    def test_any_author_match(self, name_table):
        c = make_corpus({1: ("Peter Pan and Maria Rossi", ""), 2: ("John Smith and Maria Rossi", "")}, [(1, 2)])
        authors, _ = _prepared(c, name_table)
        assert self_citation_rate(c, authors) == 0.0
        assert self_citation_rate(c, authors, match="any") == 1.0

    def test_empty_edge_set(self, name_table):
        c = make_corpus({1: ("Maria Rossi", "")}, [])
        authors, genders = _prepared(c, name_table)
        with pytest.raises(EmptyEdgeSet):
            self_citation_rate(c, authors)
        c = make_corpus({1: ("Maria Rossi", ""), 2: ("John Smith", "")}, [(1, 2)])
        authors, genders = _prepared(c, name_table)
        with pytest.raises(EmptyEdgeSet):
            self_citation_rate(c, authors, genders, Gender.MALE)

    def test_swap_symmetry(self, toy_corpus, name_table):
        authors, _ = _prepared(toy_corpus, name_table)
        swapped = make_corpus(
            {p: (r.authors_raw, r.abstract) for p, r in toy_corpus.papers.items()},
            [(b, a) for a, b in toy_corpus.graph.edges],
        )
        assert self_citation_rate(swapped, authors) == self_citation_rate(toy_corpus, authors)


class TestDistributions:
    def test_single_author(self):
        c = make_corpus({1: ("Maria Rossi", "")}, [])
        d = author_distributions(assign_author_ids(c))
        assert d == {"author_id": [1], "n_papers": [1], "citations_made": [0], "citations_received": [0]}

    def test_totals(self, toy_corpus):
        d = author_distributions(assign_author_ids(toy_corpus))
        assert sum(d["n_papers"]) == 9  # one authorless paper
        assert sum(d["citations_made"]) == sum(d["citations_received"]) == 11

    def test_proportional_correlation(self):
        c = make_corpus(
            {1: ("Alice A", ""), 2: ("Alice A", ""), 3: ("Bob B", "")},
            [(1, 3), (2, 3)],
        )
        # alice: 2 papers, 2 made, 0 received; bob: 1 paper, 0 made, 2 received
        r = author_correlations(assign_author_ids(c))
        assert r["r_papers_made"] == pytest.approx(1.0)
        assert r["r_papers_received"] == pytest.approx(-1.0)

    def test_constant_papers_degenerate(self):
        c = make_corpus({1: ("Alice A", ""), 2: ("Bob B", "")}, [(1, 2)])
        with pytest.raises(DegenerateVariance):
            author_correlations(assign_author_ids(c))


def test_link_averages(name_table):
    c = make_corpus(
        {1: ("Alice A", ""), 2: ("Alice A", ""), 3: ("Bob B", ""), 4: ("Carol C", ""), 5: ("", "")},
        [(1, 3), (2, 3), (1, 4), (3, 4), (4, 5), (2, 1)],
    )
    # author links: alice->bob, alice->carol, bob->carol (duplicate and self links collapse)
    la = link_averages(c, parse_authors(c))
    assert la["n_author_links"] == 3
    assert la["mean_in_links"] == pytest.approx(3 / 2)  # bob, carol
    assert la["mean_out_links"] == pytest.approx(3 / 2)  # alice, bob
