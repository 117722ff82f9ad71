import tarfile

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FIXTURES, abs_text, make_corpus
from hepmemes.corpus import (
    CitationEdge,
    IngestReport,
    InvalidPaperId,
    MalformedRecord,
    PaperRecord,
    build_corpus,
    citing_cited_summary,
    format_paper_id,
    load_corpus,
    parse_abstract_archive,
    parse_abstract_record,
    parse_edge_list,
    parse_paper_id,
    read_snapshot,
    write_snapshot,
)

ABS = FIXTURES / "abs"


class TestPaperId:
    def test_examples(self):
        assert parse_paper_id("hep-th/9301001") == 9301001
        assert parse_paper_id("hep-th/0001001") == 1001

    @pytest.mark.parametrize("code", ["hep-ph/9301001", "hep-th/930100", "hep-th/93010011", "9301001", "hep-th/0000000"])
    def test_rejects(self, code):
        with pytest.raises(InvalidPaperId):
            parse_paper_id(code)

    @given(st.integers(min_value=1, max_value=9_999_999))
    def test_round_trip(self, value):
        code = format_paper_id(value)
        assert len(code) == len("hep-th/") + 7
        assert parse_paper_id(code) == value


class TestParseRecord:
    def test_normal_golden(self):
        rec = parse_abstract_record((ABS / "normal.abs").read_text())
        assert rec == PaperRecord(
            id=9201001,
            title="Non-Abelian Gauge Fields on the Torus and Chern-Simons Terms",
            authors_raw="Maria Rossi and J.-B. Zuber (CERN, Geneva (Switzerland)), Jos\\'e Garc\\'{\\i}a",
            abstract=(
                "We study non-Abelian gauge fields on the torus and the \\alpha' corrections "
                "to the string spectrum. Supersymmetry is broken."
            ),
            date_raw="Tue, 31 Dec 1991 22:32:35 GMT   (9kb)",
        )

    def test_authorless_golden(self):
        rec = parse_abstract_record((ABS / "authorless.abs").read_text())
        assert rec.id == 1001
        assert rec.authors_raw == ""
        assert rec.title == "A Paper Without Authors"
        assert rec.abstract == "Brane world gravity."

    def test_empty_abstract_golden(self):
        rec = parse_abstract_record((ABS / "empty_abstract.abs").read_text())
        assert rec.id == 9305012
        assert rec.abstract == ""
        assert rec.authors_raw == "Anna Smith"

    def test_malformed(self):
        with pytest.raises(MalformedRecord):
            parse_abstract_record((ABS / "malformed.abs").read_text())

    def test_missing_paper_field(self):
        with pytest.raises(MalformedRecord, match="Paper"):
            parse_abstract_record("\\\\\nTitle: x\n\\\\\nbody\n\\\\\n")

    def test_other_archive(self):
        with pytest.raises(InvalidPaperId):
            parse_abstract_record((ABS / "crosslist.abs").read_text())

    def test_header_without_leading_dashes(self):
        rec = parse_abstract_record("\\\\\nPaper: hep-th/9912345\nAuthors: A B\n\\\\\n  text\n  more\n\\\\\n")
        assert (rec.id, rec.authors_raw, rec.abstract) == (9912345, "A B", "text more")


class TestArchive:
    def test_empty_directory(self, tmp_path):
        report = IngestReport()
        assert parse_abstract_archive(tmp_path, report=report) == []
        assert report.records_skipped == 0

    def test_one_valid_one_malformed(self, tmp_path):
        (tmp_path / "1993").mkdir()
        (tmp_path / "1993" / "9301001.abs").write_text(abs_text(9301001, "Maria Rossi", "gauge"))
        (tmp_path / "1993" / "9301002.abs").write_text((ABS / "malformed.abs").read_text())
        report = IngestReport()
        recs = parse_abstract_archive(tmp_path, report=report)
        assert [r.id for r in recs] == [9301001]
        assert report.records_skipped == 1
        assert report.skipped[0][0].endswith("9301002.abs")

    def test_fixture_dir_counts(self):
        report = IngestReport()
        recs = parse_abstract_archive(ABS, report=report)
        assert [r.id for r in recs] == [1001, 9201001, 9305012]
        assert report.records_skipped == 2

    def test_tarball_matches_directory(self, tmp_path):
        tar_path = tmp_path / "abs.tar.gz"
        with tarfile.open(tar_path, "w:gz") as tar:
            tar.add(ABS, arcname="cit-HepTh-abstracts")
        assert parse_abstract_archive(tar_path) == parse_abstract_archive(ABS)

    def test_parallel_same_order(self):
        assert parse_abstract_archive(ABS, workers=4) == parse_abstract_archive(ABS, workers=1)

    def test_missing_path(self, tmp_path):
        with pytest.raises(OSError):
            parse_abstract_archive(tmp_path / "nope")

    def test_duplicate_id_skipped(self, tmp_path):
        for d in ("1993", "1994"):
            (tmp_path / d).mkdir()
            (tmp_path / d / "9301001.abs").write_text(abs_text(9301001, "A B", d))
        report = IngestReport()
        recs = parse_abstract_archive(tmp_path, report=report)
        assert len(recs) == 1 and recs[0].abstract == "1993"
        assert report.records_skipped == 1


class TestEdgeList:
    def test_parse(self, tmp_path):
        f = tmp_path / "e.txt"
        f.write_text("# comment\n# FromNodeId\tToNodeId\n9907233\t9301253\n1001 9201001\n\n")
        assert parse_edge_list(f) == [CitationEdge(9907233, 9301253), CitationEdge(1001, 9201001)]

    def test_only_comments(self, tmp_path):
        f = tmp_path / "e.txt"
        f.write_text("# a\n# b\n")
        assert parse_edge_list(f) == []

    def test_malformed_lines_counted(self, tmp_path):
        f = tmp_path / "e.txt"
        f.write_text("1\t2\nx\t3\n4\n5 6 7\n8\t9\n")
        report = IngestReport()
        assert parse_edge_list(f, report=report) == [CitationEdge(1, 2), CitationEdge(8, 9)]
        assert report.lines_malformed == 3
        assert report.edges_read == 2

    def test_gzip(self, tmp_path):
        import gzip

        f = tmp_path / "e.txt.gz"
        with gzip.open(f, "wt") as fh:
            fh.write("# c\n1\t2\n")
        assert parse_edge_list(f) == [CitationEdge(1, 2)]

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            parse_edge_list(tmp_path / "none.txt")


class TestBuildCorpus:
    def test_filtering_and_reconciliation(self):
        recs = [PaperRecord(i, "", "", "") for i in (1, 2, 3)]
        edges = [CitationEdge(*e) for e in [(1, 2), (1, 2), (2, 3), (3, 3), (3, 99), (98, 1)]]
        c = build_corpus(recs, edges)
        r = c.report
        assert sorted(c.graph.edges) == [(1, 2), (2, 3)]
        assert (r.edges_read, r.edges_retained, r.duplicates, r.dropped_self_loop, r.dropped_unknown_endpoint) == (6, 2, 1, 1, 2)
        assert r.reconciles()

    def test_adjacency_degree_sums(self, toy_corpus):
        g = toy_corpus.graph
        assert sum(len(v) for v in g.out_adjacency.values()) == len(g.edges)
        assert sum(len(v) for v in g.in_adjacency.values()) == len(g.edges)

    def test_every_endpoint_has_record(self, toy_corpus):
        for a, b in toy_corpus.graph.edges:
            assert a in toy_corpus.papers and b in toy_corpus.papers


class TestCitingCitedSummary:
    def test_chain(self):
        c = make_corpus({1: ("", ""), 2: ("", ""), 3: ("", "")}, [(1, 2), (2, 3)])
        assert citing_cited_summary(c) == {"n_citing": 2, "n_cited": 2, "n_union": 3, "n_intersection": 1}

    def test_isolated(self):
        c = make_corpus({1: ("", "")}, [])
        assert citing_cited_summary(c, {1}) == {"n_citing": 0, "n_cited": 0, "n_union": 0, "n_intersection": 0}

    def test_universe_restricts_edges(self):
        c = make_corpus({1: ("", ""), 2: ("", ""), 3: ("", "")}, [(1, 2), (2, 3)])
        assert citing_cited_summary(c, {2, 3}) == {"n_citing": 1, "n_cited": 1, "n_union": 2, "n_intersection": 0}


@st.composite
def graphs_with_nested_universes(draw):
    n = draw(st.integers(1, 25))
    ids = list(range(1, n + 1))
    edges = draw(st.lists(st.tuples(st.sampled_from(ids), st.sampled_from(ids)), max_size=60))
    big = draw(st.sets(st.sampled_from(ids)))
    small = draw(st.sets(st.sampled_from(sorted(big)))) if big else set()
    return ids, edges, small, big


@settings(max_examples=200, deadline=None)
@given(graphs_with_nested_universes())
def test_summary_monotone_and_union_identity(data):
    ids, edges, small, big = data
    c = make_corpus({i: ("", "") for i in ids}, edges)
    s_small = citing_cited_summary(c, small)
    s_big = citing_cited_summary(c, big)
    for k in s_small:
        assert s_small[k] <= s_big[k]
    for s in (s_small, s_big):
        assert s["n_union"] + s["n_intersection"] == s["n_citing"] + s["n_cited"]
    assert c.report.reconciles()


def test_snapshot_round_trip_and_determinism(toy_dataset, tmp_path):
    c1 = load_corpus(toy_dataset["abstracts"], toy_dataset["edges"], workers=1)
    c2 = load_corpus(toy_dataset["abstracts"], toy_dataset["edges"], workers=3)
    write_snapshot(c1, tmp_path / "s1")
    write_snapshot(c2, tmp_path / "s2")
    for name in ("corpus.jsonl", "edges.tsv", "ingest_report.json"):
        assert (tmp_path / "s1" / name).read_bytes() == (tmp_path / "s2" / name).read_bytes()
    back = read_snapshot(tmp_path / "s1")
    assert back.graph.edges == c1.graph.edges
    assert [(r.id, r.title, r.authors_raw, r.abstract) for r in back.papers.values()] == [
        (r.id, r.title, r.authors_raw, r.abstract) for r in c1.papers.values()
    ]
    assert back.report == c1.report
