from __future__ import annotations

import re
from pathlib import Path

import pytest

from hepmemes.corpus import CitationEdge, IngestReport, PaperRecord, build_corpus
from hepmemes.gender import table_from_rows

FIXTURES = Path(__file__).parent / "fixtures"

ABS_TEMPLATE = """\
------------------------------------------------------------------------------
\\\\
Paper: hep-th/{id:07d}
From: someone@example.org
Date: Mon, 1 Feb 1993 00:00:00 GMT   (1kb)

Title: {title}
{authors_line}Comments: 1 page
\\\\
  {abstract}
\\\\
"""


def abs_text(pid: int, authors: str, abstract: str, title: str = "Untitled") -> str:
    authors_line = f"Authors: {authors}\n" if authors else ""
    return ABS_TEMPLATE.format(id=pid, title=title, authors_line=authors_line, abstract=abstract)


def make_corpus(papers: dict[int, tuple[str, str]], edges: list[tuple[int, int]]):
    """papers: id -> (authors_raw, abstract)."""
    records = [PaperRecord(id=p, title="", authors_raw=a, abstract=t) for p, (a, t) in papers.items()]
    return build_corpus(records, [CitationEdge(a, b) for a, b in edges], report=IngestReport())


# Names used by the toy corpora below; proportions are chosen so the
# default 0.95 threshold classifies them unambiguously.
TOY_NAMES = [
    ("maria", 0.996, 51234),
    ("anna", 0.99, 20000),
    ("elena", 0.995, 8000),
    ("john", 0.004, 90000),
    ("peter", 0.003, 40000),
    ("paul", 0.004, 30000),
    ("kim", 0.6, 10000),
    ("rare", 1.0, 2),
]


@pytest.fixture
def name_table():
    return table_from_rows(TOY_NAMES)


TOY_PAPERS = {
    9301001: ("Maria Rossi", "gauge string space spin"),
    9301002: ("John Smith and Anna Bell", "gauge space brane"),
    9301003: ("Maria Rossi", "string spin space"),
    9301004: ("Peter Pan", "gauge quantum spin"),
    9301005: ("A. Nonymous", "space quantum"),
    9301006: ("Paul Dirac", "spin string gauge"),
    9301007: ("", "space gauge"),
    9301008: ("Elena Ferrari", "quantum string"),
    9301009: ("John Smith", "brane space spin"),
    9301010: ("Kim Lee", "space"),
}
TOY_EDGES = [
    (9301003, 9301001),
    (9301002, 9301001),
    (9301004, 9301002),
    (9301006, 9301004),
    (9301006, 9301003),
    (9301008, 9301006),
    (9301009, 9301002),
    (9301009, 9301007),
    (9301010, 9301005),
    (9301005, 9301001),
    (9301008, 9301003),
    (9301004, 9301001),
]


@pytest.fixture
def toy_corpus():
    return make_corpus(TOY_PAPERS, TOY_EDGES)


def write_toy_dataset(root: Path) -> dict[str, Path]:
    """Write the toy corpus in SNAP layout, plus a name table."""
    abs_dir = root / "cit-HepTh-abstracts"
    (abs_dir / "1993").mkdir(parents=True)
    for pid, (authors, abstract) in TOY_PAPERS.items():
        (abs_dir / "1993" / f"{pid:07d}.abs").write_text(abs_text(pid, authors, abstract))
    edges = root / "cit-HepTh.txt"
    lines = ["# Directed graph (each unordered pair of nodes is saved once): Cit-HepTh.txt", "# FromNodeId\tToNodeId"]
    lines += [f"{a}\t{b}" for a, b in TOY_EDGES]
    edges.write_text("\n".join(lines) + "\n")
    names = root / "names.csv"
    names.write_text("name,proportion_female,count\n" + "".join(f"{n},{p},{c}\n" for n, p, c in TOY_NAMES))
    return {"abstracts": abs_dir, "edges": edges, "names": names}


@pytest.fixture
def toy_dataset(tmp_path):
    return write_toy_dataset(tmp_path)


_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION_RE.search(report.nodeid)
    if not m:
        return
    n, label = int(m.group(1)), m.group(2).replace("_", " ")
    if report.failed:
        _criteria[n] = (label, "FAIL")
    elif report.when == "call" and n not in _criteria:
        _criteria[n] = (label, "PASS" if report.passed else "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        label, outcome = _criteria[n]
        terminalreporter.write_line(f"criterion {n:>2}: {outcome}  {label}")
