"""Parsing of the SNAP hep-th abstracts tree and citation edge list."""

from __future__ import annotations

import json
import os
import re
import tarfile
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

ARCHIVE = "hep-th"
ID_DIGITS = 7

_DELIMITER = "\\\\"
_FIELD_RE = re.compile(r"^([A-Za-z][A-Za-z-]*)(?:\s*\([^)]*\))?:\s?(.*)$")
_PAPER_ID_RE = re.compile(r"^([a-z-]+(?:\.[A-Za-z-]+)?)/(\d+)$")


class IngestError(Exception):
    """Base class for per-record / per-line ingest failures."""


class MalformedRecord(IngestError):
    pass


class InvalidPaperId(IngestError):
    pass


class MalformedLine(IngestError):
    pass


def parse_paper_id(code: str) -> int:
    """Return the canonical integer id for ``hep-th/NNNNNNN``.

    Leading zeros are dropped so the result joins with the edge list,
    which stores ``hep-th/0001001`` as ``1001``.
    """
    m = _PAPER_ID_RE.match(code.strip())
    if m is None:
        raise InvalidPaperId(f"not an arXiv paper code: {code!r}")
    archive, digits = m.groups()
    if archive != ARCHIVE:
        raise InvalidPaperId(f"archive {archive!r} is not {ARCHIVE!r}: {code!r}")
    if len(digits) != ID_DIGITS:
        raise InvalidPaperId(f"expected {ID_DIGITS} digits: {code!r}")
    value = int(digits)
    if value <= 0:
        raise InvalidPaperId(f"zero paper number: {code!r}")
    return value


def format_paper_id(value: int) -> str:
    if not 0 < value < 10**ID_DIGITS:
        raise InvalidPaperId(f"paper id out of range: {value}")
    return f"{ARCHIVE}/{value:0{ID_DIGITS}d}"


@dataclass(frozen=True)
class PaperRecord:
    id: int
    title: str
    authors_raw: str
    abstract: str
    date_raw: str = ""


class CitationEdge(NamedTuple):
    citing: int
    cited: int


@dataclass
class IngestReport:
    records_parsed: int = 0
    records_skipped: int = 0
    skipped: list[tuple[str, str]] = field(default_factory=list)
    lines_malformed: int = 0
    edges_read: int = 0
    edges_retained: int = 0
    dropped_unknown_endpoint: int = 0
    dropped_self_loop: int = 0
    duplicates: int = 0

    def reconciles(self) -> bool:
        return self.edges_read == (
            self.edges_retained
            + self.dropped_unknown_endpoint
            + self.dropped_self_loop
            + self.duplicates
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["skipped"] = [list(s) for s in self.skipped]
        return d


class CitationGraph:
    """Directed paper -> paper citations with both adjacency directions."""

    def __init__(self, edges: Iterable[CitationEdge] = ()):
        self.edges: frozenset[CitationEdge] = frozenset(edges)
        out_adj: dict[int, set[int]] = defaultdict(set)
        in_adj: dict[int, set[int]] = defaultdict(set)
        for citing, cited in self.edges:
            out_adj[citing].add(cited)
            in_adj[cited].add(citing)
        self.out_adjacency: dict[int, frozenset[int]] = {k: frozenset(v) for k, v in out_adj.items()}
        self.in_adjacency: dict[int, frozenset[int]] = {k: frozenset(v) for k, v in in_adj.items()}

    def __len__(self) -> int:
        return len(self.edges)

    def out_degree(self, paper: int) -> int:
        return len(self.out_adjacency.get(paper, ()))

    def in_degree(self, paper: int) -> int:
        return len(self.in_adjacency.get(paper, ()))

    def sorted_edges(self) -> list[CitationEdge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class Corpus:
    papers: dict[int, PaperRecord]
    graph: CitationGraph
    report: IngestReport

    @property
    def ids(self) -> frozenset[int]:
        return frozenset(self.papers)


# --- abstracts -------------------------------------------------------------


def _sections(text: str) -> list[list[str]]:
    sections: list[list[str]] = [[]]
    n_delims = 0
    for line in text.splitlines():
        if line.strip() == _DELIMITER:
            n_delims += 1
            sections.append([])
        else:
            sections[-1].append(line)
    if n_delims < 2:
        raise MalformedRecord(f"expected at least two '\\\\' delimiters, found {n_delims}")
    return sections


def _header_fields(lines: list[str]) -> dict[str, str]:
    fields: dict[str, list[str]] = {}
    current: str | None = None
    for line in lines:
        if not line.strip():
            current = None
            continue
        m = _FIELD_RE.match(line)
        if m and not line[0].isspace():
            current = m.group(1).lower()
            fields.setdefault(current, []).append(m.group(2).strip())
        elif current is not None and line[0].isspace():
            fields[current].append(line.strip())
    return {k: " ".join(p for p in v if p) for k, v in fields.items()}


def parse_abstract_record(text: str) -> PaperRecord:
    """Parse the contents of one ``.abs`` file.

    Raises MalformedRecord when the layout is broken and InvalidPaperId
    when the paper code is not a 7-digit hep-th code.
    """
    sections = _sections(text)
    header_at = None
    for i, sec in enumerate(sections[:-1]):
        if "paper" in _header_fields(sec):
            header_at = i
            break
    if header_at is None:
        raise MalformedRecord("no 'Paper:' field")
    fields = _header_fields(sections[header_at])
    body = sections[header_at + 1]
    return PaperRecord(
        id=parse_paper_id(fields["paper"]),
        title=fields.get("title", ""),
        authors_raw=fields.get("authors", fields.get("author", "")),
        abstract=" ".join(" ".join(body).split()),
        date_raw=fields.get("date", ""),
    )


def _decode(raw: bytes) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        return raw.decode("latin-1")


def _parse_one(item: tuple[str, bytes]) -> tuple[str, PaperRecord | None, str]:
    name, raw = item
    try:
        return name, parse_abstract_record(_decode(raw)), ""
    except IngestError as exc:
        return name, None, f"{type(exc).__name__}: {exc}"


def _iter_abs_files(path: Path) -> Iterable[tuple[str, bytes]]:
    if path.is_dir():
        for root, dirs, files in os.walk(path):
            dirs.sort()
            for fname in sorted(files):
                if fname.endswith(".abs"):
                    full = Path(root) / fname
                    yield str(full.relative_to(path)), full.read_bytes()
    elif tarfile.is_tarfile(path):
        with tarfile.open(path) as tar:
            for member in tar:
                if member.isfile() and member.name.endswith(".abs"):
                    fh = tar.extractfile(member)
                    if fh is not None:
                        yield member.name, fh.read()
    else:
        raise OSError(f"not a directory or tar archive: {path}")


def parse_abstract_archive(
    path: str | os.PathLike, *, report: IngestReport | None = None, workers: int = 1
) -> list[PaperRecord]:
    """Parse every ``.abs`` file under a directory tree or inside a tarball.

    Bad files are skipped and recorded in ``report``. Records come back in
    ascending id order whatever the worker count. A repeated id keeps the
    first file in path order; later copies count as skipped.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"abstracts path does not exist: {path}")
    report = report if report is not None else IngestReport()
    items = list(_iter_abs_files(path))
    if workers == 1 or len(items) < 2:
        results = [_parse_one(it) for it in items]
    else:
        with ThreadPoolExecutor(max_workers=workers or None) as pool:
            results = list(pool.map(_parse_one, items, chunksize=256))

    by_id: dict[int, PaperRecord] = {}
    for name, rec, err in sorted(results, key=lambda r: r[0]):
        if rec is None:
            report.records_skipped += 1
            report.skipped.append((name, err))
        elif rec.id in by_id:
            report.records_skipped += 1
            report.skipped.append((name, f"DuplicateId: {format_paper_id(rec.id)}"))
        else:
            by_id[rec.id] = rec
    report.records_parsed += len(by_id)
    return [by_id[k] for k in sorted(by_id)]


# --- edges -----------------------------------------------------------------


def parse_edge_line(line: str) -> CitationEdge | None:
    """Parse one data line; None for blanks and '#' comments."""
    stripped = line.strip()
    if not stripped or stripped.startswith("#"):
        return None
    parts = stripped.split()
    if len(parts) != 2:
        raise MalformedLine(f"expected two columns: {line!r}")
    try:
        citing, cited = int(parts[0]), int(parts[1])
    except ValueError:
        raise MalformedLine(f"non-integer node id: {line!r}") from None
    if citing <= 0 or cited <= 0:
        raise MalformedLine(f"non-positive node id: {line!r}")
    return CitationEdge(citing, cited)


def parse_edge_list(path: str | os.PathLike, *, report: IngestReport | None = None) -> list[CitationEdge]:
    report = report if report is not None else IngestReport()
    path = Path(path)
    opener = open
    if path.suffix == ".gz":
        import gzip

        opener = gzip.open  # type: ignore[assignment]
    edges: list[CitationEdge] = []
    with opener(path, "rt", encoding="ascii", errors="replace") as fh:
        for line in fh:
            try:
                edge = parse_edge_line(line)
            except MalformedLine:
                report.lines_malformed += 1
                continue
            if edge is not None:
                edges.append(edge)
    report.edges_read += len(edges)
    return edges


def build_corpus(
    records: Iterable[PaperRecord],
    edges: Iterable[CitationEdge],
    *,
    report: IngestReport | None = None,
) -> Corpus:
    report = report if report is not None else IngestReport()
    papers = {r.id: r for r in sorted(records, key=lambda r: r.id)}
    kept: set[CitationEdge] = set()
    n_read = 0
    for edge in edges:
        n_read += 1
        if edge.citing not in papers or edge.cited not in papers:
            report.dropped_unknown_endpoint += 1
        elif edge.citing == edge.cited:
            report.dropped_self_loop += 1
        elif edge in kept:
            report.duplicates += 1
        else:
            kept.add(edge)
    report.edges_read = n_read
    report.records_parsed = len(papers)
    report.edges_retained = len(kept)
    return Corpus(papers=papers, graph=CitationGraph(kept), report=report)


def citing_cited_summary(corpus: Corpus, universe: Iterable[int] | None = None) -> dict[str, int]:
    """Citing / cited paper counts, using only edges inside ``universe``."""
    universe = corpus.ids if universe is None else frozenset(universe)
    citing: set[int] = set()
    cited: set[int] = set()
    for a, b in corpus.graph.edges:
        if a in universe and b in universe:
            citing.add(a)
            cited.add(b)
    return {
        "n_citing": len(citing),
        "n_cited": len(cited),
        "n_union": len(citing | cited),
        "n_intersection": len(citing & cited),
    }


# --- snapshot --------------------------------------------------------------

SNAPSHOT_RECORDS = "corpus.jsonl"
SNAPSHOT_EDGES = "edges.tsv"
SNAPSHOT_REPORT = "ingest_report.json"


def write_snapshot(corpus: Corpus, directory: str | os.PathLike) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    with open(directory / SNAPSHOT_RECORDS, "w", encoding="utf-8", newline="\n") as fh:
        for rec in corpus.papers.values():
            obj = {"id": rec.id, "title": rec.title, "authors_raw": rec.authors_raw, "abstract": rec.abstract}
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
    with open(directory / SNAPSHOT_EDGES, "w", encoding="ascii", newline="\n") as fh:
        fh.write("# citing\tcited\n")
        for a, b in corpus.graph.sorted_edges():
            fh.write(f"{a}\t{b}\n")
    with open(directory / SNAPSHOT_REPORT, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(corpus.report.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_snapshot(directory: str | os.PathLike) -> Corpus:
    directory = Path(directory)
    records = []
    with open(directory / SNAPSHOT_RECORDS, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                obj = json.loads(line)
                records.append(
                    PaperRecord(id=obj["id"], title=obj["title"], authors_raw=obj["authors_raw"], abstract=obj["abstract"])
                )
    edges = parse_edge_list(directory / SNAPSHOT_EDGES)
    report = IngestReport()
    report_path = directory / SNAPSHOT_REPORT
    if report_path.exists():
        saved = json.loads(report_path.read_text(encoding="utf-8"))
        saved["skipped"] = [tuple(s) for s in saved.get("skipped", [])]
        report = IngestReport(**saved)
    papers = {r.id: r for r in sorted(records, key=lambda r: r.id)}
    return Corpus(papers=papers, graph=CitationGraph(edges), report=report)


def load_corpus(abstracts: str | os.PathLike, edges: str | os.PathLike, *, workers: int = 1) -> Corpus:
    report = IngestReport()
    records = parse_abstract_archive(abstracts, report=report, workers=workers)
    edge_list = parse_edge_list(edges, report=report)
    return build_corpus(records, edge_list, report=report)
