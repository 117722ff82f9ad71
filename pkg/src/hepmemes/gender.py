"""Given-name gender classification against a historical name table."""

from __future__ import annotations

import csv
import enum
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .authorship import AuthorName, first_authors, is_initial, normalize_name
from .corpus import CitationEdge, Corpus


class Gender(enum.Enum):
    FEMALE = "F"
    MALE = "M"
    UNKNOWN = "U"

    @property
    def known(self) -> bool:
        return self is not Gender.UNKNOWN


@dataclass(frozen=True)
class NameEntry:
    proportion_female: float
    observation_count: int


@dataclass
class NameGenderTable:
    entries: dict[str, NameEntry] = field(default_factory=dict)
    rows_malformed: int = 0

    def lookup(self, name: str) -> NameEntry | None:
        return self.entries.get(normalize_name(name))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class GenderConfig:
    threshold: float = 0.95
    min_count: int = 5

    def __post_init__(self):
        if not 0.5 < self.threshold <= 1.0:
            raise ValueError(f"threshold must be in (0.5, 1], got {self.threshold}")
        if self.min_count < 1:
            raise ValueError(f"min_count must be >= 1, got {self.min_count}")


def table_from_rows(rows) -> NameGenderTable:
    """Build a table from (name, proportion_female, count) triples.

    Repeated names are merged with a count-weighted mean of proportions.
    Rows that do not parse are counted in ``rows_malformed``.
    """
    sums: dict[str, list[tuple[float, int]]] = {}
    bad = 0
    for row in rows:
        try:
            name, prop, count = row[0], float(row[1]), int(float(row[2]))
        except (IndexError, ValueError, TypeError):
            bad += 1
            continue
        key = normalize_name(name)
        if not key or not 0.0 <= prop <= 1.0 or count < 1:
            bad += 1
            continue
        sums.setdefault(key, []).append((prop, count))
    entries = {}
    for key, obs in sums.items():
        n = sum(c for _, c in obs)
        prop = obs[0][0] if len(obs) == 1 else math.fsum(p * c for p, c in obs) / n
        entries[key] = NameEntry(proportion_female=prop, observation_count=n)
    return NameGenderTable(entries=dict(sorted(entries.items())), rows_malformed=bad)


def load_name_table(path: str | os.PathLike) -> NameGenderTable:
    """Read a ``name,proportion_female,count`` file (comma or tab separated, with header)."""
    with open(path, newline="", encoding="utf-8") as fh:
        first_line = fh.readline()
        fh.seek(0)
        reader = csv.reader(fh, delimiter="\t" if "\t" in first_line else ",")
        header = next(reader, None)
        if header is None:
            return NameGenderTable()
        cols = [h.strip().lower() for h in header]
        try:
            idx = (cols.index("name"), cols.index("proportion_female"), cols.index("count"))
        except ValueError:
            raise ValueError(f"{path}: header must contain name, proportion_female, count; got {header}") from None
        return table_from_rows(
            [row[idx[0]], row[idx[1]], row[idx[2]]] if len(row) > max(idx) else row for row in reader
        )


def convert_count_table(src: str | os.PathLike, dst: str | os.PathLike) -> int:
    """Convert a per-name count file into the name-table format.

    Accepts any CSV with a name column plus male and female count columns,
    e.g. ``Name,...,count.male,count.female,...`` (SSA-derived tables) or
    ``name,male,female``. Returns the number of rows written.
    """
    with open(src, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = {f.lower(): f for f in reader.fieldnames or []}
        name_col = fields.get("name")
        male_col = fields.get("count.male") or fields.get("male")
        female_col = fields.get("count.female") or fields.get("female")
        if not (name_col and male_col and female_col):
            raise ValueError(f"{src}: need name, male and female count columns, got {reader.fieldnames}")
        rows = []
        for row in reader:
            try:
                m = int(float(row[male_col]))
                f = int(float(row[female_col]))
            except (TypeError, ValueError):
                continue
            if m + f > 0:
                rows.append((row[name_col].strip().lower(), f / (m + f), m + f))
    Path(dst).parent.mkdir(parents=True, exist_ok=True)
    with open(dst, "w", newline="", encoding="utf-8") as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["name", "proportion_female", "count"])
        for name, prop, n in rows:
            writer.writerow([name, f"{prop:.6f}", n])
    return len(rows)


def classify_given_name(given: str, table: NameGenderTable, cfg: GenderConfig = GenderConfig()) -> Gender:
    if not given or is_initial(given):
        return Gender.UNKNOWN
    entry = table.lookup(given)
    if entry is None and "-" in given:
        # compound given names ("jean-pierre") fall back to their first part
        entry = table.lookup(given.split("-")[0])
    if entry is None or entry.observation_count < cfg.min_count:
        return Gender.UNKNOWN
    if entry.proportion_female >= cfg.threshold:
        return Gender.FEMALE
    if entry.proportion_female <= 1.0 - cfg.threshold:
        return Gender.MALE
    return Gender.UNKNOWN


def gender_of_name(name: AuthorName | None, table: NameGenderTable, cfg: GenderConfig) -> Gender:
    if name is None:
        return Gender.UNKNOWN
    return classify_given_name(name.given, table, cfg)


def gender_of_paper(authors: list[AuthorName], table: NameGenderTable, cfg: GenderConfig = GenderConfig()) -> Gender:
    """Gender of the first author; Unknown for authorless papers."""
    return gender_of_name(authors[0] if authors else None, table, cfg)


def paper_genders(
    corpus: Corpus, authors: dict[int, list[AuthorName]], table: NameGenderTable, cfg: GenderConfig = GenderConfig()
) -> dict[int, Gender]:
    cache: dict[str, Gender] = {}
    out = {}
    for pid in corpus.papers:
        names = authors.get(pid) or []
        if not names:
            out[pid] = Gender.UNKNOWN
            continue
        given = names[0].given
        if given not in cache:
            cache[given] = classify_given_name(given, table, cfg)
        out[pid] = cache[given]
    return out


def gendered_papers(genders: dict[int, Gender]) -> frozenset[int]:
    return frozenset(p for p, g in genders.items() if g.known)


def gendered_link_filter(corpus: Corpus, genders: dict[int, Gender]) -> frozenset[CitationEdge]:
    return frozenset(
        e for e in corpus.graph.edges
        if genders.get(e.citing, Gender.UNKNOWN).known and genders.get(e.cited, Gender.UNKNOWN).known
    )


def first_author_activity(
    corpus: Corpus, firsts: dict[int, AuthorName], genders: dict[int, Gender]
) -> dict[str, tuple[Gender, bool, bool]]:
    """Distinct first author -> (gender, has a citing paper, has a cited paper)."""
    out: dict[str, list] = {}
    g = corpus.graph
    for pid, name in firsts.items():
        entry = out.setdefault(name.normalized_full, [genders.get(pid, Gender.UNKNOWN), False, False])
        entry[1] = entry[1] or g.out_degree(pid) > 0
        entry[2] = entry[2] or g.in_degree(pid) > 0
    return {k: tuple(v) for k, v in out.items()}  # type: ignore[misc]


def _pct(part: int, whole: int) -> float:
    return 100.0 * part / whole if whole else 0.0


def gender_coverage_report(
    corpus: Corpus, authors: dict[int, list[AuthorName]], genders: dict[int, Gender]
) -> dict[str, float]:
    firsts = first_authors(authors)
    n_papers = len(corpus.papers)
    gendered = gendered_papers(genders)
    links = gendered_link_filter(corpus, genders)
    activity = first_author_activity(corpus, firsts, genders)
    gendered_authors = [v for v in activity.values() if v[0].known]

    def split(flag: int) -> tuple[int, int]:
        f = sum(1 for v in gendered_authors if v[flag] and v[0] is Gender.FEMALE)
        m = sum(1 for v in gendered_authors if v[flag] and v[0] is Gender.MALE)
        return f, m

    f_citing, m_citing = split(1)
    f_cited, m_cited = split(2)
    return {
        "pct_gendered_papers": _pct(len(gendered), n_papers),
        "pct_gendered_links": _pct(len(links), len(corpus.graph)),
        "avg_papers_per_gendered_author": len(gendered) / len(gendered_authors) if gendered_authors else 0.0,
        "pct_female_citing": _pct(f_citing, f_citing + m_citing),
        "pct_male_citing": _pct(m_citing, f_citing + m_citing),
        "pct_female_cited": _pct(f_cited, f_cited + m_cited),
        "pct_male_cited": _pct(m_cited, f_cited + m_cited),
    }
