"""Author-field splitting, name normalization and first-author identities."""

from __future__ import annotations

import re
import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field

from .corpus import Corpus

# TeX macros that stand for letters (\i, \o, \ss, ...) become those letters;
# every other macro is an accent or decoration and is dropped.
_TEX_LETTERS = {
    "i": "i", "j": "j", "o": "o", "O": "O", "l": "l", "L": "L", "ss": "ss",
    "ae": "ae", "AE": "AE", "oe": "oe", "OE": "OE", "aa": "a", "AA": "A",
}
_TEX_LETTER_RE = re.compile(r"\\(ss|ae|AE|oe|OE|aa|AA|[ijoOlL])(?![A-Za-z]) ?")
_TEX_ACCENT_WORD_RE = re.compile(r"\\[A-Za-z]+ ?")
_TEX_ACCENT_RE = re.compile(r"\\[^A-Za-z\s]")
_SPLIT_RE = re.compile(r"\s*(?:,|;|&|\band\b)\s*")
_INITIAL_RE = re.compile(r"^(?:[^\W\d_]\.?-?)+$")


@dataclass(frozen=True)
class AuthorName:
    given: str
    family: str
    normalized_full: str


def strip_parenthesized(text: str) -> str:
    """Remove (...) segments, nested ones included; an unclosed '(' cuts to the end, a stray ')' is dropped."""
    out = []
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif depth == 0:
            out.append(ch)
    return "".join(out)


def normalize_name(fragment: str) -> str:
    text = _TEX_LETTER_RE.sub(lambda m: _TEX_LETTERS[m.group(1)], fragment)
    text = _TEX_ACCENT_WORD_RE.sub("", text)
    text = _TEX_ACCENT_RE.sub("", text)
    text = text.replace("{", "").replace("}", "").replace("~", " ")
    text = unicodedata.normalize("NFKD", text)
    text = "".join(ch for ch in text if not unicodedata.combining(ch))
    return " ".join(text.casefold().split())


def is_initial(token: str) -> bool:
    """True for "j.", "J", "j.-b.", "ph." and similar abbreviations."""
    if not token:
        return True
    if token.endswith("."):
        return True
    return bool(_INITIAL_RE.match(token)) and sum(ch.isalpha() for ch in token) <= 1


def make_author_name(fragment: str) -> AuthorName:
    full = normalize_name(fragment)
    tokens = full.split(" ")
    if len(tokens) >= 2 and not is_initial(tokens[0]) and any(ch.isalpha() for ch in tokens[0]):
        return AuthorName(given=tokens[0], family=" ".join(tokens[1:]), normalized_full=full)
    return AuthorName(given="", family=full, normalized_full=full)


def split_author_field(authors_raw: str) -> list[AuthorName]:
    cleaned = strip_parenthesized(authors_raw)
    names = []
    for frag in _SPLIT_RE.split(cleaned):
        frag = frag.strip()
        if not frag:
            continue
        name = make_author_name(frag)
        if name.normalized_full:
            names.append(name)
    return names


def parse_authors(corpus: Corpus) -> dict[int, list[AuthorName]]:
    return {pid: split_author_field(rec.authors_raw) for pid, rec in corpus.papers.items()}


def first_authors(authors: dict[int, list[AuthorName]]) -> dict[int, AuthorName]:
    """Paper id -> first author, for papers that have one."""
    return {pid: names[0] for pid, names in authors.items() if names}


@dataclass
class AuthorRecord:
    author_id: int
    name: AuthorName
    papers_first_authored: set[int] = field(default_factory=set)
    citations_made: int = 0
    citations_received: int = 0

    @property
    def n_papers(self) -> int:
        return len(self.papers_first_authored)


def assign_author_ids(corpus: Corpus, authors: dict[int, list[AuthorName]] | None = None) -> dict[int, AuthorRecord]:
    """One record per distinct first-author name, numbered 1.. in alphabetical order.

    Citation totals only count edges whose both endpoints have a first
    author, so made and received sum to the same number.
    """
    if authors is None:
        authors = parse_authors(corpus)
    firsts = first_authors(authors)
    by_name: dict[str, set[int]] = defaultdict(set)
    name_of: dict[str, AuthorName] = {}
    for pid, name in firsts.items():
        by_name[name.normalized_full].add(pid)
        name_of.setdefault(name.normalized_full, name)

    records: dict[int, AuthorRecord] = {}
    id_of: dict[str, int] = {}
    for i, full in enumerate(sorted(by_name), start=1):
        records[i] = AuthorRecord(author_id=i, name=name_of[full], papers_first_authored=by_name[full])
        id_of[full] = i

    for citing, cited in corpus.graph.edges:
        a = firsts.get(citing)
        b = firsts.get(cited)
        if a is None or b is None:
            continue
        records[id_of[a.normalized_full]].citations_made += 1
        records[id_of[b.normalized_full]].citations_received += 1
    return records
