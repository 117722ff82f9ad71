"""Abstract tokenization, word-frequency ranking and meme carrier indexes."""

from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Literal

from .corpus import Corpus

_TEX_MACRO_RE = re.compile(r"\\[A-Za-z]+")
_NON_TOKEN_RE = re.compile(r"[^a-z0-9]+")

Mode = Literal["occurrences", "papers"]


class EmptyUniverse(ValueError):
    pass


class UnknownMeme(KeyError):
    pass


def tokenize_abstract(text: str) -> list[str]:
    text = _TEX_MACRO_RE.sub("", text).casefold()
    return _NON_TOKEN_RE.sub(" ", text).split()


def _read_word_lines(lines: Iterable[str]) -> list[str]:
    words = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            words.append(line.casefold())
    return words


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]

    def __contains__(self, token: str) -> bool:
        return token in self.words

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> StopwordList:
        with open(path, encoding="utf-8") as fh:
            return cls.from_words(_read_word_lines(fh))

    @classmethod
    def from_words(cls, words: Iterable[str]) -> StopwordList:
        words = set(words)
        bad = sorted(w for w in words if tokenize_abstract(w) != [w])
        if bad:
            raise ValueError(f"stopwords that are not single tokens: {bad[:10]}")
        return cls(frozenset(words))

    @classmethod
    def default(cls) -> StopwordList:
        text = resources.files("hepmemes.data").joinpath("stopwords_en.txt").read_text(encoding="utf-8")
        return cls.from_words(_read_word_lines(text.splitlines()))


@dataclass(frozen=True)
class MemeLexicon:
    memes: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.memes)) != len(self.memes):
            raise ValueError("duplicate memes in lexicon")
        bad = [m for m in self.memes if tokenize_abstract(m) != [m]]
        if bad:
            raise ValueError(f"memes that do not survive tokenization: {bad}")

    def __iter__(self):
        return iter(self.memes)

    def __len__(self) -> int:
        return len(self.memes)

    def __contains__(self, meme: str) -> bool:
        return meme in self.memes

    @classmethod
    def from_file(cls, path: str | os.PathLike) -> MemeLexicon:
        with open(path, encoding="utf-8") as fh:
            return cls(tuple(_read_word_lines(fh)))

    @classmethod
    def default(cls) -> MemeLexicon:
        """The 40 high-energy-physics memes of the hep-th study."""
        text = resources.files("hepmemes.data").joinpath("memes.txt").read_text(encoding="utf-8")
        return cls(tuple(_read_word_lines(text.splitlines())))


def paper_tokens(corpus: Corpus, include_title: bool = False) -> dict[int, list[str]]:
    out = {}
    for pid, rec in corpus.papers.items():
        text = f"{rec.title} {rec.abstract}" if include_title else rec.abstract
        out[pid] = tokenize_abstract(text)
    return out


def word_frequency_ranking(
    corpus: Corpus,
    universe: Iterable[int] | None = None,
    stopwords: StopwordList | None = None,
    mode: Mode = "papers",
    *,
    tokens: dict[int, list[str]] | None = None,
) -> list[tuple[str, int]]:
    """Rank non-stopword tokens by count, highest first, ties alphabetical.

    ``mode="papers"`` counts distinct papers containing the token;
    ``mode="occurrences"`` counts every occurrence.
    """
    if mode not in ("papers", "occurrences"):
        raise ValueError(f"unknown mode {mode!r}")
    tokens = tokens if tokens is not None else paper_tokens(corpus)
    stop = stopwords.words if stopwords is not None else frozenset()
    universe = corpus.papers.keys() if universe is None else universe
    counts: Counter[str] = Counter()
    for pid in universe:
        toks = tokens.get(pid, [])
        counts.update(set(toks) if mode == "papers" else toks)
    for w in stop & counts.keys():
        del counts[w]
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


@dataclass(frozen=True)
class CarrierIndex:
    universe: frozenset[int]
    carriers: dict[str, frozenset[int]]

    @property
    def memes(self) -> list[str]:
        return list(self.carriers)

    def __getitem__(self, meme: str) -> frozenset[int]:
        try:
            return self.carriers[meme]
        except KeyError:
            raise UnknownMeme(meme) from None

    def restrict(self, universe: Iterable[int]) -> CarrierIndex:
        u = frozenset(universe) & self.universe
        return CarrierIndex(universe=u, carriers={m: c & u for m, c in self.carriers.items()})


def build_carrier_index(
    corpus: Corpus,
    universe: Iterable[int] | None,
    lexicon: MemeLexicon | Iterable[str],
    *,
    tokens: dict[int, list[str]] | None = None,
) -> CarrierIndex:
    tokens = tokens if tokens is not None else paper_tokens(corpus)
    uni = corpus.ids if universe is None else frozenset(universe)
    memes = list(lexicon)
    wanted = set(memes)
    found: dict[str, set[int]] = {m: set() for m in memes}
    for pid in uni:
        for tok in wanted.intersection(tokens.get(pid, ())):
            found[tok].add(pid)
    return CarrierIndex(universe=uni, carriers={m: frozenset(found[m]) for m in memes})


def relative_frequency(index: CarrierIndex, meme: str) -> float:
    carriers = index[meme]
    if not index.universe:
        raise EmptyUniverse("relative frequency over an empty universe")
    return len(carriers) / len(index.universe)


def select_memes_above(index: CarrierIndex, threshold: float) -> list[str]:
    """Memes whose relative frequency is strictly above ``threshold``, most frequent first."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be in [0, 1], got {threshold}")
    if not index.universe:
        return []
    freqs = {m: relative_frequency(index, m) for m in index.memes}
    order = {m: i for i, m in enumerate(index.memes)}
    chosen = [m for m, f in freqs.items() if f > threshold]
    return sorted(chosen, key=lambda m: (-freqs[m], order[m]))
