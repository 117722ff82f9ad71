"""Meme propagation scores over (optionally gender-filtered) citation links.

For a meme m and a paper population U the score is

    P = (d_mm / d_to_m) / (d_mn / d_not_m)

where d_to_m counts papers in U citing at least one carrier of m, d_mm
those of them that also carry m, d_not_m the papers citing no carrier and
d_mn the carriers among them. Values above 1 mean that citing a carrier
goes with carrying the meme.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .corpus import CitationEdge, Corpus
from .correlation import InsufficientData, pearson
from .gender import Gender
from .memes import CarrierIndex, UnknownMeme

UniverseMode = Literal["all", "citing"]


class CitedFilter(enum.Enum):
    ALL = "all"
    GENDERED_BOTH = "gendered"
    CITED_FEMALE = "cited_female"
    CITED_MALE = "cited_male"


def filter_edges(
    edges: Iterable[CitationEdge], genders: dict[int, Gender] | None, mode: CitedFilter
) -> list[CitationEdge]:
    if mode is CitedFilter.ALL:
        return list(edges)
    if genders is None:
        raise ValueError(f"filter {mode.value} needs paper genders")
    unknown = Gender.UNKNOWN
    want = {CitedFilter.CITED_FEMALE: Gender.FEMALE, CitedFilter.CITED_MALE: Gender.MALE}.get(mode)
    out = []
    for e in edges:
        gc = genders.get(e.citing, unknown)
        gd = genders.get(e.cited, unknown)
        if not (gc.known and gd.known):
            continue
        if want is None or gd is want:
            out.append(e)
    return out


def filter_universe(
    papers: Iterable[int], genders: dict[int, Gender] | None, mode: CitedFilter
) -> frozenset[int]:
    if mode is CitedFilter.ALL:
        return frozenset(papers)
    if genders is None:
        raise ValueError(f"filter {mode.value} needs paper genders")
    return frozenset(p for p in papers if genders.get(p, Gender.UNKNOWN).known)


@dataclass(frozen=True)
class PropagationCounts:
    d_mm: int
    d_to_m: int
    d_mn: int
    d_not_m: int

    def check(self, n_universe: int | None = None, n_carriers: int | None = None) -> None:
        if min(self.d_mm, self.d_to_m, self.d_mn, self.d_not_m) < 0:
            raise AssertionError(f"negative count in {self}")
        if self.d_mm > self.d_to_m or self.d_mn > self.d_not_m:
            raise AssertionError(f"carrier count exceeds population in {self}")
        if n_universe is not None and self.d_to_m + self.d_not_m != n_universe:
            raise AssertionError(f"{self} does not partition a universe of {n_universe}")
        if n_carriers is not None and self.d_mm + self.d_mn != n_carriers:
            raise AssertionError(f"{self} does not partition {n_carriers} carriers")


def propagation_score(counts: PropagationCounts) -> float:
    """Score for ``counts``; NaN when undefined, +inf when no carrier escapes citing a carrier."""
    c = counts
    if c.d_to_m == 0 or c.d_not_m == 0 or (c.d_mn == 0 and c.d_mm == 0):
        return math.nan
    if c.d_mn == 0:
        return math.inf
    return (c.d_mm / c.d_to_m) / (c.d_mn / c.d_not_m)


def is_finite_score(value: float) -> bool:
    return math.isfinite(value)


class Propagator:
    """Precomputed edge arrays for one filter; answers counts per meme."""

    def __init__(
        self,
        corpus: Corpus,
        genders: dict[int, Gender] | None,
        mode: CitedFilter,
        universe_mode: UniverseMode = "all",
    ):
        self.mode = mode
        self._ids = np.fromiter(sorted(corpus.papers), dtype=np.int64, count=len(corpus.papers))
        edges = filter_edges(corpus.graph.sorted_edges(), genders, mode)
        if edges:
            raw = np.asarray(edges, dtype=np.int64)
            self._src = np.searchsorted(self._ids, raw[:, 0])
            self._dst = np.searchsorted(self._ids, raw[:, 1])
        else:
            self._src = self._dst = np.zeros(0, dtype=np.int64)
        universe = filter_universe(corpus.papers, genders, mode)
        if universe_mode == "citing":
            citing = {e.citing for e in edges}
            universe = frozenset(p for p in universe if p in citing)
        elif universe_mode != "all":
            raise ValueError(f"unknown universe mode {universe_mode!r}")
        self.universe = universe
        self._in_universe = np.isin(self._ids, np.fromiter(universe, dtype=np.int64, count=len(universe)))

    def _mask(self, papers: Iterable[int]) -> np.ndarray:
        arr = np.fromiter(papers, dtype=np.int64)
        return np.isin(self._ids, arr)

    def counts(self, index: CarrierIndex, meme: str) -> PropagationCounts:
        carriers = index[meme]
        missing = self.universe - index.universe
        if missing:
            raise ValueError(f"carrier index does not cover {len(missing)} papers of the {self.mode.value} universe")
        carrier = self._mask(carriers)
        cites = np.zeros(len(self._ids), dtype=bool)
        cites[self._src[carrier[self._dst]]] = True
        cites &= self._in_universe
        u_carrier = carrier & self._in_universe
        d_to_m = int(cites.sum())
        d_mm = int((cites & u_carrier).sum())
        return PropagationCounts(
            d_mm=d_mm,
            d_to_m=d_to_m,
            d_mn=int(u_carrier.sum()) - d_mm,
            d_not_m=len(self.universe) - d_to_m,
        )


def propagation_counts(
    corpus: Corpus,
    index: CarrierIndex,
    meme: str,
    mode: CitedFilter = CitedFilter.ALL,
    genders: dict[int, Gender] | None = None,
    universe_mode: UniverseMode = "all",
) -> PropagationCounts:
    if meme not in index.carriers:
        raise UnknownMeme(meme)
    return Propagator(corpus, genders, mode, universe_mode).counts(index, meme)


@dataclass(frozen=True)
class MemeScores:
    meme: str
    f_g: float
    f_F: float
    f_M: float
    counts_g: PropagationCounts
    counts_F: PropagationCounts
    counts_M: PropagationCounts

    @property
    def P_g(self) -> float:
        return propagation_score(self.counts_g)

    @property
    def P_F(self) -> float:
        return propagation_score(self.counts_F)

    @property
    def P_M(self) -> float:
        return propagation_score(self.counts_M)


def _share(carriers: frozenset[int], universe: frozenset[int]) -> float:
    return len(carriers & universe) / len(universe) if universe else math.nan


def gendered_score_table(
    corpus: Corpus,
    index: CarrierIndex,
    memes: Sequence[str],
    genders: dict[int, Gender],
    *,
    universe_mode: UniverseMode = "all",
    workers: int = 1,
) -> list[MemeScores]:
    """f and P for each meme over gendered papers, overall and by cited gender.

    ``f_F`` / ``f_M`` are carrier shares among female- / male-first-authored
    papers. Rows come back in the order of ``memes``.
    """
    props = {
        mode: Propagator(corpus, genders, mode, universe_mode)
        for mode in (CitedFilter.GENDERED_BOTH, CitedFilter.CITED_FEMALE, CitedFilter.CITED_MALE)
    }
    female = frozenset(p for p, g in genders.items() if g is Gender.FEMALE)
    male = frozenset(p for p, g in genders.items() if g is Gender.MALE)
    gendered = female | male

    def row(meme: str) -> MemeScores:
        carriers = index[meme]
        return MemeScores(
            meme=meme,
            f_g=_share(carriers, gendered),
            f_F=_share(carriers, female),
            f_M=_share(carriers, male),
            counts_g=props[CitedFilter.GENDERED_BOTH].counts(index, meme),
            counts_F=props[CitedFilter.CITED_FEMALE].counts(index, meme),
            counts_M=props[CitedFilter.CITED_MALE].counts(index, meme),
        )

    if workers == 1:
        return [row(m) for m in memes]
    with ThreadPoolExecutor(max_workers=workers or None) as pool:
        return list(pool.map(row, memes))


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n_used: int
    n_skipped: int


def frequency_propagation_correlation(table: Sequence[MemeScores], which: str = "g") -> CorrelationResult:
    """Pearson r between relative frequency and propagation score across memes.

    ``which`` is "g", "F" or "M". Memes with an undefined or infinite
    score are left out and counted in ``n_skipped``.
    """
    if which not in ("g", "F", "M"):
        raise ValueError(f"which must be g, F or M, got {which!r}")
    xs, ys = [], []
    skipped = 0
    for row in table:
        f = getattr(row, f"f_{which}")
        p = getattr(row, f"P_{which}")
        if math.isfinite(p) and math.isfinite(f):
            xs.append(f)
            ys.append(p)
        else:
            skipped += 1
    if len(xs) < 2:
        raise InsufficientData(f"{len(xs)} memes with a finite score ({skipped} skipped)")
    return CorrelationResult(r=pearson(xs, ys), n_used=len(xs), n_skipped=skipped)


def format_score(value: float) -> str:
    if math.isnan(value):
        return "NA"
    if math.isinf(value):
        return "INF"
    return f"{value:.6f}"


SCORE_TABLE_COLUMNS = (
    "meme", "f_g", "f_F", "f_M", "d_mm", "d_to_m", "d_mn", "d_not_m", "P_g", "P_F", "P_M",
)


def score_table_rows(table: Sequence[MemeScores]) -> list[list[str]]:
    rows = []
    for r in table:
        c = r.counts_g
        rows.append([
            r.meme, format_score(r.f_g), format_score(r.f_F), format_score(r.f_M),
            str(c.d_mm), str(c.d_to_m), str(c.d_mn), str(c.d_not_m),
            format_score(r.P_g), format_score(r.P_F), format_score(r.P_M),
        ])
    return rows
