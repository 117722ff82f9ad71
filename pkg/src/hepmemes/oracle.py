"""Brute-force reference for propagation counts, plus random test instances.

The oracle walks the raw edge list once per paper, with no adjacency
indexes and no shared filtering code, so that it stays an independent
check on :mod:`hepmemes.propagation`.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .corpus import CitationEdge, CitationGraph, Corpus, IngestReport, PaperRecord
from .gender import Gender
from .memes import CarrierIndex
from .propagation import CitedFilter, PropagationCounts, propagation_counts

MEME = "meme"


@dataclass
class Instance:
    papers: list[int]
    edges: list[tuple[int, int]]
    carriers: set[int]
    genders: dict[int, str]

    def corpus(self) -> Corpus:
        recs = {p: PaperRecord(id=p, title="", authors_raw="", abstract="") for p in self.papers}
        graph = CitationGraph(CitationEdge(a, b) for a, b in self.edges)
        return Corpus(papers=recs, graph=graph, report=IngestReport())

    def gender_map(self) -> dict[int, Gender]:
        return {p: Gender(self.genders[p]) for p in self.papers}

    def index(self) -> CarrierIndex:
        return CarrierIndex(universe=frozenset(self.papers), carriers={MEME: frozenset(self.carriers)})

    def to_json(self) -> str:
        return json.dumps(
            {
                "papers": self.papers,
                "edges": [list(e) for e in self.edges],
                "carriers": sorted(self.carriers),
                "genders": {str(k): v for k, v in sorted(self.genders.items())},
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> Instance:
        d = json.loads(text)
        return cls(
            papers=d["papers"],
            edges=[tuple(e) for e in d["edges"]],
            carriers=set(d["carriers"]),
            genders={int(k): v for k, v in d["genders"].items()},
        )


def random_instance(rng: random.Random, max_papers: int = 50, max_edges: int = 200) -> Instance:
    n = rng.randint(1, max_papers)
    papers = sorted(rng.sample(range(1, 10 * max_papers), n))
    pairs = [(a, b) for a in papers for b in papers if a != b]
    edges = sorted(rng.sample(pairs, min(len(pairs), rng.randint(0, max_edges))))
    carrier_rate = rng.random()
    carriers = {p for p in papers if rng.random() < carrier_rate}
    weights = [rng.random() for _ in range(3)]
    genders = {p: rng.choices("FMU", weights=weights)[0] for p in papers}
    return Instance(papers, edges, carriers, genders)


def brute_force_counts(inst: Instance, mode: CitedFilter) -> PropagationCounts:
    def gendered(p: int) -> bool:
        return inst.genders[p] != "U"

    def edge_kept(a: int, b: int) -> bool:
        if mode is CitedFilter.ALL:
            return True
        if not (gendered(a) and gendered(b)):
            return False
        if mode is CitedFilter.CITED_FEMALE:
            return inst.genders[b] == "F"
        if mode is CitedFilter.CITED_MALE:
            return inst.genders[b] == "M"
        return True

    d_mm = d_to_m = d_mn = d_not_m = 0
    for p in inst.papers:
        if mode is not CitedFilter.ALL and not gendered(p):
            continue
        cites_meme = False
        for a, b in inst.edges:
            if a == p and edge_kept(a, b) and b in inst.carriers:
                cites_meme = True
        carries = p in inst.carriers
        if cites_meme:
            d_to_m += 1
            if carries:
                d_mm += 1
        else:
            d_not_m += 1
            if carries:
                d_mn += 1
    return PropagationCounts(d_mm=d_mm, d_to_m=d_to_m, d_mn=d_mn, d_not_m=d_not_m)


def fast_counts(inst: Instance, mode: CitedFilter) -> PropagationCounts:
    return propagation_counts(inst.corpus(), inst.index(), MEME, mode, inst.gender_map())


@dataclass
class Mismatch:
    trial: int
    mode: CitedFilter
    expected: PropagationCounts
    got: PropagationCounts
    instance: Instance


def run_oracle_check(seed: int, trials: int, *, corrupt: bool = False) -> list[Mismatch]:
    """Compare the indexed implementation to the brute force on random instances.

    ``corrupt`` perturbs the implementation's answer; it exists so the
    failure path can be exercised.
    """
    rng = random.Random(seed)
    failures = []
    for trial in range(trials):
        inst = random_instance(rng)
        for mode in CitedFilter:
            got = fast_counts(inst, mode)
            if corrupt:
                got = PropagationCounts(got.d_mm + 1, got.d_to_m, got.d_mn, got.d_not_m)
            want = brute_force_counts(inst, mode)
            if got != want:
                failures.append(Mismatch(trial, mode, want, got, inst))
    return failures
