"""Synthetic corpus generator with planted ground truth.

Three phrase populations are planted, mirroring the citation-graph shapes the
scorers are meant to separate:

* concept phrases — one early "central" paper plus later mentioning papers,
  at least 90% of which cite the central paper (a spiky term graph);
* dense-community phrases — mentioning papers cite each other, with a 30%
  cap on any single paper's in-degree share (a dense term graph, no center);
* background phrases — mentioning papers with only random sparse citations.

Titles are built so that title-candidate extraction recovers every planted
phrase, and the returned ground truth labels every extractable candidate
(planted concepts positive, everything else negative).
"""

from __future__ import annotations

import datetime as dt
import random
from dataclasses import dataclass, field

from .corpus import Corpus, PaperRecord
from .detrand import sample_without_replacement
from .textnorm import extract_title_candidates, stopword_set


@dataclass(frozen=True)
class SynthSpec:
    concepts: int
    dense: int
    background: int
    papers: int
    seed: int
    from_year: int = 2010
    to_year: int = 2018
    mentions_low: int = 10
    mentions_high: int = 14
    background_low: int = 4
    background_high: int = 8


@dataclass(frozen=True)
class GroundTruth:
    labels: dict[str, int]
    concept_central: dict[str, str]
    concept_phrases: tuple[str, ...]
    dense_phrases: tuple[str, ...]
    background_phrases: tuple[str, ...]


@dataclass
class _Draft:
    pid: str
    month: int  # index into the month grid
    day: int
    title: str = ""
    abstract: str = ""
    body: str = ""
    cites: set[str] = field(default_factory=set)
    in_degree: int = 0  # within-cluster incoming edges, for caps


_SYLLABLES = (
    "bra cren dol fex gim hax jor kel lum mor nev pol quar rin sol tam urv vex wol yir "
    "zan bel cor dran fol gren hul jin kov lor mig nur pev quil rud sev tolb vun wex zim"
).split()

_HEAD_POOL = ("net", "flow", "rank", "grid", "mark", "cast", "fuse", "forge")

_DILUTION_PER_TOKEN = 12


def _coin(rng: random.Random, used: set[str], syllables: int = 2) -> str:
    stop = stopword_set()
    while True:
        word = "".join(_SYLLABLES[rng.randrange(len(_SYLLABLES))] for _ in range(syllables))
        if word not in used and word not in stop and not word.endswith("s"):
            used.add(word)
            return word


def _title_case(phrase: str) -> str:
    return " ".join(w.capitalize() for w in phrase.split())


def generate_synthetic_corpus(spec: SynthSpec) -> tuple[Corpus, GroundTruth]:
    if min(spec.concepts, spec.dense, spec.background) < 0 or spec.papers < 1:
        raise ValueError("counts must be nonnegative and papers positive")
    if spec.from_year > spec.to_year:
        raise ValueError("from_year must not exceed to_year")
    if spec.mentions_low < 2 or spec.mentions_low > spec.mentions_high:
        raise ValueError("bad mention range")

    rng = random.Random(spec.seed)
    months = [(y, m) for y in range(spec.from_year, spec.to_year + 1) for m in range(1, 13)]
    n_months = len(months)
    early_cut = max(1, int(n_months * 0.4))
    late_cut = max(early_cut + 1, int(n_months * 0.65))

    concept_sizes = [rng.randint(spec.mentions_low, spec.mentions_high) for _ in range(spec.concepts)]
    dense_sizes = [rng.randint(spec.mentions_low, spec.mentions_high) for _ in range(spec.dense)]
    bg_sizes = [rng.randint(spec.background_low, spec.background_high) for _ in range(spec.background)]
    required = sum(s + 1 for s in concept_sizes) + sum(dense_sizes) + sum(bg_sizes)
    if required > spec.papers:
        raise ValueError(
            f"infeasible: planted clusters need {required} papers but only {spec.papers} allowed"
        )
    n_fillers = spec.papers - required

    # Concepts alternate single-token and two-token names; two-token names
    # need filler papers to host dilution mentions of their constituent
    # tokens (otherwise the standalone tokens would tie with the phrase).
    used_tokens: set[str] = set(_HEAD_POOL)
    two_token_flags = [i % 2 == 1 for i in range(spec.concepts)]
    dilution_need = sum(1 for f in two_token_flags if f) * 2 * _DILUTION_PER_TOKEN
    if dilution_need > n_fillers:
        two_token_flags = [False] * spec.concepts

    concept_phrases = []
    for flag in two_token_flags:
        first = _coin(rng, used_tokens)
        if flag:
            concept_phrases.append(f"{first} {_HEAD_POOL[rng.randrange(len(_HEAD_POOL))]}")
        else:
            concept_phrases.append(first + _HEAD_POOL[rng.randrange(len(_HEAD_POOL))])
    dense_phrases = [_coin(rng, used_tokens) for _ in range(spec.dense)]
    bg_phrases = [_coin(rng, used_tokens) for _ in range(spec.background)]
    filler_vocab = [_coin(rng, used_tokens) for _ in range(300)]

    def filler_words(n: int) -> list[str]:
        return [filler_vocab[rng.randrange(len(filler_vocab))] for _ in range(n)]

    drafts: list[_Draft] = []

    def new_draft(month: int) -> _Draft:
        day = 1 if rng.randrange(100) < 70 else rng.randint(2, 28)
        draft = _Draft(pid=f"p{len(drafts):05d}", month=month, day=day)
        drafts.append(draft)
        return draft

    concept_central: dict[str, str] = {}
    concept_clusters: list[tuple[str, _Draft, list[_Draft]]] = []
    for phrase, size in zip(concept_phrases, concept_sizes):
        central = new_draft(rng.randrange(early_cut))
        central.title = _title_case(phrase)
        central.abstract = phrase
        concept_central[phrase] = central.pid
        mentions = [new_draft(rng.randrange(central.month + 1, n_months)) for _ in range(size)]
        for i, mention in enumerate(mentions):
            mention.title = " ".join(w.capitalize() for w in filler_words(2))
            text = f"{phrase} for {' '.join(filler_words(2))}"
            if i % 2 == 0:
                mention.abstract = text
            else:
                mention.body = text
        concept_clusters.append((phrase, central, mentions))

    dense_clusters: list[tuple[str, list[_Draft]]] = []
    for phrase, size in zip(dense_phrases, dense_sizes):
        cluster = [new_draft(rng.randrange(n_months)) for _ in range(size)]
        cluster.sort(key=lambda d: (d.month, d.day, d.pid))
        cluster[0].title = _title_case(phrase)
        cluster[0].abstract = phrase
        for i, paper in enumerate(cluster[1:], start=1):
            paper.title = " ".join(w.capitalize() for w in filler_words(2))
            text = f"{phrase} for {' '.join(filler_words(2))}"
            if i % 2 == 0:
                paper.abstract = text
            else:
                paper.body = text
        dense_clusters.append((phrase, cluster))

    bg_clusters: list[tuple[str, list[_Draft]]] = []
    for phrase, size in zip(bg_phrases, bg_sizes):
        cluster = [new_draft(rng.randrange(n_months)) for _ in range(size)]
        cluster.sort(key=lambda d: (d.month, d.day, d.pid))
        cluster[0].title = _title_case(phrase)
        cluster[0].abstract = phrase
        for i, paper in enumerate(cluster[1:], start=1):
            paper.title = " ".join(w.capitalize() for w in filler_words(2))
            paper.abstract = f"{phrase} for {' '.join(filler_words(2))}"
        bg_clusters.append((phrase, cluster))

    dilution_tokens: list[str] = []
    for phrase, flag in zip(concept_phrases, two_token_flags):
        if flag:
            for token in phrase.split():
                dilution_tokens.extend([token] * _DILUTION_PER_TOKEN)
    fillers: list[_Draft] = []
    for i in range(n_fillers):
        if i < len(dilution_tokens):
            draft = new_draft(rng.randrange(late_cut, n_months))
            draft.abstract = f"{dilution_tokens[i]} with {' '.join(filler_words(2))}"
        else:
            draft = new_draft(rng.randrange(n_months))
            draft.abstract = " ".join(filler_words(3))
        draft.title = " ".join(w.capitalize() for w in filler_words(2))
        fillers.append(draft)

    # Global (date, id) order for "cite something earlier" draws.
    order = sorted(drafts, key=lambda d: (d.month, d.day, d.pid))
    position = {d.pid: i for i, d in enumerate(order)}

    def cite_random_earlier(draft: _Draft, max_edges: int) -> None:
        pos = position[draft.pid]
        if pos == 0 or max_edges == 0:
            return
        count = min(rng.randint(1, max_edges), pos)
        for i in sample_without_replacement(rng, pos, count):
            draft.cites.add(order[i].pid)

    for phrase, central, mentions in concept_clusters:
        size = len(mentions)
        non_citers = rng.randint(0, size // 10)
        picks = set(sample_without_replacement(rng, size, size - non_citers))
        ordered = sorted(mentions, key=lambda d: (d.month, d.day, d.pid))
        for idx, mention in enumerate(mentions):
            if idx in picks:
                mention.cites.add(central.pid)
        # light intra-cluster noise, capped below the citation threshold
        for i, mention in enumerate(ordered[1:], start=1):
            if rng.randrange(100) < 25:
                earlier = [m for m in ordered[:i] if m.in_degree < 2]
                if earlier:
                    target = earlier[rng.randrange(len(earlier))]
                    if target.pid not in mention.cites:
                        mention.cites.add(target.pid)
                        target.in_degree += 1

    for phrase, cluster in dense_clusters:
        cap = max(2, int(0.3 * len(cluster)))
        for i, paper in enumerate(cluster[1:], start=1):
            available = [m for m in cluster[:i] if m.in_degree < cap]
            take = min(3, len(available))
            for j in sample_without_replacement(rng, len(available), take):
                available[j].in_degree += 1
                paper.cites.add(available[j].pid)

    for phrase, cluster in bg_clusters:
        for paper in cluster:
            cite_random_earlier(paper, 3)

    for draft in fillers:
        cite_random_earlier(draft, 2)

    records = []
    for draft in drafts:
        year, month = months[draft.month]
        records.append(
            PaperRecord(
                id=draft.pid,
                title=draft.title,
                abstract=draft.abstract,
                body=draft.body,
                date=dt.date(year, month, draft.day),
                out_citations=tuple(sorted(draft.cites)),
            )
        )
    corpus = Corpus.from_records(records)

    candidates = extract_title_candidates(corpus, spec.from_year, spec.to_year)
    candidate_texts = {key.text for key in candidates}
    planted = set(concept_phrases) | set(dense_phrases) | set(bg_phrases)
    missing = planted - candidate_texts
    if missing:
        raise AssertionError(f"generator failed to plant phrases in titles: {sorted(missing)}")
    labels = {text: (1 if text in concept_central else 0) for text in sorted(candidate_texts)}

    truth = GroundTruth(
        labels=labels,
        concept_central=concept_central,
        concept_phrases=tuple(concept_phrases),
        dense_phrases=tuple(dense_phrases),
        background_phrases=tuple(bg_phrases),
    )
    return corpus, truth
