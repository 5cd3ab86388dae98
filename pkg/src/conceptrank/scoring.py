"""Concept scorers and ranking.

Three methods rank a candidate phrase by the shape of its term citation
graph (the papers that contain the phrase, with their citation edges):

* ``forecite`` — central-paper signal. Each paper p containing the term is
  scored ln(f_p + 1) * (f_p / f), where f counts papers that contain the
  term and come strictly after p in (date, id) order, and f_p counts how
  many of those cite p. The phrase score is the maximum over papers; the
  argmax is reported as the central paper. Papers with f_p below the
  citation threshold are skipped, and the ratio is estimated from a fixed-
  size deterministic sample when f is large.
* ``cnlc`` — internal edge rate minus outgoing edge rate: c_t/n_t - c_out/N.
* ``loor`` — binomial log-odds of the observed internal edge count against
  the corpus-wide edge density.

All scoring is pure and deterministic; ranking sorts by score descending
with the canonical phrase text as tie-break.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass, replace

from .corpus import Corpus
from .detrand import mix_seed, sample_without_replacement
from .index import CitationGraph, TermGraphStats, TermPostings, term_graph_stats
from .textnorm import PhraseKey

METHODS = ("forecite", "cnlc", "loor")

_LOOR_EPS = 1e-12


@dataclass(frozen=True)
class ForeCiteParams:
    min_citations: int = 3
    sample_size: int = 500
    seed: int = 13


@dataclass(frozen=True)
class ScoredConcept:
    term: PhraseKey
    method: str
    score: float
    central_paper: str | None = None
    n_t: int | None = None
    f_t: int | None = None
    f_p_t: int | None = None
    c_t: int | None = None
    c_out: int | None = None
    rank: int | None = None


def future_term_papers(
    paper_id: str, term: PhraseKey, postings: TermPostings, corpus: Corpus
) -> tuple[int, tuple]:
    """Posting entries strictly after paper_id in (date, id) order."""
    entries = postings.entries(term)
    record = corpus.papers.get(paper_id)
    if record is None:
        raise KeyError(f"unknown paper {paper_id!r}")
    idx = bisect_right(entries, (record.date, paper_id))
    future = entries[idx:]
    return len(future), future


def paper_term_score(
    paper_id: str,
    term: PhraseKey,
    postings: TermPostings,
    graph: CitationGraph,
    corpus: Corpus,
    params: ForeCiteParams,
) -> tuple[float, int, int] | None:
    """Central-paper score of one paper for one term, or None.

    None when the term has no future papers or the paper attracts fewer than
    ``min_citations`` citations from them. The citing count f_p is always
    exact; only the ratio denominator falls back to sampling when the future
    set exceeds ``sample_size``.
    """
    f_t, future = future_term_papers(paper_id, term, postings, corpus)
    if f_t == 0:
        return None
    citers = set(graph.cited_by.get(paper_id, ()))
    f_p_t = sum(1 for _, pid in future if pid in citers)
    if f_p_t < params.min_citations:
        return None
    if f_t <= params.sample_size:
        ratio = f_p_t / f_t
    else:
        rng = random.Random(mix_seed(params.seed, term.text))
        picks = sample_without_replacement(rng, f_t, params.sample_size)
        hits = sum(1 for i in picks if future[i][1] in citers)
        ratio = hits / params.sample_size
    return math.log(f_p_t + 1) * ratio, f_p_t, f_t


def forecite_score(
    term: PhraseKey,
    postings: TermPostings,
    graph: CitationGraph,
    corpus: Corpus,
    params: ForeCiteParams | None = None,
) -> ScoredConcept | None:
    """Best central-paper score over all papers containing the term.

    Ties go to the earliest (date, id) paper. None when no paper passes the
    citation threshold.
    """
    params = params or ForeCiteParams()
    entries = postings.entries(term)
    best: tuple[float, int, int] | None = None
    best_paper: str | None = None
    for _, pid in entries:  # (date, id) ascending, so first strict max wins
        result = paper_term_score(pid, term, postings, graph, corpus, params)
        if result is None:
            continue
        if best is None or result[0] > best[0]:
            best = result
            best_paper = pid
    if best is None:
        return None
    score, f_p_t, f_t = best
    return ScoredConcept(
        term=term,
        method="forecite",
        score=score,
        central_paper=best_paper,
        n_t=len(entries),
        f_t=f_t,
        f_p_t=f_p_t,
    )


def cnlc_score(term: PhraseKey, stats: TermGraphStats) -> ScoredConcept:
    """Internal citation rate minus outgoing rate: c_t/n_t - c_out/N."""
    if stats.n_t < 1:
        raise ValueError(f"cnlc needs at least one paper for term {term.text!r}")
    score = stats.c_t / stats.n_t - stats.c_out / stats.corpus_size
    return ScoredConcept(
        term=term, method="cnlc", score=score, n_t=stats.n_t, c_t=stats.c_t, c_out=stats.c_out
    )


def loor_score(term: PhraseKey, stats: TermGraphStats) -> ScoredConcept:
    """Binomial log-odds of the internal edge count vs. corpus edge density.

    The n_t papers give M = n_t*(n_t-1)/2 unordered pairs; the internal edge
    count is read as successes among those pairs at rate p1, compared against
    the corpus-wide pair density p0. Rates are clamped to [eps, 1].
    """
    if stats.n_t < 2:
        raise ValueError(f"loor needs at least two papers for term {term.text!r}")
    pairs = stats.n_t * (stats.n_t - 1) // 2
    covered = min(stats.c_t, pairs)
    n = stats.corpus_size
    p1 = max(covered / pairs, _LOOR_EPS)
    p0 = max(2 * stats.graph_edges / (n * (n - 1)), _LOOR_EPS) if n > 1 else _LOOR_EPS
    score = covered * math.log(p1 / p0)
    if pairs > covered:
        score += (pairs - covered) * math.log((1 - p1) / (1 - p0))
    return ScoredConcept(
        term=term, method="loor", score=score, n_t=stats.n_t, c_t=stats.c_t, c_out=stats.c_out
    )


def rank_concepts(
    method: str,
    candidates,
    postings: TermPostings,
    graph: CitationGraph,
    corpus: Corpus,
    params: ForeCiteParams | None = None,
) -> list[ScoredConcept]:
    """Score every candidate independently, drop the unscorable ones, and
    sort by score descending with phrase text ascending as tie-break.
    Ranks are 1-based.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    params = params or ForeCiteParams()
    scored: list[ScoredConcept] = []
    for term in dict.fromkeys(candidates):
        if term not in postings:
            continue
        if method == "forecite":
            concept = forecite_score(term, postings, graph, corpus, params)
            if concept is not None:
                scored.append(concept)
            continue
        stats = term_graph_stats(term, postings, graph, corpus)
        if method == "cnlc":
            if stats.n_t >= 1:
                scored.append(cnlc_score(term, stats))
        else:
            if stats.n_t >= 2:
                scored.append(loor_score(term, stats))
    scored.sort(key=lambda c: (-c.score, c.term.text))
    return [replace(c, rank=i + 1) for i, c in enumerate(scored)]


# --- ranked TSV format --------------------------------------------------------

TSV_COLUMNS = (
    "rank",
    "phrase",
    "method",
    "score",
    "central_paper",
    "n_t",
    "f_t",
    "f_p_t",
    "c_t",
    "c_out",
)


def _cell(value) -> str:
    return "-" if value is None else str(value)


def write_ranked_tsv(path, concepts: list[ScoredConcept]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\t".join(TSV_COLUMNS) + "\n")
        for c in concepts:
            row = (
                _cell(c.rank),
                c.term.text,
                c.method,
                f"{c.score:.6f}",
                _cell(c.central_paper),
                _cell(c.n_t),
                _cell(c.f_t),
                _cell(c.f_p_t),
                _cell(c.c_t),
                _cell(c.c_out),
            )
            handle.write("\t".join(row) + "\n")


def read_ranked_tsv(path) -> list[ScoredConcept]:
    def _opt_int(cell: str) -> int | None:
        return None if cell == "-" else int(cell)

    out: list[ScoredConcept] = []
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n").split("\t")
        if tuple(header) != TSV_COLUMNS:
            raise ValueError(f"unexpected ranked TSV header: {header}")
        for line in handle:
            cells = line.rstrip("\n").split("\t")
            if len(cells) != len(TSV_COLUMNS):
                raise ValueError(f"bad ranked TSV row: {line!r}")
            out.append(
                ScoredConcept(
                    term=PhraseKey.from_text(cells[1]),
                    method=cells[2],
                    score=float(cells[3]),
                    central_paper=None if cells[4] == "-" else cells[4],
                    n_t=_opt_int(cells[5]),
                    f_t=_opt_int(cells[6]),
                    f_p_t=_opt_int(cells[7]),
                    c_t=_opt_int(cells[8]),
                    c_out=_opt_int(cells[9]),
                    rank=int(cells[0]),
                )
            )
    return out
