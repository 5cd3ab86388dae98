"""conceptrank: extract emerging concept phrases from a paper corpus.

Pipeline: load a JSONL corpus, pull candidate noun phrases out of titles,
index phrase occurrences against the citation graph, rank candidates with a
central-paper score (or the density-based cnlc/loor baselines), and evaluate
rankings with sampled precision-at-K and precision-yield curves.
"""

__version__ = "0.1.0"

from .corpus import Corpus, IngestReport, PaperRecord, load_corpus
from .index import CitationGraph, TermPostings, build_citation_graph, build_term_postings
from .scoring import ForeCiteParams, ScoredConcept, rank_concepts
from .textnorm import PhraseKey, extract_title_candidates, normalized_stream

__all__ = [
    "Corpus",
    "IngestReport",
    "PaperRecord",
    "load_corpus",
    "CitationGraph",
    "TermPostings",
    "build_citation_graph",
    "build_term_postings",
    "ForeCiteParams",
    "ScoredConcept",
    "rank_concepts",
    "PhraseKey",
    "extract_title_candidates",
    "normalized_stream",
    "__version__",
]
