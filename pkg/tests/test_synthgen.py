import math

import pytest

from conceptrank.corpus import dump_corpus
from conceptrank.index import build_citation_graph, build_term_postings
from conceptrank.scoring import ForeCiteParams, forecite_score, rank_concepts
from conceptrank.synthgen import SynthSpec, generate_synthetic_corpus
from conceptrank.textnorm import PhraseKey, extract_title_candidates


SMALL = SynthSpec(concepts=3, dense=3, background=8, papers=130, seed=21)


def corpus_bytes(corpus, tmp_path, name):
    path = tmp_path / name
    dump_corpus(corpus, path)
    return path.read_bytes()


class TestGeneratorShape:
    def test_fixed_seed_gives_byte_identical_corpus(self, tmp_path):
        corpus_a, truth_a = generate_synthetic_corpus(SMALL)
        corpus_b, truth_b = generate_synthetic_corpus(SMALL)
        assert corpus_bytes(corpus_a, tmp_path, "a.jsonl") == corpus_bytes(
            corpus_b, tmp_path, "b.jsonl"
        )
        assert truth_a == truth_b

    def test_different_seed_differs(self, tmp_path):
        other = SynthSpec(concepts=3, dense=3, background=8, papers=130, seed=22)
        corpus_a, _ = generate_synthetic_corpus(SMALL)
        corpus_b, _ = generate_synthetic_corpus(other)
        assert corpus_bytes(corpus_a, tmp_path, "a.jsonl") != corpus_bytes(
            corpus_b, tmp_path, "b.jsonl"
        )

    def test_paper_budget_respected(self):
        corpus, _ = generate_synthetic_corpus(SMALL)
        assert len(corpus) == SMALL.papers

    def test_infeasible_spec_rejected(self):
        with pytest.raises(ValueError, match="infeasible"):
            generate_synthetic_corpus(
                SynthSpec(concepts=10, dense=10, background=10, papers=50, seed=1)
            )

    def test_planted_phrases_recoverable_from_titles(self):
        corpus, truth = generate_synthetic_corpus(SMALL)
        candidates = {
            k.text for k in extract_title_candidates(corpus, SMALL.from_year, SMALL.to_year)
        }
        planted = (
            set(truth.concept_phrases)
            | set(truth.dense_phrases)
            | set(truth.background_phrases)
        )
        assert planted <= candidates
        assert set(truth.labels) == candidates

    def test_labels_mark_exactly_the_concepts(self):
        _, truth = generate_synthetic_corpus(SMALL)
        positives = {p for p, l in truth.labels.items() if l == 1}
        assert positives == set(truth.concept_phrases)
        for phrase in truth.dense_phrases + truth.background_phrases:
            assert truth.labels[phrase] == 0


class TestPlantedStructure:
    def test_single_concept_yields_planted_central_paper(self):
        spec = SynthSpec(
            concepts=1,
            dense=0,
            background=0,
            papers=40,
            seed=5,
            mentions_low=10,
            mentions_high=10,
        )
        corpus, truth = generate_synthetic_corpus(spec)
        phrase = truth.concept_phrases[0]
        key = PhraseKey.from_text(phrase)
        graph = build_citation_graph(corpus)
        postings = build_term_postings(corpus, {key})
        concept = forecite_score(key, postings, graph, corpus, ForeCiteParams())
        assert concept is not None
        assert concept.central_paper == truth.concept_central[phrase]
        # at least 90% of the mentioning papers cite the central paper
        members = [pid for _, pid in postings.entries(key) if pid != concept.central_paper]
        citing = sum(
            1
            for pid in members
            if concept.central_paper in corpus.papers[pid].out_citations
        )
        assert citing / len(members) >= 0.9

    def test_no_concepts_leaves_dense_phrases_low_under_forecite(self):
        # the 30% in-degree cap bounds any dense paper's future-citer count
        # at 4, so a dense phrase can never exceed ln(5) — far below the
        # ln(10)*0.9 floor of a planted concept
        spec = SynthSpec(concepts=0, dense=5, background=5, papers=120, seed=11)
        corpus, truth = generate_synthetic_corpus(spec)
        keys = [PhraseKey.from_text(p) for p in truth.dense_phrases]
        graph = build_citation_graph(corpus)
        postings = build_term_postings(corpus, set(keys))
        for key in keys:
            concept = forecite_score(key, postings, graph, corpus, ForeCiteParams())
            assert concept is None or concept.score <= math.log(5) + 1e-9

    def test_dense_in_degree_share_capped(self):
        corpus, truth = generate_synthetic_corpus(SMALL)
        graph = build_citation_graph(corpus)
        keys = [PhraseKey.from_text(p) for p in truth.dense_phrases]
        postings = build_term_postings(corpus, set(keys))
        for key in keys:
            members = {pid for _, pid in postings.entries(key)}
            cap = max(2, int(0.3 * len(members)))
            for pid in members:
                internal = sum(1 for q in graph.cited_by.get(pid, ()) if q in members)
                assert internal <= cap

    def test_concepts_outrank_everything_under_forecite(self):
        corpus, truth = generate_synthetic_corpus(SMALL)
        keys = [PhraseKey.from_text(t) for t in truth.labels]
        graph = build_citation_graph(corpus)
        postings = build_term_postings(corpus, set(keys))
        ranked = rank_concepts("forecite", keys, postings, graph, corpus, ForeCiteParams())
        top = [c.term.text for c in ranked[: len(truth.concept_phrases)]]
        assert set(top) == set(truth.concept_phrases)
