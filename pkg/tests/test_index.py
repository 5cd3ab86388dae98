import datetime as dt
import random

import pytest

from conceptrank.corpus import Corpus
from conceptrank.index import (
    SnapshotError,
    build_citation_graph,
    build_term_postings,
    load_index,
    save_index,
    term_graph_stats,
)
from conceptrank.textnorm import PhraseKey

from conftest import record


TERM = PhraseKey(("term",))


class TestCitationGraph:
    def test_single_edge_both_directions(self):
        corpus = Corpus.from_records(
            [record("a", "2015-01-01"), record("b", "2016-01-01", cites=["a"])]
        )
        graph = build_citation_graph(corpus)
        assert graph.cites["b"] == ("a",)
        assert graph.cited_by["a"] == ("b",)
        assert graph.edge_count == 1

    def test_no_citations(self):
        corpus = Corpus.from_records([record("a", "2015-01-01"), record("b", "2016-01-01")])
        assert build_citation_graph(corpus).edge_count == 0

    def test_dangling_edge_excluded(self):
        corpus = Corpus.from_records(
            [record("a", "2015-01-01"), record("b", "2016-01-01", cites=["a", "z"])]
        )
        graph = build_citation_graph(corpus)
        assert graph.edge_count == 1
        assert graph.cites["b"] == ("a",)

    def test_transpose_property(self):
        rng = random.Random(7)
        records = [record(f"p{i}", f"201{i % 5}-01-01") for i in range(20)]
        ids = [r.id for r in records]
        records = [
            record(
                r.id,
                r.date,
                cites=[q for q in ids if q != r.id and rng.random() < 0.2],
            )
            for r in records
        ]
        graph = build_citation_graph(Corpus.from_records(records))
        edges = {(p, q) for p, qs in graph.cites.items() for q in qs}
        back = {(p, q) for q, ps in graph.cited_by.items() for p in ps}
        assert edges == back
        assert graph.edge_count == len(edges)


class TestTermPostings:
    def test_whole_token_contiguous_match(self):
        corpus = Corpus.from_records(
            [
                record("a", "2015-01-01", title="deep neural network"),
                record("b", "2016-01-01", title="neural networking"),
            ]
        )
        postings = build_term_postings(corpus, {PhraseKey(("neural", "network"))})
        entries = postings.entries(PhraseKey(("neural", "network")))
        assert [pid for _, pid in entries] == ["a"]

    def test_zero_support_candidate_retained(self):
        corpus = Corpus.from_records([record("a", "2015-01-01", title="something else")])
        ghost = PhraseKey(("ghost",))
        postings = build_term_postings(corpus, {ghost})
        assert ghost in postings
        assert postings.entries(ghost) == ()

    def test_date_ordered_postings(self, central_paper_corpus):
        postings = build_term_postings(central_paper_corpus, {TERM})
        entries = postings.entries(TERM)
        assert [pid for _, pid in entries] == ["a", "b", "c", "d", "e"]
        assert list(entries) == sorted(entries)

    def test_match_in_abstract_and_body(self):
        corpus = Corpus.from_records(
            [
                record("a", "2015-01-01", title="x", abstract="the term appears here"),
                record("b", "2016-01-01", title="y", body="term"),
                record("c", "2017-01-01", title="z"),
            ]
        )
        postings = build_term_postings(corpus, {TERM})
        assert [pid for _, pid in postings.entries(TERM)] == ["a", "b"]

    def test_no_match_across_section_boundary(self):
        corpus = Corpus.from_records(
            [record("a", "2015-01-01", title="neural", abstract="network")]
        )
        postings = build_term_postings(corpus, {PhraseKey(("neural", "network"))})
        assert postings.entries(PhraseKey(("neural", "network"))) == ()

    def test_unknown_term_errors(self, central_paper_corpus):
        postings = build_term_postings(central_paper_corpus, {TERM})
        with pytest.raises(KeyError, match="unknown term"):
            postings.entries(PhraseKey(("nope",)))


class TestTermGraphStats:
    def test_central_paper_example(self, central_paper_corpus):
        postings = build_term_postings(central_paper_corpus, {TERM})
        graph = build_citation_graph(central_paper_corpus)
        stats = term_graph_stats(TERM, postings, graph, central_paper_corpus)
        assert (stats.n_t, stats.c_t, stats.c_out) == (5, 5, 0)
        assert stats.corpus_size == 5

    def test_singleton(self):
        corpus = Corpus.from_records([record("a", "2015-01-01", title="term")])
        postings = build_term_postings(corpus, {TERM})
        graph = build_citation_graph(corpus)
        stats = term_graph_stats(TERM, postings, graph, corpus)
        assert (stats.n_t, stats.c_t, stats.c_out) == (1, 0, 0)

    def test_whole_corpus_has_no_outgoing(self, central_paper_corpus):
        postings = build_term_postings(central_paper_corpus, {TERM})
        graph = build_citation_graph(central_paper_corpus)
        stats = term_graph_stats(TERM, postings, graph, central_paper_corpus)
        assert stats.c_out == 0


# --- random-corpus oracle -------------------------------------------------------


def make_random_corpus(rng, max_papers=50, max_phrases=30):
    """Random mini corpus plus phrases; titles are plain token strings."""
    vocab = [f"tok{i}" for i in range(10)]
    n = rng.randint(2, max_papers)
    ids = [f"p{i:02d}" for i in range(n)]
    records = []
    for pid in ids:
        title = " ".join(vocab[rng.randrange(len(vocab))] for _ in range(rng.randint(1, 5)))
        cites = [
            q for q in ids if q != pid and rng.random() < 0.15
        ]  # direction-agnostic, may point forward in time
        if rng.random() < 0.1:
            cites.append("dangling-id")
        date = dt.date(2010 + rng.randrange(8), 1 + rng.randrange(12), 1)
        records.append(record(pid, date, title=title, cites=cites))
    phrases = set()
    for _ in range(rng.randint(1, max_phrases)):
        length = 1 if rng.random() < 0.6 else 2
        phrases.add(
            PhraseKey(tuple(vocab[rng.randrange(len(vocab))] for _ in range(length)))
        )
    return Corpus.from_records(records), phrases


def oracle_members(corpus, phrase):
    """Independent membership check: contiguous tokens in the title."""
    out = []
    needle = list(phrase.lemmas)
    for rec in corpus:
        tokens = rec.title.split()
        n = len(needle)
        if any(tokens[i : i + n] == needle for i in range(len(tokens) - n + 1)):
            out.append(rec.id)
    return out


def oracle_stats(corpus, members):
    member_set = set(members)
    c_t = 0
    c_out = 0
    for pid in members:
        for q in corpus.papers[pid].out_citations:
            if q == pid or q not in corpus.papers:
                continue
            if q in member_set:
                c_t += 1
            else:
                c_out += 1
    return len(members), c_t, c_out


def test_stats_match_brute_force_on_random_corpora():
    rng = random.Random(424241)
    for _ in range(30):
        corpus, phrases = make_random_corpus(rng)
        graph = build_citation_graph(corpus)
        postings = build_term_postings(corpus, phrases)
        for phrase in phrases:
            expected_members = oracle_members(corpus, phrase)
            got_members = [pid for _, pid in postings.entries(phrase)]
            assert sorted(got_members) == sorted(expected_members)
            if not expected_members:
                continue
            stats = term_graph_stats(phrase, postings, graph, corpus)
            assert (stats.n_t, stats.c_t, stats.c_out) == oracle_stats(corpus, expected_members)


# --- snapshot --------------------------------------------------------------------


class TestSnapshot:
    def test_round_trip(self, tmp_path, central_paper_corpus):
        graph = build_citation_graph(central_paper_corpus)
        postings = build_term_postings(central_paper_corpus, {TERM})
        path = tmp_path / "index.bin"
        save_index(path, graph, postings)
        graph2, postings2 = load_index(path)
        assert graph2 == graph
        assert postings2 == postings

    def test_reloaded_snapshot_reproduces_ranking_bytes(self, tmp_path, central_paper_corpus):
        from conceptrank.scoring import ForeCiteParams, rank_concepts, write_ranked_tsv

        graph = build_citation_graph(central_paper_corpus)
        postings = build_term_postings(central_paper_corpus, {TERM})
        snap = tmp_path / "index.bin"
        save_index(snap, graph, postings)
        graph2, postings2 = load_index(snap)
        direct, reloaded = tmp_path / "direct.tsv", tmp_path / "reloaded.tsv"
        params = ForeCiteParams()
        write_ranked_tsv(
            direct,
            rank_concepts("forecite", [TERM], postings, graph, central_paper_corpus, params),
        )
        write_ranked_tsv(
            reloaded,
            rank_concepts("forecite", [TERM], postings2, graph2, central_paper_corpus, params),
        )
        assert direct.read_bytes() == reloaded.read_bytes()

    def test_snapshot_bytes_deterministic(self, tmp_path, central_paper_corpus):
        graph = build_citation_graph(central_paper_corpus)
        postings = build_term_postings(central_paper_corpus, {TERM})
        p1, p2 = tmp_path / "one.bin", tmp_path / "two.bin"
        save_index(p1, graph, postings)
        save_index(p2, graph, postings)
        assert p1.read_bytes() == p2.read_bytes()

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"NOPE" + b"\x00" * 16)
        with pytest.raises(SnapshotError, match="bad magic"):
            load_index(path)

    def test_truncated(self, tmp_path, central_paper_corpus):
        graph = build_citation_graph(central_paper_corpus)
        postings = build_term_postings(central_paper_corpus, {TERM})
        path = tmp_path / "index.bin"
        save_index(path, graph, postings)
        clipped = tmp_path / "clipped.bin"
        clipped.write_bytes(path.read_bytes()[:20])
        with pytest.raises(SnapshotError):
            load_index(clipped)
