"""Citation graph, phrase posting lists, and per-term graph statistics."""

from __future__ import annotations

import datetime as dt
import json
import struct
from dataclasses import dataclass

from .corpus import Corpus
from .textnorm import PhraseKey, normalized_stream


@dataclass(frozen=True)
class CitationGraph:
    """Within-corpus citation adjacency, both directions, id-sorted."""

    cites: dict[str, tuple[str, ...]]
    cited_by: dict[str, tuple[str, ...]]
    edge_count: int


@dataclass(frozen=True)
class TermGraphStats:
    term: PhraseKey
    n_t: int
    c_t: int
    c_out: int
    corpus_size: int
    graph_edges: int


# Posting entry: (date, paper id); lists are sorted by exactly that tuple.
Posting = tuple[dt.date, str]


@dataclass(frozen=True)
class TermPostings:
    postings: dict[PhraseKey, tuple[Posting, ...]]

    def __contains__(self, term: PhraseKey) -> bool:
        return term in self.postings

    def entries(self, term: PhraseKey) -> tuple[Posting, ...]:
        try:
            return self.postings[term]
        except KeyError:
            raise KeyError(f"unknown term {term.text!r}") from None

    def terms(self):
        return self.postings.keys()


def build_citation_graph(corpus: Corpus) -> CitationGraph:
    """Both adjacency directions over in-corpus edges; dangling ids dropped."""
    cites: dict[str, tuple[str, ...]] = {}
    incoming: dict[str, list[str]] = {pid: [] for pid in corpus.papers}
    edge_count = 0
    for pid in corpus.date_order:
        record = corpus.papers[pid]
        kept = sorted(
            {c for c in record.out_citations if c != pid and c in corpus.papers}
        )
        cites[pid] = tuple(kept)
        edge_count += len(kept)
        for cited in kept:
            incoming[cited].append(pid)
    cited_by = {pid: tuple(sorted(citers)) for pid, citers in incoming.items()}
    return CitationGraph(cites=cites, cited_by=cited_by, edge_count=edge_count)


def build_term_postings(corpus: Corpus, candidates: set[PhraseKey], tagger=None) -> TermPostings:
    """Date-ordered posting lists for every candidate phrase.

    One pass per paper: the normalized lemma stream is walked through a token
    trie over all candidates, so cost is independent of the candidate count.
    Candidates that never occur keep an empty posting list.
    """
    trie: dict = {}
    for key in candidates:
        node = trie
        for token in key.lemmas:
            node = node.setdefault(token, {})
        node[None] = key

    postings: dict[PhraseKey, list[Posting]] = {key: [] for key in candidates}
    for pid in corpus.date_order:
        record = corpus.papers[pid]
        stream = normalized_stream(record, tagger)
        n = len(stream)
        hits: set[PhraseKey] = set()
        for start in range(n):
            node = trie
            j = start
            while j < n:
                node = node.get(stream[j])
                if node is None:
                    break
                key = node.get(None)
                if key is not None:
                    hits.add(key)
                j += 1
        entry = (record.date, pid)
        for key in hits:
            postings[key].append(entry)
    # date_order iteration already yields entries in (date, id) order
    return TermPostings({key: tuple(entries) for key, entries in postings.items()})


def term_graph_stats(
    term: PhraseKey, postings: TermPostings, graph: CitationGraph, corpus: Corpus
) -> TermGraphStats:
    """Node and edge counts of the subgraph induced by papers containing the term."""
    entries = postings.entries(term)
    members = {pid for _, pid in entries}
    c_t = 0
    c_out = 0
    for pid in members:
        for cited in graph.cites.get(pid, ()):
            if cited in members:
                c_t += 1
            else:
                c_out += 1
    return TermGraphStats(
        term=term,
        n_t=len(members),
        c_t=c_t,
        c_out=c_out,
        corpus_size=len(corpus),
        graph_edges=graph.edge_count,
    )


# --- on-disk snapshot --------------------------------------------------------

_MAGIC = b"CRIX"
_VERSION = 1


class SnapshotError(Exception):
    pass


def save_index(path, graph: CitationGraph, postings: TermPostings) -> None:
    """Single-file snapshot: magic, version, then length-prefixed sections."""
    graph_payload = json.dumps(
        {"papers": sorted(graph.cites), "cites": {p: list(c) for p, c in graph.cites.items()}},
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    postings_payload = json.dumps(
        {
            key.text: [[date.isoformat(), pid] for date, pid in entries]
            for key, entries in postings.postings.items()
        },
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as handle:
        handle.write(_MAGIC)
        handle.write(struct.pack("<I", _VERSION))
        for payload in (graph_payload, postings_payload):
            handle.write(struct.pack("<Q", len(payload)))
            handle.write(payload)


def load_index(path) -> tuple[CitationGraph, TermPostings]:
    with open(path, "rb") as handle:
        magic = handle.read(4)
        if magic != _MAGIC:
            raise SnapshotError("not an index snapshot (bad magic)")
        (version,) = struct.unpack("<I", handle.read(4))
        if version != _VERSION:
            raise SnapshotError(f"unsupported snapshot version {version}")
        payloads = []
        for _ in range(2):
            raw_len = handle.read(8)
            if len(raw_len) != 8:
                raise SnapshotError("truncated snapshot")
            (length,) = struct.unpack("<Q", raw_len)
            payload = handle.read(length)
            if len(payload) != length:
                raise SnapshotError("truncated snapshot section")
            payloads.append(payload)

    graph_obj = json.loads(payloads[0])
    cites = {pid: tuple(graph_obj["cites"].get(pid, [])) for pid in graph_obj["papers"]}
    incoming: dict[str, list[str]] = {pid: [] for pid in cites}
    edge_count = 0
    for pid, cited_ids in cites.items():
        edge_count += len(cited_ids)
        for cited in cited_ids:
            incoming[cited].append(pid)
    graph = CitationGraph(
        cites=cites,
        cited_by={pid: tuple(sorted(c)) for pid, c in incoming.items()},
        edge_count=edge_count,
    )
    postings_obj = json.loads(payloads[1])
    postings = TermPostings(
        {
            PhraseKey.from_text(text): tuple(
                (dt.date.fromisoformat(date), pid) for date, pid in entries
            )
            for text, entries in postings_obj.items()
        }
    )
    return graph, postings
