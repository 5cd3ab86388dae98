import datetime as dt

import pytest

from conceptrank.corpus import Corpus, PaperRecord


def record(pid, date, title="", abstract="", body="", cites=()):
    return PaperRecord(
        id=pid,
        title=title,
        abstract=abstract,
        body=body,
        date=dt.date.fromisoformat(date) if isinstance(date, str) else date,
        out_citations=tuple(cites),
    )


@pytest.fixture
def central_paper_corpus():
    """Five papers that all mention "term"; everyone later cites A.

    Edges: B->A, C->A, C->B, D->A, E->A. C and D share 2017 so the (date, id)
    tie-break is exercised.
    """
    return Corpus.from_records(
        [
            record("a", "2015-01-01", title="term"),
            record("b", "2016-01-01", title="term", cites=["a"]),
            record("c", "2017-01-01", title="term", cites=["a", "b"]),
            record("d", "2017-01-01", title="term", cites=["a"]),
            record("e", "2018-01-01", title="term", cites=["a"]),
        ]
    )
