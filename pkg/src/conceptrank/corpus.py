"""Corpus ingestion: JSONL parsing, validation, and the immutable in-memory model.

A corpus file is UTF-8 JSONL, one paper per line:

    {"id": "...", "title": "...", "abstract": "...", "body": "...",
     "date": "YYYY-MM-DD" | "YYYY-MM", "outCitations": ["...", ...]}

``abstract``, ``body`` and ``outCitations`` are optional; unknown fields are
ignored. Month-granularity dates normalize to the first day of the month.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass, field


class CorpusError(Exception):
    """Hard failure while loading a corpus (unreadable file, duplicate ids)."""


class RecordError(ValueError):
    """A single malformed corpus record."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class PaperRecord:
    id: str
    title: str
    abstract: str
    body: str
    date: dt.date
    out_citations: tuple[str, ...]


@dataclass(frozen=True)
class RecordNote:
    """Per-record counts of silently repaired citation lists."""

    self_citations: int = 0
    duplicate_citations: int = 0


@dataclass
class IngestReport:
    records_read: int = 0
    records_rejected: int = 0
    rejects: list[tuple[int, str]] = field(default_factory=list)
    self_citations_dropped: int = 0
    duplicate_citations_dropped: int = 0
    dangling_citations: int = 0

    def as_dict(self) -> dict:
        return {
            "records_read": self.records_read,
            "records_rejected": self.records_rejected,
            "rejects": [{"line": ln, "error": msg} for ln, msg in self.rejects],
            "self_citations_dropped": self.self_citations_dropped,
            "duplicate_citations_dropped": self.duplicate_citations_dropped,
            "dangling_citations": self.dangling_citations,
        }


@dataclass(frozen=True)
class Corpus:
    """All papers keyed by id plus a strict (date, id) total order over them."""

    papers: dict[str, PaperRecord]
    date_order: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.papers)

    def __iter__(self):
        for pid in self.date_order:
            yield self.papers[pid]

    def order_key(self, paper_id: str) -> tuple[dt.date, str]:
        rec = self.papers[paper_id]
        return (rec.date, rec.id)

    @classmethod
    def from_records(cls, records) -> "Corpus":
        records = list(records)
        papers = {r.id: r for r in records}
        if len(papers) != len(records):
            raise CorpusError("duplicate paper id in record list")
        order = tuple(sorted(papers, key=lambda pid: (papers[pid].date, pid)))
        return cls(papers=papers, date_order=order)


_DAY_RE = re.compile(r"\d{4}-\d{2}-\d{2}$")
_MONTH_RE = re.compile(r"\d{4}-\d{2}$")


def parse_date(raw: str) -> dt.date:
    """Parse YYYY-MM-DD or YYYY-MM; month dates become the first of the month."""
    if _DAY_RE.match(raw):
        return dt.date.fromisoformat(raw)
    if _MONTH_RE.match(raw):
        year, month = int(raw[:4]), int(raw[5:7])
        return dt.date(year, month, 1)
    raise ValueError(f"unparseable date {raw!r}")


def parse_paper_record(line: str, line_number: int | None = None) -> tuple[PaperRecord, RecordNote]:
    """Parse one JSONL line into a PaperRecord.

    Self-citations and duplicate citation ids are dropped; the RecordNote
    carries how many of each. Raises RecordError on malformed input.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(f"malformed JSON: {exc.msg}", line_number) from exc
    if not isinstance(obj, dict):
        raise RecordError("record is not a JSON object", line_number)

    for name in ("id", "title", "date"):
        if name not in obj:
            raise RecordError(f"missing field: {name}", line_number)
    paper_id = obj["id"]
    if not isinstance(paper_id, str) or not paper_id:
        raise RecordError("id must be a non-empty string", line_number)
    title = obj["title"]
    if not isinstance(title, str):
        raise RecordError("title must be a string", line_number)
    try:
        date = parse_date(str(obj["date"]))
    except ValueError as exc:
        raise RecordError(str(exc), line_number) from exc

    raw_cites = obj.get("outCitations", [])
    if not isinstance(raw_cites, list) or any(not isinstance(c, str) for c in raw_cites):
        raise RecordError("outCitations must be a list of strings", line_number)
    seen: set[str] = set()
    kept = []
    self_cites = 0
    dup_cites = 0
    for cited in raw_cites:
        if cited == paper_id:
            self_cites += 1
            continue
        if cited in seen:
            dup_cites += 1
            continue
        seen.add(cited)
        kept.append(cited)

    record = PaperRecord(
        id=paper_id,
        title=title,
        abstract=str(obj.get("abstract", "") or ""),
        body=str(obj.get("body", "") or ""),
        date=date,
        out_citations=tuple(kept),
    )
    return record, RecordNote(self_citations=self_cites, duplicate_citations=dup_cites)


def load_corpus(path) -> tuple[Corpus, IngestReport]:
    """Load a JSONL corpus file.

    Malformed records are rejected and reported; duplicate paper ids abort
    the load with a CorpusError naming both offending lines. Citations to
    ids absent from the corpus stay on the record but are counted as
    dangling (graph construction skips them).
    """
    report = IngestReport()
    records: dict[str, PaperRecord] = {}
    line_of: dict[str, int] = {}
    try:
        handle = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read corpus file {path}: {exc}") from exc
    with handle:
        for line_number, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            report.records_read += 1
            try:
                record, note = parse_paper_record(raw, line_number)
            except RecordError as exc:
                report.records_rejected += 1
                report.rejects.append((line_number, str(exc)))
                continue
            if record.id in records:
                raise CorpusError(
                    f"duplicate paper id {record.id!r} at lines "
                    f"{line_of[record.id]} and {line_number}"
                )
            records[record.id] = record
            line_of[record.id] = line_number
            report.self_citations_dropped += note.self_citations
            report.duplicate_citations_dropped += note.duplicate_citations

    corpus = Corpus.from_records(list(records.values()))
    for record in records.values():
        report.dangling_citations += sum(1 for c in record.out_citations if c not in records)
    return corpus, report


def dump_corpus(corpus: Corpus, path) -> None:
    """Serialize a corpus back to JSONL (date order, ISO dates)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in corpus:
            obj = {
                "id": record.id,
                "title": record.title,
                "abstract": record.abstract,
                "body": record.body,
                "date": record.date.isoformat(),
                "outCitations": list(record.out_citations),
            }
            handle.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")
