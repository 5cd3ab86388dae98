import datetime as dt

import pytest

from conceptrank.corpus import (
    Corpus,
    CorpusError,
    RecordError,
    dump_corpus,
    load_corpus,
    parse_date,
    parse_paper_record,
)


MINIMAL = '{"id":"A","title":"T","abstract":"","body":"","date":"2015-06","outCitations":[]}'


def write_corpus_file(tmp_path, lines, name="corpus.jsonl"):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestParseRecord:
    def test_minimal_record_month_normalized(self):
        rec, note = parse_paper_record(MINIMAL)
        assert rec.id == "A"
        assert rec.date == dt.date(2015, 6, 1)
        assert rec.out_citations == ()
        assert note.self_citations == 0

    def test_self_citation_dropped_and_counted(self):
        line = '{"id":"A","title":"T","date":"2015-06-03","outCitations":["A","B"]}'
        rec, note = parse_paper_record(line)
        assert rec.out_citations == ("B",)
        assert note.self_citations == 1

    def test_duplicate_citations_dropped_and_counted(self):
        line = '{"id":"A","title":"T","date":"2015-06","outCitations":["B","B","C"]}'
        rec, note = parse_paper_record(line)
        assert rec.out_citations == ("B", "C")
        assert note.duplicate_citations == 1

    def test_missing_date_reports_line_number(self):
        with pytest.raises(RecordError, match="line 7: missing field: date"):
            parse_paper_record('{"id":"B","title":"T"}', line_number=7)

    def test_malformed_json(self):
        with pytest.raises(RecordError, match="malformed JSON"):
            parse_paper_record("{not json", line_number=1)

    def test_empty_id_rejected(self):
        with pytest.raises(RecordError, match="id must be"):
            parse_paper_record('{"id":"","title":"T","date":"2015-06"}')

    @pytest.mark.parametrize("raw", ["2015-13", "2015-06-31", "June 2015", "2015", "2015-00"])
    def test_bad_dates(self, raw):
        with pytest.raises(RecordError):
            parse_paper_record('{"id":"A","title":"T","date":"%s"}' % raw)

    def test_unknown_fields_ignored(self):
        line = '{"id":"A","title":"T","date":"2015-06","venue":"x","extra":1}'
        rec, _ = parse_paper_record(line)
        assert rec.id == "A"


def test_parse_date_day_and_month():
    assert parse_date("2015-06-03") == dt.date(2015, 6, 3)
    assert parse_date("2015-06") == dt.date(2015, 6, 1)
    with pytest.raises(ValueError):
        parse_date("15-06-03")


class TestLoadCorpus:
    def test_three_valid_lines(self, tmp_path):
        path = write_corpus_file(
            tmp_path,
            [
                '{"id":"a","title":"One","date":"2015-01"}',
                '{"id":"b","title":"Two","date":"2016-02-11","outCitations":["a"]}',
                '{"id":"c","title":"Three","date":"2014-05"}',
            ],
        )
        corpus, report = load_corpus(path)
        assert len(corpus) == 3
        assert report.records_read == 3
        assert report.records_rejected == 0
        assert corpus.date_order == ("c", "a", "b")

    def test_dangling_citation_counted_but_retained(self, tmp_path):
        path = write_corpus_file(
            tmp_path,
            [
                '{"id":"a","title":"One","date":"2015-01"}',
                '{"id":"b","title":"Two","date":"2016-01","outCitations":["z"]}',
            ],
        )
        corpus, report = load_corpus(path)
        assert report.dangling_citations == 1
        assert corpus.papers["b"].out_citations == ("z",)

    def test_duplicate_id_is_hard_error_naming_lines(self, tmp_path):
        path = write_corpus_file(
            tmp_path,
            [
                '{"id":"a","title":"One","date":"2015-01"}',
                '{"id":"a","title":"Dup","date":"2016-01"}',
            ],
        )
        with pytest.raises(CorpusError, match="lines 1 and 2"):
            load_corpus(path)

    def test_rejected_records_counted_with_line_numbers(self, tmp_path):
        path = write_corpus_file(
            tmp_path,
            [
                '{"id":"a","title":"One","date":"2015-01"}',
                '{"id":"b","title":"NoDate"}',
                "not json at all",
            ],
        )
        corpus, report = load_corpus(path)
        assert len(corpus) == 1
        assert report.records_rejected == 2
        assert [line for line, _ in report.rejects] == [2, 3]

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(CorpusError, match="cannot read"):
            load_corpus(tmp_path / "missing.jsonl")

    def test_blank_lines_skipped(self, tmp_path):
        path = write_corpus_file(tmp_path, [MINIMAL, "", "   "])
        corpus, report = load_corpus(path)
        assert len(corpus) == 1
        assert report.records_read == 1


class TestCorpusModel:
    def test_date_order_is_sorted_permutation(self, tmp_path):
        path = write_corpus_file(
            tmp_path,
            [
                '{"id":"b","title":"B","date":"2015-03"}',
                '{"id":"a","title":"A","date":"2015-03"}',
                '{"id":"c","title":"C","date":"2014-01"}',
            ],
        )
        corpus, _ = load_corpus(path)
        assert sorted(corpus.date_order) == sorted(corpus.papers)
        keys = [corpus.order_key(pid) for pid in corpus.date_order]
        assert keys == sorted(keys)
        assert corpus.date_order == ("c", "a", "b")  # id tie-break within 2015-03

    def test_load_is_deterministic(self, tmp_path):
        lines = [
            '{"id":"b","title":"B","date":"2015-03","outCitations":["a"]}',
            '{"id":"a","title":"A","date":"2015-03"}',
        ]
        first, _ = load_corpus(write_corpus_file(tmp_path, lines, "one.jsonl"))
        second, _ = load_corpus(write_corpus_file(tmp_path, lines, "two.jsonl"))
        assert first == second

    def test_round_trip(self, tmp_path):
        path = write_corpus_file(
            tmp_path,
            [
                '{"id":"b","title":"B paper","abstract":"x","date":"2015-03","outCitations":["a"]}',
                '{"id":"a","title":"A paper","body":"text here","date":"2014-07-21"}',
            ],
        )
        corpus, _ = load_corpus(path)
        out = tmp_path / "rt.jsonl"
        dump_corpus(corpus, out)
        reloaded, report = load_corpus(out)
        assert reloaded == corpus
        assert report.records_rejected == 0

    def test_duplicate_records_rejected_by_constructor(self, central_paper_corpus):
        records = list(central_paper_corpus)
        with pytest.raises(CorpusError):
            Corpus.from_records(records + [records[0]])
