"""Command-line pipeline: candidates -> score -> eval, plus synthetic corpora.

Stages communicate through files so each can be rerun and diffed on its own.
All randomness flows from --seed; identical inputs and flags give
byte-identical outputs. Exit codes: 0 success, 1 failure, 2 usage error,
3 missing annotations.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import evaluation, scoring, synthgen, textnorm
from .corpus import Corpus, CorpusError, dump_corpus, load_corpus
from .index import build_citation_graph, build_term_postings
from .scoring import ForeCiteParams, rank_concepts
from .textnorm import PhraseKey, extract_title_candidates

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_MISSING_LABELS = 3


@dataclass(frozen=True)
class RunConfig:
    """Default pipeline configuration; flags mirror these fields kebab-cased."""

    from_year: int = 1999
    to_year: int = 2018
    min_citations: int = 3
    sample_size: int = 500
    seed: int = 13
    eval_sample_size: int = 100
    curve_sample_size: int = 300


DEFAULTS = RunConfig()


class PipelineError(Exception):
    pass


def _load_corpus_checked(path) -> Corpus:
    corpus, report = load_corpus(path)
    if report.records_rejected:
        for line, msg in report.rejects:
            print(f"warning: rejected record at {path}:{line}: {msg}", file=sys.stderr)
    return corpus


def _make_tagger(tagged_path):
    """Per-paper tagger; interchange-backed when --tagged is given."""
    if tagged_path is None:
        return None, None
    docs, warnings = textnorm.load_tagged_corpus(tagged_path)
    return textnorm.make_interchange_tagger(docs, warnings), warnings


def _flush_tagger_warnings(warnings) -> None:
    if warnings:
        for message in warnings:
            print(f"warning: {message}", file=sys.stderr)
        warnings.clear()


def _read_candidates(path) -> list[PhraseKey]:
    keys = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                keys.append(PhraseKey.from_text(line))
    return keys


# --- subcommands -------------------------------------------------------------


def cmd_candidates(args) -> int:
    corpus = _load_corpus_checked(args.corpus)
    tagger, warnings = _make_tagger(args.tagged)
    candidates = extract_title_candidates(corpus, args.from_year, args.to_year, tagger)
    _flush_tagger_warnings(warnings)
    with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
        for key in sorted(candidates, key=lambda k: k.text):
            handle.write(key.text + "\n")
    print(f"{len(candidates)} candidate phrases -> {args.out}")
    return 0


def cmd_score(args) -> int:
    corpus = _load_corpus_checked(args.corpus)
    candidates = _read_candidates(args.candidates)
    tagger, warnings = _make_tagger(args.tagged)
    graph = build_citation_graph(corpus)
    postings = build_term_postings(corpus, set(candidates), tagger)
    _flush_tagger_warnings(warnings)
    params = ForeCiteParams(
        min_citations=args.min_citations, sample_size=args.sample_size, seed=args.seed
    )
    ranked = rank_concepts(args.method, candidates, postings, graph, corpus, params)
    if args.top_n is not None:
        ranked = ranked[: args.top_n]
    scoring.write_ranked_tsv(args.out, ranked)
    print(f"{len(ranked)} scored phrases ({args.method}) -> {args.out}")
    return 0


def _load_merged_annotations(path, annotator):
    per_annotator = evaluation.load_annotations(path)
    return evaluation.merge_annotations(per_annotator, annotator)


def cmd_eval_p_at_k(args) -> int:
    ranked = [c.term.text for c in scoring.read_ranked_tsv(args.ranked)]
    annotations = _load_merged_annotations(args.annotations, args.annotator)
    results = []
    for k in args.k:
        sample_size = min(args.sample_size, k)
        estimate, positives, labeled = evaluation.precision_at_k(
            ranked, annotations, k, sample_size, args.seed
        )
        results.append(
            {
                "k": k,
                "sample_size": sample_size,
                "estimate": round(estimate, 6),
                "positives": positives,
                "labeled": labeled,
            }
        )
    payload = {"p_at_k": results, "seed": args.seed}
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    print(text, end="")
    return 0


def cmd_eval_py_curve(args) -> int:
    annotations = _load_merged_annotations(args.annotations, args.annotator)
    curves = {}
    for path in [args.ranked] + (args.compare or []):
        ranked = [c.term.text for c in scoring.read_ranked_tsv(path)]
        top_n = min(args.top_n, len(ranked))
        sample_size = min(args.sample_size, top_n)
        curves[path] = evaluation.precision_yield_curve(
            ranked, annotations, top_n, sample_size, args.seed
        )
    main_curve = curves[args.ranked]
    evaluation.write_curve_csv(args.out, main_curve)
    if args.svg:
        evaluation.write_curve_svg(args.svg, main_curve)
    max_yield = max((c[-1].yield_est for c in curves.values() if c), default=0.0)
    summary = {"curve": args.out, "aoc": {}}
    for path, curve in curves.items():
        summary["aoc"][path] = round(evaluation.area_over_curve(curve, max_yield), 6) if curve else None
    if args.compare:
        base = summary["aoc"][args.ranked]
        reductions = {}
        for path in args.compare:
            other = summary["aoc"][path]
            if other:
                reductions[path] = round(100.0 * (other - base) / other, 2)
        summary["aoc_reduction_vs_percent"] = reductions
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def cmd_synth(args) -> int:
    spec = synthgen.SynthSpec(
        concepts=args.concepts,
        dense=args.dense,
        background=args.background,
        papers=args.papers,
        seed=args.seed,
        from_year=args.from_year,
        to_year=args.to_year,
    )
    corpus, truth = synthgen.generate_synthetic_corpus(spec)
    dump_corpus(corpus, args.corpus_out)
    evaluation.write_annotations(args.truth_out, truth.labels, annotator="truth")
    print(
        f"{len(corpus)} papers -> {args.corpus_out}; "
        f"{len(truth.labels)} labeled phrases -> {args.truth_out}"
    )
    return 0


def cmd_ingest_check(args) -> int:
    _, report = load_corpus(args.corpus)
    print(json.dumps(report.as_dict(), indent=2, sort_keys=True))
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptrank",
        description="Mine emerging concept phrases from a paper corpus via citation-graph scores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("candidates", help="extract candidate phrases from titles")
    p.add_argument("--corpus", required=True)
    p.add_argument("--from-year", type=int, default=DEFAULTS.from_year)
    p.add_argument("--to-year", type=int, default=DEFAULTS.to_year)
    p.add_argument("--tagged", default=None, help="tagged-token interchange JSONL")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("score", help="rank candidate phrases")
    p.add_argument("--corpus", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--method", required=True, choices=scoring.METHODS)
    p.add_argument("--min-citations", type=int, default=DEFAULTS.min_citations)
    p.add_argument("--sample-size", type=int, default=DEFAULTS.sample_size)
    p.add_argument("--seed", type=int, default=DEFAULTS.seed)
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--tagged", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_score)

    p_eval = sub.add_parser("eval", help="evaluate a ranked TSV against annotations")
    eval_sub = p_eval.add_subparsers(dest="eval_command", required=True)

    p = eval_sub.add_parser("p-at-k", help="sampled precision at K")
    p.add_argument("--ranked", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--annotator", default=None)
    p.add_argument("--k", type=int, action="append", required=True)
    p.add_argument("--sample-size", type=int, default=DEFAULTS.eval_sample_size)
    p.add_argument("--seed", type=int, default=DEFAULTS.seed)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval_p_at_k)

    p = eval_sub.add_parser("py-curve", help="precision-yield curve and area over it")
    p.add_argument("--ranked", required=True)
    p.add_argument("--compare", action="append", default=[])
    p.add_argument("--annotations", required=True)
    p.add_argument("--annotator", default=None)
    p.add_argument("--top-n", type=int, required=True)
    p.add_argument("--sample-size", type=int, default=DEFAULTS.curve_sample_size)
    p.add_argument("--seed", type=int, default=DEFAULTS.seed)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_eval_py_curve)

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    p.add_argument("--concepts", type=int, default=3)
    p.add_argument("--dense", type=int, default=3)
    p.add_argument("--background", type=int, default=10)
    p.add_argument("--papers", type=int, default=150)
    p.add_argument("--seed", type=int, default=DEFAULTS.seed)
    p.add_argument("--from-year", type=int, default=2010)
    p.add_argument("--to-year", type=int, default=DEFAULTS.to_year)
    p.add_argument("--corpus-out", required=True)
    p.add_argument("--truth-out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("ingest-check", help="validate a corpus file and print the report")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_ingest_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except evaluation.MissingLabelsError as exc:
        print("missing annotations for sampled phrases:", file=sys.stderr)
        for phrase in exc.phrases:
            print(phrase, file=sys.stderr)
        return EXIT_MISSING_LABELS
    except ValueError as exc:
        if args.command == "synth" and "infeasible" in str(exc):
            parser.error(str(exc))  # exits 2
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (CorpusError, OSError, PipelineError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
