"""Tokenization, rule-based POS tagging, lemmatization, noun-phrase chunking
and phrase normalization.

This is a deterministic, self-contained baseline: a closed-class lexicon plus
suffix rules for tagging, and rule-based plural stripping for lemmas. No
model downloads, no external NLP toolkit, identical output everywhere. A
higher-fidelity tagged stream can be substituted per paper through the
tagged-token interchange format (`load_tagged_corpus`); chunking and phrase
normalization always run here so both paths share one candidate definition.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .corpus import Corpus, PaperRecord

NOUN = "NOUN"
PROPN = "PROPN"
ADJ = "ADJ"
VERB = "VERB"
DET = "DET"
ADP = "ADP"
CONJ = "CONJ"
NUM = "NUM"
PUNCT = "PUNCT"
OTHER = "OTHER"

TAG_SET = frozenset({NOUN, PROPN, ADJ, VERB, DET, ADP, CONJ, NUM, PUNCT, OTHER})

CHUNK_TAGS = frozenset({ADJ, NOUN, PROPN, NUM})
HEAD_TAGS = frozenset({NOUN, PROPN})

MAX_PHRASE_TOKENS = 8

# Unmatchable marker separating document sections (and standing in for
# punctuation) inside normalized token streams; no lemma ever contains it.
STREAM_BOUNDARY = "\x00"


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    lemma: str
    pos: str


@dataclass(frozen=True)
class PhraseKey:
    """Canonical identity of a candidate phrase: 1..8 lowercase lemmas."""

    lemmas: tuple[str, ...]

    @property
    def text(self) -> str:
        return " ".join(self.lemmas)

    def __str__(self) -> str:
        return self.text

    @classmethod
    def from_text(cls, text: str) -> "PhraseKey":
        parts = tuple(text.split())
        if not parts:
            raise ValueError("empty phrase")
        return cls(parts)


@lru_cache(maxsize=1)
def stopword_set() -> frozenset[str]:
    """Pinned English stopword list shipped with the package, plus "using"."""
    data = resources.files("conceptrank").joinpath("data/stopwords.txt").read_text("utf-8")
    words = {line.strip() for line in data.splitlines() if line.strip()}
    return frozenset(words | {"using"})


# --- tokenizer -------------------------------------------------------------

# Words keep internal hyphens and apostrophes; every other non-space
# character comes out as a single-character token.
_TOKEN_RE = re.compile(r"\w+(?:[-']\w+)*|[^\w\s]", re.UNICODE)


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text)


# --- POS tagger ------------------------------------------------------------

_DET_WORDS = frozenset(
    "a an the this that these those each every either neither some any no all both such "
    "what which another".split()
)
_ADP_WORDS = frozenset(
    "of in on at by for with to from into onto over under above below between among "
    "through during before after against about via within without toward towards upon "
    "per across along around behind beyond near off out up down since until till".split()
)
_CONJ_WORDS = frozenset(
    "and or but nor yet because although though while whereas if unless than as when "
    "where whether".split()
)
# Auxiliaries, modals, and "use" forms; other verbs are caught by the
# stem+suffix rule below.
_VERB_WORDS = frozenset(
    "am is are was were be been being have has had having do does did doing can could "
    "may might must shall should will would use uses used using".split()
)
_PRON_WORDS = frozenset(
    "i me my we our you your he him his she her it its they them their who whom whose "
    "itself themselves".split()
)
# Frequent adjectives with no reliable suffix signal.
_ADJ_WORDS = frozenset(
    "deep new novel robust efficient effective fast slow large small high low big strong "
    "weak sparse dense linear nonlinear recent multiple several general common simple "
    "complex joint latent good bad better best".split()
)

_ADJ_SUFFIXES = ("ive", "ous", "ical", "ional", "ural", "able", "ible", "ful", "less", "ish")

# Stems whose -ing/-ed forms are treated as verbs. Deliberately excludes
# stems like learn/train/embed/cluster whose gerunds name research topics.
_VERB_STEMS = frozenset(
    "use make take give show propose present describe introduce provide demonstrate "
    "evaluate analyze compare improve enhance develop explore investigate apply consider "
    "obtain achieve observe derive suggest require contain include involve examine "
    "discuss address outperform exceed".split()
)

_NUM_RE = re.compile(r"[+-]?\d+(?:[.,]\d+)*$")


def _is_punct(token: str) -> bool:
    return not any(ch.isalnum() for ch in token)


def _has_internal_caps(token: str) -> bool:
    return any(ch.isupper() for ch in token[1:])


def _verb_stem_candidates(token: str) -> list[str]:
    lower = token.lower()
    bases = []
    if lower.endswith("ing") and len(lower) > 4:
        base = lower[:-3]
        bases.extend([base, base + "e"])
        if len(base) >= 3 and base[-1] == base[-2]:
            bases.append(base[:-1])
    elif lower.endswith("ied") and len(lower) > 4:
        bases.append(lower[:-3] + "y")
    elif lower.endswith("ed") and len(lower) > 3:
        base = lower[:-2]
        bases.extend([base, base + "e"])
        if len(base) >= 3 and base[-1] == base[-2]:
            bases.append(base[:-1])
    return bases


def pos_tag(tokens: list[str]) -> list[str]:
    """Tag each token with one of the coarse POS labels.

    Rule order: punctuation, numerals, closed-class lexicon, internal
    capitals (acronyms and CamelCase names), adjective lexicon/suffixes,
    -ly adverbs, verb-stem inflections, capitalized non-initial tokens,
    default noun.
    """
    tags = []
    for idx, token in enumerate(tokens):
        lower = token.lower()
        if _is_punct(token):
            tags.append(PUNCT)
        elif _NUM_RE.match(token):
            tags.append(NUM)
        elif lower in _DET_WORDS:
            tags.append(DET)
        elif lower in _ADP_WORDS:
            tags.append(ADP)
        elif lower in _CONJ_WORDS:
            tags.append(CONJ)
        elif lower in _VERB_WORDS:
            tags.append(VERB)
        elif lower in _PRON_WORDS:
            tags.append(OTHER)
        elif _has_internal_caps(token):
            tags.append(PROPN)
        elif lower in _ADJ_WORDS or (len(lower) > 4 and lower.endswith(_ADJ_SUFFIXES)):
            tags.append(ADJ)
        elif len(lower) > 4 and lower.endswith("ly"):
            tags.append(OTHER)
        elif any(base in _VERB_STEMS for base in _verb_stem_candidates(token)):
            tags.append(VERB)
        elif idx > 0 and token[:1].isupper():
            tags.append(PROPN)
        else:
            tags.append(NOUN)
    return tags


# --- lemmatizer ------------------------------------------------------------

_PLURAL_EXCEPTIONS = frozenset("series species news bias alias canvas atlas".split())
_ES_SUFFIXES = ("ses", "xes", "zes", "ches", "shes")


def lemmatize(token: str, pos: str) -> str:
    """Lowercase; strip English plural endings from nouns and proper nouns."""
    lower = token.lower()
    if pos not in HEAD_TAGS:
        return lower
    if lower in _PLURAL_EXCEPTIONS or lower.endswith(("ss", "us", "is")):
        return lower
    if lower.endswith("ies") and len(lower) > 4:
        return lower[:-3] + "y"
    if lower.endswith(_ES_SUFFIXES):
        return lower[:-2]
    if lower.endswith("s") and len(lower) > 3:
        return lower[:-1]
    return lower


def tag_text(text: str) -> list[TaggedToken]:
    """Tokenize, tag, and lemmatize a piece of text."""
    tokens = tokenize(text)
    tags = pos_tag(tokens)
    return [TaggedToken(tok, lemmatize(tok, tag), tag) for tok, tag in zip(tokens, tags)]


# --- chunking and normalization --------------------------------------------


def chunk_noun_phrases(tagged: list[TaggedToken]) -> list[tuple[int, int]]:
    """Noun-phrase spans as half-open (start, end) index pairs.

    Maximal spans match (ADJ|NOUN|PROPN|NUM)* (NOUN|PROPN); additionally every
    contiguous sub-span that ends in a NOUN/PROPN and is at most 8 tokens long
    is emitted. Spans never cross tokens outside the chunk grammar.
    """
    spans: list[tuple[int, int]] = []
    n = len(tagged)
    run_start = None
    for i in range(n + 1):
        inside = i < n and tagged[i].pos in CHUNK_TAGS
        if inside and run_start is None:
            run_start = i
        elif not inside and run_start is not None:
            spans.extend(_spans_in_run(tagged, run_start, i))
            run_start = None
    return spans


def _spans_in_run(tagged, start: int, end: int) -> list[tuple[int, int]]:
    heads = [j for j in range(start, end) if tagged[j].pos in HEAD_TAGS]
    if not heads:
        return []
    last_head = heads[-1]
    out = {(start, last_head + 1)}  # the maximal span
    for i in range(start, last_head + 1):
        for j in heads:
            if j >= i and j - i + 1 <= MAX_PHRASE_TOKENS:
                out.add((i, j + 1))
    return sorted(out)


def normalize_phrase(span: list[TaggedToken]) -> PhraseKey | None:
    """Reduce a token span to its canonical PhraseKey, if any survives.

    Keeps each token's lemma; drops stopwords (incl. "using"), bare numerals
    and punctuation. Returns None when nothing is left or more than 8 tokens
    remain.
    """
    stop = stopword_set()
    lemmas = []
    for tok in span:
        if tok.pos in (NUM, PUNCT):
            continue
        if _NUM_RE.match(tok.lemma):
            continue
        if tok.lemma in stop:
            continue
        lemmas.append(tok.lemma)
    if not lemmas or len(lemmas) > MAX_PHRASE_TOKENS:
        return None
    return PhraseKey(tuple(lemmas))


# --- per-paper tagging (baseline or interchange-backed) ---------------------


@dataclass(frozen=True)
class TaggedSections:
    title: tuple[TaggedToken, ...]
    abstract: tuple[TaggedToken, ...]
    body: tuple[TaggedToken, ...]


def baseline_tagger(record: PaperRecord) -> TaggedSections:
    return TaggedSections(
        title=tuple(tag_text(record.title)),
        abstract=tuple(tag_text(record.abstract)),
        body=tuple(tag_text(record.body)),
    )


class InterchangeError(ValueError):
    """Malformed tagged-token interchange file."""


def load_tagged_corpus(path) -> tuple[dict[str, TaggedSections], list[str]]:
    """Read a tagged-token interchange JSONL file.

    Each line: {"id": str, "title": [[surface, lemma, pos], ...],
    "abstract": [...], "body": [...]}. Returns (per-paper sections, warnings).
    Tokens with unknown POS values or broken lemmas are repaired and warned
    about rather than dropped.
    """
    docs: dict[str, TaggedSections] = {}
    warnings: list[str] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise InterchangeError(f"line {line_number}: malformed JSON: {exc.msg}") from exc
            if not isinstance(obj, dict) or "id" not in obj:
                raise InterchangeError(f"line {line_number}: missing id")
            sections = {}
            for name in ("title", "abstract", "body"):
                if name not in obj:
                    raise InterchangeError(f"line {line_number}: missing section {name}")
                sections[name] = _parse_section(obj[name], obj["id"], name, warnings)
            if obj["id"] in docs:
                warnings.append(f"duplicate tagged document for id {obj['id']!r}; keeping first")
                continue
            docs[obj["id"]] = TaggedSections(**sections)
    return docs, warnings


def _parse_section(raw, doc_id: str, name: str, warnings: list[str]) -> tuple[TaggedToken, ...]:
    if not isinstance(raw, list):
        raise InterchangeError(f"document {doc_id!r}: section {name} is not a list")
    tokens = []
    for item in raw:
        if not isinstance(item, list) or len(item) != 3:
            raise InterchangeError(f"document {doc_id!r}: bad token triple in {name}")
        surface, lemma, pos = item
        if pos not in TAG_SET:
            warnings.append(f"document {doc_id!r}: unknown POS {pos!r} coerced to OTHER")
            pos = OTHER
        lemma = str(lemma).lower()
        if not lemma or any(ch.isspace() for ch in lemma):
            warnings.append(f"document {doc_id!r}: bad lemma {lemma!r} in {name}; using surface")
            lemma = str(surface).lower().replace(" ", "") or "_"
        tokens.append(TaggedToken(str(surface), lemma, pos))
    return tuple(tokens)


def make_interchange_tagger(docs: dict[str, TaggedSections], warnings: list[str]):
    """Per-paper tagger backed by an interchange file.

    Papers absent from the file fall back to the baseline tagger, with a
    warning appended to `warnings`.
    """

    def tagger(record: PaperRecord) -> TaggedSections:
        sections = docs.get(record.id)
        if sections is None:
            warnings.append(f"paper {record.id!r} missing from tagged file; using baseline tagger")
            return baseline_tagger(record)
        return sections

    return tagger


# --- corpus-level operations -------------------------------------------------


def extract_title_candidates(
    corpus: Corpus, from_year: int, to_year: int, tagger=None
) -> set[PhraseKey]:
    """Union of normalized noun phrases over all titles in the year range."""
    if from_year > to_year:
        raise ValueError("from_year must not exceed to_year")
    tagger = tagger or baseline_tagger
    candidates: set[PhraseKey] = set()
    for record in corpus:
        if not from_year <= record.date.year <= to_year:
            continue
        title = list(tagger(record).title)
        for start, end in chunk_noun_phrases(title):
            key = normalize_phrase(title[start:end])
            if key is not None:
                candidates.add(key)
    return candidates


def normalized_stream(record: PaperRecord, tagger=None) -> list[str]:
    """Lemma stream for occurrence matching: title/abstract/body joined with
    boundary markers so phrases never match across sections. Stopwords,
    "using" and bare numerals are removed; punctuation becomes a boundary.
    """
    tagger = tagger or baseline_tagger
    sections = tagger(record)
    raw_sections = [
        (record.title, sections.title),
        (record.abstract, sections.abstract),
        (record.body, sections.body),
    ]
    stop = stopword_set()
    stream: list[str] = []
    first = True
    for raw, tokens in raw_sections:
        if not raw.strip():
            continue
        if not first:
            stream.append(STREAM_BOUNDARY)
        first = False
        stream.extend(_section_stream(tokens, stop))
    return stream


def _section_stream(tokens, stop) -> list[str]:
    out: list[str] = []
    for tok in tokens:
        if tok.pos == PUNCT:
            if out and out[-1] != STREAM_BOUNDARY:
                out.append(STREAM_BOUNDARY)
            continue
        if tok.pos == NUM or _NUM_RE.match(tok.lemma):
            continue
        if tok.lemma in stop:
            continue
        out.append(tok.lemma)
    while out and out[-1] == STREAM_BOUNDARY:
        out.pop()
    return out
