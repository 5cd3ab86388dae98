"""Ranking evaluation: sampled precision-at-K, precision-yield curves,
area over the curve, inter-annotator agreement, and the Fisher exact test.

Annotation files are CSV with header ``phrase,label,annotator``; labels are
0/1 and phrases are in canonical form. Missing labels are hard errors so an
evaluation can never silently skip unannotated output.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from math import comb

from .detrand import sample_without_replacement


class MissingLabelsError(Exception):
    """Sampled phrases that the annotation set does not cover."""

    def __init__(self, phrases: list[str]):
        self.phrases = list(phrases)
        preview = ", ".join(self.phrases[:10])
        more = "" if len(self.phrases) <= 10 else f" (+{len(self.phrases) - 10} more)"
        super().__init__(f"{len(self.phrases)} sampled phrases lack labels: {preview}{more}")


@dataclass(frozen=True)
class CurvePoint:
    yield_est: float  # estimated count of true positives so far
    precision: float


# --- annotation files ---------------------------------------------------------


def load_annotations(path) -> dict[str, dict[str, int]]:
    """Read an annotation CSV; returns {annotator: {phrase: 0/1}}."""
    per_annotator: dict[str, dict[str, int]] = {}
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        required = {"phrase", "label", "annotator"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"annotation file needs columns {sorted(required)}")
        for row in reader:
            phrase = row["phrase"]
            label = row["label"].strip()
            if label not in ("0", "1"):
                raise ValueError(f"label for {phrase!r} must be 0 or 1, got {label!r}")
            annotator = row["annotator"] or ""
            labels = per_annotator.setdefault(annotator, {})
            if phrase in labels:
                raise ValueError(f"duplicate label for phrase {phrase!r} by annotator {annotator!r}")
            labels[phrase] = int(label)
    return per_annotator


def merge_annotations(per_annotator: dict[str, dict[str, int]], annotator: str | None = None) -> dict[str, int]:
    """Single labeling out of an annotation file.

    With ``annotator`` given, that annotator's labels are used. Otherwise all
    annotators are merged; conflicting labels for one phrase are an error.
    """
    if annotator is not None:
        if annotator not in per_annotator:
            raise ValueError(f"no labels from annotator {annotator!r}")
        return dict(per_annotator[annotator])
    merged: dict[str, int] = {}
    for labels in per_annotator.values():
        for phrase, label in labels.items():
            if merged.get(phrase, label) != label:
                raise ValueError(f"conflicting labels for phrase {phrase!r}; pass an annotator")
            merged[phrase] = label
    return merged


def write_annotations(path, labels: dict[str, int], annotator: str = "") -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["phrase", "label", "annotator"])
        for phrase in sorted(labels):
            writer.writerow([phrase, labels[phrase], annotator])


# --- sampled precision ----------------------------------------------------------


def sample_top_k(ranked: list[str], k: int, sample_size: int, seed: int) -> list[str]:
    """Uniform sample without replacement from ranks 1..k, in rank order."""
    if k > len(ranked):
        raise ValueError(f"k={k} exceeds ranking length {len(ranked)}")
    if sample_size > k:
        raise ValueError(f"sample_size={sample_size} exceeds k={k}")
    if sample_size < 1:
        raise ValueError("sample_size must be at least 1")
    picks = sample_without_replacement(random.Random(seed), k, sample_size)
    return [ranked[i] for i in sorted(picks)]


def precision_at_k(
    ranked: list[str], annotations: dict[str, int], k: int, sample_size: int, seed: int
) -> tuple[float, int, int]:
    """Estimated precision among the top k: (estimate, positives, labeled).

    With sample_size == k the sample is a census and the estimate exact.
    """
    sample = sample_top_k(ranked, k, sample_size, seed)
    missing = [p for p in sample if p not in annotations]
    if missing:
        raise MissingLabelsError(missing)
    positives = sum(annotations[p] for p in sample)
    return positives / len(sample), positives, len(sample)


def precision_yield_curve(
    ranked: list[str], annotations: dict[str, int], top_n: int, sample_size: int, seed: int
) -> list[CurvePoint]:
    """One curve point per positive sampled phrase, walking ranks 1..top_n.

    At the i-th positive, found at the j-th sampled phrase, we emit
    yield = i * (top_n / sample_size) and precision = i / j. This is the
    sample-proportion estimator; with sample_size == top_n it degenerates to
    the exact census curve (yield = i, precision = i / rank).
    """
    sample = sample_top_k(ranked, top_n, sample_size, seed)
    missing = [p for p in sample if p not in annotations]
    if missing:
        raise MissingLabelsError(missing)
    scale = top_n / sample_size
    points: list[CurvePoint] = []
    positives = 0
    for j, phrase in enumerate(sample, start=1):
        if annotations[phrase]:
            positives += 1
            points.append(CurvePoint(yield_est=positives * scale, precision=positives / j))
    return points


def area_over_curve(curve: list[CurvePoint], max_yield: float) -> float:
    """Area between perfect precision and the step-interpolated curve.

    The precision over (y_{i-1}, y_i] is the i-th point's precision; past the
    last point it stays at the last precision out to max_yield.
    """
    if not curve:
        raise ValueError("empty curve")
    if max_yield < curve[-1].yield_est:
        raise ValueError("max_yield is smaller than the final curve yield")
    area = 0.0
    prev_yield = 0.0
    for point in curve:
        area += (1.0 - point.precision) * (point.yield_est - prev_yield)
        prev_yield = point.yield_est
    area += (1.0 - curve[-1].precision) * (max_yield - prev_yield)
    return area


# --- agreement and significance --------------------------------------------------


def cohens_kappa(
    labels_a: dict[str, int], labels_b: dict[str, int]
) -> tuple[float, float | None]:
    """(raw agreement, kappa); kappa is None when chance agreement is 1."""
    if set(labels_a) != set(labels_b):
        raise ValueError("annotators labeled different phrase sets")
    n = len(labels_a)
    if n == 0:
        raise ValueError("no labeled phrases")
    matches = sum(1 for p in labels_a if labels_a[p] == labels_b[p])
    p_o = matches / n
    values = set(labels_a.values()) | set(labels_b.values())
    p_e = 0.0
    for v in values:
        share_a = sum(1 for x in labels_a.values() if x == v) / n
        share_b = sum(1 for x in labels_b.values() if x == v) / n
        p_e += share_a * share_b
    if p_e >= 1.0:
        return p_o, None
    return p_o, (p_o - p_e) / (1.0 - p_e)


def fisher_exact(a: int, b: int, c: int, d: int) -> tuple[float, float]:
    """Exact test on the 2x2 table [[a, b], [c, d]].

    Returns (one-sided, two-sided) p-values. One-sided is the smaller
    hypergeometric tail at the observed table; two-sided sums every table
    (same margins) whose probability does not exceed the observed one.
    Probabilities are exact integer ratios until the final division.
    """
    if min(a, b, c, d) < 0:
        raise ValueError("table counts must be nonnegative")
    total = a + b + c + d
    if total == 0:
        raise ValueError("table is all zeros")
    r1, r2, c1 = a + b, c + d, a + c
    lo = max(0, c1 - r2)
    hi = min(c1, r1)
    weights = {x: comb(r1, x) * comb(r2, c1 - x) for x in range(lo, hi + 1)}
    denom = comb(total, c1)
    observed = weights[a]
    left = sum(w for x, w in weights.items() if x <= a)
    right = sum(w for x, w in weights.items() if x >= a)
    two = sum(w for w in weights.values() if w <= observed)
    p_one = min(left, right) / denom
    p_two = two / denom
    return min(p_one, 1.0), min(p_two, 1.0)


# --- curve output -----------------------------------------------------------------


def write_curve_csv(path, curve: list[CurvePoint]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("yield,precision\n")
        for point in curve:
            handle.write(f"{point.yield_est:.6f},{point.precision:.6f}\n")


def write_curve_svg(path, curve: list[CurvePoint], width: int = 640, height: int = 400) -> None:
    """Self-contained, deterministic SVG line plot of a precision-yield curve."""
    margin = 50
    max_y = max((p.yield_est for p in curve), default=1.0) or 1.0
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin

    def sx(y: float) -> float:
        return margin + plot_w * (y / max_y)

    def sy(p: float) -> float:
        return margin + plot_h * (1.0 - p)

    pts = " ".join(f"{sx(pt.yield_est):.2f},{sy(pt.precision):.2f}" for pt in curve)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width // 2}" y="{height - 10}" text-anchor="middle" '
        f'font-size="14">yield</text>',
        f'<text x="15" y="{height // 2}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 15 {height // 2})">precision</text>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{pts}"/>',
        "</svg>",
    ]
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
