"""Scoring machine summaries against multi-annotator ground truth.

All overlap metrics operate on binary per-source-frame timelines, so
precision/recall/F1 are exact integer-count ratios. Cronbach's alpha treats
each annotator's timeline as one test item over n_source_frames observations
(population variances, so identical annotators score exactly 1). The random
baseline packs shuffled fixed-length pieces of the timeline into the budget.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import BudgetTooLarge, LengthMismatch, TooFewAnnotators, VideoMismatch
from .features import AnnotationSet, Summary

RANDOM_PIECE_SECONDS = 2.0


@dataclass(frozen=True)
class BinaryTimeline:
    """Per-source-frame selection mask."""

    n_source_frames: int
    selected: np.ndarray  # (n_source_frames,) bool

    def __post_init__(self):
        selected = np.ascontiguousarray(self.selected, dtype=bool)
        if selected.shape != (self.n_source_frames,):
            raise LengthMismatch(
                f"timeline length {selected.shape} != declared {self.n_source_frames}"
            )
        selected.setflags(write=False)
        object.__setattr__(self, "selected", selected)


@dataclass(frozen=True)
class EvalReport:
    per_annotator: list[tuple[str, float, float, float]]  # id, precision, recall, f1
    aggregate_mean: float
    aggregate_max: float


def intervals_to_timeline(intervals, n_source_frames: int) -> BinaryTimeline:
    selected = np.zeros(n_source_frames, dtype=bool)
    for start, end in intervals:
        selected[start:end + 1] = True
    return BinaryTimeline(n_source_frames, selected)


def f_score(summary: BinaryTimeline, reference: BinaryTimeline) -> tuple[float, float, float]:
    """Frame-overlap precision, recall, and F1 (all 0 on empty denominators)."""
    if summary.n_source_frames != reference.n_source_frames:
        raise LengthMismatch(
            f"timeline lengths differ: {summary.n_source_frames} vs {reference.n_source_frames}"
        )
    overlap = int(np.count_nonzero(summary.selected & reference.selected))
    n_summary = int(np.count_nonzero(summary.selected))
    n_reference = int(np.count_nonzero(reference.selected))
    precision = overlap / n_summary if n_summary else 0.0
    recall = overlap / n_reference if n_reference else 0.0
    f1 = 2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def _summary_timeline(summary: Summary, n_source_frames: int) -> BinaryTimeline:
    # Sampled-to-source expansion can overshoot the annotated extent by up to
    # stride - 1 trailing frames; clip those, but reject intervals that start
    # past the end entirely.
    clipped = []
    for start, end in summary.intervals:
        if start >= n_source_frames:
            raise VideoMismatch(
                f"summary interval [{start}, {end}] starts past {n_source_frames} source frames"
            )
        clipped.append((start, min(end, n_source_frames - 1)))
    return intervals_to_timeline(clipped, n_source_frames)


def evaluate(summary: Summary, annotations: AnnotationSet) -> EvalReport:
    """F-score the summary against every annotator; aggregate mean and max."""
    if summary.video_id != annotations.video_id:
        raise VideoMismatch(f"{summary.video_id!r} vs {annotations.video_id!r}")
    if not annotations.annotations:
        raise TooFewAnnotators("need at least one annotator to evaluate")
    machine = _summary_timeline(summary, annotations.n_source_frames)
    per_annotator = []
    for annotator_id, intervals in annotations.annotations:
        human = intervals_to_timeline(intervals, annotations.n_source_frames)
        precision, recall, f1 = f_score(machine, human)
        per_annotator.append((annotator_id, precision, recall, f1))
    f1s = [row[3] for row in per_annotator]
    return EvalReport(per_annotator, float(np.mean(f1s)), float(np.max(f1s)))


def pairwise_human_f1(annotations: AnnotationSet) -> float:
    """Mean F1 over all unordered annotator pairs (F1 is symmetric)."""
    if len(annotations.annotations) < 2:
        raise TooFewAnnotators("pairwise agreement needs >= 2 annotators")
    timelines = [
        intervals_to_timeline(intervals, annotations.n_source_frames)
        for _, intervals in annotations.annotations
    ]
    f1s = [f_score(a, b)[2] for a, b in combinations(timelines, 2)]
    return float(np.mean(f1s))


def cronbach_alpha(annotations: AnnotationSet) -> float | None:
    """Inter-annotator reliability over binary timelines.

    alpha = k/(k-1) * (1 - sum of per-annotator variances / variance of the
    per-frame sum), with population variances. Returns None when the summed
    timeline is constant (alpha undefined).
    """
    k = len(annotations.annotations)
    if k < 2:
        raise TooFewAnnotators("alpha needs >= 2 annotators")
    matrix = np.stack([
        intervals_to_timeline(intervals, annotations.n_source_frames).selected
        for _, intervals in annotations.annotations
    ]).astype(np.float64)
    item_variances = matrix.var(axis=1)
    total_variance = matrix.sum(axis=0).var()
    if total_variance == 0.0:
        return None
    return float(k / (k - 1) * (1.0 - item_variances.sum() / total_variance))


def random_baseline(
    n_source_frames: int,
    budget: int,
    seed: int,
    fps: float = 30.0,
    video_id: str = "random",
) -> Summary:
    """Seeded random summary: shuffled 2-second pieces packed into the budget."""
    if budget > n_source_frames:
        raise BudgetTooLarge(f"budget {budget} > {n_source_frames} source frames")
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    piece_len = max(1, round(RANDOM_PIECE_SECONDS * fps))
    pieces = [
        (start, min(start + piece_len - 1, n_source_frames - 1))
        for start in range(0, n_source_frames, piece_len)
    ]
    order = list(range(len(pieces)))
    random.Random(seed).shuffle(order)
    chosen = []
    remaining = budget
    for idx in order:
        start, end = pieces[idx]
        length = end - start + 1
        if length <= remaining:
            chosen.append(idx)
            remaining -= length
    chosen.sort()
    intervals = [pieces[i] for i in chosen]
    return Summary(
        video_id=video_id,
        intervals=intervals,
        segment_scores=[0.0] * len(intervals),
        budget_frames=budget,
    )
