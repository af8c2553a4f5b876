"""Budgeted segment selection (0/1 knapsack) and summary assembly.

The pipeline maximizes total segment importance subject to a total-length
budget. The production selector is density-greedy with the classic
best-single-item guard (a 1/2-approximation); an exact dynamic-programming
solver is kept alongside as the test oracle and for small instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InstanceTooLarge, SizeMismatch
from .features import FrameFeatures, Summary, sampled_span_to_source
from .ranking import ImportanceScores
from .segmentation import Segmentation

# Exact-solver bounds: total item length per the format contract, plus a cap
# on reconstruction-table cells (n * (capacity + 1)) to bound memory.
MAX_TOTAL_LENGTH = 1_000_000
MAX_TABLE_CELLS = 200_000_000


@dataclass(frozen=True)
class KnapsackInstance:
    """Segment scores/lengths (sampled frames) under a sampled-frame budget."""

    values: list[float]
    lengths: list[int]
    budget: int

    def __post_init__(self):
        if len(self.values) != len(self.lengths):
            raise SizeMismatch(f"{len(self.values)} values vs {len(self.lengths)} lengths")
        if any(length < 1 for length in self.lengths):
            raise ValueError("all segment lengths must be >= 1")
        if self.budget < 0:
            raise ValueError(f"budget must be >= 0, got {self.budget}")


def select_greedy(inst: KnapsackInstance) -> np.ndarray:
    """Density-greedy selection with the best-single-item guard.

    Segments are taken in order of value density (ties: higher value, then
    lower index) while they fit; the result is compared against the single
    highest-value fitting segment and the better total wins.
    """
    n = len(inst.values)
    take = np.zeros(n, dtype=bool)
    order = sorted(
        range(n),
        key=lambda i: (-inst.values[i] / inst.lengths[i], -inst.values[i], i),
    )
    remaining = inst.budget
    for i in order:
        if inst.lengths[i] <= remaining:
            take[i] = True
            remaining -= inst.lengths[i]

    fitting = [i for i in range(n) if inst.lengths[i] <= inst.budget]
    if fitting:
        best = max(fitting, key=lambda i: (inst.values[i], -i))
        if inst.values[best] > sum(v for i, v in enumerate(inst.values) if take[i]):
            take[:] = False
            take[best] = True
    return take


def select_exact(inst: KnapsackInstance) -> np.ndarray:
    """Exact 0/1 knapsack by dynamic programming over capacity.

    Among optimal solutions, returns the lexicographically smallest selected
    index set (equal-value ties prefer including the lower index).
    """
    n = len(inst.values)
    total_length = sum(inst.lengths)
    if total_length > MAX_TOTAL_LENGTH:
        raise InstanceTooLarge(f"total length {total_length} > {MAX_TOTAL_LENGTH}")
    capacity = min(inst.budget, total_length)
    if n == 0 or capacity == 0:
        return np.zeros(n, dtype=bool)
    if n * (capacity + 1) > MAX_TABLE_CELLS:
        raise InstanceTooLarge(f"DP table would need {n * (capacity + 1)} cells")

    values = np.asarray(inst.values, dtype=np.float64)
    lengths = np.asarray(inst.lengths, dtype=np.int64)

    # suffix[i][c]: best value achievable with items i.. under capacity c
    suffix = [np.zeros(capacity + 1, dtype=np.float64) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        below = suffix[i + 1]
        row = below.copy()
        li = int(lengths[i])
        if li <= capacity:
            row[li:] = np.maximum(below[li:], values[i] + below[:capacity - li + 1])
        suffix[i] = row

    take = np.zeros(n, dtype=bool)
    c = capacity
    for i in range(n):
        li = int(lengths[i])
        if li <= c and values[i] + suffix[i + 1][c - li] >= suffix[i + 1][c]:
            take[i] = True
            c -= li
    return take


def render_summary(
    selection: np.ndarray,
    seg: Segmentation,
    scores: ImportanceScores,
    features: FrameFeatures,
    budget: int,
    config: dict | None = None,
) -> Summary:
    """Convert selected sampled-frame segments into a source-frame Summary."""
    if len(selection) != len(seg.segments):
        raise SizeMismatch(f"{len(selection)} selection bits vs {len(seg.segments)} segments")
    if scores.segment_scores is None or len(scores.segment_scores) != len(seg.segments):
        raise SizeMismatch("segment scores not aligned with segmentation")
    if seg.n_frames != features.n_frames:
        raise SizeMismatch(f"segmentation over {seg.n_frames} frames vs features {features.n_frames}")

    intervals = []
    selected_scores = []
    for i, span in enumerate(seg.segments):
        if selection[i]:
            intervals.append(sampled_span_to_source(span, features))
            selected_scores.append(scores.segment_scores[i])
    return Summary(
        video_id=features.video_id,
        intervals=intervals,
        segment_scores=selected_scores,
        budget_frames=budget,
        config=config or {},
    )
