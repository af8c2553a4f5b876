"""Graph-based frame importance and segment scoring.

Frame importance is the fixed point of a damped random-walk recurrence over
the affinity graph (the PageRank/TextRank family): each frame's score is
(1 - d) plus d times the out-weight-normalized, score-weighted sum over its
in-neighbors. With no dangling vertices the scores conserve a mean of 1.
Segment scores are length-normalized sums of their frames' scores, so longer
segments get no free advantage.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .affinity import AffinityGraph
from .errors import NegativeWeight, NonFiniteInput, SizeMismatch
from .segmentation import Segmentation

DEFAULT_DAMPING = 0.85
DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class ImportanceScores:
    """Converged (or capped) frame scores plus optional segment scores."""

    frame_scores: np.ndarray
    iterations_used: int
    converged: bool
    d: float
    epsilon: float
    segment_scores: list[float] | None = None


def rank_frames(
    graph: AffinityGraph,
    d: float = DEFAULT_DAMPING,
    epsilon: float = DEFAULT_EPSILON,
    max_iter: int = DEFAULT_MAX_ITER,
    init=None,
) -> ImportanceScores:
    """Iterate the damped importance recurrence to a fixed point.

    Stops when the max-norm of the successive difference is <= epsilon, or
    after max_iter sweeps. Vertices with zero total out-weight contribute
    nothing to others; their own score is the (1 - d) constant plus whatever
    flows in. The converged scores do not depend on init (only the iteration
    count does); the default init is all ones.
    """
    w = graph.weights
    if not np.isfinite(w).all():
        raise NonFiniteInput("graph weights must be finite")
    if (w < 0).any():
        raise NegativeWeight("graph weights must be non-negative")
    if np.diagonal(w).any():
        raise ValueError("ranking requires a zero diagonal (no self-votes)")
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"damping must be in [0, 1], got {d}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    n = graph.n
    if init is None:
        scores = np.ones(n, dtype=np.float64)
    else:
        scores = np.asarray(init, dtype=np.float64).copy()
        if scores.shape != (n,):
            raise SizeMismatch(f"init has shape {scores.shape}, expected ({n},)")
        if not np.isfinite(scores).all():
            raise NonFiniteInput("init scores must be finite")
        if (scores < 0).any():
            raise NegativeWeight("init scores must be non-negative")

    out_total = w.sum(axis=1)
    transfer = np.divide(
        w, out_total[:, None], out=np.zeros_like(w), where=out_total[:, None] > 0
    ).T.copy()  # transfer[i, j]: share of j's score flowing to i

    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        updated = (1.0 - d) + d * (transfer @ scores)
        delta = float(np.max(np.abs(updated - scores)))
        scores = updated
        if delta <= epsilon:
            converged = True
            break
    return ImportanceScores(scores, iterations, converged, d, epsilon)


def score_segments(scores: ImportanceScores, seg: Segmentation) -> ImportanceScores:
    """Fill segment scores as the mean frame score over each segment."""
    if len(scores.frame_scores) != seg.n_frames:
        raise SizeMismatch(
            f"{len(scores.frame_scores)} frame scores vs segmentation over {seg.n_frames}"
        )
    segment_scores = [
        float(scores.frame_scores[start:end + 1].mean()) for start, end in seg.segments
    ]
    return replace(scores, segment_scores=segment_scores)


def write_frame_scores(scores: ImportanceScores, path) -> None:
    """One score per line, full precision (plotting/debugging, keyframe mode)."""
    Path(path).write_text("".join(f"{x!r}\n" for x in scores.frame_scores.tolist()))


def load_frame_scores(path) -> np.ndarray:
    values = [float(line) for line in Path(path).read_text().split()]
    return np.asarray(values, dtype=np.float64)
