"""Temporal segmentation of the frame sequence.

The main method clusters frames on the combined (semantic x temporal) graph
with a dense-neighbor rule: a cluster seed ("bundling center") is a set of
frames that are mutually among each other's k strongest neighbors, so
membership requires similarity to a whole neighborhood rather than to one
centroid. Cluster labels are then projected onto the timeline and split into
maximal runs, which guarantees contiguous, disjoint, full-cover segments even
when the clustering itself is not perfectly contiguous.

Uniform and per-frame ("keyframe") segmentations are provided as baselines.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .affinity import AffinityGraph
from .errors import DegenerateGraphWarning, InvalidK, SizeMismatch

SEGMENTATION_METHODS = ("bundling", "uniform", "none")


@dataclass(frozen=True)
class Segmentation:
    """Disjoint, contiguous, full-cover partition of the sampled frames."""

    n_frames: int
    segments: list[tuple[int, int]]  # inclusive sampled-frame spans
    method: str

    def __post_init__(self):
        if self.method not in SEGMENTATION_METHODS:
            raise ValueError(f"unknown segmentation method {self.method!r}")
        if not self.segments:
            raise SizeMismatch("segmentation must contain at least one segment")
        expected_start = 0
        for start, end in self.segments:
            if start != expected_start or end < start:
                raise SizeMismatch(f"segments must tile [0, {self.n_frames}) contiguously")
            expected_start = end + 1
        if expected_start != self.n_frames:
            raise SizeMismatch(
                f"segments cover [0, {expected_start}) but n_frames is {self.n_frames}"
            )


def cluster_labels(graph: AffinityGraph, k: int) -> np.ndarray:
    """Dense-neighbor cluster assignment on the combined graph (no projection).

    Procedure: symmetrize the graph by averaging with its transpose; take each
    vertex's top-k neighbors by weight (ties to the lower index); call a pair
    dense neighbors when each is in the other's top-k; vertices with at least
    k/2 dense neighbors are core, and each connected component of the dense
    relation among cores is a bundling center; every remaining vertex joins
    the center with maximal mean affinity to it.

    Returns an int label per vertex. A graph with no structure (all
    off-diagonal weights equal, or no core vertices) gets a single label and
    a :class:`DegenerateGraphWarning`.
    """
    if graph.kind != "combined":
        raise ValueError(f"clustering expects a combined graph, got {graph.kind!r}")
    n = graph.n
    if not 1 <= k < n:
        raise InvalidK(f"need 1 <= k < n, got k={k}, n={n}")
    w = (graph.weights + graph.weights.T) / 2.0

    off = ~np.eye(n, dtype=bool)
    if np.ptp(w[off]) == 0.0:
        warnings.warn("all edge weights equal; emitting a single cluster", DegenerateGraphWarning)
        return np.zeros(n, dtype=np.intp)

    # top-k neighbor sets; argsort is stable so equal weights favor lower index
    order = np.argsort(-w, axis=1, kind="stable")
    topk = np.zeros((n, n), dtype=bool)
    for i in range(n):
        neighbors = order[i][order[i] != i][:k]
        topk[i, neighbors] = True

    mutual = topk & topk.T
    degree = mutual.sum(axis=1)
    core = degree >= k / 2.0
    if not core.any():
        warnings.warn("no mutually dense vertices; emitting a single cluster", DegenerateGraphWarning)
        return np.zeros(n, dtype=np.intp)

    # connected components of the mutual relation restricted to core vertices,
    # numbered by smallest member so labels are deterministic
    labels = np.full(n, -1, dtype=np.intp)
    n_centers = 0
    for seed in range(n):
        if not core[seed] or labels[seed] >= 0:
            continue
        stack = [seed]
        labels[seed] = n_centers
        while stack:
            v = stack.pop()
            for u in np.flatnonzero(mutual[v] & core):
                if labels[u] < 0:
                    labels[u] = n_centers
                    stack.append(u)
        n_centers += 1

    # mean affinity of every vertex to each center; argmax ties favor the
    # center with the smaller first member
    members = [np.flatnonzero(labels == c) for c in range(n_centers)]
    mean_aff = np.column_stack([w[:, m].mean(axis=1) for m in members])
    unassigned = labels < 0
    labels[unassigned] = np.argmax(mean_aff[unassigned], axis=1)
    return labels


def _runs(labels: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of equal label, as inclusive index spans."""
    boundaries = np.flatnonzero(np.diff(labels)) + 1
    starts = np.concatenate(([0], boundaries))
    ends = np.concatenate((boundaries - 1, [len(labels) - 1]))
    return list(zip(starts.tolist(), ends.tolist()))


def _merge_short_runs(
    runs: list[tuple[int, int]], w: np.ndarray, min_seg: int
) -> list[tuple[int, int]]:
    """Fold runs shorter than min_seg into the more-affine adjacent run."""
    runs = list(runs)

    def mean_affinity(a: int, b: int) -> float:
        sa, ea = runs[a]
        sb, eb = runs[b]
        return float(w[sa:ea + 1, sb:eb + 1].mean())

    while len(runs) > 1:
        lengths = [end - start + 1 for start, end in runs]
        short = [i for i, length in enumerate(lengths) if length < min_seg]
        if not short:
            break
        i = min(short, key=lambda j: (lengths[j], j))
        if i == 0:
            j = 1
        elif i == len(runs) - 1:
            j = i - 1
        else:
            j = i - 1 if mean_affinity(i, i - 1) >= mean_affinity(i, i + 1) else i + 1
        a, b = min(i, j), max(i, j)
        runs[a] = (runs[a][0], runs[b][1])
        del runs[b]
    return runs


def cluster_frames(graph: AffinityGraph, k: int, min_seg: int = 1) -> Segmentation:
    """Segment the timeline by dense-neighbor clustering on the combined graph.

    Cluster labels are projected onto the timeline, split into maximal runs,
    and every run shorter than ``min_seg`` is merged into the adjacent run
    with higher mean inter-run affinity.
    """
    if min_seg < 1:
        raise ValueError(f"min_seg must be >= 1, got {min_seg}")
    labels = cluster_labels(graph, k)
    w = (graph.weights + graph.weights.T) / 2.0
    segments = _merge_short_runs(_runs(labels), w, min_seg)
    return Segmentation(graph.n, segments, "bundling")


def uniform_segments(n_frames: int, seg_len: int) -> Segmentation:
    """Consecutive fixed-length segments; the final one carries the remainder."""
    if n_frames < 1:
        raise ValueError("n_frames must be >= 1")
    if seg_len < 1:
        raise ValueError(f"seg_len must be >= 1, got {seg_len}")
    segments = [
        (start, min(start + seg_len - 1, n_frames - 1))
        for start in range(0, n_frames, seg_len)
    ]
    return Segmentation(n_frames, segments, "uniform")


def keyframe_segments(n_frames: int) -> Segmentation:
    """One singleton segment per frame (ranking-only summarization)."""
    if n_frames < 1:
        raise ValueError("n_frames must be >= 1")
    return Segmentation(n_frames, [(i, i) for i in range(n_frames)], "none")


def write_segmentation(seg: Segmentation, path, config: dict | None = None) -> None:
    doc = {
        "method": seg.method,
        "n_frames": seg.n_frames,
        "segments": [list(span) for span in seg.segments],
    }
    if config is not None:
        doc["config"] = config
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_segmentation(path) -> Segmentation:
    doc = json.loads(Path(path).read_text())
    return Segmentation(
        n_frames=int(doc["n_frames"]),
        segments=[(int(s), int(e)) for s, e in doc["segments"]],
        method=str(doc["method"]),
    )
