"""Frame-to-frame affinity graphs.

The semantic graph measures, for every ordered frame pair, how well frame j's
label distribution stands in for frame i's (KL information loss by default;
cosine/euclidean/label-overlap alternatives for ablations). A Gaussian
temporal graph penalizes frame-index distance, and the combined graph is
their element-wise product. Semantic and combined graphs are min-max
normalized over off-diagonal entries to [0, 1] with a zero diagonal, so
identical frames get weight 1 and no frame votes for itself downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidDistribution,
    InvalidSigma,
    LengthMismatch,
    NonFiniteInput,
    SizeMismatch,
)
from .features import FrameFeatures, FRNK_MAGIC, FRNK_VERSION, _FRNK_HEADER

GRAPH_KINDS = ("semantic", "temporal", "combined")
METRICS = ("kl", "cosine", "euclidean", "label_overlap")

# Probabilities are clamped to this floor (then renormalized) before any log,
# so all-zero labels cannot produce NaN/Inf edges.
PROB_FLOOR = 1e-10

# Top-K label set size for the label_overlap metric.
OVERLAP_TOP_K = 5


@dataclass(frozen=True)
class AffinityGraph:
    """Dense directed edge-weight matrix over sampled frames."""

    n: int
    weights: np.ndarray  # (n, n) float64
    kind: str
    metric: str | None = None

    def __post_init__(self):
        if self.kind not in GRAPH_KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.metric is not None and self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        if weights.shape != (self.n, self.n):
            raise SizeMismatch(f"weights shape {weights.shape} != ({self.n}, {self.n})")
        if not np.isfinite(weights).all():
            raise NonFiniteInput("graph weights must be finite")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)


def _clamped(p: np.ndarray) -> np.ndarray:
    p = np.maximum(np.asarray(p, dtype=np.float64), PROB_FLOOR)
    return p / p.sum(axis=-1, keepdims=True)


def _check_distribution(v: np.ndarray) -> None:
    if not np.isfinite(v).all() or (v < 0).any():
        raise InvalidDistribution("entries must be finite and non-negative")
    if abs(float(v.sum()) - 1.0) > 1e-3:
        raise InvalidDistribution(f"vector sums to {v.sum():.6f}, expected 1")


def frame_divergence(p, q) -> float:
    """Raw KL divergence D(p || q) in nats, clamped away from zero probabilities.

    Returns the non-negative information loss of approximating p by q; the
    negation that turns this into a similarity happens in
    :func:`build_semantic_graph`.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.ndim != 1 or p.shape != q.shape:
        raise LengthMismatch(f"shapes {p.shape} vs {q.shape}")
    _check_distribution(p)
    _check_distribution(q)
    pc = _clamped(p)
    qc = _clamped(q)
    return max(0.0, float(np.sum(pc * (np.log(pc) - np.log(qc)))))


def _minmax_offdiag(raw: np.ndarray) -> np.ndarray:
    """Min-max normalize off-diagonal entries to [0, 1]; diagonal forced to 0.

    A zero range (every pair equally similar) maps all off-diagonal weights
    to 1: a constant positive graph ranks every frame equally, which is the
    honest answer for structureless input.
    """
    n = raw.shape[0]
    off = ~np.eye(n, dtype=bool)
    vals = raw[off]
    lo = vals.min()
    hi = vals.max()
    out = np.zeros_like(raw)
    if hi - lo <= 0.0:
        out[off] = 1.0
    else:
        out[off] = (raw[off] - lo) / (hi - lo)
    return out


def build_semantic_graph(features: FrameFeatures, metric: str = "kl") -> AffinityGraph:
    """Pairwise frame similarity graph under the chosen metric.

    For ``kl`` the raw edge i->j is the negated divergence D(row_i || row_j);
    the graph is directed because KL is asymmetric.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose from {METRICS}")
    probs = features.probs
    n = features.n_frames

    if metric == "label_overlap":
        k = min(OVERLAP_TOP_K, features.n_labels)
        top = np.argsort(-probs, axis=1, kind="stable")[:, :k]
        member = np.zeros((n, features.n_labels), dtype=bool)
        member[np.arange(n)[:, None], top] = True
        counts = (member.astype(np.float64) @ member.T.astype(np.float64))
        weights = counts / k
        np.fill_diagonal(weights, 0.0)
        return AffinityGraph(n, weights, "semantic", metric)

    if metric == "kl":
        pc = _clamped(probs)
        logs = np.log(pc)
        self_term = np.sum(pc * logs, axis=1)
        div = self_term[:, None] - pc @ logs.T
        raw = -np.maximum(div, 0.0)
    elif metric == "cosine":
        norms = np.linalg.norm(probs, axis=1)
        raw = (probs @ probs.T) / np.outer(norms, norms)
    else:  # euclidean
        sq = np.sum(probs * probs, axis=1)
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (probs @ probs.T), 0.0)
        raw = -np.sqrt(d2)

    return AffinityGraph(n, _minmax_offdiag(raw), "semantic", metric)


def build_temporal_graph(n: int, sigma: float) -> AffinityGraph:
    """Gaussian-of-frame-distance graph: density at |i - j| with width sigma."""
    if sigma <= 0:
        raise InvalidSigma(f"sigma must be positive, got {sigma}")
    if n < 2:
        raise SizeMismatch(f"temporal graph needs n >= 2, got {n}")
    idx = np.arange(n, dtype=np.float64)
    d2 = (idx[:, None] - idx[None, :]) ** 2
    weights = np.exp(-d2 / (2.0 * sigma * sigma)) / (sigma * math.sqrt(2.0 * math.pi))
    return AffinityGraph(n, weights, "temporal")


def build_constrained_graph(semantic: AffinityGraph, temporal: AffinityGraph) -> AffinityGraph:
    """Element-wise product of semantic and temporal graphs, renormalized."""
    if semantic.kind != "semantic" or temporal.kind != "temporal":
        raise ValueError(f"need (semantic, temporal) graphs, got ({semantic.kind}, {temporal.kind})")
    if semantic.n != temporal.n:
        raise SizeMismatch(f"graph sizes differ: {semantic.n} vs {temporal.n}")
    raw = semantic.weights * temporal.weights
    return AffinityGraph(semantic.n, _minmax_offdiag(raw), "combined", semantic.metric)


def write_graph(graph: AffinityGraph, path) -> None:
    """Debug dump of a graph in the binary matrix container (n_labels := n)."""
    header = _FRNK_HEADER.pack(FRNK_MAGIC, FRNK_VERSION, graph.n, graph.n, 1.0, 1)
    with open(path, "wb") as fh:
        fh.write(header + graph.weights.astype("<f4").tobytes())
