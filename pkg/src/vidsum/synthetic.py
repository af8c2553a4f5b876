"""Synthetic planted-structure fixtures for tests and experiments.

A planted video is a sequence of equal-length blocks, each drawn from its own
base label distribution with small multiplicative jitter. With the default
three blocks, the middle block's base distribution is the closest (in KL) to
the video-wide mixture, so a representativeness-based ranker should prefer
it. Annotations mark one block's source span with per-annotator jitter.
"""

from __future__ import annotations

import numpy as np

from .features import AnnotationSet, FrameFeatures

# Base label distributions: two "specialist" blocks and one near the global
# mixture of all three.
PLANTED_BLOCKS = (
    (0.55, 0.15, 0.10, 0.10, 0.05, 0.05),
    (0.20, 0.15, 0.15, 0.15, 0.15, 0.20),  # closest to the mixture
    (0.05, 0.05, 0.10, 0.10, 0.15, 0.55),
)
REPRESENTATIVE_BLOCK = 1


def planted_features(
    blocks=PLANTED_BLOCKS,
    frames_per_block: int = 30,
    stride: int = 5,
    fps: float = 30.0,
    noise: float = 0.05,
    seed: int = 7,
    video_id: str = "planted",
) -> FrameFeatures:
    rng = np.random.default_rng(seed)
    rows = []
    for base in blocks:
        base = np.asarray(base, dtype=np.float64)
        jitter = np.exp(noise * rng.standard_normal((frames_per_block, base.size)))
        block = base[None, :] * jitter
        rows.append(block / block.sum(axis=1, keepdims=True))
    probs = np.concatenate(rows, axis=0)
    return FrameFeatures(
        video_id=video_id,
        fps=fps,
        stride=stride,
        n_frames=probs.shape[0],
        n_labels=probs.shape[1],
        probs=probs,
    )


def block_source_span(block: int, frames_per_block: int, stride: int) -> tuple[int, int]:
    """Inclusive source-frame span covered by one block."""
    start = block * frames_per_block * stride
    return start, start + frames_per_block * stride - 1


def planted_annotations(
    features: FrameFeatures,
    block: int = REPRESENTATIVE_BLOCK,
    frames_per_block: int = 30,
    n_annotators: int = 3,
    jitter: int = 10,
    seed: int = 13,
) -> AnnotationSet:
    rng = np.random.default_rng(seed)
    n_source = features.n_source_frames
    start, end = block_source_span(block, frames_per_block, features.stride)
    annotations = []
    for a in range(n_annotators):
        s = int(np.clip(start + rng.integers(-jitter, jitter + 1), 0, n_source - 1))
        e = int(np.clip(end + rng.integers(-jitter, jitter + 1), s, n_source - 1))
        annotations.append((f"annotator_{a}", [(s, e)]))
    return AnnotationSet(
        video_id=features.video_id,
        fps=features.fps,
        n_source_frames=n_source,
        annotations=annotations,
    )
