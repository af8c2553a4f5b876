"""Frame-feature, annotation, and summary file I/O.

On-disk formats owned by this module:

* FRNK binary feature container: magic ``b"FRNK"``, then little-endian
  ``u32`` version, ``u32`` n_frames, ``u32`` n_labels, ``f64`` fps,
  ``u32`` stride, followed by the probability matrix as row-major float32.
* JSON feature file (fixtures, debugging): keys ``video_id``, ``fps``,
  ``stride``, and ``probs`` (list of rows).
* JSON annotation file: keys ``video_id``, ``fps``, ``n_source_frames``,
  ``annotations`` (list of ``{"annotator_id", "intervals"}``); intervals are
  inclusive ``[start, end]`` pairs in source-frame units.
* JSON summary file mirroring :class:`Summary`, plus an optional plain-text
  cut list with one ``start_seconds end_seconds`` pair per line.

All timing lives here: features carry ``fps`` and the sampling ``stride``
(row i of ``probs`` describes source frame ``i * stride``), annotations and
summaries are stored in integer source-frame units so overlap computations
stay exact.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    IntervalOutOfRange,
    InvalidDistribution,
    MalformedHeader,
    MalformedRecord,
)

FRNK_MAGIC = b"FRNK"
FRNK_VERSION = 1
_FRNK_HEADER = struct.Struct("<4sIIIdI")  # magic, version, n_frames, n_labels, fps, stride

# Rows within ROW_SUM_VALID of 1 are kept bit-exact (so canonical files
# round-trip); rows off by up to ROW_SUM_FIXABLE are renormalized; worse is
# a broken input.
ROW_SUM_VALID = 1e-5
ROW_SUM_FIXABLE = 1e-3


@dataclass(frozen=True)
class FrameFeatures:
    """Per-frame label distributions for one video, with timing metadata."""

    video_id: str
    fps: float
    stride: int
    n_frames: int
    n_labels: int
    probs: np.ndarray  # (n_frames, n_labels) float64, rows sum to 1

    def __post_init__(self):
        if self.fps <= 0 or self.stride < 1:
            raise MalformedHeader(f"fps must be > 0 and stride >= 1, got fps={self.fps} stride={self.stride}")
        if self.n_frames < 2 or self.n_labels < 2:
            raise MalformedHeader(f"need n_frames >= 2 and n_labels >= 2, got {self.n_frames}x{self.n_labels}")
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        if probs.shape != (self.n_frames, self.n_labels):
            raise DimensionMismatch(
                f"declared {self.n_frames}x{self.n_labels}, matrix is {probs.shape}"
            )
        if not np.isfinite(probs).all() or (probs < 0).any():
            raise InvalidDistribution("probabilities must be finite and non-negative")
        sums = probs.sum(axis=1)
        worst = np.abs(sums - 1.0).max()
        if worst > ROW_SUM_VALID:
            raise InvalidDistribution(f"row sum off by {worst:.2e} (> {ROW_SUM_VALID})")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_source_frames(self) -> int:
        """Source-frame extent covered by the sampled rows."""
        return self.n_frames * self.stride


@dataclass(frozen=True)
class AnnotationSet:
    """Per-annotator interval selections for one video (source-frame units)."""

    video_id: str
    fps: float
    n_source_frames: int
    annotations: list[tuple[str, list[tuple[int, int]]]]

    def __post_init__(self):
        if self.fps <= 0 or self.n_source_frames < 1:
            raise MalformedRecord("fps must be > 0 and n_source_frames >= 1")
        for annotator_id, intervals in self.annotations:
            prev_end = -1
            for start, end in intervals:
                if start > end:
                    raise MalformedRecord(f"{annotator_id}: inverted interval [{start}, {end}]")
                if start < 0 or end >= self.n_source_frames:
                    raise IntervalOutOfRange(
                        f"{annotator_id}: [{start}, {end}] outside [0, {self.n_source_frames})"
                    )
                if start <= prev_end:
                    raise MalformedRecord(f"{annotator_id}: intervals overlap or are unsorted")
                prev_end = end


@dataclass(frozen=True)
class Summary:
    """Machine-selected intervals (source-frame units) under a frame budget."""

    video_id: str
    intervals: list[tuple[int, int]]
    segment_scores: list[float]
    budget_frames: int
    config: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.budget_frames < 1:
            raise MalformedRecord("budget_frames must be >= 1")
        if len(self.intervals) != len(self.segment_scores):
            raise DimensionMismatch("one score per interval required")
        prev_end = -1
        total = 0
        for start, end in self.intervals:
            if start > end or start <= prev_end:
                raise MalformedRecord("summary intervals must be sorted and disjoint")
            prev_end = end
            total += end - start + 1
        if total > self.budget_frames:
            raise MalformedRecord(f"summary covers {total} frames, budget is {self.budget_frames}")

    @property
    def total_frames(self) -> int:
        return sum(end - start + 1 for start, end in self.intervals)


# --------------------------------------------------------------------------
# feature files
# --------------------------------------------------------------------------

def _normalize_rows(probs: np.ndarray) -> np.ndarray:
    """Renormalize rows that are slightly off; reject badly broken ones."""
    if not np.isfinite(probs).all() or (probs < 0).any():
        raise InvalidDistribution("probabilities must be finite and non-negative")
    sums = probs.sum(axis=1)
    err = np.abs(sums - 1.0)
    if (err > ROW_SUM_FIXABLE).any():
        bad = int(np.argmax(err))
        raise InvalidDistribution(f"row {bad} sums to {sums[bad]:.6f} (off by > {ROW_SUM_FIXABLE})")
    fix = err > ROW_SUM_VALID
    if fix.any():
        probs = probs.copy()
        probs[fix] /= sums[fix, None]
    return probs


def load_features(path) -> FrameFeatures:
    """Load a FRNK binary or JSON feature file (sniffed by magic bytes)."""
    path = Path(path)
    blob = path.read_bytes()
    if blob[:4] == FRNK_MAGIC:
        return _load_features_binary(blob, video_id=path.stem)
    try:
        doc = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedHeader(f"{path}: neither FRNK binary nor JSON ({exc})") from exc
    return _load_features_json(doc, default_video_id=path.stem)


def _load_features_binary(blob: bytes, video_id: str) -> FrameFeatures:
    if len(blob) < _FRNK_HEADER.size:
        raise MalformedHeader("truncated FRNK header")
    magic, version, n_frames, n_labels, fps, stride = _FRNK_HEADER.unpack_from(blob)
    if magic != FRNK_MAGIC or version != FRNK_VERSION:
        raise MalformedHeader(f"bad magic/version {magic!r}/{version}")
    if n_frames < 2 or n_labels < 2 or fps <= 0 or stride < 1:
        raise MalformedHeader(
            f"invalid header fields: n_frames={n_frames} n_labels={n_labels} fps={fps} stride={stride}"
        )
    payload = blob[_FRNK_HEADER.size:]
    expected = n_frames * n_labels * 4
    if len(payload) != expected:
        raise DimensionMismatch(f"expected {expected} payload bytes, found {len(payload)}")
    probs = np.frombuffer(payload, dtype="<f4").astype(np.float64).reshape(n_frames, n_labels)
    probs = _normalize_rows(probs)
    return FrameFeatures(video_id, float(fps), int(stride), int(n_frames), int(n_labels), probs)


def _load_features_json(doc, default_video_id: str) -> FrameFeatures:
    if not isinstance(doc, dict):
        raise MalformedHeader("feature JSON must be an object")
    try:
        fps = float(doc["fps"])
        stride = int(doc["stride"])
        rows = doc["probs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedHeader(f"feature JSON missing/invalid key: {exc}") from exc
    video_id = str(doc.get("video_id", default_video_id))
    if not isinstance(rows, list) or not rows:
        raise MalformedHeader("probs must be a non-empty list of rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DimensionMismatch(f"ragged rows: widths {sorted(widths)}")
    probs = np.asarray(rows, dtype=np.float64)
    declared_frames = doc.get("n_frames", probs.shape[0])
    declared_labels = doc.get("n_labels", probs.shape[1])
    if (int(declared_frames), int(declared_labels)) != probs.shape:
        raise DimensionMismatch(
            f"declared {declared_frames}x{declared_labels}, matrix is {probs.shape}"
        )
    probs = _normalize_rows(probs)
    return FrameFeatures(video_id, fps, stride, probs.shape[0], probs.shape[1], probs)


def write_features(features: FrameFeatures, path, fmt: str = "frnk") -> None:
    """Write features as the FRNK binary container or as JSON (``fmt="json"``)."""
    path = Path(path)
    if fmt == "frnk":
        header = _FRNK_HEADER.pack(
            FRNK_MAGIC, FRNK_VERSION, features.n_frames, features.n_labels,
            features.fps, features.stride,
        )
        path.write_bytes(header + features.probs.astype("<f4").tobytes())
    elif fmt == "json":
        doc = {
            "video_id": features.video_id,
            "fps": features.fps,
            "stride": features.stride,
            "probs": features.probs.tolist(),
        }
        path.write_text(json.dumps(doc, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def sampled_to_source(frame_index: int, features: FrameFeatures) -> int:
    """Map a sampled-row index to the source-frame index it was taken from."""
    if not 0 <= frame_index < features.n_frames:
        raise IndexOutOfRange(f"frame {frame_index} outside [0, {features.n_frames})")
    return frame_index * features.stride


def sampled_span_to_source(span: tuple[int, int], features: FrameFeatures) -> tuple[int, int]:
    """Expand an inclusive sampled-frame span to the source frames it covers."""
    start, end = span
    if start > end:
        raise IndexOutOfRange(f"inverted span [{start}, {end}]")
    return (
        sampled_to_source(start, features),
        sampled_to_source(end, features) + features.stride - 1,
    )


# --------------------------------------------------------------------------
# annotation files
# --------------------------------------------------------------------------

def _merge_intervals(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
    intervals = sorted(intervals)
    merged = [intervals[0]]
    for start, end in intervals[1:]:
        prev_start, prev_end = merged[-1]
        if start <= prev_end:  # inclusive coordinates: sharing a frame is overlap
            merged[-1] = (prev_start, max(prev_end, end))
        else:
            merged.append((start, end))
    return merged


def load_annotations(path) -> AnnotationSet:
    """Load an annotation JSON file; sorts and merges overlapping intervals."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedRecord(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise MalformedRecord("annotation JSON must be an object")
    try:
        video_id = str(doc["video_id"])
        fps = float(doc["fps"])
        n_source = int(doc["n_source_frames"])
        records = doc["annotations"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedRecord(f"annotation JSON missing/invalid key: {exc}") from exc

    annotations = []
    for record in records:
        try:
            annotator_id = str(record["annotator_id"])
            raw = [(int(s), int(e)) for s, e in record["intervals"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRecord(f"bad annotation record: {exc}") from exc
        for start, end in raw:
            if start > end:
                raise MalformedRecord(f"{annotator_id}: inverted interval [{start}, {end}]")
            if start < 0 or end >= n_source:
                raise IntervalOutOfRange(
                    f"{annotator_id}: [{start}, {end}] outside [0, {n_source})"
                )
        intervals = _merge_intervals(raw) if raw else []
        annotations.append((annotator_id, intervals))
    return AnnotationSet(video_id, fps, n_source, annotations)


def write_annotations(annotations: AnnotationSet, path) -> None:
    doc = {
        "video_id": annotations.video_id,
        "fps": annotations.fps,
        "n_source_frames": annotations.n_source_frames,
        "annotations": [
            {"annotator_id": annotator_id, "intervals": [list(iv) for iv in intervals]}
            for annotator_id, intervals in annotations.annotations
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------------------
# summary files
# --------------------------------------------------------------------------

def write_summary(summary: Summary, path) -> None:
    doc = {
        "video_id": summary.video_id,
        "budget_frames": summary.budget_frames,
        "intervals": [list(iv) for iv in summary.intervals],
        "segment_scores": summary.segment_scores,
        "config": summary.config,
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_summary(path) -> Summary:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
        return Summary(
            video_id=str(doc["video_id"]),
            intervals=[(int(s), int(e)) for s, e in doc["intervals"]],
            segment_scores=[float(x) for x in doc["segment_scores"]],
            budget_frames=int(doc["budget_frames"]),
            config=doc.get("config", {}),
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise MalformedRecord(f"{path}: bad summary file ({exc})") from exc


def write_cutlist(summary: Summary, fps: float, path) -> None:
    """Write one "start_seconds end_seconds" line per interval (end exclusive)."""
    lines = [
        f"{start / fps:.3f} {(end + 1) / fps:.3f}"
        for start, end in summary.intervals
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))
