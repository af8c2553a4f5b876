"""Pipeline configuration and defaults.

All tunables live here and are echoed into every output artifact so a run
can be reproduced from its own header. Time-based defaults (sigma, knn,
min_seg, seg_len) are resolved against the feature file's fps and stride:
roughly two seconds of sampled frames for neighborhood-style parameters and
one second for the minimum segment length.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

from .affinity import METRICS
from .features import FrameFeatures
from .ranking import DEFAULT_DAMPING, DEFAULT_EPSILON, DEFAULT_MAX_ITER
from .segmentation import SEGMENTATION_METHODS

AGGREGATIONS = ("mean", "max")
RANK_GRAPHS = ("semantic", "constrained")
DEFAULT_BUDGET_RATIO = 0.15


@dataclass(frozen=True)
class PipelineConfig:
    metric: str = "kl"
    sigma: float | None = None      # default: 2 seconds of sampled frames
    knn: int | None = None          # default: max(3, 2 seconds of sampled frames)
    min_seg: int | None = None      # default: 1 second of sampled frames
    damping: float = DEFAULT_DAMPING
    epsilon: float = DEFAULT_EPSILON
    max_iter: int = DEFAULT_MAX_ITER
    budget_ratio: float = DEFAULT_BUDGET_RATIO
    segmentation: str = "bundling"
    seg_len: int | None = None      # uniform mode: 2 seconds of sampled frames
    agg: str = "mean"
    seed: int = 0
    rank_graph: str = "semantic"

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if self.segmentation not in SEGMENTATION_METHODS:
            raise ValueError(f"segmentation must be one of {SEGMENTATION_METHODS}")
        if self.agg not in AGGREGATIONS:
            raise ValueError(f"agg must be one of {AGGREGATIONS}")
        if self.rank_graph not in RANK_GRAPHS:
            raise ValueError(f"rank_graph must be one of {RANK_GRAPHS}")
        if not 0.0 <= self.damping <= 1.0:
            raise ValueError(f"damping must be in [0, 1], got {self.damping}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        if not 0.0 < self.budget_ratio <= 1.0:
            raise ValueError(f"budget_ratio must be in (0, 1], got {self.budget_ratio}")
        if self.sigma is not None and self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        for name in ("knn", "min_seg", "seg_len"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")

    def resolved(self, features: FrameFeatures) -> "PipelineConfig":
        """Fill time-based defaults from the video's fps and stride."""
        per_second = features.fps / features.stride  # sampled frames per second
        two_seconds = max(1, round(2.0 * per_second))
        knn = self.knn if self.knn is not None else max(3, two_seconds)
        knn = max(1, min(knn, features.n_frames - 1))  # clustering needs k < n
        return replace(
            self,
            sigma=self.sigma if self.sigma is not None else 2.0 * per_second,
            knn=knn,
            min_seg=self.min_seg if self.min_seg is not None else max(1, round(per_second)),
            seg_len=self.seg_len if self.seg_len is not None else two_seconds,
        )

    def to_dict(self) -> dict:
        return asdict(self)
