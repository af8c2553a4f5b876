"""Graph-based unsupervised video summarization.

Pipeline: per-frame label distributions -> KL-divergence affinity graph
(with a Gaussian temporal constraint) -> dense-neighbor temporal
segmentation -> damped graph ranking of frames and segments -> knapsack
selection under a length budget. Includes the multi-annotator evaluation
protocol (temporal-overlap F-score, pairwise agreement, Cronbach's alpha)
and Random/Uniform/Keyframe baselines.
"""

from .affinity import (
    AffinityGraph,
    build_constrained_graph,
    build_semantic_graph,
    build_temporal_graph,
    frame_divergence,
    write_graph,
)
from .config import PipelineConfig
from .evaluation import (
    BinaryTimeline,
    EvalReport,
    cronbach_alpha,
    evaluate,
    f_score,
    intervals_to_timeline,
    pairwise_human_f1,
    random_baseline,
)
from .features import (
    AnnotationSet,
    FrameFeatures,
    Summary,
    load_annotations,
    load_features,
    load_summary,
    sampled_span_to_source,
    sampled_to_source,
    write_annotations,
    write_cutlist,
    write_features,
    write_summary,
)
from .ranking import ImportanceScores, rank_frames, score_segments
from .segmentation import (
    Segmentation,
    cluster_frames,
    cluster_labels,
    keyframe_segments,
    load_segmentation,
    uniform_segments,
    write_segmentation,
)
from .selection import KnapsackInstance, render_summary, select_exact, select_greedy

__version__ = "0.1.0"
