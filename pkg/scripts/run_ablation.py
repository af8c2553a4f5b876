#!/usr/bin/env python3
"""Sweep similarity metrics and segmentation modes over one video.

For each (metric, segmentation) pair, runs the full pipeline and reports the
mean/max F1 against the annotation file — the same grid used to compare
similarity measures and segmentation baselines.

Example:
    python scripts/make_synthetic.py --out-dir fixtures
    python scripts/run_ablation.py --features fixtures/planted.frnk \
        --annotations fixtures/planted.ann.json --knn 5 --budget-ratio 0.34
"""

import argparse
import tempfile
from pathlib import Path

from vidsum.cli import run_summarize
from vidsum.config import PipelineConfig
from vidsum.evaluation import evaluate, random_baseline
from vidsum.features import load_annotations, load_features

METRICS = ("kl", "cosine", "euclidean", "label_overlap")
SEGMENTATIONS = ("bundling", "uniform", "none")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--features", required=True)
    parser.add_argument("--annotations", required=True)
    parser.add_argument("--budget-ratio", type=float, default=0.15)
    parser.add_argument("--knn", type=int, default=None)
    parser.add_argument("--sigma", type=float, default=None)
    parser.add_argument("--min-seg", type=int, default=None)
    parser.add_argument("--seg-len", type=int, default=None)
    parser.add_argument("--seeds", type=int, default=10, help="random-baseline seeds")
    args = parser.parse_args()

    annotations = load_annotations(args.annotations)
    features = load_features(args.features)

    print(f"{'metric':<14}{'segmentation':<14}{'mean_f1':>8}{'max_f1':>8}")
    with tempfile.TemporaryDirectory() as tmp:
        for metric in METRICS:
            for seg in SEGMENTATIONS:
                config = PipelineConfig(
                    metric=metric, segmentation=seg, budget_ratio=args.budget_ratio,
                    knn=args.knn, sigma=args.sigma, min_seg=args.min_seg,
                    seg_len=args.seg_len,
                )
                out = Path(tmp) / f"{metric}-{seg}.json"
                summary = run_summarize(config, args.features, out)
                report = evaluate(summary, annotations)
                print(f"{metric:<14}{seg:<14}{report.aggregate_mean:>8.4f}"
                      f"{report.aggregate_max:>8.4f}")

        budget = summary.budget_frames
        f1s = []
        for seed in range(args.seeds):
            baseline = random_baseline(
                annotations.n_source_frames, budget, seed=seed,
                fps=annotations.fps, video_id=annotations.video_id,
            )
            f1s.append(evaluate(baseline, annotations).aggregate_mean)
        print(f"{'random':<14}{'-':<14}{sum(f1s) / len(f1s):>8.4f}{max(f1s):>8.4f}")


if __name__ == "__main__":
    main()
