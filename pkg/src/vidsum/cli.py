"""Command-line pipeline: summarize, evaluate, stats, segment, rank.

Every run is deterministic for a fixed config and inputs (the random
baseline is seeded), and the resolved config is echoed into each output
artifact so any result file documents the run that produced it.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import affinity, evaluation, ranking, segmentation, selection
from .config import AGGREGATIONS, PipelineConfig, RANK_GRAPHS
from .errors import SizeMismatch, VidsumError
from .features import (
    FrameFeatures,
    Summary,
    load_annotations,
    load_features,
    load_summary,
    write_cutlist,
    write_summary,
)

PROG = "vidsum"


def _budgets(config: PipelineConfig, features: FrameFeatures) -> tuple[int, int]:
    """(source-frame budget, sampled-frame budget) from the budget ratio.

    The sampled budget rounds down so that selected sampled spans, once
    expanded by stride, can never exceed the source budget.
    """
    budget_source = math.ceil(config.budget_ratio * features.n_source_frames)
    return budget_source, budget_source // features.stride


def _segment(config: PipelineConfig, features: FrameFeatures,
             combined: affinity.AffinityGraph | None) -> segmentation.Segmentation:
    if config.segmentation == "bundling":
        return segmentation.cluster_frames(combined, config.knn, config.min_seg)
    if config.segmentation == "uniform":
        return segmentation.uniform_segments(features.n_frames, config.seg_len)
    return segmentation.keyframe_segments(features.n_frames)


def run_summarize(
    config: PipelineConfig,
    features_path,
    out_path,
    cutlist_path=None,
    segmentation_in=None,
    scores_in=None,
) -> Summary:
    """Full pipeline: load, build graphs, segment, rank, select, write."""
    features = load_features(features_path)
    config = config.resolved(features)

    semantic = affinity.build_semantic_graph(features, config.metric)
    needs_combined = (
        (config.segmentation == "bundling" and segmentation_in is None)
        or config.rank_graph == "constrained"
    )
    combined = None
    if needs_combined:
        temporal = affinity.build_temporal_graph(features.n_frames, config.sigma)
        combined = affinity.build_constrained_graph(semantic, temporal)

    if segmentation_in is not None:
        seg = segmentation.load_segmentation(segmentation_in)
        if seg.n_frames != features.n_frames:
            raise SizeMismatch(
                f"segmentation covers {seg.n_frames} frames, features have {features.n_frames}"
            )
    else:
        seg = _segment(config, features, combined)

    if scores_in is not None:
        frame_scores = ranking.load_frame_scores(scores_in)
        if len(frame_scores) != features.n_frames:
            raise SizeMismatch(
                f"{len(frame_scores)} scores in {scores_in}, features have {features.n_frames}"
            )
        scores = ranking.ImportanceScores(
            frame_scores, iterations_used=0, converged=True,
            d=config.damping, epsilon=config.epsilon,
        )
    else:
        rank_on = combined if config.rank_graph == "constrained" else semantic
        scores = ranking.rank_frames(
            rank_on, d=config.damping, epsilon=config.epsilon, max_iter=config.max_iter
        )
    scores = ranking.score_segments(scores, seg)

    budget_source, budget_sampled = _budgets(config, features)
    instance = selection.KnapsackInstance(
        values=scores.segment_scores,
        lengths=[end - start + 1 for start, end in seg.segments],
        budget=budget_sampled,
    )
    chosen = selection.select_greedy(instance)
    summary = selection.render_summary(
        chosen, seg, scores, features, budget_source, config=config.to_dict()
    )
    write_summary(summary, out_path)
    if cutlist_path is not None:
        write_cutlist(summary, features.fps, cutlist_path)
    return summary


def run_rank(config: PipelineConfig, features_path, out_path) -> ranking.ImportanceScores:
    features = load_features(features_path)
    config = config.resolved(features)
    graph = affinity.build_semantic_graph(features, config.metric)
    if config.rank_graph == "constrained":
        temporal = affinity.build_temporal_graph(features.n_frames, config.sigma)
        graph = affinity.build_constrained_graph(graph, temporal)
    scores = ranking.rank_frames(
        graph, d=config.damping, epsilon=config.epsilon, max_iter=config.max_iter
    )
    ranking.write_frame_scores(scores, out_path)
    return scores


def run_segment(config: PipelineConfig, features_path, out_path) -> segmentation.Segmentation:
    features = load_features(features_path)
    config = config.resolved(features)
    combined = None
    if config.segmentation == "bundling":
        semantic = affinity.build_semantic_graph(features, config.metric)
        temporal = affinity.build_temporal_graph(features.n_frames, config.sigma)
        combined = affinity.build_constrained_graph(semantic, temporal)
    seg = _segment(config, features, combined)
    segmentation.write_segmentation(seg, out_path, config=config.to_dict())
    return seg


def run_evaluate(config: PipelineConfig, summary_path, annotations_path,
                 out_path=None) -> evaluation.EvalReport:
    summary = load_summary(summary_path)
    annotations = load_annotations(annotations_path)
    report = evaluation.evaluate(summary, annotations)
    headline = report.aggregate_mean if config.agg == "mean" else report.aggregate_max
    doc = {
        "video_id": summary.video_id,
        "agg": config.agg,
        "headline_f1": headline,
        "aggregate_mean": report.aggregate_mean,
        "aggregate_max": report.aggregate_max,
        "per_annotator": [
            {"annotator_id": a, "precision": p, "recall": r, "f1": f}
            for a, p, r, f in report.per_annotator
        ],
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out_path is not None:
        Path(out_path).write_text(text)
    tsv = f"{summary.video_id}\t{report.aggregate_mean:.6f}\t{report.aggregate_max:.6f}"
    print(tsv)
    return report


def run_stats(annotation_paths, out_path=None) -> list[dict]:
    """Dataset statistics: one row per annotation file."""
    rows = []
    for path in annotation_paths:
        annotations = load_annotations(path)
        alpha = evaluation.cronbach_alpha(annotations)
        rows.append({
            "video_id": annotations.video_id,
            "n_source_frames": annotations.n_source_frames,
            "duration_s": annotations.n_source_frames / annotations.fps,
            "n_annotators": len(annotations.annotations),
            "pairwise_f1": evaluation.pairwise_human_f1(annotations),
            "cronbach_alpha": alpha,
        })
    header = "video_id\tn_source_frames\tduration_s\tn_annotators\tpairwise_f1\tcronbach_alpha"
    lines = [header]
    for row in rows:
        alpha = "n/a" if row["cronbach_alpha"] is None else f"{row['cronbach_alpha']:.4f}"
        lines.append(
            f"{row['video_id']}\t{row['n_source_frames']}\t{row['duration_s']:.2f}"
            f"\t{row['n_annotators']}\t{row['pairwise_f1']:.4f}\t{alpha}"
        )
    text = "\n".join(lines) + "\n"
    if out_path is not None:
        Path(out_path).write_text(text)
    else:
        print(text, end="")
    return rows


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    defaults = PipelineConfig()
    # accept both the flag spelling (label-overlap) and the echoed config
    # spelling (label_overlap) so output headers reproduce runs verbatim
    parser.add_argument("--metric", type=lambda s: s.replace("-", "_"),
                        choices=["kl", "cosine", "euclidean", "label_overlap"],
                        metavar="{kl,cosine,euclidean,label-overlap}",
                        default="kl", help="frame similarity metric")
    parser.add_argument("--sigma", type=float, default=None,
                        help="temporal Gaussian width in sampled frames (default: 2 s)")
    parser.add_argument("--knn", type=int, default=None,
                        help="mutual-neighborhood size (default: max(3, 2 s))")
    parser.add_argument("--min-seg", type=int, default=None,
                        help="minimum segment length in sampled frames (default: 1 s)")
    parser.add_argument("--damping", type=float, default=defaults.damping)
    parser.add_argument("--epsilon", type=float, default=defaults.epsilon)
    parser.add_argument("--max-iter", type=int, default=defaults.max_iter)
    parser.add_argument("--budget-ratio", type=float, default=defaults.budget_ratio,
                        help="summary length as a fraction of the video")
    parser.add_argument("--segmentation", choices=["bundling", "uniform", "none"],
                        default=defaults.segmentation)
    parser.add_argument("--seg-len", type=int, default=None,
                        help="segment length for --segmentation uniform (default: 2 s)")
    parser.add_argument("--agg", choices=list(AGGREGATIONS), default=defaults.agg,
                        help="headline aggregation over annotators")
    parser.add_argument("--seed", type=int, default=defaults.seed)
    parser.add_argument("--rank-graph", choices=list(RANK_GRAPHS), default=defaults.rank_graph,
                        help="rank on the plain semantic graph or the constrained one")


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        metric=args.metric,
        sigma=args.sigma,
        knn=args.knn,
        min_seg=args.min_seg,
        damping=args.damping,
        epsilon=args.epsilon,
        max_iter=args.max_iter,
        budget_ratio=args.budget_ratio,
        segmentation=args.segmentation,
        seg_len=args.seg_len,
        agg=args.agg,
        seed=args.seed,
        rank_graph=args.rank_graph,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG, description="Graph-based unsupervised video summarization."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize", help="run the full pipeline on a feature file")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True, help="summary JSON output path")
    p.add_argument("--cutlist", default=None, help="optional cut-list text output")
    p.add_argument("--segmentation-in", default=None,
                   help="reuse a segmentation dump instead of clustering")
    p.add_argument("--scores-in", default=None,
                   help="reuse a frame-score dump instead of ranking")
    _add_pipeline_flags(p)

    p = sub.add_parser("rank", help="dump per-frame importance scores")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    _add_pipeline_flags(p)

    p = sub.add_parser("segment", help="dump the segmentation only")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    _add_pipeline_flags(p)

    p = sub.add_parser("evaluate", help="score a summary against annotations")
    p.add_argument("--summary", required=True)
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", default=None, help="report JSON output path")
    _add_pipeline_flags(p)

    p = sub.add_parser("stats", help="dataset statistics over annotation files")
    p.add_argument("--annotations", required=True, nargs="+")
    p.add_argument("--out", default=None)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "summarize":
            run_summarize(
                _config_from_args(args), args.features, args.out,
                cutlist_path=args.cutlist,
                segmentation_in=args.segmentation_in,
                scores_in=args.scores_in,
            )
        elif args.command == "rank":
            run_rank(_config_from_args(args), args.features, args.out)
        elif args.command == "segment":
            run_segment(_config_from_args(args), args.features, args.out)
        elif args.command == "evaluate":
            run_evaluate(_config_from_args(args), args.summary, args.annotations, args.out)
        elif args.command == "stats":
            run_stats(args.annotations, args.out)
    except (VidsumError, ValueError, OSError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
