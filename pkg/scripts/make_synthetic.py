#!/usr/bin/env python3
"""Generate a planted-block synthetic video fixture (features + annotations).

Writes <name>.frnk, <name>.json (same features as JSON), and
<name>.ann.json into --out-dir. Useful for demos and for exercising the CLI
without a real feature extractor.
"""

import argparse
from pathlib import Path

from vidsum import synthetic
from vidsum.features import write_annotations, write_features


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="fixtures")
    parser.add_argument("--name", default="planted")
    parser.add_argument("--frames-per-block", type=int, default=30)
    parser.add_argument("--stride", type=int, default=5)
    parser.add_argument("--fps", type=float, default=30.0)
    parser.add_argument("--noise", type=float, default=0.05)
    parser.add_argument("--annotators", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    features = synthetic.planted_features(
        frames_per_block=args.frames_per_block,
        stride=args.stride,
        fps=args.fps,
        noise=args.noise,
        seed=args.seed,
        video_id=args.name,
    )
    annotations = synthetic.planted_annotations(
        features,
        frames_per_block=args.frames_per_block,
        n_annotators=args.annotators,
        seed=args.seed + 1,
    )
    write_features(features, out_dir / f"{args.name}.frnk")
    write_features(features, out_dir / f"{args.name}.json", fmt="json")
    write_annotations(annotations, out_dir / f"{args.name}.ann.json")
    span = synthetic.block_source_span(
        synthetic.REPRESENTATIVE_BLOCK, args.frames_per_block, args.stride
    )
    print(f"wrote {args.name}.frnk / .json / .ann.json to {out_dir}")
    print(f"{features.n_frames} sampled frames, {features.n_source_frames} source frames")
    print(f"planted representative block spans source frames {span[0]}..{span[1]}")


if __name__ == "__main__":
    main()
