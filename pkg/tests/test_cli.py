import json
import subprocess
import sys

import pytest

from vidsum.cli import main
from vidsum.features import load_summary, write_annotations, write_features


@pytest.fixture
def fixture_dir(tmp_path, planted, planted_ann):
    write_features(planted, tmp_path / "planted.frnk")
    write_annotations(planted_ann, tmp_path / "planted.ann.json")
    return tmp_path


BASE_FLAGS = ["--knn", "5", "--budget-ratio", "0.3334"]


class TestSummarize:
    def test_picks_planted_block(self, fixture_dir):
        out = fixture_dir / "summary.json"
        cuts = fixture_dir / "cuts.txt"
        rc = main([
            "summarize", "--features", str(fixture_dir / "planted.frnk"),
            "--out", str(out), "--cutlist", str(cuts), *BASE_FLAGS,
        ])
        assert rc == 0
        summary = load_summary(out)
        assert summary.intervals == [(150, 299)]
        assert cuts.read_text() == "5.000 10.000\n"

    def test_config_echoed_and_round_trips(self, fixture_dir):
        out1 = fixture_dir / "s1.json"
        out2 = fixture_dir / "s2.json"
        assert main(["summarize", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(out1), *BASE_FLAGS]) == 0
        config = json.loads(out1.read_text())["config"]
        flags = []
        for key, value in config.items():
            if value is None:
                continue
            flags += [f"--{key.replace('_', '-')}", str(value)]
        assert main(["summarize", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(out2), *flags]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_keyframe_mode_takes_top_frames(self, fixture_dir, planted):
        out = fixture_dir / "kf.json"
        rc = main([
            "summarize", "--features", str(fixture_dir / "planted.frnk"),
            "--out", str(out), "--segmentation", "none", "--budget-ratio", "0.1",
        ])
        assert rc == 0
        summary = load_summary(out)
        # every selected interval is one sampled frame wide
        assert all(e - s + 1 == planted.stride for s, e in summary.intervals)
        assert summary.total_frames <= summary.budget_frames

    @pytest.mark.parametrize("spelling", ["label-overlap", "label_overlap"])
    def test_metric_flag_spellings(self, fixture_dir, spelling):
        out = fixture_dir / "lo.json"
        rc = main(["summarize", "--features", str(fixture_dir / "planted.frnk"),
                   "--out", str(out), "--metric", spelling, "--segmentation", "uniform",
                   "--seg-len", "10", "--budget-ratio", "0.3334"])
        assert rc == 0
        assert json.loads(out.read_text())["config"]["metric"] == "label_overlap"

    def test_uniform_mode(self, fixture_dir):
        out = fixture_dir / "u.json"
        rc = main([
            "summarize", "--features", str(fixture_dir / "planted.frnk"),
            "--out", str(out), "--segmentation", "uniform", "--seg-len", "10",
            "--budget-ratio", "0.3334",
        ])
        assert rc == 0
        assert load_summary(out).total_frames > 0

    def test_unreadable_input(self, fixture_dir, capsys):
        out = fixture_dir / "nope.json"
        rc = main(["summarize", "--features", str(fixture_dir / "missing.frnk"),
                   "--out", str(out)])
        assert rc != 0
        assert not out.exists()
        assert "error" in capsys.readouterr().err

    def test_segmentation_in_decouples_stages(self, fixture_dir):
        seg_path = fixture_dir / "seg.json"
        out = fixture_dir / "s.json"
        assert main(["segment", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(seg_path), *BASE_FLAGS]) == 0
        assert main(["summarize", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(out), "--segmentation-in", str(seg_path),
                     *BASE_FLAGS]) == 0
        assert load_summary(out).intervals == [(150, 299)]

    def test_scores_in_reused(self, fixture_dir):
        scores_path = fixture_dir / "scores.txt"
        out = fixture_dir / "s.json"
        assert main(["rank", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(scores_path)]) == 0
        assert main(["summarize", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(out), "--scores-in", str(scores_path),
                     *BASE_FLAGS]) == 0
        assert load_summary(out).intervals == [(150, 299)]


class TestRankAndSegment:
    def test_rank_dump_line_per_frame(self, fixture_dir, planted):
        out = fixture_dir / "scores.txt"
        assert main(["rank", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == planted.n_frames
        assert all(float(line) >= 0 for line in lines)

    def test_segment_dump(self, fixture_dir):
        out = fixture_dir / "seg.json"
        assert main(["segment", "--features", str(fixture_dir / "planted.frnk"),
                     "--out", str(out), *BASE_FLAGS]) == 0
        doc = json.loads(out.read_text())
        assert doc["method"] == "bundling"
        assert doc["segments"] == [[0, 29], [30, 59], [60, 89]]


class TestEvaluateAndStats:
    def test_evaluate_self_is_perfect(self, fixture_dir, planted_ann, capsys):
        # summary file equal to one annotator's intervals, one annotator
        ann_one = type(planted_ann)(
            planted_ann.video_id, planted_ann.fps, planted_ann.n_source_frames,
            planted_ann.annotations[:1],
        )
        write_annotations(ann_one, fixture_dir / "one.ann.json")
        from vidsum.features import Summary, write_summary
        intervals = ann_one.annotations[0][1]
        summary = Summary(planted_ann.video_id, intervals,
                          [1.0] * len(intervals),
                          budget_frames=sum(e - s + 1 for s, e in intervals))
        write_summary(summary, fixture_dir / "machine.json")
        rc = main(["evaluate", "--summary", str(fixture_dir / "machine.json"),
                   "--annotations", str(fixture_dir / "one.ann.json"),
                   "--out", str(fixture_dir / "report.json")])
        assert rc == 0
        report = json.loads((fixture_dir / "report.json").read_text())
        assert report["aggregate_mean"] == 1.0
        tsv = capsys.readouterr().out.strip().split("\t")
        assert tsv[0] == planted_ann.video_id
        assert float(tsv[1]) == 1.0

    def test_video_mismatch_exits_nonzero(self, fixture_dir, planted_ann):
        from vidsum.features import Summary, write_summary
        write_summary(Summary("other", [(0, 9)], [1.0], 10), fixture_dir / "bad.json")
        rc = main(["evaluate", "--summary", str(fixture_dir / "bad.json"),
                   "--annotations", str(fixture_dir / "planted.ann.json")])
        assert rc == 1

    def test_stats_row(self, fixture_dir, tmp_path, capsys):
        # two identical annotators: pairwise F1 = 1, alpha = 1
        from vidsum.features import AnnotationSet
        ann = AnnotationSet("clip", 30.0, 100, [("a", [(0, 29)]), ("b", [(0, 29)])])
        write_annotations(ann, tmp_path / "two.json")
        rc = main(["stats", "--annotations", str(tmp_path / "two.json")])
        assert rc == 0
        lines = capsys.readouterr().out.strip().splitlines()
        row = lines[1].split("\t")
        assert row[0] == "clip"
        assert float(row[4]) == 1.0
        assert float(row[5]) == pytest.approx(1.0)

    def test_stats_alpha_undefined(self, tmp_path, capsys):
        from vidsum.features import AnnotationSet
        ann = AnnotationSet("clip", 30.0, 100, [("a", [(0, 49)]), ("b", [(50, 99)])])
        write_annotations(ann, tmp_path / "comp.json")
        assert main(["stats", "--annotations", str(tmp_path / "comp.json")]) == 0
        assert "n/a" in capsys.readouterr().out


class TestDeterminism:
    def test_cli_byte_identical(self, fixture_dir):
        args = ["summarize", "--features", str(fixture_dir / "planted.frnk"),
                "--seed", "3", *BASE_FLAGS]
        outputs = []
        for run in (1, 2):
            out = fixture_dir / f"det{run}.json"
            cuts = fixture_dir / f"det{run}.cuts"
            proc = subprocess.run(
                [sys.executable, "-m", "vidsum", *args, "--out", str(out),
                 "--cutlist", str(cuts)],
                capture_output=True,
            )
            assert proc.returncode == 0, proc.stderr
            outputs.append(out.read_bytes() + cuts.read_bytes())
        assert outputs[0] == outputs[1]
