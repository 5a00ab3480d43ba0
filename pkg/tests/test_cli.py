"""End-to-end tests of the command-line interface."""

import json

import numpy as np
import pytest

from kakamatch.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, build_parser, main
from kakamatch.commands import cmd_features
from kakamatch.config import PipelineConfig
from kakamatch.imaging.image import GrayImage
from kakamatch.imaging.pnm import read_pnm, write_pnm


class TestUsage:
    def test_unknown_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--bogus"])
        assert exc.value.code == EXIT_USAGE
        assert "usage:" in capsys.readouterr().err

    def test_bad_subcommand_argument(self):
        with pytest.raises(SystemExit) as exc:
            main(["match", "only-one-file"])
        assert exc.value.code == EXIT_USAGE

    def test_no_command(self):
        assert main([]) == EXIT_USAGE

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "kakamatch" in capsys.readouterr().out

    def test_global_flags(self):
        args = build_parser().parse_args(["--seed", "3", "--threads", "2", "--set", "ransac.iters=5", "synth", "out"])
        assert (args.seed, args.threads, args.overrides, args.command) == (3, 2, ["ransac.iters=5"], "synth")


class TestDataErrors:
    def test_missing_directory(self, tmp_path):
        assert main(["select-frames", str(tmp_path / "missing"), "-o", str(tmp_path / "m.txt")]) == EXIT_DATA

    def test_missing_feature_file(self, tmp_path):
        assert main(["match", str(tmp_path / "a.sift"), str(tmp_path / "b.sift")]) == EXIT_DATA

    def test_invalid_override(self, tmp_path):
        assert main(["--set", "ransac.iterations=5", "synth", str(tmp_path)]) == EXIT_DATA

    def test_evaluate_without_labels(self, tmp_path):
        features = tmp_path / "corpus" / "features"
        features.mkdir(parents=True)
        assert main(["evaluate", "--features", str(features)]) == EXIT_DATA

    def test_corrupt_image_fails_extraction(self, tmp_path):
        images = tmp_path / "images"
        images.mkdir()
        (images / "clipA_0000.pgm").write_bytes(b"P5\n4 4\n255\n\x00")
        assert main(["features", str(images), "-o", str(tmp_path / "features")]) == EXIT_DATA


def test_select_frames(tmp_path):
    frames = tmp_path / "frames"
    for name, value in (("a.pgm", 51), ("b.pgm", 50), ("c.pgm", 0)):
        write_pnm(frames / name, GrayImage.from_uint8(np.full((10, 10), value, dtype=np.uint8)))
    manifest = tmp_path / "manifest.txt"
    assert main(["select-frames", str(frames), "-o", str(manifest)]) == EXIT_OK
    assert manifest.read_text().splitlines() == ["a.pgm"]


def test_select_frames_all_black(tmp_path):
    frames = tmp_path / "frames"
    for name in ("a.pgm", "b.pgm"):
        write_pnm(frames / name, GrayImage.from_uint8(np.zeros((8, 12), dtype=np.uint8)))
    manifest = tmp_path / "manifest.txt"
    assert main(["select-frames", str(frames), "-o", str(manifest)]) == EXIT_OK
    assert manifest.read_text() == ""


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    """A 2 x 2 synthetic corpus with extracted features, built through the CLI."""
    root = tmp_path_factory.mktemp("cli")
    assert main([
        "--seed", "5", "synth", str(root),
        "--individuals", "2", "--views", "2", "--size", "128",
    ]) == EXIT_OK
    assert main([
        "features", str(root / "images"), "-o", str(root / "features"),
        "--background", str(root / "background.pgm"),
    ]) == EXIT_OK
    return root


class TestPipeline:
    def test_feature_files(self, corpus):
        assert sorted(p.stem for p in (corpus / "features").glob("*.sift")) == [
            "clip0000_0000", "clip0001_0000", "clip0002_0000", "clip0003_0000",
        ]

    def test_self_match(self, corpus, tmp_path):
        feature = str(corpus / "features" / "clip0000_0000.sift")
        out = tmp_path / "self.json"
        assert main(["match", feature, feature, "-o", str(out)]) == EXIT_OK
        report = json.loads(out.read_text())
        assert report["matched"] is True
        assert report["mean_distance"] == 0.0
        assert report["score"] == report["n_matches"] + 1.0

    def test_match_to_stdout(self, corpus, capsys):
        features = corpus / "features"
        code = main(["match", str(features / "clip0000_0000.sift"), str(features / "clip0001_0000.sift")])
        assert code == EXIT_OK
        report = json.loads(capsys.readouterr().out)
        assert report["image_a"] == "clip0000_0000"
        assert report["strategy"] == "mnn"

    def test_compare_matchers(self, corpus, tmp_path):
        feature = str(corpus / "features" / "clip0000_0000.sift")
        out = tmp_path / "compare.json"
        assert main(["compare-matchers", feature, feature, "-o", str(out)]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert [row["strategy"] for row in payload["strategies"]] == ["nn", "mnn", "nndr"]

    def test_rank(self, corpus, tmp_path):
        out, csv = tmp_path / "rank.json", tmp_path / "rank.csv"
        assert main([
            "rank", "clip0000_0000", "--features", str(corpus / "features"),
            "-o", str(out), "--csv", str(csv),
        ]) == EXIT_OK
        ranking = json.loads(out.read_text())
        assert ranking["query"] == "clip0000_0000"
        assert all(r["clip"] != "clip0000" for r in ranking["results"])
        scores = [r["score"] for r in ranking["results"]]
        assert scores == sorted(scores, reverse=True)
        assert csv.read_text().splitlines()[0] == "image,clip,score,n_matches,mean_distance"

    def test_rank_unknown_query(self, corpus):
        assert main(["rank", "clip9999_0000", "--features", str(corpus / "features")]) == EXIT_DATA

    def test_evaluate(self, corpus, tmp_path):
        out, text = tmp_path / "eval.json", tmp_path / "eval.txt"
        assert main([
            "--seed", "5", "evaluate", "--features", str(corpus / "features"),
            "-x", "2", "1", "-o", str(out), "--text", str(text),
        ]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["seed"] == 5
        assert [t["x"] for t in payload["tables"]] == [1, 2]
        assert all(t["overall"]["total"] == 4 for t in payload["tables"])
        assert payload["tables"][0]["overall"]["accuracy"] <= payload["tables"][1]["overall"]["accuracy"]
        assert text.read_text().startswith("Top-1\n")

    def test_visualize(self, corpus, tmp_path):
        features = corpus / "features"
        report = tmp_path / "report.json"
        assert main([
            "match", str(features / "clip0000_0000.sift"), str(features / "clip0000_0000.sift"), "-o", str(report),
        ]) == EXIT_OK
        image = str(corpus / "images" / "clip0000_0000.pgm")
        out = tmp_path / "overlay.ppm"
        assert main(["visualize", image, image, str(report), "-o", str(out)]) == EXIT_OK
        overlay = read_pnm(out)
        assert (overlay.width, overlay.height) == (256, 128)

    def test_visualize_rejects_bad_report(self, corpus, tmp_path):
        report = tmp_path / "report.json"
        report.write_text("{not json")
        image = str(corpus / "images" / "clip0000_0000.pgm")
        assert main(["visualize", image, image, str(report), "-o", str(tmp_path / "o.ppm")]) == EXIT_DATA

    def test_features_rerun_is_a_no_op(self, corpus):
        stamps = {p.name: p.stat().st_mtime_ns for p in (corpus / "features").glob("*.sift")}
        summary = cmd_features(corpus / "images", corpus / "features", PipelineConfig(),
                               background=corpus / "background.pgm")
        assert (summary.written, summary.skipped) == (0, 4)
        assert {p.name: p.stat().st_mtime_ns for p in (corpus / "features").glob("*.sift")} == stamps
