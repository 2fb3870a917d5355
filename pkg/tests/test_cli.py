import json

import pytest

from marathonkit import cli


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestSubsample:
    def test_prints_475_indices(self, capsys):
        code, out = run_cli(capsys, "subsample", "--frames", "2850", "--fps", "5")
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == 475
        assert payload["frame_indices"][:3] == [0, 6, 12]

    def test_non_divisor_exits_1(self, capsys):
        code, _ = run_cli(capsys, "subsample", "--frames", "2850", "--fps", "7")
        assert code == 1


class TestSampleLocations:
    def test_reports_subset_and_critical_value(self, capsys, scores_csv):
        code, out = run_cli(
            capsys, "sample-locations", "--scores", str(scores_csv),
            "--k", "6", "--c-alpha", "1.63", "--seed", "7", "--iterations", "2000",
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["subset"]) == 6
        assert len(payload["locations"]) == 6
        assert payload["critical_value"] == pytest.approx(0.7202, abs=1e-4)
        assert payload["accepted"] is True

    def test_deterministic_for_seed(self, capsys, scores_csv):
        args = ("sample-locations", "--scores", str(scores_csv),
                "--seed", "3", "--iterations", "200")
        _, out1 = run_cli(capsys, *args)
        _, out2 = run_cli(capsys, *args)
        assert out1 == out2

    def test_exhaustive_mode(self, capsys, scores_csv):
        code, out = run_cli(
            capsys, "sample-locations", "--scores", str(scores_csv), "--exhaustive",
        )
        assert code == 0
        assert json.loads(out)["statistic"] <= 0.7202


class TestInterpolate:
    def test_midpoint(self, capsys, tmp_path):
        track = tmp_path / "track.json"
        track.write_text(json.dumps({
            "identity": "7",
            "keyframes": [
                {"frame_index": 0, "box": [0, 0, 10, 10]},
                {"frame_index": 10, "box": [20, 0, 30, 10]},
            ],
        }))
        code, out = run_cli(capsys, "interpolate", "--track", str(track))
        assert code == 0
        boxes = {e["frame_index"]: e["box"] for e in json.loads(out)["boxes"]}
        assert boxes[5] == [10.0, 0.0, 20.0, 10.0]

    def test_missing_file_exits_2(self, capsys, tmp_path):
        code, _ = run_cli(capsys, "interpolate", "--track", str(tmp_path / "nope.json"))
        assert code == 2


class TestLink:
    def test_labels_detections(self, capsys, tmp_path):
        paths = tmp_path / "paths.json"
        paths.write_text(json.dumps({"42": [[3, 5, 5]]}))
        dets = tmp_path / "dets.json"
        dets.write_text(json.dumps([
            {"frame_index": 3, "box": [0, 0, 10, 10], "confidence": 0.9},
            {"frame_index": 3, "box": [50, 50, 60, 60], "confidence": 0.9},
        ]))
        code, out = run_cli(capsys, "link", "--paths", str(paths), "--detections", str(dets))
        assert code == 0
        payload = json.loads(out)
        assert payload["labeled"][0]["label"] == "42"
        assert payload["eliminated"] == 1


class TestEvaluate:
    def test_perfect_predictions(self, capsys, tmp_path):
        gt = tmp_path / "gt.json"
        gt.write_text(json.dumps({
            "video_id": "v", "fps_source": 30,
            "tracks": [{
                "identity": "7",
                "keyframes": [
                    {"frame_index": 0, "box": [0, 0, 10, 10]},
                    {"frame_index": 2, "box": [4, 0, 14, 10]},
                ],
            }],
            "frame_ranges": [],
        }))
        pred = tmp_path / "pred.json"
        pred.write_text(json.dumps([
            {"frame_index": 0, "box": [0, 0, 10, 10], "confidence": 1.0},
            {"frame_index": 1, "box": [2, 0, 12, 10], "confidence": 1.0},
            {"frame_index": 2, "box": [4, 0, 14, 10], "confidence": 1.0},
        ]))
        code, out = run_cli(capsys, "evaluate", "--gt", str(gt), "--pred", str(pred))
        assert code == 0
        payload = json.loads(out)
        assert payload["f1"] == 1.0

    def test_pretty_report(self, capsys, tmp_path):
        gt = tmp_path / "gt.json"
        gt.write_text(json.dumps({
            "video_id": "v", "fps_source": 30,
            "tracks": [{"identity": "7", "keyframes": [
                {"frame_index": 0, "box": [0, 0, 10, 10]}]}],
            "frame_ranges": [],
        }))
        pred = tmp_path / "pred.json"
        pred.write_text(json.dumps([
            {"frame_index": 0, "box": [0, 0, 10, 10], "confidence": 1.0},
        ]))
        code, out = run_cli(capsys, "evaluate", "--gt", str(gt), "--pred", str(pred), "--pretty")
        assert code == 0
        assert "f1 1.0000" in out


class TestTimelineAndAlignQuery:
    def test_timeline_csv_export(self, capsys, tmp_path, runner_csv, checkpoints_csv):
        out_csv = tmp_path / "timelines.csv"
        code, out = run_cli(
            capsys, "timeline", "--runners", str(runner_csv),
            "--checkpoints", str(checkpoints_csv), "--bib", "101",
            "--out", str(out_csv),
        )
        assert code == 0
        header = out_csv.read_text().splitlines()[0]
        assert header == "bib,location_number,estimated_passing_s"
        payload = json.loads(out)
        entries = {loc: t for loc, _, t in payload["timelines"][0]["entries"]}
        assert entries[5] == 1500.0

    def test_align_query_matches_library(self, capsys, runner_csv, checkpoints_csv):
        from marathonkit import alignment, ingest

        records = ingest.load_runner_csv(runner_csv)
        checkpoints = alignment.load_checkpoints_csv(checkpoints_csv)
        timelines = [alignment.compute_timeline(r, checkpoints) for r in records]
        expected = alignment.time_window_query(timelines, 10, 2500, 300)
        code, out = run_cli(
            capsys, "align-query", "--runners", str(runner_csv),
            "--checkpoints", str(checkpoints_csv),
            "--location", "10", "--t", "2500", "--dt", "300",
        )
        assert code == 0
        assert json.loads(out)["bibs"] == expected

    def test_unknown_bib_exits_1(self, capsys, runner_csv, checkpoints_csv):
        code, _ = run_cli(
            capsys, "timeline", "--runners", str(runner_csv),
            "--checkpoints", str(checkpoints_csv), "--bib", "424242",
        )
        assert code == 1


class TestReidRank:
    def test_self_probe(self, capsys, tmp_path):
        gallery = tmp_path / "gallery.json"
        gallery.write_text(json.dumps([
            {"image_id": "a", "feature": [0, 0]},
            {"image_id": "b", "feature": [3, 4]},
        ]))
        probe = tmp_path / "probe.json"
        probe.write_text("[3, 4]")
        code, out = run_cli(
            capsys, "reid-rank", "--gallery", str(gallery), "--probe", str(probe)
        )
        assert code == 0
        matches = json.loads(out)["matches"]
        assert matches[0] == {"image_id": "b", "distance": 0.0}


class TestHelp:
    @pytest.mark.parametrize("command", [
        "ingest", "subsample", "sample-locations", "interpolate", "link",
        "evaluate", "timeline", "align-query", "reid-rank", "serve",
    ])
    def test_help_exits_zero(self, capsys, command):
        with pytest.raises(SystemExit) as exc:
            cli.run([command, "--help"])
        assert exc.value.code == 0
        assert "--" in capsys.readouterr().out
