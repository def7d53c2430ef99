import csv
import io
import json
import xml.dom.minidom
from pathlib import Path

import pytest

from decisive.cli import main

REPO = Path(__file__).resolve().parents[1]
CAMPAIGN = REPO / "sample_campaign"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_good_manifest(self, capsys):
        code, _out, err = run(capsys, "validate", CAMPAIGN / "campaign.json")
        assert code == 0
        assert "OK" in err

    def test_dangling_trial_names_id(self, capsys, tmp_path):
        doc = json.loads((CAMPAIGN / "campaign.json").read_text())
        doc["trials"] = [{"trial_id": "ghost", "test_id": "no-such-test",
                          "suas_id": "alpha", "outcome": "success"}]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        code, _out, err = run(capsys, "validate", bad)
        assert code == 1
        assert "ghost" in err

    def test_missing_file(self, capsys):
        code, _out, err = run(capsys, "validate", "nope.json")
        assert code == 1

    def test_malformed_json_never_raises(self, capsys, tmp_path):
        bad = tmp_path / "garbage.json"
        bad.write_bytes(b"\x00{]]")
        code, _out, _err = run(capsys, "validate", bad)
        assert code == 1

    def test_inconsistent_environment_is_input_error(self, capsys, tmp_path):
        doc = json.loads((CAMPAIGN / "campaign.json").read_text())
        doc["environments"][0]["lux"] = 3.0  # claims lighted, measures dim
        doc["trials"] = []
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(doc))
        code, _out, err = run(capsys, "validate", bad)
        assert code == 1
        assert "lux" in err

    def test_bad_usage_exits_one(self, capsys):
        code, _out, _err = run(capsys, "metrics", CAMPAIGN / "campaign.json",
                               "--test", "bogus")
        assert code == 1


class TestMetrics:
    @pytest.mark.parametrize("category", ["nav", "collision", "field", "mapping"])
    def test_each_category(self, capsys, category):
        code, out, _err = run(capsys, "metrics", CAMPAIGN / "campaign.json",
                              "--test", category)
        assert code == 0
        assert "###" in out

    def test_csv_format(self, capsys):
        code, out, _err = run(capsys, "metrics", CAMPAIGN / "campaign.json",
                              "--test", "field", "--format", "csv")
        assert code == 0
        assert "Runtime" not in out.splitlines()[0]  # csv has no md titles

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "nav.md"
        code, out, _err = run(capsys, "metrics", CAMPAIGN / "campaign.json",
                              "--test", "nav", "--out", target)
        assert code == 0
        assert out == ""  # data went to the file, not stdout
        assert target.read_text().startswith("### Path deviation")


class TestNcap:
    def test_uniform_weights_csv(self, capsys):
        code, out, _err = run(capsys, "ncap", "--features", CAMPAIGN / "features.json",
                              "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 2
        by_id = {r["sUAS"]: r for r in rows}
        assert by_id["alpha"]["component potential"] == "2.48"
        assert by_id["alpha"]["relative distance"] == "0.00"
        assert by_id["bravo"]["relative distance"] == "2.01"

    def test_reingesting_csv_reproduces_rendered_values(self, capsys, tmp_path):
        target = tmp_path / "ncap.csv"
        run(capsys, "ncap", "--features", CAMPAIGN / "features.json",
            "--format", "csv", "--out", target)
        first = target.read_text()
        rows = list(csv.DictReader(io.StringIO(first)))
        # the rendered numbers parse back to the same 2-decimal values
        for row in rows:
            assert f"{float(row['component potential']):.2f}" == row["component potential"]

    def test_explicit_weight_file(self, capsys, tmp_path):
        weights = {name: 1.0 for name in (
            "flight_time", "charge_time", "stream_resolution", "fov", "max_range",
            "thermal_resolution", "weight", "max_speed", "sensors", "smart_behaviors")}
        wfile = tmp_path / "w.json"
        wfile.write_text(json.dumps(weights))
        code, out, _err = run(capsys, "ncap", "--features", CAMPAIGN / "features.json",
                              "--weights", wfile, "--format", "csv")
        assert code == 0
        assert "2.48" in out  # all-equal explicit weights match uniform

    def test_missing_capabilities_is_input_error(self, capsys, tmp_path):
        doc = json.loads((CAMPAIGN / "features.json").read_text())
        for system in doc["systems"]:
            system.pop("capabilities", None)
        sheet = tmp_path / "sheet.json"
        sheet.write_text(json.dumps(doc))
        code, _out, err = run(capsys, "ncap", "--features", sheet)
        assert code == 1
        assert "capability" in err


class TestCfis:
    def test_scores_pipeline(self, capsys):
        code, out, _err = run(capsys, "cfis", "--scores", CAMPAIGN / "cfis_scores.csv")
        assert code == 0
        assert "Predictive mission score" in out

    def test_precomputed_scores(self, capsys, tmp_path):
        scores = tmp_path / "scores.csv"
        scores.write_text(
            "suas_id,test_id,score\n"
            "charlie,corridors,0.84\ncharlie,apertures,1.0\n"
            "charlie,takeoff,1.0\ncharlie,landing,0.87\n"
        )
        code, out, _err = run(capsys, "cfis", "--scores", scores, "--format", "csv")
        assert code == 0
        assert "charlie,4,0.92" in out

    def test_uncovered_inputs_is_computation_error(self, capsys, tmp_path):
        scores = tmp_path / "scores.csv"
        # mixed difficulty bands: the sparse environment stage fires no rule
        scores.write_text(
            "suas_id,test_id,crashes,rollovers,completion,roll,pitch,"
            "lateral_obstruction,vertical_obstruction\n"
            "alpha,takeoff,0,0,1.0,10,0,1.2,0.6\n"
        )
        code, _out, err = run(capsys, "cfis", "--scores", scores)
        assert code == 2
        assert "no rule" in err


class TestSaTrust:
    def test_sa(self, capsys):
        code, out, _err = run(capsys, "sa", "--sagat", CAMPAIGN / "sagat.csv",
                              "--weights", CAMPAIGN / "sa_weights.json")
        assert code == 0
        assert "SAGAT correct rate" in out
        assert "Operator situation awareness" in out
        assert "OSA by mission" in out
        assert "| overall |" in out

    def test_sa_uniform_weights_without_file(self, capsys):
        code, out, _err = run(capsys, "sa", "--sagat", CAMPAIGN / "sagat.csv")
        assert code == 0
        assert "OSA by mission" not in out

    def test_trust_carries_both_test_columns(self, capsys):
        code, out, _err = run(capsys, "trust", "--survey", CAMPAIGN / "surveys.csv",
                              "--condition-a", "caged", "--condition-b", "exposed")
        assert code == 0
        header = next(line for line in out.splitlines() if line.startswith("| instrument"))
        assert "| t |" in header and "| U |" in header

    def test_trust(self, capsys):
        code, out, err = run(capsys, "trust", "--survey", CAMPAIGN / "surveys.csv",
                             "--condition-a", "caged", "--condition-b", "exposed")
        assert code == 0
        assert "Trust comparison" in out
        assert "manipulation check" in err  # e10 fails the check

    def test_trust_missing_condition(self, capsys):
        code, _out, _err = run(capsys, "trust", "--survey", CAMPAIGN / "surveys.csv",
                               "--condition-a", "caged", "--condition-b", "underwater")
        assert code == 2


class TestPlot:
    def test_ncap_scatter(self, capsys, tmp_path):
        target = tmp_path / "scatter.svg"
        code, _out, _err = run(capsys, "plot", "--kind", "ncap-scatter",
                               "--features", CAMPAIGN / "features.json", "--out", target)
        assert code == 0
        xml.dom.minidom.parse(str(target))

    def test_deviation(self, capsys, tmp_path):
        path_file = tmp_path / "path.json"
        path_file.write_text(json.dumps({"vertices": [[0, 1, 1], [3, 1, 1]]}))
        target = tmp_path / "dev.svg"
        code, _out, _err = run(capsys, "plot", "--kind", "deviation",
                               "--telemetry", CAMPAIGN / "wf_alpha_1.csv",
                               "--path", path_file, "--out", target)
        assert code == 0
        xml.dom.minidom.parse(str(target))

    def test_byte_identical_over_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        for target in (a, b):
            run(capsys, "plot", "--kind", "ncap-scatter",
                "--features", CAMPAIGN / "features.json", "--out", target)
        assert a.read_bytes() == b.read_bytes()


class TestReport:
    def test_full_report(self, capsys):
        code, out, _err = run(capsys, "report", CAMPAIGN / "campaign.json")
        assert code == 0
        for title in ("Path deviation", "Obstacle avoidance", "Runtime endurance",
                      "Fiducial difficulty"):
            assert title in out

    def test_writes_nothing_outside_out_target(self, capsys, tmp_path):
        before = sorted(p.name for p in CAMPAIGN.iterdir())
        target = tmp_path / "report.md"
        run(capsys, "report", CAMPAIGN / "campaign.json", "--out", target)
        assert sorted(p.name for p in CAMPAIGN.iterdir()) == before
        assert target.exists()
