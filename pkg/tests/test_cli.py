import json

import numpy as np
import pytest

from pitchvalue import __version__
from pitchvalue.cli import main
from pitchvalue.config import ENV_VAR
from pitchvalue.data.io import write_events, write_tracking
from pitchvalue.data.records import TrackedPlayer, TrackingFrame
from pitchvalue.export import read_ppm
from pitchvalue.transition import KernelModel
from pitchvalue.value_models import read_grid_csv

from helpers import build_log

FAST = ["--set", "grid.nx=20", "--set", "grid.ny=12"]


@pytest.fixture(scope="module")
def league(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    spec = d / "spec.json"
    spec.write_text(json.dumps({"teams": 4, "matches": 3}))
    assert main(["synth", "--spec", str(spec), "--seed", "5", "--out", str(d / "data")]) == 0
    assert main(["fit-kernel", "--events", str(d / "data" / "events.jsonl"), "--out", str(d / "model.json")]) == 0
    return d


def read(path):
    return json.loads(path.read_text())


def strip_time(doc):
    doc = dict(doc)
    doc.pop("generated_at", None)
    if "report" in doc:
        doc["report"] = strip_time(doc["report"])
    return doc


# ---- dispatch and exit codes ------------------------------------------------------------

def test_no_command(capsys):
    assert main([]) == 1
    assert "usage" in capsys.readouterr().err


def test_unknown_command(capsys):
    assert main(["explode"]) == 1
    assert "fit-kernel" in capsys.readouterr().err


def test_help_and_version(capsys):
    assert main(["--help"]) == 0
    assert main(["detect", "--help"]) == 0
    assert main(["--version"]) == 0
    assert __version__ in capsys.readouterr().out


def test_missing_required(capsys):
    assert main(["detect", "--out", "x.json"]) == 1


def test_bad_config(tmp_path):
    ev = tmp_path / "e.jsonl"
    write_events(ev, build_log())
    out = str(tmp_path / "t.json")
    assert main(["detect", "--events", str(ev), "--out", out, "--set", "grid.nz=3"]) == 1
    assert main(["detect", "--events", str(ev), "--out", out, "--config", str(tmp_path / "none.cfg")]) == 1


def test_missing_input_is_data_error(tmp_path):
    assert main(["detect", "--events", str(tmp_path / "none.jsonl"), "--out", str(tmp_path / "t.json")]) == 2


def test_malformed_input_is_data_error(tmp_path):
    ev = tmp_path / "e.jsonl"
    ev.write_text("{bad\n" * 5)
    assert main(["fit-kernel", "--events", str(ev), "--out", str(tmp_path / "m.json")]) == 2


# ---- synth ------------------------------------------------------------------------------------

def test_synth_deterministic(tmp_path):
    for d in ("a", "b"):
        assert main(["synth", "--seed", "7", "--out", str(tmp_path / d)]) == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == ["events.jsonl", "ground_truth.json", "tracking.jsonl"]
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_synth_bad_spec(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"teams": 1}))
    assert main(["synth", "--spec", str(spec), "--seed", "1", "--out", str(tmp_path / "o")]) == 1
    spec.write_text("{not json")
    assert main(["synth", "--spec", str(spec), "--seed", "1", "--out", str(tmp_path / "o")]) == 1


# ---- fit-kernel / detect -------------------------------------------------------------------------

def test_fit_kernel_report(league):
    doc = read(league / "model.json")
    model = KernelModel.from_json(doc)
    rep = doc["report"]
    assert rep["command"] == "fit-kernel" and rep["version"] == __version__
    assert rep["n_passes"] == model.pooled.n
    assert rep["config"]["transition.min_samples"] == 50


def test_detect_alternating(tmp_path):
    rows = [("A" if k % 2 == 0 else "B", "pass", 0.0, 0.0, "Regular Play") for k in range(12)]
    ev = tmp_path / "e.jsonl"
    write_events(ev, build_log(rows))
    assert main(["detect", "--events", str(ev), "--out", str(tmp_path / "t.json")]) == 0
    rep = read(tmp_path / "t.json")
    assert rep["n_transitions"] == 0 and rep["transitions"] == []


def test_detect_log_and_radius(tmp_path):
    ev = tmp_path / "e.jsonl"
    write_events(ev, build_log())
    assert main(["detect", "--events", str(ev), "--radius", "200", "--out", str(tmp_path / "t.json")]) == 0
    rep = read(tmp_path / "t.json")
    assert rep["n_detected"] == 14 and rep["n_transitions"] == 14 and rep["radius"] == 200
    assert main(["detect", "--events", str(ev), "--metric", "x_only", "--out", str(tmp_path / "u.json")]) == 0
    assert read(tmp_path / "u.json")["metric"] == "x_only"


def test_reports_identical_apart_from_timestamp(league):
    ev = str(league / "data" / "events.jsonl")
    a, b = league / "d1.json", league / "d2.json"
    assert main(["detect", "--events", ev, "--out", str(a)]) == 0
    assert main(["detect", "--events", ev, "--out", str(b)]) == 0
    assert strip_time(read(a)) == strip_time(read(b))
    assert "generated_at" in read(a)


# ---- eval-frame -------------------------------------------------------------------------------------

@pytest.fixture()
def frame_file(tmp_path):
    players = (TrackedPlayer("a1", "A", (-20.0, 0.0)), TrackedPlayer("a2", "A", (5.0, 10.0)),
               TrackedPlayer("b1", "B", (10.0, -5.0)), TrackedPlayer("b2", "B", (30.0, 0.0)))
    frames = [TrackingFrame(k, 0.1 * k, (-19.0, 0.0), players, "M1") for k in range(3)]
    p = tmp_path / "t.jsonl"
    write_tracking(p, frames)
    return p


def test_eval_frame_heatmap(tmp_path, frame_file):
    heat, img, out = tmp_path / "h.csv", tmp_path / "h.ppm", tmp_path / "r.json"
    argv = ["eval-frame", "--tracking", str(frame_file), "--frame", "1", "--mode", "obso",
            "--heatmap", str(heat), "--image", str(img), "--out", str(out)] + FAST
    assert main(argv) == 0
    grid = read_grid_csv(heat)
    assert grid.shape == (12, 20)
    assert read_ppm(img).shape == (12, 20, 3)
    rep = read(out)
    assert rep["kind"] == "OBSO" and rep["attacking_team"] == "A" and rep["shape"] == [12, 20]
    assert rep["max"] == pytest.approx(grid.max(), rel=1e-5)
    assert rep["config"]["grid.nx"] == 20


def test_eval_frame_obpv_with_model(league, frame_file, tmp_path, capsys):
    argv = ["eval-frame", "--tracking", str(frame_file), "--frame", "0", "--model", str(league / "model.json"),
            "--attacking-team", "B", "--direction=-x"] + FAST
    assert main(argv) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["kind"] == "OBPV" and rep["attacking_team"] == "B"
    assert rep["transition_source"] == "kernel" and 0 <= rep["scalar"] <= rep["max"]


def test_eval_frame_errors(frame_file, tmp_path):
    base = ["eval-frame", "--tracking", str(frame_file)] + FAST
    assert main(base + ["--frame", "99"]) == 2
    # OBPV needs a kernel model unless the gaussian source is configured
    assert main(base + ["--frame", "0"]) == 2
    assert main(base + ["--frame", "0", "--set", "eval.transition_source=gaussian",
                        "--out", str(tmp_path / "r.json")]) == 0


def test_env_config(monkeypatch, tmp_path, frame_file):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("grid.nx = 6\ngrid.ny = 4\n")
    monkeypatch.setenv(ENV_VAR, str(cfg))
    heat = tmp_path / "h.csv"
    assert main(["eval-frame", "--tracking", str(frame_file), "--frame", "0", "--mode", "obso",
                 "--heatmap", str(heat), "--out", str(tmp_path / "r.json")]) == 0
    assert read_grid_csv(heat).shape == (4, 6)
    assert read(tmp_path / "r.json")["config"]["grid.nx"] == 6


# ---- analysis commands -----------------------------------------------------------------------------

def test_team_profiles_and_counters(league):
    data = league / "data"
    truth = read(data / "ground_truth.json")
    cov = league / "cov.csv"
    cov.write_text("team_id,value\n" + "".join(f"{t},{v}\n" for t, v in sorted(truth["team_aggressiveness"].items())))
    common = ["--events", str(data / "events.jsonl"), "--tracking", str(data / "tracking.jsonl"),
              "--model", str(league / "model.json")] + FAST
    out = league / "profiles.json"
    assert main(["team-profiles", *common, "--covariates", str(cov), "--exclude", "T01", "--out", str(out)]) == 0
    rep = read(out)
    assert {p["team_id"] for p in rep["profiles"]} == {"T01", "T02", "T03", "T04"}
    assert rep["excluded_teams"] == ["T01"] and rep["spearman_rho"]["positive"] is not None
    assert rep["scalar_mode"] == "grid_max" and rep["transition_norm"] == "max"
    out = league / "counters.json"
    code = main(["analyze-counters", *common, "--out", str(out)])
    assert code == 0
    rep = read(out)
    assert rep["counter_mode"] == "label" and rep["method"] in ("exact", "normal_approx")
    assert set(rep["groups"]) == {"success", "fail"}
