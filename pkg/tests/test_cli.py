"""Command line interface tests, run in-process through main()."""

import json

import numpy as np

from otbmorph.harness.assets import load_image, load_landmarks, save_image, save_landmarks
from otbmorph.harness.cli import main
from otbmorph.harness.config import ExperimentConfig
from otbmorph.harness.experiment import run_experiment
from otbmorph.metrics import ScoreSets, compute_eer, threshold_at_fmr
from otbmorph.morph import Landmarks, RasterFace, morph_raster


def tiny_config_dict(**overrides):
    base = dict(
        dim=12,
        param_dim=6,
        identity_count=6,
        samples_per_identity=8,
        performance_split=4,
        attack_split=3,
        pool_size=10,
        attack_budget=4,
        master_seed=55,
        target_fmrs=[0.01, 0.1],
    )
    base.update(overrides)
    return base


def write_config(tmp_path, **overrides):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(tiny_config_dict(**overrides)), encoding="utf-8")
    return str(path)


def test_run_emits_bundle_and_table(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "report"
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    stdout = capsys.readouterr().out
    assert stdout.startswith("system,strategy,eer_pct")
    assert (out / "manifest.json").exists()
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["counts"]["identities"] == 6


def test_gen_then_run_ingested_matches_synthetic(tmp_path, capsys):
    cfg = write_config(tmp_path)
    gen_dir = tmp_path / "assets"
    assert main(["gen", "--config", cfg, "--out", str(gen_dir)]) == 0
    capsys.readouterr()
    assert (gen_dir / "embeddings.jsonl").exists()
    assert (gen_dir / "pool.jsonl").exists()
    ingested_cfg = gen_dir / "config.ingested.json"
    assert ingested_cfg.exists()

    assert main(["run", "--config", str(ingested_cfg)]) == 0
    capsys.readouterr()
    report = json.loads(ingested_cfg.read_text(encoding="utf-8"))["output_dir"]
    ingested_manifest = json.loads(
        (tmp_path / "assets" / "report" / "manifest.json").read_text(encoding="utf-8")
    )
    assert report.endswith("report")
    assert ingested_manifest["config"]["mode"] == "ingested"

    # same numbers as a direct synthetic run with an identical config
    synthetic = run_experiment(
        ExperimentConfig.from_dict(tiny_config_dict()), emit=False
    )
    for name, r in synthetic.systems.items():
        assert ingested_manifest["eer"][name]["value"] == r.eer.eer
        assert ingested_manifest["eer"][name]["threshold"] == r.eer.threshold


def test_run_strategy_subset(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "report"
    assert main(
        ["run", "--config", cfg, "--out", str(out), "--strategy", "random_key"]
    ) == 0
    capsys.readouterr()
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["systems"] == ["unprotected", "random_key"]


def test_morph_subcommand(tmp_path, capsys):
    rng = np.random.default_rng(31)
    w = h = 16
    points_a = [(3.0, 3.0), (12.0, 4.0), (11.0, 12.0), (4.0, 11.0)]
    points_b = [(4.0, 2.5), (13.0, 3.5), (12.0, 13.0), (3.0, 12.0)]
    pix_a = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    pix_b = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    save_image(tmp_path / "a.png", pix_a)
    save_image(tmp_path / "b.png", pix_b)
    save_landmarks(tmp_path / "a.json", Landmarks(points_a, w, h), image_id="a")
    save_landmarks(tmp_path / "b.json", Landmarks(points_b, w, h), image_id="b")

    out = tmp_path / "m.png"
    assert main(
        [
            "morph",
            str(tmp_path / "a.png"),
            str(tmp_path / "a.json"),
            str(tmp_path / "b.png"),
            str(tmp_path / "b.json"),
            "--alpha",
            "0.3",
            "--out",
            str(out),
        ]
    ) == 0
    assert "wrote" in capsys.readouterr().out
    want = morph_raster(
        RasterFace(pix_a, Landmarks(points_a, w, h)),
        RasterFace(pix_b, Landmarks(points_b, w, h)),
        0.3,
    )
    np.testing.assert_array_equal(load_image(out), want.pixels)
    lm = load_landmarks(str(out) + ".landmarks.json")
    np.testing.assert_allclose(lm.points, want.landmarks.points)


def test_metrics_subcommand_matches_library(tmp_path, capsys):
    mated = [0.1, 0.3, 0.5]
    nonmated = [0.2, 0.4, 0.6]
    scores = tmp_path / "scores.csv"
    lines = ["label,score"]
    lines += [f"mated,{v}" for v in mated]
    lines += [f"nonmated,{v}" for v in nonmated]
    scores.write_text("\n".join(lines) + "\n", encoding="utf-8")

    out = tmp_path / "metrics.csv"
    assert main(
        ["metrics", str(scores), "--target-fmr", "0.0,0.5", "--out", str(out)]
    ) == 0
    capsys.readouterr()
    rows = out.read_text(encoding="utf-8").splitlines()
    assert rows[0] == "metric,target_fmr_pct,threshold,fmr_pct,fnmr_pct"
    eer = compute_eer(ScoreSets(mated, nonmated))
    assert rows[1].split(",")[2] == f"{eer.threshold:.6f}"
    assert rows[2].split(",")[2] == f"{threshold_at_fmr(nonmated, 0.0):.6f}"
    assert rows[3].split(",")[2] == f"{threshold_at_fmr(nonmated, 0.5):.6f}"


def test_metrics_stdout_when_no_out(tmp_path, capsys):
    scores = tmp_path / "scores.csv"
    scores.write_text("label,score\nmated,0.1\nnonmated,0.9\n", encoding="utf-8")
    assert main(["metrics", str(scores), "--target-fmr", "0.5"]) == 0
    assert capsys.readouterr().out.startswith("metric,")


def test_errors_exit_2_with_message(tmp_path, capsys):
    scores = tmp_path / "bad.csv"
    scores.write_text("wrong,header\n", encoding="utf-8")
    assert main(["metrics", str(scores)]) == 2
    assert capsys.readouterr().err.startswith("error:")

    missing = tmp_path / "nope.png"
    assert main(
        [
            "morph",
            str(missing),
            str(missing),
            str(missing),
            str(missing),
            "--out",
            str(tmp_path / "x.png"),
        ]
    ) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_config_value_exits_2(tmp_path, capsys):
    cfg = write_config(tmp_path, performance_split=1)  # needs an even split
    assert main(["run", "--config", cfg, "--out", str(tmp_path / "r")]) == 2
    assert "error:" in capsys.readouterr().err
