"""Command line interface.

Subcommands:

* ``gen``     - write a synthetic population to disk in the ingestion formats
* ``run``     - run the full experiment and emit the report bundle
* ``morph``   - morph two landmark-annotated PNG images
* ``metrics`` - recompute EER and fixed-FMR operating points from a score CSV
"""

import argparse
import csv
import json
import os
import sys

from ..errors import OtbMorphError
from ..keyselect import STRATEGIES
from ..metrics import ScoreSets, compute_eer, fnmr_at, threshold_at_fmr
from ..morph import RasterFace, morph_raster
from .assets import (
    load_image,
    load_landmarks,
    save_image,
    save_landmarks,
    write_population_assets,
)
from .config import ExperimentConfig
from .experiment import run_experiment
from .synthetic import generate_population


def _load_config(args) -> ExperimentConfig:
    config = (
        ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    )
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["master_seed"] = args.seed
    if getattr(args, "out", None) is not None:
        overrides["output_dir"] = args.out
    if getattr(args, "strategy", None):
        overrides["strategies"] = tuple(
            s.strip() for s in args.strategy.split(",") if s.strip()
        )
    if getattr(args, "mode", None) is not None:
        overrides["mode"] = args.mode
    if getattr(args, "workers", None) is not None:
        overrides["workers"] = args.workers
    return config.replace(**overrides) if overrides else config


def _cmd_gen(args) -> int:
    config = _load_config(args).replace(mode="synthetic")
    config.validate()
    population, pool = generate_population(config, config.master_seed)
    out_dir = args.out or config.output_dir
    paths = write_population_assets(population, pool, out_dir)
    ingested = config.replace(
        mode="ingested",
        inputs={key: os.path.abspath(p) for key, p in paths.items()},
        output_dir=os.path.join(out_dir, "report"),
    )
    config_path = os.path.join(out_dir, "config.ingested.json")
    with open(config_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(ingested.to_dict(), fh, sort_keys=True, indent=2)
        fh.write("\n")
    for name in sorted(paths):
        print(f"{name}: {paths[name]}")
    print(f"config: {config_path}")
    return 0


def _cmd_run(args) -> int:
    config = _load_config(args)
    result = run_experiment(config)
    with open(result.paths["table"], "r", encoding="utf-8") as fh:
        sys.stdout.write(fh.read())
    print(f"report bundle: {os.path.abspath(config.output_dir)}")
    return 0


def _cmd_morph(args) -> int:
    face_a = RasterFace(load_image(args.image_a), load_landmarks(args.landmarks_a))
    face_b = RasterFace(load_image(args.image_b), load_landmarks(args.landmarks_b))
    out = morph_raster(face_a, face_b, args.alpha)
    save_image(args.out, out.pixels)
    save_landmarks(args.out + ".landmarks.json", out.landmarks, os.path.basename(args.out))
    print(f"wrote {args.out} (alpha={args.alpha})")
    return 0


def _read_score_csv(path):
    mated, nonmated = [], []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["label", "score"]:
            raise OtbMorphError(f"{path}: expected a 'label,score' header")
        for row in reader:
            if not row:
                continue
            label, value = row[0].strip(), float(row[1])
            if label == "mated":
                mated.append(value)
            elif label == "nonmated":
                nonmated.append(value)
            else:
                raise OtbMorphError(f"{path}: unknown label {label!r}")
    return mated, nonmated


def _cmd_metrics(args) -> int:
    mated, nonmated = _read_score_csv(args.scores)
    sets = ScoreSets(mated, nonmated)
    targets = [float(t) for t in args.target_fmr.split(",") if t.strip()]
    eer = compute_eer(sets)
    lines = ["metric,target_fmr_pct,threshold,fmr_pct,fnmr_pct"]
    lines.append(
        f"eer,-,{eer.threshold:.6f},{eer.fmr * 100.0:.4f},{eer.fnmr * 100.0:.4f}"
    )
    for target in targets:
        thr = threshold_at_fmr(sets.nonmated, target)
        lines.append(
            f"fmr_target,{target * 100.0:.4f},{thr:.6f},"
            f"{target * 100.0:.4f},{fnmr_at(sets.mated, thr) * 100.0:.4f}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otbmorph",
        description="One-time morph-key face verification: simulation, attack, metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a synthetic population to disk")
    gen.add_argument("--config", help="experiment config JSON")
    gen.add_argument("--seed", type=int, help="master seed override")
    gen.add_argument("--out", help="output directory", required=True)
    gen.set_defaults(func=_cmd_gen)

    run = sub.add_parser("run", help="run the experiment and emit reports")
    run.add_argument("--config", help="experiment config JSON")
    run.add_argument("--seed", type=int, help="master seed override")
    run.add_argument("--out", help="report output directory")
    run.add_argument(
        "--strategy",
        help=f"comma-separated key strategies (default: all of {', '.join(STRATEGIES)})",
    )
    run.add_argument("--mode", choices=("synthetic", "ingested"))
    run.add_argument("--workers", type=int, help="worker threads (default 1)")
    run.set_defaults(func=_cmd_run)

    morph = sub.add_parser("morph", help="morph two landmarked PNG images")
    morph.add_argument("image_a")
    morph.add_argument("landmarks_a")
    morph.add_argument("image_b")
    morph.add_argument("landmarks_b")
    morph.add_argument("--alpha", type=float, default=0.5)
    morph.add_argument("--out", required=True, help="output PNG path")
    morph.set_defaults(func=_cmd_morph)

    metrics = sub.add_parser("metrics", help="recompute rates from a label,score CSV")
    metrics.add_argument("scores", help="CSV with mated/nonmated labelled scores")
    metrics.add_argument(
        "--target-fmr",
        default="0.00001,0.0001,0.001,0.01",
        help="comma-separated target FMRs as fractions",
    )
    metrics.add_argument("--out", help="write the table here instead of stdout")
    metrics.set_defaults(func=_cmd_metrics)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OtbMorphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
