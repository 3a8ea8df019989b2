"""Report bundle emission: CSV tables, attack curves, DET points, manifest.

All files are written with '\n' newlines and deterministic float text
(shortest round-trip repr for raw values, fixed decimals for the summary
table), so identical runs produce byte-identical bundles.
"""

import hashlib
import json
import os

import numpy as np

from .synthetic import SyntheticExtractor

EER_LABEL = "eer"
UNPROTECTED = "unprotected"


def threshold_label(target_fmr: float) -> str:
    return f"fmr_{target_fmr * 100.0:.4f}pct"


def _fr(value) -> str:
    return repr(float(value))


def _open_out(path):
    return open(path, "w", encoding="utf-8", newline="\n")


def _write_table(path, config, results):
    with _open_out(path) as fh:
        fh.write("system,strategy,eer_pct,target_fmr_pct,fnmr_pct,threshold,asr_pct\n")
        for result in results:
            if result.name == UNPROTECTED:
                system, strategy = "unprotected", "-"
            else:
                system, strategy = "otb_morph", result.name
            for target in config.target_fmrs:
                label = threshold_label(target)
                fh.write(
                    f"{system},{strategy},"
                    f"{result.eer.eer * 100.0:.2f},"
                    f"{target * 100.0:.4f},"
                    f"{result.fnmr[label] * 100.0:.2f},"
                    f"{result.thresholds[label]:.4f},"
                    f"{result.asr[label] * 100.0:.2f}\n"
                )


def _write_mean_scores(path, results):
    with _open_out(path) as fh:
        fh.write("system,iteration,mean_score\n")
        for result in results:
            for i, value in enumerate(result.mean_scores):
                fh.write(f"{result.name},{i},{_fr(value)}\n")


def _write_cumulative(path, results, label):
    with _open_out(path) as fh:
        fh.write("system,iteration,cumulative_chance\n")
        for result in results:
            for i, value in enumerate(result.cumulative[label]):
                fh.write(f"{result.name},{i},{_fr(value)}\n")


def _write_det(path, results):
    with _open_out(path) as fh:
        fh.write("system,fmr,fnmr\n")
        for result in results:
            for fmr, fnmr in result.det:
                fh.write(f"{result.name},{_fr(fmr)},{_fr(fnmr)}\n")


def _write_scores(path, result):
    with _open_out(path) as fh:
        fh.write("label,score\n")
        for score in result.mated:
            fh.write(f"mated,{_fr(score)}\n")
        for score in result.nonmated:
            fh.write(f"nonmated,{_fr(score)}\n")


def _extractor_summary(extractor) -> dict:
    if isinstance(extractor, SyntheticExtractor):
        digest = hashlib.sha256(
            np.ascontiguousarray(extractor.weights).tobytes()
            + np.ascontiguousarray(extractor.bias).tobytes()
        ).hexdigest()
        return {
            "kind": "synthetic",
            "dim": extractor.dim,
            "param_dim": extractor.param_dim,
            "noise_scale": extractor.noise_scale,
            "noise_seed": extractor.noise_seed,
            "weights_sha256": digest,
        }
    return {"kind": type(extractor).__name__}


def build_manifest(config, results, counts, extractor, decision_label) -> dict:
    return {
        "config": config.to_dict(),
        "counts": counts,
        "systems": [r.name for r in results],
        "thresholds": {r.name: dict(sorted(r.thresholds.items())) for r in results},
        "eer": {r.name: {"value": r.eer.eer, "threshold": r.eer.threshold} for r in results},
        "attack_decision_threshold_label": decision_label,
        "extractor": _extractor_summary(extractor),
        "assumptions": {
            "accept_rule": "score < threshold (tie rejects)",
            "protected_comparisons_share_one_key_per_attempt": True,
            "nonmated_protocol": "first performance sample of each identity "
            "against the first performance sample of every other identity "
            "(ordered pairs)",
            "attack_victim_reference": "first attack-split reference sample",
            "attack_start": "first attack-split probe of the next identity "
            "(round robin)",
        },
    }


def write_reports(out_dir, config, results, counts, extractor, decision_label) -> tuple:
    """Write the full bundle; removes everything it created on failure."""
    os.makedirs(out_dir, exist_ok=True)
    labels = [threshold_label(t) for t in config.target_fmrs] + [EER_LABEL]
    manifest = build_manifest(config, results, counts, extractor, decision_label)
    paths = {}
    written = []
    try:
        def target(name):
            p = os.path.join(out_dir, name)
            written.append(p)
            return p

        paths["table"] = target("table.csv")
        _write_table(paths["table"], config, results)
        paths["mean_scores"] = target("mean_scores.csv")
        _write_mean_scores(paths["mean_scores"], results)
        for label in labels:
            key = f"cumulative_{label}"
            paths[key] = target(f"cumulative_{label}.csv")
            _write_cumulative(paths[key], results, label)
        paths["det"] = target("det.csv")
        _write_det(paths["det"], results)
        for result in results:
            key = f"scores_{result.name}"
            paths[key] = target(f"scores_{result.name}.csv")
            _write_scores(paths[key], result)
        paths["manifest"] = target("manifest.json")
        with _open_out(paths["manifest"]) as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write("\n")
    except BaseException:
        for p in written:
            if os.path.exists(p):
                os.remove(p)
        raise
    return paths, manifest
