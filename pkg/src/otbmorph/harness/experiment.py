"""Experiment orchestration: performance, thresholds, attacks, reports.

Four sequential phases per system (the unprotected baseline plus one
system per key strategy):

1. performance scoring - mated pairs from the performance split, paired
   sequentially, and non-mated first-sample cross comparisons;
2. threshold derivation - EER plus one threshold per target FMR;
3. attack - one score-feedback trajectory per victim identity, with
   decisions recorded at the most practical derived threshold;
4. emission - CSV/JSON bundle.

Every random stream is derived from (master_seed, task label), so results
are independent of scheduling and worker count. Attack score sequences do
not depend on the decision threshold, which is what allows success rates
at the other derived thresholds to be recomputed from recorded scores.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..attack import AttackConfig, run_attack, summarize_attacks, trajectory_scores
from ..embeddings import euclidean_distance
from ..errors import ConfigError, EmptyCohortError
from ..keyselect import SFDISTANCE_KEY, SFRANDOM_KEY, opposite_group
from ..metrics import (
    ScoreSets,
    accept_fraction,
    compute_eer,
    det_points,
    fnmr_at,
    threshold_at_fmr,
)
from ..protocol import enroll, protected_score, verify_otb, verify_unprotected
from .assets import load_assets
from .config import ExperimentConfig
from .reports import (
    EER_LABEL,
    UNPROTECTED,
    build_manifest,
    threshold_label,
    write_reports,
)
from .seeding import derive_seed
from .synthetic import generate_population


@dataclass(eq=False)
class SystemResult:
    """Everything measured for one system (baseline or one strategy)."""

    name: str
    mated: np.ndarray
    nonmated: np.ndarray
    eer: object
    thresholds: dict
    fnmr: dict
    asr: dict
    det: np.ndarray
    trajectories: tuple
    mean_scores: np.ndarray
    cumulative: dict


@dataclass(eq=False)
class RunResult:
    config: ExperimentConfig
    systems: dict
    counts: dict
    paths: dict
    manifest: dict


def _split_indices(config, identity):
    """Disjoint (performance, attack-reference, attack-probe) sample indices."""
    n = len(identity.samples)
    needed = config.performance_split + config.attack_split
    if n < needed:
        raise ConfigError(
            f"identity {identity.identity_id!r} has {n} samples, splits need {needed}"
        )
    rng = np.random.default_rng(
        derive_seed(config.master_seed, f"split/{identity.identity_id}")
    )
    perm = rng.permutation(n)
    p = config.performance_split
    r = config.attack_reference_count
    q = config.attack_probe_count
    return perm[:p], perm[p : p + r], perm[p + r : p + r + q]


def _precheck_cohorts(config, population, pool):
    sf = {SFDISTANCE_KEY, SFRANDOM_KEY} & set(config.strategies)
    if not sf:
        return
    present = {identity.group for identity in population.identities}
    for group in sorted(present):
        if len(pool.indices_for_group(opposite_group(group))) == 0:
            raise EmptyCohortError(
                f"strategies {sorted(sf)} need pool entries in group "
                f"{opposite_group(group)!r} (opposite of enrolled group {group!r}), "
                "but the pool has none"
            )


def _run_ordered(tasks, workers):
    """Run zero-arg callables, returning results in task order."""
    if workers <= 1:
        return [task() for task in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda task: task(), tasks))


def _pair_score(system, probe, record, pool, config, rng, extractor):
    if system == UNPROTECTED:
        return euclidean_distance(extractor(probe), record.reference_embedding)
    score, _ = protected_score(
        probe,
        record,
        system,
        pool,
        config.alpha,
        rng,
        extractor,
        key_anchor=config.key_anchor,
    )
    return score


def _mated_task(system, identity, perf_idx, pool, config, extractor):
    def run():
        rng = np.random.default_rng(
            derive_seed(
                config.master_seed, f"perf/mated/{system}/{identity.identity_id}"
            )
        )
        scores = []
        for k in range(len(perf_idx) // 2):
            record = enroll(
                identity.identity_id,
                identity.samples[perf_idx[2 * k]],
                identity.group,
                extractor,
            )
            probe = identity.samples[perf_idx[2 * k + 1]]
            scores.append(_pair_score(system, probe, record, pool, config, rng, extractor))
        return scores

    return run


def _nonmated_task(system, identity, others, splits, pool, config, extractor):
    def run():
        rng = np.random.default_rng(
            derive_seed(
                config.master_seed, f"perf/nonmated/{system}/{identity.identity_id}"
            )
        )
        first = splits[identity.identity_id][0][0]
        record = enroll(
            identity.identity_id, identity.samples[first], identity.group, extractor
        )
        scores = []
        for other in others:
            probe = other.samples[splits[other.identity_id][0][0]]
            scores.append(_pair_score(system, probe, record, pool, config, rng, extractor))
        return scores

    return run


def _attack_task(system, victim, attacker, splits, pool, config, extractor, threshold):
    def run():
        ref_idx = splits[victim.identity_id][1][0]
        record = enroll(
            victim.identity_id, victim.samples[ref_idx], victim.group, extractor
        )
        probe_idx = splits[attacker.identity_id][2]
        starts = [attacker.samples[i] for i in probe_idx]
        key_rng = np.random.default_rng(
            derive_seed(config.master_seed, f"attack/keys/{system}/{victim.identity_id}")
        )

        if system == UNPROTECTED:
            def target(face):
                return verify_unprotected(face, record, threshold, extractor)
        else:
            def target(face):
                return verify_otb(
                    face,
                    record,
                    system,
                    pool,
                    threshold,
                    config.alpha,
                    key_rng,
                    extractor,
                    key_anchor=config.key_anchor,
                )

        attack_config = AttackConfig(
            budget=config.attack_budget,
            sigma=config.attack_sigma,
            seed=derive_seed(
                config.master_seed, f"attack/perturb/{system}/{victim.identity_id}"
            ),
        )
        return run_attack(
            starts[0],
            target,
            attack_config,
            starts=starts if config.attack_start_mode == "fresh" else None,
        )

    return run


def run_experiment(config: ExperimentConfig, emit: bool = True) -> RunResult:
    """Run all phases; optionally write the report bundle to config.output_dir."""
    config.validate()
    if config.mode == "synthetic":
        population, pool = generate_population(config, config.master_seed)
    else:
        population, pool = load_assets(config)
    if len(population) != config.identity_count:
        raise ConfigError(
            f"population has {len(population)} identities, config says "
            f"{config.identity_count}"
        )
    _precheck_cohorts(config, population, pool)

    identities = population.identities
    extractor = population.extractor
    splits = {i.identity_id: _split_indices(config, i) for i in identities}
    systems = [UNPROTECTED, *config.strategies]
    labels = [threshold_label(t) for t in config.target_fmrs]
    if len(set(labels)) != len(labels) or EER_LABEL in labels:
        raise ConfigError(f"target fmrs produce colliding labels: {labels}")
    decision_label = (
        threshold_label(1e-3) if 1e-3 in config.target_fmrs else labels[0]
    )

    results = []
    for system in systems:
        mated_chunks = _run_ordered(
            [
                _mated_task(system, identity, splits[identity.identity_id][0], pool, config, extractor)
                for identity in identities
            ],
            config.workers,
        )
        nonmated_chunks = _run_ordered(
            [
                _nonmated_task(
                    system,
                    identity,
                    [o for o in identities if o.identity_id != identity.identity_id],
                    splits,
                    pool,
                    config,
                    extractor,
                )
                for identity in identities
            ],
            config.workers,
        )
        mated = np.array([s for chunk in mated_chunks for s in chunk])
        nonmated = np.array([s for chunk in nonmated_chunks for s in chunk])
        sets = ScoreSets(mated, nonmated)

        eer = compute_eer(sets)
        thresholds = {
            label: threshold_at_fmr(nonmated, target)
            for label, target in zip(labels, config.target_fmrs)
        }
        thresholds[EER_LABEL] = eer.threshold
        fnmr = {label: fnmr_at(mated, thr) for label, thr in thresholds.items()}

        decision_threshold = thresholds[decision_label]
        trajectories = tuple(
            _run_ordered(
                [
                    _attack_task(
                        system,
                        identities[i],
                        identities[(i + 1) % len(identities)],
                        splits,
                        pool,
                        config,
                        extractor,
                        decision_threshold,
                    )
                    for i in range(len(identities))
                ],
                config.workers,
            )
        )
        scores = trajectory_scores(trajectories)
        asr = {
            label: accept_fraction(scores.reshape(-1), thr)
            for label, thr in thresholds.items()
        }
        cumulative = {
            label: summarize_attacks(trajectories, threshold=thr).cumulative_chance
            for label, thr in thresholds.items()
        }
        results.append(
            SystemResult(
                name=system,
                mated=mated,
                nonmated=nonmated,
                eer=eer,
                thresholds=thresholds,
                fnmr=fnmr,
                asr=asr,
                det=det_points(sets),
                trajectories=trajectories,
                mean_scores=summarize_attacks(trajectories).mean_scores,
                cumulative=cumulative,
            )
        )

    counts = {
        "identities": len(identities),
        "pool_size": len(pool),
        "mated_comparisons": int(results[0].mated.size),
        "nonmated_comparisons": int(results[0].nonmated.size),
        "attack_trajectories": len(results[0].trajectories),
        "attack_attempts": len(results[0].trajectories) * config.attack_budget,
    }
    paths = {}
    if emit:
        paths, manifest = write_reports(
            config.output_dir, config, results, counts, extractor, decision_label
        )
    else:
        manifest = build_manifest(config, results, counts, extractor, decision_label)
    return RunResult(
        config=config,
        systems={r.name: r for r in results},
        counts=counts,
        paths=paths,
        manifest=manifest,
    )
