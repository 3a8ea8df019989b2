"""Black-box score-feedback attack on a verification system.

The adversary only sees the dissimilarity score of each submission. It
hill-climbs: attempt 0 submits the starting face unmodified; every later
attempt perturbs the best face so far with zero-mean Gaussian noise and
keeps the candidate iff its observed score is strictly lower. All
budgeted attempts are executed even after an acceptance, and decisions
never influence the search, so score sequences are identical across runs
that differ only in threshold.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AttackAbortedError, DimensionMismatchError
from .morph import ParametricFace, RasterFace
from .protocol import with_attempt


@dataclass(frozen=True)
class AttackConfig:
    """Attempt budget, perturbation scale (probe-representation units), seed."""

    budget: int = 30
    sigma: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if not self.sigma >= 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")


@dataclass(frozen=True, eq=False)
class AttackTrajectory:
    """All outcomes of one attack run plus the running best (lowest) score."""

    outcomes: tuple
    best_scores: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        b = np.asarray(self.best_scores, dtype=np.float64)
        b.setflags(write=False)
        object.__setattr__(self, "best_scores", b)


def perturb_face(face, sigma, rng):
    """Gaussian-perturb a face in its native representation.

    Parametric faces get i.i.d. noise on every coefficient; raster faces get
    per-pixel noise, clamped back to [0, 255] and re-quantized. The noise
    draw happens even for sigma = 0 so generator consumption is uniform.
    """
    if isinstance(face, ParametricFace):
        noise = rng.standard_normal(face.params.shape[0])
        return ParametricFace(face.params + sigma * noise)
    if isinstance(face, RasterFace):
        noise = rng.standard_normal(face.pixels.shape)
        shifted = face.pixels.astype(np.float64) + sigma * noise
        quantized = np.minimum(np.maximum(np.floor(shifted + 0.5), 0.0), 255.0)
        return RasterFace(quantized.astype(np.uint8), face.landmarks)
    raise TypeError(f"cannot perturb a {type(face).__name__}")


def run_attack(attacker_start, system, config: AttackConfig, starts=None) -> AttackTrajectory:
    """Run one trajectory against ``system`` (a probe -> outcome callable).

    With ``starts`` given, attempt t perturbs ``starts[t]`` instead of the
    running best face (attempt 0 still submits ``attacker_start`` as-is).
    A system error aborts with AttackAbortedError carrying the outcomes
    observed so far.
    """
    if starts is not None and len(starts) < config.budget:
        raise DimensionMismatchError(
            f"need at least {config.budget} start faces, got {len(starts)}"
        )
    rng = np.random.default_rng(config.seed)
    outcomes = []
    best_scores = []
    best_face = attacker_start
    best_score = np.inf
    for attempt in range(config.budget):
        if attempt == 0:
            candidate = attacker_start
        else:
            base = best_face if starts is None else starts[attempt]
            candidate = perturb_face(base, config.sigma, rng)
        try:
            outcome = system(candidate)
        except Exception as exc:
            raise AttackAbortedError(
                f"system failed at attempt {attempt}", partial=outcomes
            ) from exc
        outcome = with_attempt(outcome, attempt)
        outcomes.append(outcome)
        if outcome.score < best_score:
            best_score = outcome.score
            best_face = candidate
        best_scores.append(best_score)
    return AttackTrajectory(tuple(outcomes), np.array(best_scores))


@dataclass(frozen=True, eq=False)
class AttackSummary:
    """Per-iteration aggregates over a batch of equal-budget trajectories."""

    mean_scores: np.ndarray
    cumulative_chance: np.ndarray


def trajectory_scores(trajectories) -> np.ndarray:
    """Stack observed scores into an (n_trajectories, budget) matrix."""
    trajectories = list(trajectories)
    if not trajectories:
        raise ValueError("need at least one trajectory")
    budgets = {len(t.outcomes) for t in trajectories}
    if len(budgets) != 1:
        raise DimensionMismatchError(f"trajectories mix budgets {sorted(budgets)}")
    return np.array([[o.score for o in t.outcomes] for t in trajectories])


def summarize_attacks(trajectories, threshold=None) -> AttackSummary:
    """Mean observed score and cumulative success fraction per iteration.

    With ``threshold`` given, success is re-derived as score < threshold
    (valid because trajectories are threshold-independent); otherwise the
    recorded decisions are used.
    """
    trajectories = list(trajectories)
    scores = trajectory_scores(trajectories)
    if threshold is None:
        accepted = np.array(
            [[o.accepted for o in t.outcomes] for t in trajectories], dtype=bool
        )
    else:
        accepted = scores < float(threshold)
    succeeded_by = np.maximum.accumulate(accepted, axis=1)
    return AttackSummary(
        mean_scores=scores.mean(axis=0),
        cumulative_chance=succeeded_by.mean(axis=0),
    )
