"""Verification-rate metrics under the strict accept rule score < threshold.

Rates are empirical step functions of the threshold, so every achievable
operating point occurs at an observed score. Candidate thresholds are the
distinct observed scores, the midpoints between adjacent distinct scores,
and one sentinel on each side (min - 1, max + 1) so the degenerate
operating points (fmr 0 / fmr 1) are reachable.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyScoreSetError


def _as_scores(values, name) -> np.ndarray:
    s = np.asarray(values, dtype=np.float64).reshape(-1)
    if s.size == 0:
        raise EmptyScoreSetError(f"{name} score set is empty")
    if not np.all(np.isfinite(s)):
        raise ValueError(f"{name} scores must be finite")
    return s


@dataclass(frozen=True, eq=False)
class ScoreSets:
    """Mated (genuine) and non-mated (impostor) comparison scores."""

    mated: np.ndarray
    nonmated: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mated", _as_scores(self.mated, "mated"))
        object.__setattr__(self, "nonmated", _as_scores(self.nonmated, "nonmated"))


@dataclass(frozen=True)
class OperatingPoint:
    """A threshold with the rates realized there."""

    threshold: float
    fmr: float
    fnmr: float

    @property
    def eer(self) -> float:
        return (self.fmr + self.fnmr) / 2.0


def fmr_at(nonmated, threshold) -> float:
    """Fraction of non-mated scores (falsely) accepted: |{s < t}| / n."""
    s = _as_scores(nonmated, "nonmated")
    return float(np.count_nonzero(s < threshold)) / s.size


def fnmr_at(mated, threshold) -> float:
    """Fraction of mated scores (falsely) rejected: |{s >= t}| / n."""
    s = _as_scores(mated, "mated")
    return float(np.count_nonzero(s >= threshold)) / s.size


def candidate_thresholds(*score_sets) -> np.ndarray:
    """Ascending candidate thresholds covering every operating region."""
    values = np.unique(np.concatenate([_as_scores(s, "candidate") for s in score_sets]))
    mids = (values[:-1] + values[1:]) / 2.0
    return np.unique(
        np.concatenate([values, mids, [values[0] - 1.0, values[-1] + 1.0]])
    )


def _rates(sets: ScoreSets, thresholds):
    mated = np.sort(sets.mated)
    nonmated = np.sort(sets.nonmated)
    fmr = np.searchsorted(nonmated, thresholds, side="left") / nonmated.size
    fnmr = (mated.size - np.searchsorted(mated, thresholds, side="left")) / mated.size
    return fmr, fnmr


def compute_eer(sets: ScoreSets) -> OperatingPoint:
    """Operating point minimizing |fmr - fnmr|; ties take the smaller threshold.

    The reported rate is the usual (fmr + fnmr) / 2 at that point, exposed
    as ``OperatingPoint.eer``.
    """
    cands = candidate_thresholds(sets.mated, sets.nonmated)
    fmr, fnmr = _rates(sets, cands)
    best = int(np.argmin(np.abs(fmr - fnmr)))
    return OperatingPoint(float(cands[best]), float(fmr[best]), float(fnmr[best]))


def threshold_at_fmr(nonmated, target_fmr) -> float:
    """Largest candidate threshold whose fmr does not exceed the target."""
    if not 0.0 <= target_fmr <= 1.0:
        raise ValueError(f"target_fmr must lie in [0, 1], got {target_fmr}")
    s = np.sort(_as_scores(nonmated, "nonmated"))
    cands = candidate_thresholds(s)
    fmr = np.searchsorted(s, cands, side="left") / s.size
    feasible = cands[fmr <= target_fmr]
    return float(feasible[-1])


def det_points(sets: ScoreSets) -> np.ndarray:
    """(fmr, fnmr) at every candidate threshold, sorted by fmr ascending."""
    cands = candidate_thresholds(sets.mated, sets.nonmated)
    fmr, fnmr = _rates(sets, cands)
    return np.column_stack([fmr, fnmr])


def asr(outcomes) -> float:
    """Attack success rate: accepted attempts over all attempts."""
    outcomes = list(outcomes)
    if not outcomes:
        raise EmptyScoreSetError("no outcomes to rate")
    return sum(1 for o in outcomes if o.accepted) / len(outcomes)


def accept_fraction(scores, threshold) -> float:
    """Fraction of scores the strict rule would accept at ``threshold``."""
    s = _as_scores(scores, "attack")
    return float(np.count_nonzero(s < threshold)) / s.size
