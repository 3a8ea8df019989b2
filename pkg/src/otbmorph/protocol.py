"""Enrollment and verification, unprotected and key-morphed.

The protected path draws a fresh key face for every comparison and morphs
*both* sides - the probe and the stored raw reference - with that same
key before feature extraction, so the extractor only ever sees disposable
composites. The accept rule is strict everywhere: accept iff
score < threshold; a tie rejects.
"""

from dataclasses import dataclass, replace

import numpy as np

from .embeddings import euclidean_distance
from .errors import EnrollmentError, VerificationError
from .keyselect import select_key
from .morph import ParametricFace, RasterFace, morph_parametric, morph_raster


@dataclass(frozen=True, eq=False)
class ReferenceRecord:
    """Enrolled identity: raw reference face kept for later re-morphing."""

    identity_id: str
    reference_face: object
    reference_embedding: np.ndarray
    group: str

    def __post_init__(self):
        e = np.asarray(self.reference_embedding, dtype=np.float64)
        e.setflags(write=False)
        object.__setattr__(self, "reference_embedding", e)


@dataclass(frozen=True)
class VerificationOutcome:
    """One scored comparison and its thresholded decision."""

    score: float
    accepted: bool
    threshold: float
    key_id: str | None = None
    attempt_index: int = 0

    def __post_init__(self):
        if self.attempt_index < 0:
            raise ValueError(f"attempt_index must be >= 0, got {self.attempt_index}")


def with_attempt(outcome: VerificationOutcome, attempt_index: int) -> VerificationOutcome:
    return replace(outcome, attempt_index=attempt_index)


def _morph(face, key_face, alpha):
    if isinstance(face, ParametricFace) and isinstance(key_face, ParametricFace):
        return morph_parametric(face, key_face, alpha)
    if isinstance(face, RasterFace) and isinstance(key_face, RasterFace):
        return morph_raster(face, key_face, alpha)
    raise TypeError(
        f"cannot morph {type(face).__name__} with {type(key_face).__name__}"
    )


def enroll(identity_id, face, group, extractor) -> ReferenceRecord:
    """Extract and store a reference embedding, keeping the raw face."""
    try:
        embedding = extractor(face)
    except Exception as exc:
        raise EnrollmentError(f"extractor failed enrolling {identity_id!r}") from exc
    return ReferenceRecord(identity_id, face, embedding, group)


def verify_unprotected(
    probe, record: ReferenceRecord, threshold, extractor, attempt_index=0
) -> VerificationOutcome:
    """Compare a probe directly against the enrolled embedding."""
    try:
        probe_embedding = extractor(probe)
    except Exception as exc:
        raise VerificationError(
            f"extractor failed on probe against {record.identity_id!r}"
        ) from exc
    score = euclidean_distance(probe_embedding, record.reference_embedding)
    return VerificationOutcome(
        score=score,
        accepted=score < threshold,
        threshold=float(threshold),
        key_id=None,
        attempt_index=attempt_index,
    )


def protected_score(
    probe,
    record: ReferenceRecord,
    strategy,
    pool,
    alpha,
    rng,
    extractor,
    key_anchor="reference",
):
    """Score one key-morphed comparison; returns (score, key_id).

    ``key_anchor`` picks what the distance strategies measure against:
    the enrolled reference embedding (default) or the probe's.
    """
    if key_anchor == "reference":
        anchor = record.reference_embedding
    elif key_anchor == "probe":
        anchor = extractor(probe)
    else:
        raise ValueError(f"key_anchor must be 'reference' or 'probe', got {key_anchor!r}")
    key = select_key(strategy, anchor, record.group, pool, rng)
    morphed_probe = _morph(probe, key.face, alpha)
    morphed_reference = _morph(record.reference_face, key.face, alpha)
    score = euclidean_distance(extractor(morphed_probe), extractor(morphed_reference))
    return score, key.id


def verify_otb(
    probe,
    record: ReferenceRecord,
    strategy,
    pool,
    threshold,
    alpha,
    rng,
    extractor,
    attempt_index=0,
    key_anchor="reference",
) -> VerificationOutcome:
    """One-time-key verification: both legs morphed with the same fresh key."""
    score, key_id = protected_score(
        probe, record, strategy, pool, alpha, rng, extractor, key_anchor=key_anchor
    )
    return VerificationOutcome(
        score=score,
        accepted=score < threshold,
        threshold=float(threshold),
        key_id=key_id,
        attempt_index=attempt_index,
    )
