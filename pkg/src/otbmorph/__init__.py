"""Signal-level cancelable face verification via one-time morph keys.

Every verification attempt morphs both the probe and the stored reference
with a freshly selected key face before feature extraction, so leaked
scores describe disposable composites rather than the enrolled face. The
package ships the verification protocol, four key-selection strategies, a
black-box score-feedback attacker, biometric metrics, and a deterministic
experiment harness.
"""

from .attack import AttackConfig, AttackSummary, AttackTrajectory, run_attack, summarize_attacks
from .embeddings import euclidean_distance, l2_normalize
from .keyselect import (
    DISTANCE_KEY,
    RANDOM_KEY,
    SFDISTANCE_KEY,
    SFRANDOM_KEY,
    STRATEGIES,
    KeyPool,
    KeyPoolEntry,
    select_key,
)
from .metrics import (
    OperatingPoint,
    ScoreSets,
    asr,
    compute_eer,
    det_points,
    fmr_at,
    fnmr_at,
    threshold_at_fmr,
)
from .morph import (
    Landmarks,
    ParametricFace,
    RasterFace,
    affine_from_triangles,
    frame_points,
    morph_parametric,
    morph_raster,
    triangulate,
)
from .protocol import (
    ReferenceRecord,
    VerificationOutcome,
    enroll,
    verify_otb,
    verify_unprotected,
)

__version__ = "0.1.0"

__all__ = [
    "AttackConfig",
    "AttackSummary",
    "AttackTrajectory",
    "DISTANCE_KEY",
    "KeyPool",
    "KeyPoolEntry",
    "Landmarks",
    "OperatingPoint",
    "ParametricFace",
    "RANDOM_KEY",
    "RasterFace",
    "ReferenceRecord",
    "SFDISTANCE_KEY",
    "SFRANDOM_KEY",
    "STRATEGIES",
    "ScoreSets",
    "VerificationOutcome",
    "affine_from_triangles",
    "asr",
    "compute_eer",
    "det_points",
    "enroll",
    "euclidean_distance",
    "fmr_at",
    "fnmr_at",
    "frame_points",
    "l2_normalize",
    "morph_parametric",
    "morph_raster",
    "run_attack",
    "select_key",
    "summarize_attacks",
    "threshold_at_fmr",
    "triangulate",
    "verify_otb",
    "verify_unprotected",
]
