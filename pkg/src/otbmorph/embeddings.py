"""Embedding arithmetic and the dissimilarity comparator.

Embeddings are 1-D float64 vectors on the unit sphere; dissimilarity is
plain Euclidean distance, which for unit vectors lives in [0, 2].
"""

import numpy as np

from .errors import DegenerateVectorError, DimensionMismatchError

# Norms below this are treated as zero; unit norms are checked against this.
ZERO_NORM = 1e-12
UNIT_NORM_TOL = 1e-9


def l2_normalize(values) -> np.ndarray:
    """Scale a 1-D vector to unit Euclidean norm.

    Raises DegenerateVectorError when the norm is numerically zero and
    DimensionMismatchError for non-1-D input.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D vector, got shape {v.shape}")
    norm = float(np.sqrt(np.sum(v * v)))
    if not np.isfinite(norm) or norm < ZERO_NORM:
        raise DegenerateVectorError(f"cannot normalize vector with norm {norm!r}")
    return v / norm


def euclidean_distance(a, b) -> float:
    """Euclidean distance between two vectors of identical dimension."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DimensionMismatchError(
            f"incompatible embedding shapes {a.shape} and {b.shape}"
        )
    d = a - b
    return float(np.sqrt(np.sum(d * d)))


def ensure_embedding(values, dim=None) -> np.ndarray:
    """Validate that ``values`` is a unit-norm embedding, optionally of ``dim``."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-D embedding, got shape {v.shape}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatchError(
            f"embedding has dimension {v.shape[0]}, expected {dim}"
        )
    norm = float(np.sqrt(np.sum(v * v)))
    if abs(norm - 1.0) > UNIT_NORM_TOL:
        raise DegenerateVectorError(f"embedding norm {norm!r} is not 1 within tolerance")
    return v
