"""Parametric faces: points in a real coefficient space, morphed linearly."""

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatchError


@dataclass(frozen=True, eq=False)
class ParametricFace:
    """A face described by a finite 1-D float64 coefficient vector."""

    params: np.ndarray
    asset_id: str | None = field(default=None, compare=False)

    def __post_init__(self):
        p = np.asarray(self.params, dtype=np.float64)
        if p.ndim != 1:
            raise DimensionMismatchError(f"params must be 1-D, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("params must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "params", p)

    @property
    def dim(self) -> int:
        return self.params.shape[0]


def morph_parametric(a: ParametricFace, b: ParametricFace, alpha: float) -> ParametricFace:
    """Convex combination (1 - alpha) * a + alpha * b of two parameter vectors."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if a.params.shape != b.params.shape:
        raise DimensionMismatchError(
            f"parameter dimensions differ: {a.params.shape[0]} vs {b.params.shape[0]}"
        )
    return ParametricFace((1.0 - alpha) * a.params + alpha * b.params)
