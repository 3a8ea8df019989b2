"""Raster faces and the landmark-driven morph.

The morph blends two equally-framed images: landmarks are interpolated,
the blended landmark set (plus frame anchors) is triangulated, and every
output pixel is inverse-mapped through the affine of its containing
triangle into each source image, bilinearly sampled with edge clamping,
then channel-blended and rounded to 8 bits.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatchError
from . import kernels
from .geometry import affine_from_triangles, frame_points, orientation, triangulate


@dataclass(frozen=True, eq=False)
class Landmarks:
    """Named points on a width x height pixel frame, in (x, y) pixel units."""

    points: np.ndarray
    width: int
    height: int

    def __post_init__(self):
        p = np.asarray(self.points, dtype=np.float64)
        if p.ndim != 2 or p.shape[1] != 2:
            raise DimensionMismatchError(f"points must be (N, 2), got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("landmark coordinates must be finite")
        if (
            p.size
            and not (
                (p[:, 0] >= 0).all()
                and (p[:, 0] <= self.width).all()
                and (p[:, 1] >= 0).all()
                and (p[:, 1] <= self.height).all()
            )
        ):
            raise ValueError(
                f"landmarks must lie within [0, {self.width}] x [0, {self.height}]"
            )
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class RasterFace:
    """An 8-bit RGB image with its landmark set."""

    pixels: np.ndarray
    landmarks: Landmarks
    asset_id: str | None = field(default=None, compare=False)

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
            raise ValueError(
                f"pixels must be (H, W, 3) uint8, got {px.shape} {px.dtype}"
            )
        if (px.shape[0], px.shape[1]) != (self.landmarks.height, self.landmarks.width):
            raise DimensionMismatchError(
                f"pixel frame {px.shape[1]}x{px.shape[0]} does not match landmark "
                f"frame {self.landmarks.width}x{self.landmarks.height}"
            )
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.landmarks.width

    @property
    def height(self) -> int:
        return self.landmarks.height


def morph_raster(a: RasterFace, b: RasterFace, alpha: float) -> RasterFace:
    """Morph two raster faces; returns the blended face with blended landmarks."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatchError(
            f"frames differ: {a.width}x{a.height} vs {b.width}x{b.height}"
        )
    if len(a.landmarks) != len(b.landmarks):
        raise DimensionMismatchError(
            f"landmark counts differ: {len(a.landmarks)} vs {len(b.landmarks)}"
        )
    width, height = a.width, a.height

    blended = (1.0 - alpha) * a.landmarks.points + alpha * b.landmarks.points
    anchors = frame_points(width, height)
    pts_l = np.vstack([blended, anchors])
    pts_a = np.vstack([a.landmarks.points, anchors])
    pts_b = np.vstack([b.landmarks.points, anchors])

    tris = triangulate(pts_l)
    n_tri = len(tris)
    tri_l = np.empty((n_tri, 3, 2), dtype=np.float64)
    inv_a = np.empty((n_tri, 2, 3), dtype=np.float64)
    inv_b = np.empty((n_tri, 2, 3), dtype=np.float64)
    for row, tri in enumerate(tris):
        # Reorder ccw in the blended frame; the same index order is applied
        # to both sources so vertex correspondence survives the swap.
        idx = list(tri)
        if orientation(pts_l[idx[0]], pts_l[idx[1]], pts_l[idx[2]]) < 0:
            idx = [idx[0], idx[2], idx[1]]
        tri_l[row] = pts_l[idx]
        inv_a[row] = affine_from_triangles(pts_l[idx], pts_a[idx])
        inv_b[row] = affine_from_triangles(pts_l[idx], pts_b[idx])

    tol = kernels.containment_tol(width, height)
    index_map = kernels.triangle_index_map(tri_l, height, width, tol)
    out = kernels.warp_blend(a.pixels, b.pixels, inv_a, inv_b, index_map, float(alpha))
    return RasterFace(out, Landmarks(blended, width, height))
