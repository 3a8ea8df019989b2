"""Face morphing: landmark-driven raster warps and parametric blends."""

from .geometry import affine_from_triangles, frame_points, triangulate
from .parametric import ParametricFace, morph_parametric
from .raster import Landmarks, RasterFace, morph_raster

__all__ = [
    "Landmarks",
    "ParametricFace",
    "RasterFace",
    "affine_from_triangles",
    "frame_points",
    "morph_parametric",
    "morph_raster",
    "triangulate",
]
