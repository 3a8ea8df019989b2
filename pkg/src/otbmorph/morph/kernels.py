"""Raster warp kernels: numba-jitted hot loops with a pure-numpy twin.

The active backend is chosen at import time: numba when it is importable
and the environment variable OTBMORPH_NUMBA is unset/"1", otherwise the
numpy path. Both paths evaluate the same arithmetic in the same order, so
their outputs are bit-identical; tests assert this and
benchmarks/bench_warp.py compares their speed.
"""

import math
import os

import numpy as np

from ..errors import DegenerateGeometryError

# Relative slack for the point-in-triangle test so pixels sitting exactly on
# shared edges are claimed by the first triangle instead of falling through.
CONTAINMENT_TOL = 1e-9


def containment_tol(width, height) -> float:
    return CONTAINMENT_TOL * float(max(width, height))


def _numba_requested() -> bool:
    flag = os.environ.get("OTBMORPH_NUMBA", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


def triangle_index_map_numpy(tri_pts, height, width, tol) -> np.ndarray:
    """Assign each pixel center the first triangle containing it.

    tri_pts is (T, 3, 2) float64 with ccw-oriented vertices. Returns an
    (height, width) int32 map. Raises if any pixel is uncovered.
    """
    h = int(height)
    w = int(width)
    xs = np.tile(np.arange(w, dtype=np.float64), h)
    ys = np.repeat(np.arange(h, dtype=np.float64), w)
    idx = np.full(h * w, -1, dtype=np.int32)
    found = np.zeros(h * w, dtype=bool)
    for t in range(tri_pts.shape[0]):
        ax, ay = tri_pts[t, 0, 0], tri_pts[t, 0, 1]
        bx, by = tri_pts[t, 1, 0], tri_pts[t, 1, 1]
        cx, cy = tri_pts[t, 2, 0], tri_pts[t, 2, 1]
        e0 = (bx - ax) * (ys - ay) - (by - ay) * (xs - ax)
        e1 = (cx - bx) * (ys - by) - (cy - by) * (xs - bx)
        e2 = (ax - cx) * (ys - cy) - (ay - cy) * (xs - cx)
        inside = (e0 >= -tol) & (e1 >= -tol) & (e2 >= -tol) & ~found
        idx[inside] = t
        found |= inside
        if found.all():
            break
    if not found.all():
        raise DegenerateGeometryError("triangulation does not cover every pixel")
    return idx.reshape(h, w)


def _bilinear_arrays(imgf, sx, sy):
    h, w = imgf.shape[0], imgf.shape[1]
    wm1 = float(w - 1)
    hm1 = float(h - 1)
    sx = np.minimum(np.maximum(sx, 0.0), wm1)
    sy = np.minimum(np.maximum(sy, 0.0), hm1)
    x0f = np.floor(sx)
    y0f = np.floor(sy)
    fx = (sx - x0f)[:, None]
    fy = (sy - y0f)[:, None]
    x0 = x0f.astype(np.int64)
    y0 = y0f.astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    v00 = imgf[y0, x0]
    v01 = imgf[y0, x1]
    v10 = imgf[y1, x0]
    v11 = imgf[y1, x1]
    return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) + fy * ((1.0 - fx) * v10 + fx * v11)


def warp_blend_numpy(img_a, img_b, inv_a, inv_b, index_map, alpha) -> np.ndarray:
    """Inverse-warp both images through per-triangle affines and blend.

    inv_a / inv_b are (T, 2, 3) float64 maps from output coordinates into
    the respective source image. Returns (H, W, 3) uint8.
    """
    h, w = index_map.shape
    xs = np.tile(np.arange(w, dtype=np.float64), h)
    ys = np.repeat(np.arange(h, dtype=np.float64), w)
    flat = index_map.reshape(-1)
    ma = inv_a[flat]
    mb = inv_b[flat]
    sxa = ma[:, 0, 0] * xs + ma[:, 0, 1] * ys + ma[:, 0, 2]
    sya = ma[:, 1, 0] * xs + ma[:, 1, 1] * ys + ma[:, 1, 2]
    sxb = mb[:, 0, 0] * xs + mb[:, 0, 1] * ys + mb[:, 0, 2]
    syb = mb[:, 1, 0] * xs + mb[:, 1, 1] * ys + mb[:, 1, 2]
    va = _bilinear_arrays(img_a.astype(np.float64), sxa, sya)
    vb = _bilinear_arrays(img_b.astype(np.float64), sxb, syb)
    v = (1.0 - alpha) * va + alpha * vb
    r = np.floor(v + 0.5)
    r = np.minimum(np.maximum(r, 0.0), 255.0)
    return r.astype(np.uint8).reshape(h, w, 3)


_NUMBA_OK = False
if _numba_requested():
    try:
        from numba import njit
    except ImportError:
        njit = None
else:
    njit = None

if njit is not None:

    @njit(cache=True, nogil=True)
    def _index_map_jit(tri_pts, h, w, tol):
        out = np.full((h, w), -1, dtype=np.int32)
        n_tri = tri_pts.shape[0]
        for y in range(h):
            fy = float(y)
            for x in range(w):
                fx = float(x)
                for t in range(n_tri):
                    ax = tri_pts[t, 0, 0]
                    ay = tri_pts[t, 0, 1]
                    bx = tri_pts[t, 1, 0]
                    by = tri_pts[t, 1, 1]
                    cx = tri_pts[t, 2, 0]
                    cy = tri_pts[t, 2, 1]
                    e0 = (bx - ax) * (fy - ay) - (by - ay) * (fx - ax)
                    if e0 < -tol:
                        continue
                    e1 = (cx - bx) * (fy - by) - (cy - by) * (fx - bx)
                    if e1 < -tol:
                        continue
                    e2 = (ax - cx) * (fy - cy) - (ay - cy) * (fx - cx)
                    if e2 < -tol:
                        continue
                    out[y, x] = t
                    break
        return out

    @njit(cache=True, nogil=True, inline="always")
    def _bilinear_jit(img, sx, sy, c):
        h = img.shape[0]
        w = img.shape[1]
        wm1 = float(w - 1)
        hm1 = float(h - 1)
        if sx < 0.0:
            sx = 0.0
        elif sx > wm1:
            sx = wm1
        if sy < 0.0:
            sy = 0.0
        elif sy > hm1:
            sy = hm1
        x0f = math.floor(sx)
        y0f = math.floor(sy)
        fx = sx - x0f
        fy = sy - y0f
        x0 = int(x0f)
        y0 = int(y0f)
        x1 = x0 + 1
        if x1 > w - 1:
            x1 = w - 1
        y1 = y0 + 1
        if y1 > h - 1:
            y1 = h - 1
        v00 = float(img[y0, x0, c])
        v01 = float(img[y0, x1, c])
        v10 = float(img[y1, x0, c])
        v11 = float(img[y1, x1, c])
        return (1.0 - fy) * ((1.0 - fx) * v00 + fx * v01) + fy * (
            (1.0 - fx) * v10 + fx * v11
        )

    @njit(cache=True, nogil=True)
    def _warp_blend_jit(img_a, img_b, inv_a, inv_b, index_map, alpha):
        h, w = index_map.shape
        out = np.empty((h, w, 3), dtype=np.uint8)
        for y in range(h):
            fy = float(y)
            for x in range(w):
                fx = float(x)
                t = index_map[y, x]
                sxa = inv_a[t, 0, 0] * fx + inv_a[t, 0, 1] * fy + inv_a[t, 0, 2]
                sya = inv_a[t, 1, 0] * fx + inv_a[t, 1, 1] * fy + inv_a[t, 1, 2]
                sxb = inv_b[t, 0, 0] * fx + inv_b[t, 0, 1] * fy + inv_b[t, 0, 2]
                syb = inv_b[t, 1, 0] * fx + inv_b[t, 1, 1] * fy + inv_b[t, 1, 2]
                for c in range(3):
                    va = _bilinear_jit(img_a, sxa, sya, c)
                    vb = _bilinear_jit(img_b, sxb, syb, c)
                    v = (1.0 - alpha) * va + alpha * vb
                    r = math.floor(v + 0.5)
                    if r < 0.0:
                        r = 0.0
                    elif r > 255.0:
                        r = 255.0
                    out[y, x, c] = np.uint8(r)
        return out

    def triangle_index_map_numba(tri_pts, height, width, tol) -> np.ndarray:
        out = _index_map_jit(
            np.ascontiguousarray(tri_pts), int(height), int(width), float(tol)
        )
        if np.any(out < 0):
            raise DegenerateGeometryError("triangulation does not cover every pixel")
        return out

    def warp_blend_numba(img_a, img_b, inv_a, inv_b, index_map, alpha) -> np.ndarray:
        return _warp_blend_jit(
            np.ascontiguousarray(img_a),
            np.ascontiguousarray(img_b),
            np.ascontiguousarray(inv_a),
            np.ascontiguousarray(inv_b),
            np.ascontiguousarray(index_map),
            float(alpha),
        )

    _NUMBA_OK = True
else:
    triangle_index_map_numba = None
    warp_blend_numba = None

if _NUMBA_OK:
    BACKEND = "numba"
    triangle_index_map = triangle_index_map_numba
    warp_blend = warp_blend_numba
else:
    BACKEND = "numpy"
    triangle_index_map = triangle_index_map_numpy
    warp_blend = warp_blend_numpy
