"""Deterministic plane geometry for landmark morphs.

Triangulation is incremental Bowyer-Watson with two-stage predicates:
fast float evaluation backed by exact rational arithmetic whenever the
float result is within its rounding-error bound. Combined with a fixed
insertion order (input order) and a sorted output, the triangulation is
a pure function of the point list, so morph outputs can be compared
bit-for-bit across platforms. Points exactly on a circumcircle are
treated as outside it, which keeps triangles built from earlier (lower
index) insertions in place when four or more points are co-circular.
"""

from fractions import Fraction

import numpy as np

from ..errors import DegenerateGeometryError

_EPS = float(np.finfo(np.float64).eps)

# Super-triangle margin, in multiples of the bounding-box extent. Enlarged
# and retried if any final circumcircle turns out to reach a super vertex.
_SUPER_MARGIN = 2.0**16
_SUPER_RETRIES = 4


def orientation(a, b, c) -> int:
    """Sign of the signed area of triangle abc: +1 ccw, -1 cw, 0 collinear."""
    t1 = (b[0] - a[0]) * (c[1] - a[1])
    t2 = (b[1] - a[1]) * (c[0] - a[0])
    det = t1 - t2
    bound = 4.0 * _EPS * (abs(t1) + abs(t2))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    det = (Fraction(b[0]) - Fraction(a[0])) * (Fraction(c[1]) - Fraction(a[1])) - (
        Fraction(b[1]) - Fraction(a[1])
    ) * (Fraction(c[0]) - Fraction(a[0]))
    return (det > 0) - (det < 0)


def _in_circumcircle_ccw(a, b, c, d) -> bool:
    """True iff d is strictly inside the circumcircle of ccw triangle abc."""
    adx = a[0] - d[0]
    ady = a[1] - d[1]
    bdx = b[0] - d[0]
    bdy = b[1] - d[1]
    cdx = c[0] - d[0]
    cdy = c[1] - d[1]
    ad2 = adx * adx + ady * ady
    bd2 = bdx * bdx + bdy * bdy
    cd2 = cdx * cdx + cdy * cdy
    det = (
        adx * (bdy * cd2 - cdy * bd2)
        - ady * (bdx * cd2 - cdx * bd2)
        + ad2 * (bdx * cdy - cdx * bdy)
    )
    mag = (
        abs(adx) * (abs(bdy) * abs(cd2) + abs(cdy) * abs(bd2))
        + abs(ady) * (abs(bdx) * abs(cd2) + abs(cdx) * abs(bd2))
        + abs(ad2) * (abs(bdx) * abs(cdy) + abs(cdx) * abs(bdy))
    )
    bound = 32.0 * _EPS * mag
    if det > bound:
        return True
    if det < -bound:
        return False
    fadx = Fraction(a[0]) - Fraction(d[0])
    fady = Fraction(a[1]) - Fraction(d[1])
    fbdx = Fraction(b[0]) - Fraction(d[0])
    fbdy = Fraction(b[1]) - Fraction(d[1])
    fcdx = Fraction(c[0]) - Fraction(d[0])
    fcdy = Fraction(c[1]) - Fraction(d[1])
    fad2 = fadx * fadx + fady * fady
    fbd2 = fbdx * fbdx + fbdy * fbdy
    fcd2 = fcdx * fcdx + fcdy * fcdy
    det = (
        fadx * (fbdy * fcd2 - fcdy * fbd2)
        - fady * (fbdx * fcd2 - fcdx * fbd2)
        + fad2 * (fbdx * fcdy - fcdx * fbdy)
    )
    return det > 0


def _circumcircle_contains(pts, tri, p) -> bool:
    """Strict in-circumcircle test for an index triangle, any orientation."""
    a, b, c = pts[tri[0]], pts[tri[1]], pts[tri[2]]
    if orientation(a, b, c) < 0:
        b, c = c, b
    return _in_circumcircle_ccw(a, b, c, p)


def frame_points(width, height) -> np.ndarray:
    """Corner and edge-midpoint anchors spanning a width x height raster.

    Coordinates are pixel centers, so the hull of these eight points covers
    every pixel center of the frame.
    """
    if width < 2 or height < 2:
        raise DegenerateGeometryError(f"frame {width}x{height} is too small to anchor")
    w = float(width - 1)
    h = float(height - 1)
    return np.array(
        [
            [0.0, 0.0],
            [w, 0.0],
            [w, h],
            [0.0, h],
            [w / 2.0, 0.0],
            [w, h / 2.0],
            [w / 2.0, h],
            [0.0, h / 2.0],
        ],
        dtype=np.float64,
    )


def _bowyer_watson(coords, margin):
    """One triangulation pass; returns None if the super triangle was too small."""
    n = len(coords)
    xs = [p[0] for p in coords]
    ys = [p[1] for p in coords]
    cx = (min(xs) + max(xs)) / 2.0
    cy = (min(ys) + max(ys)) / 2.0
    m = max(max(xs) - min(xs), max(ys) - min(ys), 1.0) * margin
    pts = list(coords) + [(cx - 3.0 * m, cy - m), (cx + 3.0 * m, cy - m), (cx, cy + 3.0 * m)]

    tris = {(n, n + 1, n + 2)}
    for i in range(n):
        p = pts[i]
        bad = [t for t in tris if _circumcircle_contains(pts, t, p)]
        edge_count = {}
        for t in bad:
            for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
                edge_count[e] = edge_count.get(e, 0) + 1
        tris.difference_update(bad)
        for (u, v), count in edge_count.items():
            if count == 1:
                tris.add(tuple(sorted((i, u, v))))

    final = sorted(t for t in tris if t[2] < n)
    for t in final:
        for s in (n, n + 1, n + 2):
            if _circumcircle_contains(pts, t, pts[s]):
                return None
    return final


def triangulate(points, frame=None) -> np.ndarray:
    """Delaunay-triangulate a point list, optionally anchored to a frame.

    Args:
        points: (N, 2) array-like of finite xy coordinates.
        frame: optional (width, height); when given, the eight frame_points
            are appended after the input points before triangulating.

    Returns:
        (T, 3) int array of vertex index triples, each row sorted ascending
        and rows sorted lexicographically.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DegenerateGeometryError(f"expected an (N, 2) point array, got {pts.shape}")
    if frame is not None:
        pts = np.vstack([pts, frame_points(frame[0], frame[1])])
    if not np.all(np.isfinite(pts)):
        raise DegenerateGeometryError("points must be finite")
    n = len(pts)
    if n < 3:
        raise DegenerateGeometryError(f"need at least 3 points, got {n}")

    coords = [(float(x), float(y)) for x, y in pts]
    seen = set()
    for i, c in enumerate(coords):
        if c in seen:
            raise DegenerateGeometryError(f"duplicate point {c} at index {i}")
        seen.add(c)
    if all(orientation(coords[0], coords[1], coords[k]) == 0 for k in range(2, n)):
        raise DegenerateGeometryError("all points are collinear")

    margin = _SUPER_MARGIN
    for _ in range(_SUPER_RETRIES):
        final = _bowyer_watson(coords, margin)
        if final is not None:
            for t in final:
                if orientation(coords[t[0]], coords[t[1]], coords[t[2]]) == 0:
                    raise DegenerateGeometryError(
                        f"triangulation produced a degenerate triangle {t}"
                    )
            return np.array(final, dtype=np.int64)
        margin *= 1024.0
    raise DegenerateGeometryError("super triangle failed to enclose all circumcircles")


def affine_from_triangles(src, dst) -> np.ndarray:
    """Affine 2x3 matrix M with M @ (x, y, 1) mapping src vertices onto dst.

    Vertices correspond by position. Raises DegenerateGeometryError when the
    source triangle has zero area.
    """
    s = np.asarray(src, dtype=np.float64)
    d = np.asarray(dst, dtype=np.float64)
    if s.shape != (3, 2) or d.shape != (3, 2):
        raise DegenerateGeometryError(
            f"triangles must be (3, 2) arrays, got {s.shape} and {d.shape}"
        )
    if orientation(s[0], s[1], s[2]) == 0:
        raise DegenerateGeometryError("source triangle is degenerate")
    system = np.column_stack([s, np.ones(3)])
    return np.linalg.solve(system, d).T
