"""Benchmark the raster warp kernels: numba-jitted loops vs the numpy twin.

Builds one morph-sized case (112x112, 68 landmarks by default), checks the
two backends agree bit-exactly, then times each kernel. Run:

    python benchmarks/bench_warp.py [--size N] [--landmarks N] [--repeats N]

Set OTBMORPH_NUMBA=0 to see the package fall back to the numpy path.
"""

import argparse
import statistics
import time

import numpy as np

from otbmorph.morph import kernels
from otbmorph.morph.geometry import (
    affine_from_triangles,
    frame_points,
    orientation,
    triangulate,
)


def build_case(size, n_landmarks, seed):
    rng = np.random.default_rng(seed)
    margin = 0.12 * size
    pts_a = rng.uniform(margin, size - margin, (n_landmarks, 2))
    pts_b = np.clip(pts_a + rng.uniform(-3.0, 3.0, (n_landmarks, 2)), 0.0, size - 1.0)
    img_a = rng.integers(0, 256, (size, size, 3), dtype=np.uint8)
    img_b = rng.integers(0, 256, (size, size, 3), dtype=np.uint8)

    alpha = 0.5
    anchors = frame_points(size, size)
    pts_l = np.vstack([(1.0 - alpha) * pts_a + alpha * pts_b, anchors])
    src_a = np.vstack([pts_a, anchors])
    src_b = np.vstack([pts_b, anchors])

    tris = triangulate(pts_l)
    tri_l = np.empty((len(tris), 3, 2), dtype=np.float64)
    inv_a = np.empty((len(tris), 2, 3), dtype=np.float64)
    inv_b = np.empty((len(tris), 2, 3), dtype=np.float64)
    for row, tri in enumerate(tris):
        idx = list(tri)
        if orientation(pts_l[idx[0]], pts_l[idx[1]], pts_l[idx[2]]) < 0:
            idx = [idx[0], idx[2], idx[1]]
        tri_l[row] = pts_l[idx]
        inv_a[row] = affine_from_triangles(pts_l[idx], src_a[idx])
        inv_b[row] = affine_from_triangles(pts_l[idx], src_b[idx])
    tol = kernels.containment_tol(size, size)
    return img_a, img_b, tri_l, inv_a, inv_b, tol, alpha


def timed(fn, repeats):
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return min(samples), statistics.median(samples)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=112)
    parser.add_argument("--landmarks", type=int, default=68)
    parser.add_argument("--repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    img_a, img_b, tri_l, inv_a, inv_b, tol, alpha = build_case(
        args.size, args.landmarks, args.seed
    )
    size = args.size
    print(
        f"case: {size}x{size}, {args.landmarks} landmarks + "
        f"{len(frame_points(size, size))} frame anchors, {len(tri_l)} triangles"
    )
    print(f"numba backend available: {kernels.BACKEND == 'numba'}")

    index_numpy = kernels.triangle_index_map_numpy(tri_l, size, size, tol)
    blend_numpy = kernels.warp_blend_numpy(img_a, img_b, inv_a, inv_b, index_numpy, alpha)

    rows = []
    if kernels.BACKEND == "numba":
        # first calls compile; keep that out of the timings
        index_numba = kernels.triangle_index_map_numba(tri_l, size, size, tol)
        blend_numba = kernels.warp_blend_numba(
            img_a, img_b, inv_a, inv_b, index_numba, alpha
        )
        assert np.array_equal(index_numba, index_numpy), "index maps diverged"
        assert np.array_equal(blend_numba, blend_numpy), "warp outputs diverged"
        print("backends agree bit-exactly\n")
        cases = [
            (
                "triangle_index_map",
                lambda: kernels.triangle_index_map_numba(tri_l, size, size, tol),
                lambda: kernels.triangle_index_map_numpy(tri_l, size, size, tol),
            ),
            (
                "warp_blend",
                lambda: kernels.warp_blend_numba(
                    img_a, img_b, inv_a, inv_b, index_numpy, alpha
                ),
                lambda: kernels.warp_blend_numpy(
                    img_a, img_b, inv_a, inv_b, index_numpy, alpha
                ),
            ),
        ]
        print(f"{'kernel':<20} {'numba best':>12} {'numpy best':>12} {'speedup':>9}")
        for name, fast, slow in cases:
            fast_best, fast_med = timed(fast, args.repeats)
            slow_best, slow_med = timed(slow, args.repeats)
            rows.append((name, fast_best, slow_best))
            print(
                f"{name:<20} {fast_best * 1e3:>10.2f}ms {slow_best * 1e3:>10.2f}ms "
                f"{slow_best / fast_best:>8.1f}x"
            )
    else:
        print("numba unavailable or disabled; timing the numpy path only\n")
        print(f"{'kernel':<20} {'numpy best':>12}")
        for name, fn in [
            (
                "triangle_index_map",
                lambda: kernels.triangle_index_map_numpy(tri_l, size, size, tol),
            ),
            (
                "warp_blend",
                lambda: kernels.warp_blend_numpy(
                    img_a, img_b, inv_a, inv_b, index_numpy, alpha
                ),
            ),
        ]:
            best, _ = timed(fn, args.repeats)
            print(f"{name:<20} {best * 1e3:>10.2f}ms")


if __name__ == "__main__":
    main()
