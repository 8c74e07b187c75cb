"""Point-to-triangle distance kernel.

The distance from a point p to a triangle has two components:

- d0: distance from p to its orthogonal projection p0 on the triangle plane
- d1: distance, within the plane, from p0 to the nearest triangle point p1

and d = d0 + d1. When p0 lies inside the triangle the query is a *hit*
(p1 = p0, d1 = 0); otherwise it is a *miss*. For misses d exceeds the
Euclidean point-triangle distance, and the same d is used both to pick the
closest triangle and as the reported distance.

Degenerate (zero-area) triangles have no plane. They are always misses: p0 is
the projection of p on the supporting line of the longest edge, p1 the
nearest point of that edge segment. d stays >= the Euclidean distance, so
Euclidean box bounds remain valid lower bounds for the whole metric.

All arithmetic is element-wise with a fixed operation order, so a (point,
triangle) pair yields bit-identical results whatever batch it is evaluated in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sharp_bench.services.geometry import cross3, dot3, norm3


HIT_TOLERANCE = 1e-9
DEGENERATE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class KernelResult:
    """Raw per-pair output of :func:`closest_points_on_triangles`."""

    plane_points: np.ndarray
    foot_points: np.ndarray
    d0: np.ndarray
    d1: np.ndarray
    d: np.ndarray
    hit: np.ndarray
    barycentric: np.ndarray


def _segment_closest(p: np.ndarray, s: np.ndarray, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Clamped parameter and closest point of segments s->e to points p."""
    se = e - s
    len2 = dot3(se, se)
    safe = np.where(len2 > 0.0, len2, 1.0)
    t = np.clip(dot3(p - s, se) / safe, 0.0, 1.0)
    t = np.where(len2 > 0.0, t, 0.0)
    return t, s + t[:, None] * se


def closest_points_on_triangles(
    p: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray
) -> KernelResult:
    """Two-component closest-point query for paired rows of points and triangles.

    Args:
        p: (M, 3) query points
        a, b, c: (M, 3) triangle corners

    Returns:
        KernelResult with one row per pair
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1, 3)
    a = np.asarray(a, dtype=np.float64).reshape(-1, 3)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 3)
    c = np.asarray(c, dtype=np.float64).reshape(-1, 3)

    with np.errstate(divide="ignore", invalid="ignore"):
        ab = b - a
        bc = c - b
        ca = a - c
        n = cross3(ab, c - a)
        nn = dot3(n, n)
        edge2 = np.stack([dot3(ab, ab), dot3(bc, bc), dot3(ca, ca)], axis=1)
        longest2 = edge2.max(axis=1)
        degenerate = nn <= (DEGENERATE_TOLERANCE * longest2) ** 2
        safe_nn = np.where(degenerate, 1.0, nn)

        # projection on the triangle plane
        signed = dot3(p - a, n) / safe_nn
        p0 = p - signed[:, None] * n
        d0 = np.abs(signed) * np.sqrt(safe_nn)

        # barycentric coordinates of p0
        la = dot3(cross3(b - p0, c - p0), n) / safe_nn
        lb = dot3(cross3(c - p0, a - p0), n) / safe_nn
        lc = 1.0 - la - lb
        bary_plane = np.stack([la, lb, lc], axis=1)
        hit = (~degenerate) & np.all(bary_plane >= -HIT_TOLERANCE, axis=1)

        # in-plane nearest boundary point for misses
        t_ab, q_ab = _segment_closest(p0, a, b)
        t_bc, q_bc = _segment_closest(p0, b, c)
        t_ca, q_ca = _segment_closest(p0, c, a)
        dist = np.stack([norm3(p0 - q_ab), norm3(p0 - q_bc), norm3(p0 - q_ca)], axis=1)
        which = np.argmin(dist, axis=1)
        rows = np.arange(len(p))
        q_all = np.stack([q_ab, q_bc, q_ca], axis=1)
        p1_miss = q_all[rows, which]
        d1_miss = dist[rows, which]
        zeros = np.zeros(len(p))
        bary_edges = np.stack(
            [
                np.stack([1.0 - t_ab, t_ab, zeros], axis=1),
                np.stack([zeros, 1.0 - t_bc, t_bc], axis=1),
                np.stack([t_ca, zeros, 1.0 - t_ca], axis=1),
            ],
            axis=1,
        )
        bary_miss = bary_edges[rows, which]

        clipped = np.clip(bary_plane, 0.0, None)
        total = clipped.sum(axis=1)
        bary_hit = clipped / np.where(total > 0.0, total, 1.0)[:, None]

        # degenerate fallback: longest edge as a segment
        longest = np.argmax(edge2, axis=1)
        starts = np.stack([a, b, c], axis=1)[rows, longest]
        ends = np.stack([b, c, a], axis=1)[rows, longest]
        se = ends - starts
        safe_len2 = np.where(longest2 > 0.0, longest2, 1.0)
        t_line = np.where(longest2 > 0.0, dot3(p - starts, se) / safe_len2, 0.0)
        p0_deg = starts + t_line[:, None] * se
        t_seg = np.clip(t_line, 0.0, 1.0)
        p1_deg = starts + t_seg[:, None] * se
        d0_deg = norm3(p - p0_deg)
        d1_deg = norm3(p0_deg - p1_deg)
        bary_seg = np.stack(
            [
                np.stack([1.0 - t_seg, t_seg, zeros], axis=1),
                np.stack([zeros, 1.0 - t_seg, t_seg], axis=1),
                np.stack([t_seg, zeros, 1.0 - t_seg], axis=1),
            ],
            axis=1,
        )[rows, longest]

    plane_points = np.where(degenerate[:, None], p0_deg, p0)
    foot_points = np.where(hit[:, None], p0, np.where(degenerate[:, None], p1_deg, p1_miss))
    d0_out = np.where(degenerate, d0_deg, d0)
    d1_out = np.where(hit, 0.0, np.where(degenerate, d1_deg, d1_miss))
    bary = np.where(hit[:, None], bary_hit, np.where(degenerate[:, None], bary_seg, bary_miss))

    return KernelResult(
        plane_points=plane_points,
        foot_points=foot_points,
        d0=d0_out,
        d1=d1_out,
        d=d0_out + d1_out,
        hit=hit,
        barycentric=bary,
    )
