"""Pure-numpy geometry kernels; fallback when the compiled extension is absent.

Signatures mirror ``shotspeak._kernels`` exactly. All membership tests are
boundary-inclusive: a point within ``eps`` meters outside an edge or radius
still counts.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def count_in_triangle(
    ax: float,
    ay: float,
    bx: float,
    by: float,
    cx: float,
    cy: float,
    xs: np.ndarray,
    ys: np.ndarray,
    eps: float,
) -> int:
    """Count points inside triangle ABC, eps-inclusive of the boundary.

    The triangle must be non-degenerate; the caller handles collinear vertices.
    """
    area2 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    orient = 1.0 if area2 > 0 else -1.0
    inside = np.ones(len(xs), dtype=bool)
    for (px, py, qx, qy) in ((ax, ay, bx, by), (bx, by, cx, cy), (cx, cy, ax, ay)):
        edge_len = np.hypot(qx - px, qy - py)
        # signed distance of each point from the edge, positive toward the interior
        cross = (qx - px) * (ys - py) - (qy - py) * (xs - px)
        inside &= orient * cross / edge_len >= -eps
    return int(np.count_nonzero(inside))


def count_on_segment(
    px: float,
    py: float,
    qx: float,
    qy: float,
    xs: np.ndarray,
    ys: np.ndarray,
    eps: float,
) -> int:
    """Count points within eps meters of segment PQ (degenerate-triangle path)."""
    dx, dy = qx - px, qy - py
    seg_sq = dx * dx + dy * dy
    if seg_sq == 0.0:
        return int(np.count_nonzero(np.hypot(xs - px, ys - py) <= eps))
    t = np.clip(((xs - px) * dx + (ys - py) * dy) / seg_sq, 0.0, 1.0)
    dist = np.hypot(xs - (px + t * dx), ys - (py + t * dy))
    return int(np.count_nonzero(dist <= eps))


def count_within(
    sx: float, sy: float, xs: np.ndarray, ys: np.ndarray, radius: float, eps: float
) -> int:
    """Count points with Euclidean distance <= radius + eps from (sx, sy)."""
    return int(np.count_nonzero(np.hypot(xs - sx, ys - sy) <= radius + eps))


def min_distance(sx: float, sy: float, xs: np.ndarray, ys: np.ndarray) -> float:
    """Minimum Euclidean distance from (sx, sy) to the points; inf when empty."""
    if len(xs) == 0:
        return float("inf")
    return float(np.min(np.hypot(xs - sx, ys - sy)))
