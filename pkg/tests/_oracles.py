"""Independent brute-force oracles used by the tests.

These deliberately avoid the package's kernel code paths: triangle and
radius membership run exact sign tests in rational arithmetic, distances
use a plain linear scan, and the fit oracle optimizes an independently
written likelihood with a generic scipy optimizer.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import numpy as np

from shotspeak.pitch import GOAL_HIGH_POST, GOAL_LOW_POST, FramePlayer, PitchPoint


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def _cross(ax, ay, bx, by, px, py) -> Fraction:
    return (bx - ax) * (py - ay) - (by - ay) * (px - ax)


def triangle_count_exact(shot: PitchPoint, frame) -> int:
    """Exact point-in-triangle count over opposing players (boundary inclusive)."""
    ax, ay = Fraction(shot.x), Fraction(shot.y)
    bx, by = Fraction(GOAL_LOW_POST.x), Fraction(GOAL_LOW_POST.y)
    cx, cy = Fraction(GOAL_HIGH_POST.x), Fraction(GOAL_HIGH_POST.y)
    orientation = _sign(_cross(ax, ay, bx, by, cx, cy))
    count = 0
    for player in frame:
        if player.is_teammate:
            continue
        px, py = Fraction(player.location.x), Fraction(player.location.y)
        if orientation == 0:
            # collinear vertices: membership on the hull segment
            lo = min(ay, by)
            hi = max(ay, cy)
            if px == ax and lo <= py <= hi:
                count += 1
            continue
        signs = [
            _sign(_cross(ax, ay, bx, by, px, py)) * orientation,
            _sign(_cross(bx, by, cx, cy, px, py)) * orientation,
            _sign(_cross(cx, cy, ax, ay, px, py)) * orientation,
        ]
        if all(s >= 0 for s in signs):
            count += 1
    return count


def triangle_min_edge_distance(shot: PitchPoint, frame) -> float:
    """Smallest |signed distance| of any opponent to any triangle edge line."""
    vertices = [(shot.x, shot.y), (GOAL_LOW_POST.x, GOAL_LOW_POST.y), (GOAL_HIGH_POST.x, GOAL_HIGH_POST.y)]
    best = math.inf
    for player in frame:
        if player.is_teammate:
            continue
        for i in range(3):
            (ax, ay), (bx, by) = vertices[i], vertices[(i + 1) % 3]
            length = math.hypot(bx - ax, by - ay)
            if length == 0:
                continue
            cross = (bx - ax) * (player.location.y - ay) - (by - ay) * (player.location.x - ax)
            best = min(best, abs(cross) / length)
    return best


def radius_count_exact(shot: PitchPoint, frame, radius: float) -> int:
    """Exact squared-distance comparison against radius^2 (boundary inclusive)."""
    sx, sy = Fraction(shot.x), Fraction(shot.y)
    r_sq = Fraction(radius) ** 2
    count = 0
    for player in frame:
        if player.is_teammate:
            continue
        dx = Fraction(player.location.x) - sx
        dy = Fraction(player.location.y) - sy
        if dx * dx + dy * dy <= r_sq:
            count += 1
    return count


def radius_min_band_gap(shot: PitchPoint, frame, radius: float) -> float:
    gaps = [
        abs(shot.distance_to(p.location) - radius)
        for p in frame
        if not p.is_teammate
    ]
    return min(gaps, default=math.inf)


def nearest_distance_scan(shot: PitchPoint, frame) -> float:
    """Linear-scan minimum distance over opposing players."""
    return min(
        math.hypot(p.location.x - shot.x, p.location.y - shot.y)
        for p in frame
        if not p.is_teammate
    )


def random_frame(rng: random.Random, n_players: int = 10) -> list[FramePlayer]:
    """Random freeze frame with one opposing keeper and mixed outfielders."""
    players = [
        FramePlayer(
            PitchPoint(rng.uniform(95.0, 105.0), rng.uniform(25.0, 43.0)),
            is_teammate=False,
            is_keeper=True,
        )
    ]
    for _ in range(n_players - 1):
        players.append(
            FramePlayer(
                PitchPoint(rng.uniform(0.0, 105.0), rng.uniform(0.0, 68.0)),
                is_teammate=rng.random() < 0.4,
                is_keeper=False,
            )
        )
    return players


def random_shot_point(rng: random.Random) -> PitchPoint:
    return PitchPoint(rng.uniform(50.0, 104.99), rng.uniform(1.0, 67.0))


# --- independent likelihood optimizer ------------------------------------------


def negative_log_likelihood(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    eta = X @ beta
    return float(np.sum(np.logaddexp(0.0, eta) - y * eta))


def negative_log_likelihood_grad(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    eta = X @ beta
    p = np.where(eta >= 0, 1.0 / (1.0 + np.exp(-np.abs(eta))), np.exp(-np.abs(eta)) / (1.0 + np.exp(-np.abs(eta))))
    return X.T @ (p - y)


def negative_log_likelihood_hess(beta: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    eta = X @ beta
    p = np.where(eta >= 0, 1.0 / (1.0 + np.exp(-np.abs(eta))), np.exp(-np.abs(eta)) / (1.0 + np.exp(-np.abs(eta))))
    w = p * (1.0 - p)
    return X.T @ (X * w[:, None])


def optimize_likelihood(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Maximize the Bernoulli likelihood with scipy's trust-region Newton."""
    from scipy.optimize import minimize

    result = minimize(
        negative_log_likelihood,
        np.zeros(X.shape[1]),
        args=(X, y),
        jac=negative_log_likelihood_grad,
        hess=negative_log_likelihood_hess,
        method="trust-exact",
        options={"gtol": 1e-12, "maxiter": 500},
    )
    return result.x
