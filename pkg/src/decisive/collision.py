"""Obstacle-avoidance and collision-resilience numerics.

Per-flight metrics (minimum obstacle distance, minimum time-to-collision,
acceleration severity, post-collision velocity change) plus the categorical
distribution tables. Flight-set aggregation is the mean of per-flight values
throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .core import CR_CATEGORIES, OA_CATEGORIES, ObstacleGeometry, Trajectory, TrialRecord
from .errors import (
    AllStationary,
    CollisionOutsideSpan,
    EmptySample,
    InsufficientSamples,
    MissingCategory,
    RateTooLow,
)

GRAVITY = 9.8  # m/s^2

#: speed below which a sample is treated as stationary for TTC purposes;
#: dividing by near-zero hover speeds would blow the index up
STATIONARY_SPEED = 0.05  # m/s

#: default |a| threshold for the collision-time suggestion helper
COLLISION_ACCEL_HINT = 3.0  # m/s^2


@dataclass(frozen=True)
class CollisionKinematics:
    """Severity-index conventions: g is fixed; vertical axis off by default.

    Horizontal-plane flight is assumed so sudden drops (vehicle failures, not
    impacts) do not contaminate the severity index; set include_vertical for
    genuinely three-dimensional missions.
    """

    include_vertical: bool = False

    @property
    def g(self) -> float:
        return GRAVITY


def distance_to_obstacle(traj: Trajectory, obstacle: ObstacleGeometry) -> tuple[np.ndarray, float]:
    """Per-sample body-center distance to the obstacle and the flight minimum.

    Plan-view distance to the segment (clamped to endpoints, or to the
    infinite line) combined with the vertical gap outside [0, height].
    """
    p0 = np.asarray(obstacle.p0, dtype=float)
    p1 = np.asarray(obstacle.p1, dtype=float)
    d = p1 - p0
    denom = float(d @ d)

    xy = traj.pos[:, :2]
    s = (xy - p0) @ d / denom
    if obstacle.kind == "plane_segment":
        s = np.clip(s, 0.0, 1.0)
    nearest = p0 + s[:, None] * d
    plan = np.linalg.norm(xy - nearest, axis=1)

    z = traj.pos[:, 2]
    vert = np.maximum(0.0, np.maximum(-z, z - obstacle.height))
    series = np.hypot(plan, vert)
    return series, float(series.min())


def speeds(traj: Trajectory) -> np.ndarray:
    """Per-sample speed magnitude, differentiating positions when velocity is absent."""
    source = traj if traj.vel is not None else derive_kinematics(traj)
    return np.linalg.norm(source.vel, axis=1)


def ttc_series(traj: Trajectory, obstacle: ObstacleGeometry) -> tuple[np.ndarray, np.ndarray]:
    """(TTC values, validity mask); samples slower than STATIONARY_SPEED are masked out."""
    dist, _ = distance_to_obstacle(traj, obstacle)
    spd = speeds(traj)
    mask = spd >= STATIONARY_SPEED
    ttc = np.full(len(traj), np.inf)
    ttc[mask] = dist[mask] / spd[mask]
    return ttc, mask


def min_ttc(traj: Trajectory, obstacle: ObstacleGeometry) -> float:
    ttc, mask = ttc_series(traj, obstacle)
    if not mask.any():
        raise AllStationary("no sample moves faster than the stationary cutoff")
    return float(ttc[mask].min())


def flight_min_distance(traj: Trajectory, obstacle: ObstacleGeometry, collided: bool = False) -> float:
    """Flight minimum distance; collision flights score 0 by definition."""
    if collided:
        return 0.0
    return distance_to_obstacle(traj, obstacle)[1]


def flight_min_ttc(traj: Trajectory, obstacle: ObstacleGeometry, collided: bool = False) -> float:
    """Flight minimum TTC; collision flights score 0 by definition."""
    if collided:
        return 0.0
    return min_ttc(traj, obstacle)


def aggregate_flights(per_flight: Sequence[float]) -> float:
    """Flight-set value: mean of the per-flight metric values."""
    if not per_flight:
        raise EmptySample("no flights")
    return float(np.mean(per_flight))


def masi(traj: Trajectory, kin: CollisionKinematics = CollisionKinematics()) -> float:
    """Peak acceleration magnitude over the flight, normalized by g (dimensionless)."""
    source = traj if traj.acc is not None else derive_kinematics(traj)
    acc = source.acc
    if kin.include_vertical:
        mag = np.linalg.norm(acc, axis=1)
    else:
        mag = np.hypot(acc[:, 0], acc[:, 1])
    return float(mag.max()) / kin.g


def peak_deceleration(traj: Trajectory, kin: CollisionKinematics = CollisionKinematics()) -> float:
    """Maximum flight deceleration in m/s^2 (severity index times g)."""
    return masi(traj, kin) * kin.g


def max_delta_v(traj: Trajectory, t_c: float, window: float = 0.3) -> float:
    """Largest velocity change within `window` seconds after the collision at t_c.

    Velocity at t_c is interpolated; the maximum of |v(tau) - v(t_c)| is taken
    over samples in (t_c, t_c + window]. Sampling inside the window must be at
    least 10 Hz for the estimate to be meaningful.
    """
    source = traj if traj.vel is not None else derive_kinematics(traj)
    t = source.t
    if not (t[0] <= t_c <= t[-1]):
        raise CollisionOutsideSpan(f"t_c={t_c} outside [{t[0]}, {t[-1]}]")

    t_end = min(t_c + window, float(t[-1]))
    in_window = (t >= t_c) & (t <= t_end)
    window_times = t[in_window]
    # gaps are measured over the window including its edges
    edges = np.concatenate(([t_c], window_times, [t_end]))
    if np.diff(np.unique(edges)).size and np.max(np.diff(np.unique(edges))) > 0.1 + 1e-9:
        raise RateTooLow("need >= 10 Hz sampling in the post-collision window")

    v0 = np.array([np.interp(t_c, t, source.vel[:, k]) for k in range(3)])
    after = (t > t_c) & (t <= t_c + window)
    if not after.any():
        return 0.0
    dv = np.linalg.norm(source.vel[after] - v0, axis=1)
    return float(dv.max())


def derive_kinematics(traj: Trajectory, smooth_width: int = 5) -> Trajectory:
    """Fill missing velocity/acceleration by central differences.

    Interior samples use central differences, the ends one-sided differences.
    Acceleration gets a moving-average smoothing of odd width `smooth_width`
    (1 disables smoothing).
    """
    if len(traj) < 3:
        raise InsufficientSamples("differentiation needs at least 3 samples")
    if smooth_width < 1 or smooth_width % 2 == 0:
        raise ValueError("smooth_width must be odd and >= 1")

    t = traj.t
    vel = traj.vel if traj.vel is not None else _differentiate(traj.pos, t)
    acc = traj.acc
    if acc is None:
        acc = _differentiate(vel, t)
        if smooth_width > 1:
            acc = _moving_average(acc, smooth_width)
    return replace(traj, vel=vel, acc=acc)


def _differentiate(mat: np.ndarray, t: np.ndarray) -> np.ndarray:
    return np.gradient(mat, t, axis=0)


def _moving_average(mat: np.ndarray, width: int) -> np.ndarray:
    half = width // 2
    padded = np.pad(mat, ((half, half), (0, 0)), mode="edge")
    kernel = np.ones(width) / width
    return np.column_stack(
        [np.convolve(padded[:, k], kernel, mode="valid") for k in range(mat.shape[1])]
    )


def suggest_collision_time(traj: Trajectory, threshold: float = COLLISION_ACCEL_HINT) -> Optional[float]:
    """First time |a| exceeds the threshold; a hint only, never authoritative.

    The annotated collision time in the trial record always wins.
    """
    source = traj if traj.acc is not None else derive_kinematics(traj)
    mag = np.linalg.norm(source.acc, axis=1)
    hits = np.nonzero(mag > threshold)[0]
    return float(source.t[hits[0]]) if hits.size else None


def collision_count(trials: Sequence[TrialRecord]) -> int:
    """Number of flights in which the sUAS collided at least once."""
    return sum(1 for t in trials if t.collisions > 0)


def category_distribution(
    trials: Sequence[TrialRecord],
    which: str,
    group_by=lambda t: t.test_id,
) -> dict[str, dict[str, float]]:
    """Percentage of trials per category, grouped (by default) per test.

    `which` selects the obstacle-avoidance or collision-resilience taxonomy.
    Every trial must carry the requested category.
    """
    if which not in ("oa", "cr"):
        raise ValueError("which must be 'oa' or 'cr'")
    vocab = OA_CATEGORIES if which == "oa" else CR_CATEGORIES
    attr = "oa_category" if which == "oa" else "cr_category"

    groups: dict[str, list[str]] = {}
    for trial in trials:
        cat = getattr(trial, attr)
        if cat is None:
            raise MissingCategory(f"trial {trial.trial_id} lacks {attr}")
        groups.setdefault(group_by(trial), []).append(cat)

    out = {}
    for key, cats in sorted(groups.items()):
        out[key] = {c: 100.0 * cats.count(c) / len(cats) for c in vocab}
    return out
