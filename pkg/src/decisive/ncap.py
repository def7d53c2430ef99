"""Non-contextual autonomy ranking.

Feature tables are encoded to positive numbers, combined by a weighted
product into a component potential, paired with the capability level into a
coordinate, and ranked by distance from the origin.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import DataQualityWarning, DomainError, NonPositiveValue, UnmappedToken

#: sentinel for a feature the platform simply does not have
ABSENT = "N/A"


@dataclass(frozen=True)
class Feature:
    name: str
    direction: str  # higher_better | lower_better
    ordinal_map: Optional[dict[str, float]] = None

    def __post_init__(self):
        if self.direction not in ("higher_better", "lower_better"):
            raise ValueError(f"bad direction {self.direction!r}")


@dataclass(frozen=True)
class FeatureTable:
    """Per-system feature values; entries are numbers, ordinal tokens, or ABSENT."""

    features: tuple[Feature, ...]
    values: dict[str, dict[str, object]]  # system id -> feature name -> value

    @property
    def system_ids(self) -> list[str]:
        return list(self.values)


def encode_features(table: FeatureTable) -> dict[str, dict[str, float]]:
    """Encode every system's feature values to strictly positive numbers.

    Ordinal tokens map through the feature's ordinal map. An absent value
    inherits the minimum encoded value of that feature across the cohort
    (floor 1 for ordinal features): lacking the component scores no better
    than the worst system that has it.
    """
    encoded: dict[str, dict[str, float]] = {sid: {} for sid in table.values}
    for feat in table.features:
        nums: dict[str, float] = {}
        absent: list[str] = []
        for sid, row in table.values.items():
            raw = row.get(feat.name, ABSENT)
            if raw == ABSENT or raw is None:
                absent.append(sid)
                continue
            if isinstance(raw, str):
                if not feat.ordinal_map or raw not in feat.ordinal_map:
                    raise UnmappedToken(f"{feat.name}: no ordinal rank for {raw!r}")
                value = float(feat.ordinal_map[raw])
            else:
                value = float(raw)
            if not value > 0 or not math.isfinite(value):
                raise NonPositiveValue(f"{feat.name}={value} for {sid} (must be > 0)")
            nums[sid] = value
        if absent:
            if nums:
                fill = min(nums.values())
            elif feat.ordinal_map:
                fill = 1.0  # rank floor when no system has the component
            else:
                raise NonPositiveValue(f"{feat.name}: absent for every system")
            for sid in absent:
                nums[sid] = fill
        for sid, value in nums.items():
            encoded[sid][feat.name] = value
    return encoded


@dataclass(frozen=True)
class WeightScheme:
    """Normalized feature weights (uniform, degree-of-autonomy, or explicit)."""

    weights: dict[str, float]

    @classmethod
    def uniform(cls, feature_names: Sequence[str]) -> "WeightScheme":
        w = 1.0 / len(feature_names)
        return cls({name: w for name in feature_names})

    @classmethod
    def degree_of_autonomy(cls, degrees: Mapping[str, int]) -> "WeightScheme":
        """Raw weight 2^-n per feature, n the degree of separation from pure autonomy."""
        raw = {name: 2.0 ** (-float(n)) for name, n in degrees.items()}
        return cls.explicit(raw)

    @classmethod
    def explicit(cls, raw: Mapping[str, float]) -> "WeightScheme":
        total = sum(abs(w) for w in raw.values())
        if total <= 0:
            raise DomainError("weights must not all be zero")
        return cls({name: w / total for name, w in raw.items()})


def weighted_product(
    values: Mapping[str, float],
    scheme: WeightScheme,
    directions: Mapping[str, str],
) -> float:
    """P = prod(v_i ^ (s_i * w_i)) with s_i = -1 for lower-is-better features."""
    p = 1.0
    for name, w in scheme.weights.items():
        v = values[name]
        if not v > 0:
            raise DomainError(f"{name}={v}: weighted product needs positive values")
        sign = -1.0 if directions[name] == "lower_better" else 1.0
        p *= v ** (sign * w)
    return p


@dataclass(frozen=True)
class AutonomyCapabilities:
    perception: bool = False
    modeling: bool = False
    planning: bool = False
    execution: bool = False


def autonomy_level(caps: AutonomyCapabilities) -> int:
    """Capability level 0-4: one point per autonomous ability area."""
    return sum((caps.perception, caps.modeling, caps.planning, caps.execution))


@dataclass(frozen=True)
class NcapResult:
    suas_id: str
    n_al: int
    n_cp: float
    absolute_distance: float
    relative_distance: float
    rank: int

    @property
    def coordinate(self) -> tuple[float, float]:
        return (float(self.n_al), self.n_cp)


def component_potential(
    table: FeatureTable, scheme: Optional[WeightScheme] = None
) -> dict[str, float]:
    """Weighted-product potential per system; defaults to uniform weights."""
    if scheme is None:
        scheme = WeightScheme.uniform([f.name for f in table.features])
    encoded = encode_features(table)
    directions = {f.name: f.direction for f in table.features}
    return {sid: weighted_product(encoded[sid], scheme, directions) for sid in table.values}


def autonomy_distances(scores: Mapping[str, tuple[int, float]]) -> list[NcapResult]:
    """Rank systems by distance of their (level, potential) coordinate from the origin.

    The best system (largest absolute distance) gets relative distance 0;
    every other system's relative distance is the coordinate-space distance to
    the best one. Ties on the absolute distance break by level then id.
    """
    if not scores:
        raise DomainError("no systems to rank")
    absolute = {
        sid: math.hypot(float(n_al), n_cp) for sid, (n_al, n_cp) in scores.items()
    }
    best_abs = max(absolute.values())
    contenders = [sid for sid, d in absolute.items() if math.isclose(d, best_abs)]
    if len(contenders) > 1:
        warnings.warn(
            f"absolute-distance tie between {', '.join(sorted(contenders))}",
            DataQualityWarning,
        )
        contenders.sort(key=lambda sid: (-scores[sid][0], sid))
    best = contenders[0]
    bx, by = float(scores[best][0]), scores[best][1]

    ordered = sorted(scores, key=lambda sid: (-absolute[sid], -scores[sid][0], sid))
    results = []
    for rank, sid in enumerate(ordered, start=1):
        n_al, n_cp = scores[sid]
        rel = 0.0 if sid == best else math.hypot(float(n_al) - bx, n_cp - by)
        results.append(NcapResult(sid, n_al, n_cp, absolute[sid], rel, rank))
    return results
