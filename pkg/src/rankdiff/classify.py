"""Partition municipalities into four groups in (skewness, persistence) space.

The groups describe qualitatively different rank-difference histories:

* G0: near-symmetric rank-difference distribution, any persistence
* G1: strongly positive skew with high persistence
* G2: moderate skew with moderate-to-low persistence
* G3: everything else (residual pattern)

Municipalities whose skewness is undefined (constant series) are left
unclassified. Thresholds are configurable; the defaults approximate the
verbal group descriptions and can be tuned per dataset.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import ClassifyError
from .metrics import GroupStats
from .model import Group


class ClassLabel(str, Enum):
    G0 = "G0"
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class ClassifierConfig:
    g0_skew_max: float = 1.0
    g1_per_min: float = 90.0
    g1_skew_min: float = 1.0
    g1_skew_max: float = 5.0
    g2_skew_min: float = 2.0
    g2_skew_max: float = 4.0
    g2_per_max: float = 90.0

    def __post_init__(self) -> None:
        for lo, hi, name in (
            (self.g1_skew_min, self.g1_skew_max, "g1_skew"),
            (self.g2_skew_min, self.g2_skew_max, "g2_skew"),
        ):
            if not lo < hi:
                raise ClassifyError(f"{name}_min must be < {name}_max, got ({lo}, {hi})")


def classify_one(stats: GroupStats, cfg: ClassifierConfig = ClassifierConfig()) -> ClassLabel:
    """Assign exactly one label; rules are checked in order, first match wins."""
    skew = stats.skewness
    per = stats.persistence_pct
    if skew is None:
        return ClassLabel.UNCLASSIFIED
    if abs(skew) < cfg.g0_skew_max:
        return ClassLabel.G0
    if cfg.g1_skew_min <= skew <= cfg.g1_skew_max and per >= cfg.g1_per_min:
        return ClassLabel.G1
    if cfg.g2_skew_min <= skew <= cfg.g2_skew_max and per < cfg.g2_per_max:
        return ClassLabel.G2
    return ClassLabel.G3


def classify_municipalities(
    stats_by_id: dict[str, dict[Group, GroupStats]],
    group: Group,
    cfg: ClassifierConfig = ClassifierConfig(),
) -> dict[str, ClassLabel]:
    """Label every municipality for one population group."""
    return {mid: classify_one(per_group[group], cfg) for mid, per_group in stats_by_id.items()}


def write_labels_csv(path: str | Path, labels: dict[str, ClassLabel], group: Group) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["municipality_id", "group", "label"])
        for mid in sorted(labels):
            writer.writerow([mid, group.value, labels[mid].value])
