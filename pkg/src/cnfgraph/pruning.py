"""Pruning a clause system down to a K_{2,2}-free graph.

Only left vertices are removed, and the clauses become ``(A_i ∩ V', B_i)``,
so the pruned graph keeps the original clause count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .analytics import (
    DEFAULT_CAP_SOS_BITS,
    K22Report,
    count_k22,
    degrees,
)
from .bounds import expected_degree
from .errors import ValidationError
from .graph import ClauseSystem
from .random_model import ModelParams

DEFAULT_SAFETY = 0.5


@dataclass(frozen=True)
class PruneStats:
    removed_low_degree: int
    removed_k22: int
    surviving_count: int
    surviving_average_degree: float
    removed_right: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "removed_low_degree": self.removed_low_degree,
            "removed_k22": self.removed_k22,
            "surviving_count": self.surviving_count,
            "surviving_average_degree": self.surviving_average_degree,
            "removed_right": self.removed_right,
        }


@dataclass(frozen=True)
class PrunedGraph:
    base: ClauseSystem
    surviving_left: list[int]
    threshold: int
    stats: PruneStats
    surviving_right: list[int] | None = field(default=None)

    @property
    def restricted(self) -> ClauseSystem:
        """The pruned clause system (same ``n``, left side cut to survivors)."""
        cs = self.base.restrict_left(self.surviving_left)
        if self.surviving_right is not None:
            cs = cs.restrict_right(self.surviving_right)
        return cs

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "surviving_left": list(self.surviving_left),
            "threshold": self.threshold,
            "stats": self.stats.to_dict(),
        }
        if self.surviving_right is not None:
            doc["surviving_right"] = list(self.surviving_right)
        return doc


def prune(cs: ClauseSystem, threshold: int, report: K22Report | None = None,
          prune_right: bool = False, cap_sos_bits: int = DEFAULT_CAP_SOS_BITS) -> PrunedGraph:
    """Keep left vertices with degree ``>= threshold`` and no K_{2,2} participation.

    A vertex failing both tests is counted once, under low degree. With
    ``prune_right`` the right vertices in some K_{2,2} are dropped as well
    (degree threshold applies to the left side only).
    """
    if threshold < 0:
        raise ValidationError("threshold must be nonnegative")
    if report is None:
        report = count_k22(cs, cap_sos_bits=cap_sos_bits)
    deg = degrees(cs, cap_sos_bits=cap_sos_bits)
    low = deg < threshold
    in_k22 = report.left_participation > 0
    keep = ~low & ~in_k22
    surviving = np.flatnonzero(keep).tolist()

    surviving_right = None
    removed_right = 0
    if prune_right:
        rkeep = report.right_participation == 0
        surviving_right = np.flatnonzero(rkeep).tolist()
        removed_right = cs.n_right - len(surviving_right)
        sub = cs.restrict_left(surviving).restrict_right(surviving_right)
        avg = float(degrees(sub).mean()) if surviving else 0.0
    else:
        avg = float(deg[keep].mean()) if surviving else 0.0

    stats = PruneStats(
        removed_low_degree=int(low.sum()),
        removed_k22=int((~low & in_k22).sum()),
        surviving_count=len(surviving),
        surviving_average_degree=avg,
        removed_right=removed_right,
    )
    return PrunedGraph(cs, surviving, int(threshold), stats, surviving_right)


def default_threshold(params: ModelParams, safety: float = DEFAULT_SAFETY) -> int:
    """``floor(safety * expected degree)`` for the parameters' clause count."""
    if not 0 < safety <= 1:
        raise ValidationError(f"safety must lie in (0, 1], got {safety}")
    return math.floor(safety * expected_degree(params.n_right, params.p, params.clause_count))
