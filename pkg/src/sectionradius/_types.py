"""Value types shared across modules, from the order parameter alpha to oracle reports."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

BRANCH_EPS = 1e-9


class Branch(enum.Enum):
    MINUS_HALF = "minus-half"
    ZERO = "zero"
    HALF = "half"
    GENERAL = "general"


@dataclass(frozen=True)
class AlphaOrder:
    """Order alpha of convexity for the analytic part, with its formula branch.

    The closed forms carry removable singularities at alpha = 0 and 1/2, so
    each value is tagged with the branch its evaluation should take.
    """

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if not math.isfinite(v) or v < -0.5 - BRANCH_EPS or v >= 1.0:
            raise ValueError(f"alpha must lie in [-1/2, 1), got {self.value!r}")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, alpha: "float | AlphaOrder") -> "AlphaOrder":
        return alpha if isinstance(alpha, AlphaOrder) else cls(alpha)

    @property
    def branch(self) -> Branch:
        v = self.value
        if abs(v) < BRANCH_EPS:
            return Branch.ZERO
        if abs(v - 0.5) < BRANCH_EPS:
            return Branch.HALF
        if abs(v + 0.5) < BRANCH_EPS:
            return Branch.MINUS_HALF
        return Branch.GENERAL

    def require_nonnegative(self) -> None:
        # distortion and extremal formulas are only stated for 0 <= alpha < 1
        if self.value < 0 and self.branch is not Branch.ZERO:
            raise ValueError(f"alpha must lie in [0, 1) here, got {self.value}")


def check_radius(r: float, name: str = "r") -> float:
    r = float(r)
    if not (0.0 < r < 1.0):
        raise ValueError(f"{name} must lie in the open interval (0, 1), got {r!r}")
    return r


@dataclass
class ViolationReport:
    """Outcome of a verification oracle.

    ``worst_margin`` is the minimum of (tested quantity - required bound) over
    every sample; ``witnesses`` holds at most ten violating inputs, worst first.
    """

    samples: int
    violations: int
    worst_margin: float
    witnesses: list[tuple] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    MAX_WITNESSES = 10

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def as_dict(self) -> dict[str, Any]:
        return {
            "samples": self.samples,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "witnesses": [list(w) for w in self.witnesses],
            **self.details,
        }


def collect_witnesses(margins, inputs) -> list[tuple]:
    """Sorted (worst first) and truncated witness list for negative margins."""
    bad = [(m, x) for m, x in zip(margins, inputs) if m < 0]
    bad.sort(key=lambda item: item[0])
    return [tuple(x) for _, x in bad[: ViolationReport.MAX_WITNESSES]]
