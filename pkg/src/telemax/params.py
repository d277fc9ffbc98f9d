"""Core value types: motion parameters, queries, and tagged law values."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError


class Velocity(Enum):
    """Initial direction of motion: PLUS runs at +c1, MINUS at -c2."""

    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class MotionParams:
    """Two-speed random motion on the line.

    c1 is the rightward speed, c2 the magnitude of the leftward speed, and
    rate the intensity of the Poisson process that reverses the velocity.
    The ratio c1/c2 is always derived, never stored.
    """

    c1: float
    c2: float
    rate: float = 0.0

    def __post_init__(self):
        if not (self.c1 > 0.0 and self.c2 > 0.0):
            raise DomainError("speeds c1 and c2 must be positive")
        if self.rate < 0.0:
            raise DomainError("reversal rate must be nonnegative")

    @property
    def velocity_ratio(self) -> float:
        return self.c1 / self.c2

    @property
    def speed_sum(self) -> float:
        return self.c1 + self.c2


@dataclass(frozen=True)
class LawValue:
    """A probability or density value with a certified absolute error bound.

    abs_error_bound is 0 for closed-form polynomial laws and carries the
    series/quadrature truncation bound otherwise.  Cumulative laws follow
    the convention of the operation that produced them: laws for a PLUS
    start are strict, P{max < beta} (atom at c1*t, none at 0); laws for a
    MINUS start are weak, P{max <= beta} (atom at 0, none at c1*t).
    """

    value: float
    abs_error_bound: float = 0.0

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class MaxQuery:
    """Query for the law of the running maximum on [0, t].

    count=None asks for the unconditional law, count=n conditions on
    exactly n velocity reversals.
    """

    t: float
    beta: float
    v0: Velocity
    count: int | None = None

    def __post_init__(self):
        if self.t <= 0.0:
            raise DomainError("horizon t must be positive")
        if self.count is not None and self.count < 1:
            raise DomainError("conditioning count must be >= 1")


@dataclass(frozen=True)
class PositionQuery:
    """Query for the position law at a fixed time."""

    t: float
    x: float

    def __post_init__(self):
        if self.t <= 0.0:
            raise DomainError("horizon t must be positive")
