"""Series-based special functions with certified truncation bounds.

Exact binomial coefficients, the modified Bessel function of the first
kind I_r summed from its power series, and a scaled variant of that
series that keeps endpoint factors fused.  The fused form is what the
maximum laws evaluate: their terms pair I_r against ratio powers that
individually blow up at the support edges, while the fused series stays
finite everywhere.

All sums here have nonnegative terms, so the geometric bound from the
term ratio is a rigorous absolute tail bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, DomainError, SeriesTruncationError

#: Largest n for which exact binomial coefficients are served.
MAX_EXACT_N = 64


@dataclass(frozen=True)
class SeriesConfig:
    """Truncation policy for infinite series.

    Every series evaluation either certifies an absolute tail bound no
    larger than tail_tolerance or raises SeriesTruncationError once
    max_terms have been consumed.
    """

    tail_tolerance: float = 1e-12
    max_terms: int = 10_000

    def __post_init__(self):
        if self.tail_tolerance <= 0.0:
            raise DomainError("tail_tolerance must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")


DEFAULT_SERIES = SeriesConfig()


@dataclass(frozen=True)
class SeriesResult:
    """Partial sum of a convergent series plus its certified tail bound."""

    value: float
    tail_bound: float
    terms: int = 0


def binomial(n: int, j: int) -> int:
    """C(n, j) as an exact integer, with C(n, j) = 0 for j < 0 or j > n.

    The out-of-range convention is what the maximum laws rely on when a
    difference C(n, j) - C(n, j-1) starts at j = 0.
    """
    if n < 0:
        raise DomainError("binomial requires n >= 0")
    if n > MAX_EXACT_N:
        raise CapacityError(f"binomial supports n <= {MAX_EXACT_N}, got {n}")
    if j < 0 or j > n:
        return 0
    return math.comb(n, j)


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0."""
    if x <= 0.0:
        raise DomainError("log_gamma requires x > 0")
    return math.lgamma(x)


def bessel_series_scaled(r: int, a: float, w: float,
                         cfg: SeriesConfig = DEFAULT_SERIES) -> SeriesResult:
    """Sum_{j>=0} a^(2j+r) w^j / (j! (j+r)!).

    Equals I_r(2 a sqrt(w)) / w^(r/2) for w > 0 and stays finite at
    w = 0, where the unscaled factorisation would read 0 * inf.  Terms
    are nonnegative; once the term ratio a^2 w / ((j+1)(j+r+1)) drops
    below 1/2 the remaining tail is bounded geometrically.
    """
    if r < 0:
        raise DomainError("order r must be a nonnegative integer")
    if a < 0.0 or w < 0.0:
        raise DomainError("scaled Bessel series needs a >= 0 and w >= 0")
    if a == 0.0:
        return SeriesResult(1.0 if r == 0 else 0.0, 0.0, 1)

    log_t0 = r * math.log(a) - math.lgamma(r + 1)
    if log_t0 < -745.0:
        # First term underflows; the whole sum is below t0 * e^(a^2 w).
        bound = math.exp(min(log_t0 + a * a * w, -700.0))
        return SeriesResult(0.0, bound, 0)

    term = math.exp(log_t0)
    total = term
    aw = a * a * w
    for j in range(cfg.max_terms):
        ratio = aw / ((j + 1) * (j + r + 1))
        if ratio < 0.5:
            tail = term * ratio / (1.0 - ratio)
            if tail <= cfg.tail_tolerance:
                return SeriesResult(total, tail, j + 1)
        term *= ratio
        total += term
    raise SeriesTruncationError(
        f"scaled Bessel series (r={r}) did not reach tail {cfg.tail_tolerance}"
        f" within {cfg.max_terms} terms",
        partial=total,
        bound=term,
    )


def bessel_i(r: int, x: float, cfg: SeriesConfig = DEFAULT_SERIES) -> SeriesResult:
    """Modified Bessel function of the first kind and integer order r >= 0,

        I_r(x) = sum_{j>=0} (x/2)^(2j+r) / (j! (j+r)!),   x >= 0,

    with a certified absolute tail bound.
    """
    if x < 0.0:
        raise DomainError("bessel_i requires x >= 0")
    return bessel_series_scaled(r, x / 2.0, 1.0, cfg)
