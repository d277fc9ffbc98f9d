"""Position laws of the asymmetric telegraph process at a fixed time.

The unconditional position has an absolutely continuous part on
(-c2*t, c1*t) plus masses exp(-rate*t)/2 on each endpoint (the particle
never reversed).  Conditional on the reversal count the laws are Beta
kernels in (c1*t - x) and (c2*t + x); odd counts forget the starting
direction.  A shifted frame x -> x + (c2-c1)*t/2 turns every law into
its equal-speed counterpart.
"""

from __future__ import annotations

import math

from .errors import DomainError
from .params import LawValue, MotionParams, Velocity
from .special import DEFAULT_SERIES, SeriesConfig, bessel_series_scaled, log_gamma


def _support_open(p: MotionParams, t: float, x: float) -> None:
    if t <= 0.0:
        raise DomainError("horizon t must be positive")
    if not -p.c2 * t < x < p.c1 * t:
        raise DomainError(
            f"x must lie strictly inside (-c2*t, c1*t) = ({-p.c2 * t}, {p.c1 * t});"
            " endpoint masses come from position_atoms"
        )


def position_pdf(p: MotionParams, t: float, x: float,
                 cfg: SeriesConfig = DEFAULT_SERIES) -> LawValue:
    """Density of the position on the open support.

    Built from I_0 and its space/time derivatives; the derivative terms
    reduce to I_1 of the same argument via the chain rule, and are summed
    in the fused form I_1(2a sqrt(w))/sqrt(w), which stays finite at the
    support edges.  Integrates to 1 - exp(-rate*t).
    """
    _support_open(p, t, x)
    w = (p.c1 * t - x) * (p.c2 * t + x)
    a = p.rate / p.speed_sum
    s0 = bessel_series_scaled(0, a, w, cfg)
    s1 = bessel_series_scaled(1, a, w, cfg)
    damp = math.exp(-p.rate * t)
    value = damp * (p.rate / p.speed_sum * s0.value + p.rate * t / 2.0 * s1.value)
    bound = damp * (p.rate / p.speed_sum * s0.tail_bound
                    + p.rate * t / 2.0 * s1.tail_bound)
    return LawValue(value, bound + 4e-16 * abs(value))


def position_atoms(p: MotionParams, t: float) -> tuple[float, float]:
    """Masses at x = -c2*t and x = c1*t; both equal exp(-rate*t)/2."""
    if t <= 0.0:
        raise DomainError("horizon t must be positive")
    atom = math.exp(-p.rate * t) / 2.0
    return atom, atom


def position_pdf_given_count(p: MotionParams, t: float, x: float, n: int,
                             v0: Velocity | None = None) -> LawValue:
    """Density of the position given exactly n reversals.

    Odd n is independent of the starting direction.  Even n needs v0 to
    pick the asymmetric kernel; with v0=None the two starts are averaged,
    which also equals the law for n-1 reversals.
    """
    if t <= 0.0:
        raise DomainError("horizon t must be positive")
    if n < 1:
        raise DomainError("reversal count n must be >= 1")
    if not -p.c2 * t <= x <= p.c1 * t:
        raise DomainError("x must lie in [-c2*t, c1*t]")
    A = p.c1 * t - x
    B = p.c2 * t + x
    D = p.speed_sum * t
    if n % 2 == 1:
        k = (n - 1) // 2
        coeff = math.factorial(2 * k + 1) / math.factorial(k) ** 2
        return LawValue(coeff * A ** k * B ** k / D ** (2 * k + 1), 0.0)
    k = n // 2
    if v0 is None:
        coeff = math.factorial(2 * k - 1) / math.factorial(k - 1) ** 2
        return LawValue(coeff * A ** (k - 1) * B ** (k - 1) / D ** (2 * k - 1), 0.0)
    coeff = math.factorial(2 * k) / (math.factorial(k) * math.factorial(k - 1))
    if v0 is Velocity.PLUS:
        kernel = A ** (k - 1) * B ** k
    else:
        kernel = A ** k * B ** (k - 1)
    return LawValue(coeff * kernel / D ** (2 * k), 0.0)


def nonhomogeneous_position_pdf(p: MotionParams, alpha: float, t: float,
                                x: float) -> LawValue:
    """Position density when reversals follow the time-decaying rate alpha/t:

        Gamma(2a)/Gamma(a)^2 * (c1t-x)^(a-1) (c2t+x)^(a-1) / ((c1+c2)t)^(2a-1)

    A Beta law on the support; integrates to 1 exactly, with integrable
    endpoint singularities when alpha < 1.
    """
    if alpha <= 0.0:
        raise DomainError("rate exponent alpha must be positive")
    _support_open(p, t, x)
    coeff = math.exp(log_gamma(2.0 * alpha) - 2.0 * log_gamma(alpha))
    A = p.c1 * t - x
    B = p.c2 * t + x
    D = p.speed_sum * t
    value = coeff * A ** (alpha - 1.0) * B ** (alpha - 1.0) / D ** (2.0 * alpha - 1.0)
    return LawValue(value, 0.0)
