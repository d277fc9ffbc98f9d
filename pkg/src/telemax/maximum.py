"""Closed-form laws of the running maximum of the asymmetric telegraph process.

Conditional on the number of velocity reversals the cumulative laws are
polynomials in beta; unconditionally they are series of modified Bessel
functions mixed over a Poisson count.  Conventions differ by starting
direction and are part of each operation's contract:

* PLUS start: strict law P{max < beta}.  No atom at 0; the event of zero
  reversals leaves an atom exp(-rate*t) at beta = c1*t.
* MINUS start: weak law P{max <= beta}.  An atom sits at beta = 0 (the
  path may never climb back to the origin); there is none at c1*t.

Conditional laws do not depend on the reversal rate; the atom at 0 given
the count depends only on the ratio c1/c2.  All polynomial evaluations
use exact binomial coefficients, converting to float only at the final
multiply, and compensated summation of the signed terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.optimize import minimize_scalar

from .errors import DomainError, SeriesTruncationError
from .params import LawValue, MaxQuery, MotionParams, Velocity
from .special import (
    DEFAULT_SERIES,
    SeriesConfig,
    bessel_series_scaled,
    binomial,
)


def _edge_factors(p: MotionParams, t: float, beta: float):
    """Validate the query and return (c1*t - beta, c2*t + beta, (c1+c2)*t)."""
    if t <= 0.0:
        raise DomainError("horizon t must be positive")
    if not 0.0 <= beta <= p.c1 * t:
        raise DomainError(f"beta must lie in [0, c1*t] = [0, {p.c1 * t}]")
    return p.c1 * t - beta, p.c2 * t + beta, p.speed_sum * t


def _check_count(n: int) -> None:
    if n < 1:
        raise DomainError("reversal count n must be >= 1")


# --------------------------------------------------------------------------
# Laws conditional on the reversal count, PLUS start
# --------------------------------------------------------------------------

def _plus_cdf_terms(p: MotionParams, t: float, beta: float, n: int) -> list[float]:
    """Per-j summands of the unified strict CDF; each one is nonnegative."""
    A, B, D = _edge_factors(p, t, beta)
    rho = p.c2 / p.c1
    scale = D ** n
    terms = []
    for j in range(0, (n - 1) // 2 + 1):
        coeff = float(binomial(n, j))
        pos = A ** j * B ** (n - j)
        neg = rho ** (n - 2 * j) * A ** (n - j) * B ** j
        terms.append(coeff * (pos - neg) / scale)
    return terms


def _plus_cdf_even(p: MotionParams, t: float, beta: float, k: int) -> float:
    """Even-count instance (n = 2k): the sum runs over j = 0 .. k-1."""
    A, B, D = _edge_factors(p, t, beta)
    rho = p.c2 / p.c1
    n = 2 * k
    terms = [
        float(binomial(n, j))
        * (A ** j * B ** (n - j) - rho ** (n - 2 * j) * A ** (n - j) * B ** j)
        for j in range(k)
    ]
    return math.fsum(terms) / D ** n


def _plus_cdf_odd(p: MotionParams, t: float, beta: float, k: int) -> float:
    """Odd-count instance (n = 2k+1): the sum runs over j = 0 .. k."""
    A, B, D = _edge_factors(p, t, beta)
    rho = p.c2 / p.c1
    n = 2 * k + 1
    terms = [
        float(binomial(n, j))
        * (A ** j * B ** (n - j) - rho ** (n - 2 * j) * A ** (n - j) * B ** j)
        for j in range(k + 1)
    ]
    return math.fsum(terms) / D ** n


def max_cdf_plus_count(p: MotionParams, t: float, beta: float, n: int) -> LawValue:
    """P{max < beta | V(0) = +c1, N(t) = n}, exact polynomial in beta.

    Independent of the reversal rate; 0 at beta = 0 and 1 at beta = c1*t.
    """
    _check_count(n)
    return LawValue(math.fsum(_plus_cdf_terms(p, t, beta, n)), 0.0)


def max_pdf_plus_count(p: MotionParams, t: float, beta: float, n: int) -> LawValue:
    """Density of the maximum on (0, c1*t) given a PLUS start and N(t) = n.

    Endpoint evaluations return the one-sided limits of the polynomial.
    Its integral over (0, c1*t) is 1: the conditional law has no atoms.
    """
    _check_count(n)
    A, B, D = _edge_factors(p, t, beta)
    rho = p.c2 / p.c1
    inv_sq = (p.c1 / p.c2) ** 2
    terms: list[float] = []
    if n % 2 == 0:
        k = n // 2
        lead = float(binomial(2 * k, k) * k)
        terms.append(lead * A ** (k - 1) * B ** k)
        terms.append(lead * rho ** 2 * A ** k * B ** (k - 1))
        for j in range(k - 1):
            coeff = float(binomial(2 * k - 1, j) * 2 * k)
            terms.append((1.0 - inv_sq) * coeff * rho ** (2 * k - 2 * j)
                         * A ** (2 * k - 1 - j) * B ** j)
    else:
        k = (n - 1) // 2
        lead = float(binomial(2 * k + 1, k) * (k + 1))
        terms.append((1.0 + rho) * lead * A ** k * B ** k)
        for j in range(k):
            coeff = float(binomial(2 * k, j) * (2 * k + 1))
            terms.append((1.0 - inv_sq) * coeff * rho ** (2 * k + 1 - 2 * j)
                         * A ** (2 * k - j) * B ** j)
    return LawValue(math.fsum(terms) / D ** n, 0.0)


# --------------------------------------------------------------------------
# Laws conditional on the reversal count, MINUS start
# --------------------------------------------------------------------------

def max_cdf_minus_count(p: MotionParams, t: float, beta: float, n: int) -> LawValue:
    """P{max <= beta | V(0) = -c2, N(t) = n}, exact polynomial in beta.

    The weak inequality makes the value at beta = 0 equal to the atom
    zero_mass_count(p, n); at beta = c1*t the value is 1.
    """
    _check_count(n)
    A, B, D = _edge_factors(p, t, beta)
    rho = p.c2 / p.c1
    k = n // 2
    terms = [float(binomial(n, j)) * A ** j * B ** (n - j) for j in range(k + 1)]
    terms += [
        -float(binomial(n, j)) * rho ** (n - 1 - 2 * j) * A ** (n - j) * B ** j
        for j in range(k)
    ]
    return LawValue(math.fsum(terms) / D ** n, 0.0)


def max_pdf_minus_count(p: MotionParams, t: float, beta: float, n: int) -> LawValue:
    """Density of the absolutely continuous part on (0, c1*t), MINUS start.

    Integrates to 1 - zero_mass_count(p, n); the missing mass is the atom
    at beta = 0.
    """
    _check_count(n)
    A, B, D = _edge_factors(p, t, beta)
    rho = p.c2 / p.c1
    inv_sq = (p.c1 / p.c2) ** 2
    terms: list[float] = []
    if n % 2 == 0:
        k = n // 2
        lead = float(binomial(2 * k, k) * k)
        terms.append((1.0 + rho) * lead * A ** k * B ** (k - 1))
        for j in range(k - 1):
            coeff = float(binomial(2 * k - 1, j) * 2 * k)
            terms.append((1.0 - inv_sq) * coeff * rho ** (2 * k - 1 - 2 * j)
                         * A ** (2 * k - 1 - j) * B ** j)
    else:
        k = (n - 1) // 2
        lead = float(binomial(2 * k + 1, k) * (k + 1))
        terms.append(lead * A ** k * B ** k)
        if k >= 1:
            second = float(binomial(2 * k + 1, k + 1) * k)
            terms.append(rho ** 2 * second * A ** (k + 1) * B ** (k - 1))
        for j in range(k - 1):
            coeff = float(binomial(2 * k, j) * (2 * k + 1))
            terms.append((1.0 - inv_sq) * coeff * rho ** (2 * k - 2 * j)
                         * A ** (2 * k - j) * B ** j)
    return LawValue(math.fsum(terms) / D ** n, 0.0)


def zero_mass_count_exact(c1, c2, n: int) -> Fraction:
    """Atom P{max = 0 | V(0) = -c2, N(t) = n} in exact rational arithmetic.

    Accepts ints, Fractions, or floats (floats convert exactly).  The
    value ignores t and the rate and is invariant under scaling both
    speeds; consecutive counts 2k-1 and 2k share the same atom.
    """
    _check_count(n)
    a = Fraction(c1)
    b = Fraction(c2)
    total = Fraction(0)
    for j in range(n // 2 + 1):
        total += (binomial(n, j) - binomial(n, j - 1)) * a ** j * b ** (n - j)
    return total / (a + b) ** n


def zero_mass_count(p: MotionParams, n: int) -> LawValue:
    """Atom of the maximum at 0 given a MINUS start and N(t) = n reversals."""
    return LawValue(float(zero_mass_count_exact(p.c1, p.c2, n)), 0.0)


def a_triangle(k: int) -> list[int]:
    """Row k of the integer triangle behind the odd-count atom formula.

    Row k holds A_0 .. A_k with A_0 = 1, interior entries the prefix sums
    of the previous row, and the last entry repeating its neighbour.  The
    diagonal is the Catalan sequence.  Python integers are unbounded, so
    no row is out of reach.
    """
    if k < 0:
        raise DomainError("row index k must be >= 0")
    row = [1]
    for _ in range(k):
        prefix = []
        acc = 0
        for value in row:
            acc += value
            prefix.append(acc)
        prefix.append(prefix[-1])
        row = prefix
    return row


def zero_mass_count_from_triangle(p: MotionParams, n: int) -> LawValue:
    """Atom at 0 for odd n = 2k+1 via the triangle expansion.

    Cross-check route for zero_mass_count; only defined for odd counts.
    """
    _check_count(n)
    if n % 2 == 0:
        raise DomainError("triangle form applies to odd reversal counts")
    k = (n - 1) // 2
    row = a_triangle(k)
    u = p.c1 / p.speed_sum
    v = p.c2 / p.speed_sum
    total = math.fsum(float(row[j]) * u ** j for j in range(k + 1))
    return LawValue(v ** (k + 1) * total, 0.0)


# --------------------------------------------------------------------------
# Unconditional laws: Bessel series over the reversal count
# --------------------------------------------------------------------------

def _exp_tail(mu: float, last: int) -> float:
    """Upper bound for sum_{r > last} mu^r / r!."""
    if mu <= 0.0:
        return 0.0
    nxt = last + 1
    if mu >= nxt + 1:
        return math.inf
    lead = math.exp(nxt * math.log(mu) - math.lgamma(nxt + 1))
    return lead / (1.0 - mu / (nxt + 1))


def _inner_cfg(cfg: SeriesConfig, multiplier: float) -> SeriesConfig:
    tol = cfg.tail_tolerance * 1e-3 / (multiplier + 1.0)
    return SeriesConfig(max(tol, 5e-324), cfg.max_terms)


def max_point_mass_plus(p: MotionParams, t: float) -> LawValue:
    """Atom P{max = c1*t | V(0) = +c1} = exp(-rate*t): no reversal occurs."""
    if t <= 0.0:
        raise DomainError("horizon t must be positive")
    return LawValue(math.exp(-p.rate * t), 0.0)


def max_cdf_plus_unconditional(p: MotionParams, t: float, beta: float,
                               cfg: SeriesConfig = DEFAULT_SERIES) -> LawValue:
    """P{max < beta | V(0) = +c1} as a certified Bessel series.

    Each order-r term is evaluated with the ratio powers fused into the
    series (no 0 * inf at beta = c1*t); the reported bound covers both
    the truncated orders and the inner truncations.
    """
    A, B, D = _edge_factors(p, t, beta)
    q = p.rate / p.speed_sum
    rho = p.c2 / p.c1
    damp = math.exp(-p.rate * t)
    grow = math.exp(q * q * A * B)
    terms: list[float] = []
    inner_acc = 0.0
    for r in range(1, cfg.max_terms + 1):
        mult = B ** r + (rho * A) ** r
        s = bessel_series_scaled(r, q, A * B, _inner_cfg(cfg, mult))
        terms.append(s.value * (B ** r - (rho * A) ** r))
        inner_acc += s.tail_bound * mult
        outer = grow * (_exp_tail(q * B, r) + _exp_tail(q * rho * A, r))
        if damp * (outer + inner_acc) <= cfg.tail_tolerance:
            value = damp * math.fsum(terms)
            bound = damp * (outer + inner_acc) + 4e-16 * abs(value)
            return LawValue(value, bound)
    raise _series_failure("plus unconditional CDF", cfg)


def max_cdf_minus_unconditional(p: MotionParams, t: float, beta: float,
                                cfg: SeriesConfig = DEFAULT_SERIES) -> LawValue:
    """P{max <= beta | V(0) = -c2} as a certified difference of Bessel series."""
    A, B, D = _edge_factors(p, t, beta)
    q = p.rate / p.speed_sum
    rho = p.c2 / p.c1
    damp = math.exp(-p.rate * t)
    grow = math.exp(q * q * A * B)
    s0 = bessel_series_scaled(0, q, A * B, _inner_cfg(cfg, 1.0))
    terms = [s0.value]
    inner_acc = s0.tail_bound
    for r in range(1, cfg.max_terms + 1):
        mult = B ** r + (rho * A) ** r / rho
        s = bessel_series_scaled(r, q, A * B, _inner_cfg(cfg, mult))
        terms.append(s.value * B ** r)
        if r >= 2:
            terms.append(-s.value * (rho * A) ** r / rho)
        inner_acc += s.tail_bound * mult
        outer = grow * (_exp_tail(q * B, r) + _exp_tail(q * rho * A, r) / rho)
        if damp * (outer + inner_acc) <= cfg.tail_tolerance:
            value = damp * math.fsum(terms)
            bound = damp * (outer + inner_acc) + 4e-16 * abs(value)
            return LawValue(value, bound)
    raise _series_failure("minus unconditional CDF", cfg)


def zero_mass_unconditional(p: MotionParams, t: float,
                            cfg: SeriesConfig = DEFAULT_SERIES) -> LawValue:
    """Atom P{max = 0 | V(0) = -c2} of the unconditional law.

    Depends on the speeds only through their ratio; every Bessel argument
    is 2*rate*t*sqrt(c1*c2)/(c1+c2).
    """
    if t <= 0.0:
        raise DomainError("horizon t must be positive")
    A = p.c1 * t
    B = p.c2 * t
    q = p.rate / p.speed_sum
    coeff = 1.0 - p.c1 / p.c2
    damp = math.exp(-p.rate * t)
    grow = math.exp(q * q * A * B)
    s0 = bessel_series_scaled(0, q, A * B, _inner_cfg(cfg, 1.0))
    s1 = bessel_series_scaled(1, q, A * B, _inner_cfg(cfg, B))
    terms = [s0.value, B * s1.value]
    inner_acc = s0.tail_bound + B * s1.tail_bound
    for r in range(2, cfg.max_terms + 1):
        mult = abs(coeff) * B ** r
        s = bessel_series_scaled(r, q, A * B, _inner_cfg(cfg, mult))
        terms.append(coeff * s.value * B ** r)
        inner_acc += s.tail_bound * mult
        outer = grow * abs(coeff) * _exp_tail(q * B, r)
        if damp * (outer + inner_acc) <= cfg.tail_tolerance:
            value = damp * math.fsum(terms)
            bound = damp * (outer + inner_acc) + 4e-16 * abs(value)
            return LawValue(value, bound)
    raise _series_failure("unconditional atom at 0", cfg)


def minus_plus_cdf_gap(p: MotionParams, t: float, beta: float,
                       cfg: SeriesConfig = DEFAULT_SERIES) -> LawValue:
    """P{max <= beta | MINUS start} - P{max < beta | PLUS start}, directly.

    Evaluated from its own series rather than by subtraction; when
    c2 >= c1 every term is nonnegative, so the gap is strictly positive
    on the whole support.
    """
    A, B, D = _edge_factors(p, t, beta)
    q = p.rate / p.speed_sum
    rho = p.c2 / p.c1
    coeff = 1.0 - p.c1 / p.c2
    damp = math.exp(-p.rate * t)
    grow = math.exp(q * q * A * B)
    s0 = bessel_series_scaled(0, q, A * B, _inner_cfg(cfg, 1.0))
    s1 = bessel_series_scaled(1, q, A * B, _inner_cfg(cfg, rho * A))
    terms = [s0.value, rho * A * s1.value]
    inner_acc = s0.tail_bound + rho * A * s1.tail_bound
    for r in range(2, cfg.max_terms + 1):
        mult = abs(coeff) * (rho * A) ** r
        s = bessel_series_scaled(r, q, A * B, _inner_cfg(cfg, mult))
        terms.append(coeff * s.value * (rho * A) ** r)
        inner_acc += s.tail_bound * mult
        outer = grow * abs(coeff) * _exp_tail(q * rho * A, r)
        if damp * (outer + inner_acc) <= cfg.tail_tolerance:
            value = damp * math.fsum(terms)
            bound = damp * (outer + inner_acc) + 4e-16 * abs(value)
            return LawValue(value, bound)
    raise _series_failure("initial-velocity CDF gap", cfg)


def _series_failure(label: str, cfg: SeriesConfig):
    return SeriesTruncationError(
        f"{label} did not reach tail {cfg.tail_tolerance} within"
        f" {cfg.max_terms} orders"
    )


# --------------------------------------------------------------------------
# Symmetric-speed extras
# --------------------------------------------------------------------------

def symmetric_cdf_generating_function(c: float, t: float, beta: float,
                                      u: float) -> float:
    """Generating function over k of the odd-count strict CDFs, equal speeds:

        sum_k u^k P{max < beta | V(0) = +c, N(t) = 2k+1}
            = beta / ((1-u) sqrt(c^2 t^2 - u (c^2 t^2 - beta^2))).
    """
    if c <= 0.0 or t <= 0.0:
        raise DomainError("c and t must be positive")
    if not 0.0 <= beta <= c * t:
        raise DomainError("beta must lie in [0, c*t]")
    if not abs(u) < 1.0:
        raise DomainError("generating variable must satisfy |u| < 1")
    ct2 = (c * t) ** 2
    return beta / ((1.0 - u) * math.sqrt(ct2 - u * (ct2 - beta ** 2)))


# --------------------------------------------------------------------------
# Density peaks for three reversals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PdfPeak:
    """Numerically located mode of a three-reversal maximum density.

    candidates holds closed-form locations for the mode; matches is the
    index of the candidate the numeric argmax agrees with (or None).
    """

    beta: float
    density: float
    candidates: tuple[float, ...]
    matches: int | None


def _locate_peak(pdf, hi: float, candidates: tuple[float, ...],
                 tol: float = 1e-6) -> PdfPeak:
    res = minimize_scalar(lambda b: -pdf(b), bounds=(0.0, hi),
                          method="bounded", options={"xatol": 1e-12})
    beta = float(res.x)
    matches = None
    for i, cand in enumerate(candidates):
        if math.isfinite(cand) and abs(beta - cand) <= tol:
            matches = i
            break
    return PdfPeak(beta, pdf(beta), candidates, matches)


def pdf_peak_plus_n3(p: MotionParams, t: float) -> PdfPeak:
    """Mode of the three-reversal density, PLUS start.

    The interior mode sits at c1*(c1-c2)*t/(2*c1-c2) whenever that point
    lies inside the support; otherwise the density decreases from beta=0.
    """
    cand = p.c1 * (p.c1 - p.c2) * t / (2.0 * p.c1 - p.c2) \
        if 2.0 * p.c1 != p.c2 else math.nan
    return _locate_peak(lambda b: max_pdf_plus_count(p, t, b, 3).value,
                        p.c1 * t, (cand,))


def pdf_peak_minus_n3(p: MotionParams, t: float) -> PdfPeak:
    """Mode of the three-reversal density, MINUS start.

    Two inequivalent closed-form candidates exist for this mode; the
    numeric argmax of the density decides which one is right (the second
    one, c1*t*(1 + c1*(c1+c2)/(c2^2 - 2*c1^2)), wherever it is defined).
    """
    cand_a = p.c1 * t * (p.c1 ** 2 - p.c2 ** 2 - p.c1 * p.c2) / (2.0 * p.c1 - p.c2) \
        if 2.0 * p.c1 != p.c2 else math.nan
    denom = p.c2 ** 2 - 2.0 * p.c1 ** 2
    cand_b = p.c1 * t * (1.0 + p.c1 * p.speed_sum / denom) \
        if denom != 0.0 else math.nan
    return _locate_peak(lambda b: max_pdf_minus_count(p, t, b, 3).value,
                        p.c1 * t, (cand_a, cand_b))


# --------------------------------------------------------------------------
# Query dispatch
# --------------------------------------------------------------------------

def max_cdf(p: MotionParams, query: MaxQuery,
            cfg: SeriesConfig = DEFAULT_SERIES) -> LawValue:
    """Cumulative law of the maximum for an arbitrary MaxQuery."""
    if query.count is None:
        if query.v0 is Velocity.PLUS:
            return max_cdf_plus_unconditional(p, query.t, query.beta, cfg)
        return max_cdf_minus_unconditional(p, query.t, query.beta, cfg)
    if query.v0 is Velocity.PLUS:
        return max_cdf_plus_count(p, query.t, query.beta, query.count)
    return max_cdf_minus_count(p, query.t, query.beta, query.count)


def max_pdf(p: MotionParams, query: MaxQuery) -> LawValue:
    """Density of the maximum; defined for count-conditioned queries only."""
    if query.count is None:
        raise DomainError("the unconditional maximum has no plain density;"
                          " query the CDF and point masses instead")
    if query.v0 is Velocity.PLUS:
        return max_pdf_plus_count(p, query.t, query.beta, query.count)
    return max_pdf_minus_count(p, query.t, query.beta, query.count)
