"""Finite-difference residual checks for the governing hyperbolic equations.

Each closed-form law in this package is annihilated by a second-order
operator of Euler-Poisson-Darboux type,

    L[u] = u_tt - c1 c2 u_xx + (c1 - c2) u_xt + a_t(t) u_t
           + a_x(t) u_x + a_0(t) u,

where the lower-order coefficients depend on the family.  These checks
assemble L with second-order central differences (4-point cross stencil
for the mixed term) at a sequence of halved steps; the residual of a true
solution must shrink like h^2 until the roundoff floor.

Families:
  G          plain product (c1 t - x)^m (c2 t + x)^n
  H          the product divided by t^(m+n+1) (normalised Beta kernels)
  K          the product divided by t^(m+n+r), one extra zeroth-order term;
             reduces exactly to H at r = 1 and to G at r = -(m+n)
  TELEGRAPH  the constant-rate position density
  NONHOM     the alpha/t-rate position density
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable

from .errors import DomainError
from .params import MotionParams
from .position import nonhomogeneous_position_pdf, position_pdf
from .special import SeriesConfig


class Family(Enum):
    G = "G"
    H = "H"
    K = "K"
    TELEGRAPH = "telegraph"
    NONHOM = "nonhom"


@dataclass(frozen=True)
class EpdSpec:
    """Selects one operator/solution pair to residual-check."""

    family: Family
    m: float = 1.0
    n: float = 1.0
    r: float = 0.0
    alpha: float | None = None

    def __post_init__(self):
        if self.family in (Family.G, Family.H, Family.K):
            if self.m <= 0.0 or self.n <= 0.0:
                raise DomainError("exponents m, n must be positive")
        if self.family is Family.NONHOM:
            if self.alpha is None or self.alpha <= 0.0:
                raise DomainError("NONHOM requires alpha > 0")


@dataclass(frozen=True)
class GridSpec:
    """Stencil location: centre (x0, t0), coarsest step h, halvings."""

    x0: float
    t0: float
    h: float
    levels: int = 3

    def __post_init__(self):
        if self.h <= 0.0:
            raise DomainError("step h must be positive")
        if self.levels < 2:
            raise DomainError("need at least 2 refinement levels")

    def steps(self) -> list[float]:
        return [self.h / 2 ** i for i in range(self.levels)]


@dataclass(frozen=True)
class ResidualStudy:
    """Residual magnitudes per refinement level plus roundoff estimates.

    ratios[i] compares level i to level i+1 (4 means clean second order);
    floor[i] estimates where roundoff noise sits at that step, so levels
    with residual near the floor should not be ratio-tested.
    """

    steps: list[float]
    residuals: list[float]
    floor: list[float]
    ratios: list[float] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "ratios", [
            self.residuals[i] / self.residuals[i + 1]
            if self.residuals[i + 1] != 0.0 else math.inf
            for i in range(len(self.residuals) - 1)
        ])

    def trusted_ratios(self, margin: float = 30.0) -> list[float]:
        """Ratios between consecutive levels that both sit above roundoff."""
        out = []
        for i in range(len(self.residuals) - 1):
            if (self.residuals[i] > margin * self.floor[i]
                    and self.residuals[i + 1] > margin * self.floor[i + 1]):
                out.append(self.ratios[i])
        return out

    def second_order(self, lo: float = 3.5, hi: float = 4.5) -> bool:
        ratios = self.trusted_ratios()
        return bool(ratios) and all(lo <= r <= hi for r in ratios)


# --------------------------------------------------------------------------
# Operator assembly
# --------------------------------------------------------------------------

def _product_solution(p: MotionParams, m: float, n: float, s: float):
    def u(x, t):
        return (p.c1 * t - x) ** m * (p.c2 * t + x) ** n / t ** s
    return u


def _family_parts(spec: EpdSpec, p: MotionParams,
                  cfg: SeriesConfig) -> tuple[Callable, Callable, Callable, Callable]:
    """Return (solution u, a_t(t), a_x(t), a_0(t)) for the chosen family."""
    m, n, r = spec.m, spec.n, spec.r
    drift = p.c1 * m - p.c2 * n
    diff = p.c1 - p.c2
    if spec.family is Family.G:
        u = _product_solution(p, m, n, 0.0)
        return (u, lambda t: -(m + n) / t, lambda t: -drift / t, lambda t: 0.0)
    if spec.family is Family.H:
        u = _product_solution(p, m, n, m + n + 1.0)
        return (u, lambda t: (m + n + 2.0) / t,
                lambda t: (diff * (m + n + 1.0) - drift) / t, lambda t: 0.0)
    if spec.family is Family.K:
        u = _product_solution(p, m, n, m + n + r)
        return (u, lambda t: (m + n + 2.0 * r) / t,
                lambda t: (diff * (m + n + r) - drift) / t,
                lambda t: -(m + n + r) * (1.0 - r) / t ** 2)
    if spec.family is Family.TELEGRAPH:
        def u(x, t):
            return position_pdf(p, t, x, cfg).value
        return (u, lambda t: 2.0 * p.rate, lambda t: p.rate * diff, lambda t: 0.0)
    # NONHOM: constant-rate operator with rate alpha/t
    alpha = spec.alpha

    def u(x, t):
        return nonhomogeneous_position_pdf(p, alpha, t, x).value
    return (u, lambda t: 2.0 * alpha / t, lambda t: alpha * diff / t, lambda t: 0.0)


def _check_stencil(p: MotionParams, x0: float, t0: float, h: float) -> None:
    for dx in (-h, 0.0, h):
        for dt in (-h, 0.0, h):
            x, t = x0 + dx, t0 + dt
            if t <= 0.0 or not -p.c2 * t < x < p.c1 * t:
                raise DomainError(
                    f"stencil point (x={x}, t={t}) leaves the open support")


def _operator_residual(u, a_t, a_x, a_0, p: MotionParams,
                       x: float, t: float, h: float) -> tuple[float, float]:
    """One residual evaluation; returns (|L_h[u]|, roundoff floor estimate)."""
    upp = u(x + h, t + h)
    upm = u(x + h, t - h)
    ump = u(x - h, t + h)
    umm = u(x - h, t - h)
    up0 = u(x + h, t)
    um0 = u(x - h, t)
    u0p = u(x, t + h)
    u0m = u(x, t - h)
    u00 = u(x, t)
    utt = (u0p - 2.0 * u00 + u0m) / h ** 2
    uxx = (up0 - 2.0 * u00 + um0) / h ** 2
    uxt = (upp - upm - ump + umm) / (4.0 * h ** 2)
    ut = (u0p - u0m) / (2.0 * h)
    ux = (up0 - um0) / (2.0 * h)
    residual = (utt - p.c1 * p.c2 * uxx + (p.c1 - p.c2) * uxt
                + a_t(t) * ut + a_x(t) * ux + a_0(t) * u00)
    scale = max(abs(v) for v in (upp, upm, ump, umm, up0, um0, u0p, u0m, u00))
    floor = 2 ** -52 * scale * (2.0 + p.c1 * p.c2 + abs(p.c1 - p.c2)) / h ** 2
    return abs(residual), floor


def epd_residual(spec: EpdSpec, p: MotionParams, grid: GridSpec,
                 cfg: SeriesConfig = SeriesConfig()) -> ResidualStudy:
    """Residual study of the family's solution under its operator.

    A correct operator/solution pair shows residuals falling by ~4 per
    halving until they hit the reported roundoff floor.
    """
    _check_stencil(p, grid.x0, grid.t0, grid.h)
    u, a_t, a_x, a_0 = _family_parts(spec, p, cfg)
    residuals, floors = [], []
    for h in grid.steps():
        res, flo = _operator_residual(u, a_t, a_x, a_0, p, grid.x0, grid.t0, h)
        residuals.append(res)
        floors.append(flo)
    return ResidualStudy(grid.steps(), residuals, floors)


# --------------------------------------------------------------------------
# Exact coefficient identities
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorCoefficients:
    """Lower-order coefficients of L in the exact basis

        a_t = t_coef / t,
        a_x = (x_mixed (c1-c2) + x_c1 c1 + x_c2 c2) / t,
        a_0 = zero / t^2.

    Rational in (m, n, r), so family identities can be compared exactly.
    """

    t_coef: Fraction
    x_mixed: Fraction
    x_c1: Fraction
    x_c2: Fraction
    zero: Fraction


def operator_coefficients(family: Family, m, n, r=0) -> OperatorCoefficients:
    m, n, r = Fraction(m), Fraction(n), Fraction(r)
    if family is Family.G:
        return OperatorCoefficients(-(m + n), Fraction(0), -m, n, Fraction(0))
    if family is Family.H:
        return OperatorCoefficients(m + n + 2, m + n + 1, -m, n, Fraction(0))
    if family is Family.K:
        return OperatorCoefficients(m + n + 2 * r, m + n + r, -m, n,
                                    -(m + n + r) * (1 - r))
    raise DomainError("coefficient identities apply to families G, H, K")


# --------------------------------------------------------------------------
# The first-order system and its second-order consequence
# --------------------------------------------------------------------------

def differential_system_residual(p: MotionParams, grid: GridSpec,
                                 alpha: float = 2.0,
                                 cfg: SeriesConfig = SeriesConfig(),
                                 ) -> tuple[ResidualStudy, ResidualStudy]:
    """Residual pair for the two governing-equation instances.

    First: the constant-rate position density under the constant-rate
    operator.  Second: the alpha/t-rate density under its operator.
    """
    const_study = epd_residual(EpdSpec(Family.TELEGRAPH), p, grid, cfg)
    epd_study = epd_residual(EpdSpec(Family.NONHOM, alpha=alpha), p, grid, cfg)
    return const_study, epd_study


def first_order_chain_residual(f, b, rate_fn, p: MotionParams,
                               grid: GridSpec) -> ResidualStudy:
    """Check the derivation chain from the transport system to L.

    For ANY smooth pair (f, b), define the system defects
        R_f = f_t + c1 f_x + rate (f - b),
        R_b = b_t - c2 b_x - rate (f - b),
    and p = f + b.  Algebra turns the system into

        L[p] = 2 rate R_p + d/dt R_p + (c1-c2)/2 d/dx R_p
               - (c1+c2)/2 d/dx R_w,

    with R_p = R_f + R_b and R_w = R_f - R_b.  The identity holds for
    manufactured (f, b) with nonzero defects, and collapses to L[p] = 0
    for true solutions.  Both sides are discretised at second order, so
    the imbalance must decay like h^2.
    """
    residuals, floors = [], []
    for h in grid.steps():
        res, flo = _chain_residual_at(f, b, rate_fn, p, grid.x0, grid.t0, h)
        residuals.append(res)
        floors.append(flo)
    return ResidualStudy(grid.steps(), residuals, floors)


def _chain_residual_at(f, b, rate_fn, p: MotionParams,
                       x: float, t: float, h: float) -> tuple[float, float]:
    c1, c2 = p.c1, p.c2

    def psum(xx, tt):
        return f(xx, tt) + b(xx, tt)

    def defects(xx, tt):
        lam = rate_fn(tt)
        ft = (f(xx, tt + h) - f(xx, tt - h)) / (2.0 * h)
        fx = (f(xx + h, tt) - f(xx - h, tt)) / (2.0 * h)
        bt = (b(xx, tt + h) - b(xx, tt - h)) / (2.0 * h)
        bx = (b(xx + h, tt) - b(xx - h, tt)) / (2.0 * h)
        swap = lam * (f(xx, tt) - b(xx, tt))
        rf = ft + c1 * fx + swap
        rb = bt - c2 * bx - swap
        return rf + rb, rf - rb

    signed = _signed_operator(psum, rate_fn, p, x, t, h)
    rp0, _ = defects(x, t)
    rp_tp, _ = defects(x, t + h)
    rp_tm, _ = defects(x, t - h)
    rp_xp, rw_xp = defects(x + h, t)
    rp_xm, rw_xm = defects(x - h, t)
    rhs = (2.0 * rate_fn(t) * rp0
           + (rp_tp - rp_tm) / (2.0 * h)
           + (c1 - c2) / 2.0 * (rp_xp - rp_xm) / (2.0 * h)
           - (c1 + c2) / 2.0 * (rw_xp - rw_xm) / (2.0 * h))
    scale = max(abs(psum(x + dx, t + dt))
                for dx in (-h, 0.0, h) for dt in (-h, 0.0, h))
    floor = 2 ** -52 * scale * (2.0 + c1 * c2 + abs(c1 - c2)) / h ** 2
    return abs(signed - rhs), floor


def _signed_operator(u, rate_fn, p: MotionParams,
                     x: float, t: float, h: float) -> float:
    c1, c2 = p.c1, p.c2
    utt = (u(x, t + h) - 2.0 * u(x, t) + u(x, t - h)) / h ** 2
    uxx = (u(x + h, t) - 2.0 * u(x, t) + u(x - h, t)) / h ** 2
    uxt = (u(x + h, t + h) - u(x + h, t - h) - u(x - h, t + h)
           + u(x - h, t - h)) / (4.0 * h ** 2)
    ut = (u(x, t + h) - u(x, t - h)) / (2.0 * h)
    ux = (u(x + h, t) - u(x - h, t)) / (2.0 * h)
    lam = rate_fn(t)
    return (utt - c1 * c2 * uxx + (c1 - c2) * uxt
            + 2.0 * lam * (ut + (c1 - c2) / 2.0 * ux))
