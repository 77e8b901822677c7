"""Closed-form bounds for the incomplete Bessel integral family.

Every bound in the catalog targets an integral of the form
``integral_0^x e^(-gamma t) t^mu I_ord(t) dt`` and evaluates to a
:class:`ScaledValue` with the common factor ``e^(-gamma x) x^power``
extracted first, so nothing overflows and the Bessel combinations keep
their relative accuracy.

Catalog summary (``F(mu, ord)`` denotes the integral of
``e^(-gamma t) t^mu I_ord(t)``):

========== ========= ============================================================
id         direction closed form / hypotheses
========== ========= ============================================================
MAIN       upper     (2(v+1)+c_v)/((2v+1)(1-g)) e^-gx x^v I_{v+1};  v > -1/2
SIMPLE     upper     (2v+3)/((2v+1)(1-g)) e^-gx x^v I_{v+1};        v > -1/2
GAU1       upper     2(v+1)/((2v+1)(1-g)) e^-gx x^v I_{v+1};  v >= 1/2 (any g),
                     or v > -1/2 when g = 0
BAAAD      upper     like GAU1 but with 2(v+1) I_{v+1} - I_{v+3}
NEW1       upper     weighted I_{v+n+1}, I_{v+n+3} combination for F(v, v+n);
                     n > -1, v > -(n+1)/2, and v >= 1/2 unless g = 0; turns into
                     an equality at g = 0, n = -1 and reverses for -3 < n < -1
LOWER4     lower     three-term I_{v+n+1,3,5} combination for F(v, v+n)
TWOSIDED_* --        the g = 0 specialisations of NEW1 / LOWER4
LOWER1     lower     e^-gx x^(v+1) sum_k g^k I_{v+k+1} for F(v+1, v);   v > -1
LOWER3     lower     e^-gx x^v     sum_k g^k I_{v+k+1} for F(v, v);     v > -1/2
INTINEQ0   lower     (1 - 2v(2v+c_{v-1})/((2v-1)(1-g)x)) e^-gx x^v I_v / (1-g)
                     for F(v, v+1);  v > 1/2
LOWER2     lower     same right side bounding F(v, v);                  v > 1/2
PROP1      upper     e^-gx x^mu I_v / (1-g) for F(mu, v);  mu >= v >= 1/2
NEED2      upper     ((2(v+1)/x + g) I_{v+1} + g^2 I_{v+2}) e^-gx x^(v+1)/(2v+1)
DAY        lower     e^-gx x^v I_{v+n+3} for F(v, v+n+2);  n > -3, v > -(n+3)/2
========== ========= ============================================================

The truncated series in LOWER1/LOWER3 only ever *under*-estimates (all
terms are positive), so any truncation level preserves the lower-bound
direction; the reported geometric tail bound certifies how much is
missing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from . import kernel
from .errors import InvalidDomain
from .oracle import IntegralSpec, bessel_integral
from .scaled import ScaledValue

__all__ = [
    "BoundId",
    "Direction",
    "Point",
    "BoundEval",
    "CATALOG",
    "c_nu",
    "x_star",
    "bound_value",
    "geometric_tail_series",
    "m_value",
    "m_bound_constant",
]

DEFAULT_SERIES_TOL = 1e-12


class Direction(Enum):
    UPPER = "upper"
    LOWER = "lower"
    EQUALITY = "equality"
    REVERSED = "reversed"


class BoundId(Enum):
    MAIN = "main"
    SIMPLE = "simple"
    GAU1 = "gau1"
    BAAAD = "baaad"
    NEW1 = "new1"
    LOWER4 = "lower4"
    TWOSIDED_L = "twosided_l"
    TWOSIDED_U = "twosided_u"
    LOWER1 = "lower1"
    LOWER3 = "lower3"
    INTINEQ0 = "intineq0"
    LOWER2 = "lower2"
    PROP1 = "prop1"
    NEED2 = "need2"
    DAY = "day"


@dataclass(frozen=True)
class Point:
    """A parameter point (nu, n, mu, gamma, x); n and mu only matter to
    bounds that use them."""

    nu: float
    n: float = 0.0
    mu: Optional[float] = None
    gamma: float = 0.0
    x: float = 1.0

    def sort_key(self):
        mu = -math.inf if self.mu is None else self.mu
        return (self.nu, self.n, mu, self.gamma, self.x)


@dataclass(frozen=True)
class BoundEval:
    bound: "BoundId"
    point: Point
    value: ScaledValue
    direction: Direction
    truncation_terms: int = 0
    tail_bound: ScaledValue = ScaledValue.zero()


def c_nu(nu: float) -> float:
    """The correction constant ``max(0, -4 nu (nu+1))``, in [0, 1) for nu > -1/2."""
    if not nu > -0.5:
        raise InvalidDomain(f"c_nu requires nu > -1/2, got {nu}")
    return max(0.0, -4.0 * nu * (nu + 1.0))


def x_star(nu: float, gamma: float) -> float:
    """Threshold ``(2 nu + 1)^2 / 2 + (1 - 2 nu)(nu + 1)/(1 - gamma)``.

    Above it the defect of the MAIN bound is increasing in x; the value
    may be negative, in which case it is increasing everywhere.
    """
    if not nu > -0.5:
        raise InvalidDomain(f"x_star requires nu > -1/2, got {nu}")
    if not 0.0 <= gamma < 1.0:
        raise InvalidDomain(f"x_star requires 0 <= gamma < 1, got {gamma}")
    return 0.5 * (2.0 * nu + 1.0) ** 2 + (1.0 - 2.0 * nu) * (nu + 1.0) / (1.0 - gamma)


# ----------------------------------------------------------------------
# geometric Bessel series used by LOWER1 / LOWER3
# ----------------------------------------------------------------------

def geometric_tail_series(nu: float, gamma: float, x: float,
                          series_tol: float = DEFAULT_SERIES_TOL,
                          max_terms: Optional[int] = None
                          ) -> tuple[ScaledValue, int, ScaledValue]:
    """``sum_{k=0}^{K} gamma^k I_{nu+k+1}(x)`` with a certified tail bound.

    The tail after K terms is at most ``gamma^(K+1) I_{nu+1}(x)/(1-gamma)``
    because the orders only increase along the series.  K grows until that
    bound drops below ``series_tol`` times the partial sum (or hits
    ``max_terms``).  Returns ``(partial_sum, terms_used, tail_bound)``.
    """
    if x <= 0:
        raise InvalidDomain(f"series needs x > 0, got {x}")
    if not 0.0 <= gamma < 1.0:
        raise InvalidDomain(f"series needs 0 <= gamma < 1, got {gamma}")
    first = kernel.besseli(nu + 1.0, x)
    if gamma == 0.0 or first.is_zero():
        return first, 1, ScaledValue.zero()
    log_g = math.log(gamma)
    log_tail_const = first.log_abs - math.log1p(-gamma)
    # worst case K if the orders contributed nothing: gamma^(K+1) <= series_tol (1-gamma)
    k_cap = int(math.ceil((math.log(series_tol) + math.log1p(-gamma) * 2) / log_g)) + 2
    if max_terms is not None:
        k_cap = min(k_cap, max_terms - 1)
    k_cap = max(k_cap, 0)
    # ratios I_{mu+1}/I_mu for mu = nu+1 .. nu+k_cap, stable downward pass
    ratios = [0.0] * (k_cap + 1)
    r = kernel._ratio_cf(nu + 1.0 + k_cap, x)
    for i in range(k_cap, 0, -1):
        r = 1.0 / (2.0 * (nu + 1.0 + i) / x + r)
        ratios[i] = r  # = I_{nu+i+1}/I_{nu+i}
    total = first
    log_term = first.log_abs
    terms = 1
    tail = ScaledValue.from_log(log_g + log_tail_const)
    for k in range(1, k_cap + 1):
        log_term += log_g + math.log(ratios[k])
        total = total + ScaledValue.from_log(log_term)
        terms += 1
        tail = ScaledValue.from_log((k + 1) * log_g + log_tail_const)
        if max_terms is None and tail.log_abs <= math.log(series_tol) + total.log_abs:
            break
        if max_terms is not None and terms >= max_terms:
            break
    return total, terms, tail


# ----------------------------------------------------------------------
# catalog
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class _Entry:
    direction: Direction
    uses_n: bool
    uses_mu: bool
    invalid_reason: Callable[[Point], Optional[str]]
    evaluate: Callable[[Point, float, Optional[int]], tuple[ScaledValue, int, ScaledValue]]
    integrand: Callable[[Point], IntegralSpec]
    note: str

    def direction_at(self, point: Point) -> Direction:
        return self.direction


def _gamma_ok(p: Point) -> Optional[str]:
    if not 0.0 <= p.gamma < 1.0:
        return f"0 <= gamma < 1 (got gamma={p.gamma})"
    return None


def _x_ok(p: Point) -> Optional[str]:
    if not p.x > 0:
        return f"x > 0 (got x={p.x})"
    return None


def _common(p: Point) -> Optional[str]:
    return _x_ok(p) or _gamma_ok(p)


def _prefactor(p: Point, power: float) -> ScaledValue:
    return ScaledValue.from_log(-p.gamma * p.x + power * math.log(p.x))


def _no_series(value: ScaledValue) -> tuple[ScaledValue, int, ScaledValue]:
    return value, 0, ScaledValue.zero()


def _family_nu_nu(p: Point) -> IntegralSpec:
    return IntegralSpec(p.nu, p.nu, p.gamma, p.x)


# -- constant-times-I bounds for F(nu, nu) ------------------------------

def _v_main(p: Point, _tol, _mx):
    const = (2.0 * (p.nu + 1.0) + c_nu(p.nu)) / ((2.0 * p.nu + 1.0) * (1.0 - p.gamma))
    return _no_series(_prefactor(p, p.nu) * kernel.besseli(p.nu + 1.0, p.x) * const)


def _v_simple(p: Point, _tol, _mx):
    const = (2.0 * p.nu + 3.0) / ((2.0 * p.nu + 1.0) * (1.0 - p.gamma))
    return _no_series(_prefactor(p, p.nu) * kernel.besseli(p.nu + 1.0, p.x) * const)


def _v_gau1(p: Point, _tol, _mx):
    const = 2.0 * (p.nu + 1.0) / ((2.0 * p.nu + 1.0) * (1.0 - p.gamma))
    return _no_series(_prefactor(p, p.nu) * kernel.besseli(p.nu + 1.0, p.x) * const)


def _v_baaad(p: Point, _tol, _mx):
    combo = (kernel.besseli(p.nu + 1.0, p.x) * (2.0 * (p.nu + 1.0))
             - kernel.besseli(p.nu + 3.0, p.x))
    return _no_series(_prefactor(p, p.nu) * combo
                      / ((2.0 * p.nu + 1.0) * (1.0 - p.gamma)))


def _ok_halfplus(p: Point) -> Optional[str]:
    err = _common(p)
    if err:
        return err
    if p.nu >= 0.5 or (p.gamma == 0.0 and p.nu > -0.5):
        return None
    return f"nu >= 1/2, or nu > -1/2 with gamma = 0 (got nu={p.nu}, gamma={p.gamma})"


def _ok_nu_gt(threshold: float):
    def check(p: Point) -> Optional[str]:
        err = _common(p)
        if err:
            return err
        if not p.nu > threshold:
            return f"nu > {threshold} (got nu={p.nu})"
        return None
    return check


# -- generalized-order bounds for F(nu, nu+n) ---------------------------

def _new1_regime(p: Point) -> tuple[Direction, Optional[str]]:
    if p.gamma == 0.0 and p.n == -1.0:
        if not p.nu > 0.0:
            return Direction.EQUALITY, f"nu > 0 at the equality point (got nu={p.nu})"
        return Direction.EQUALITY, None
    if p.gamma == 0.0 and -3.0 < p.n < -1.0:
        if not p.nu > -(p.n + 1.0):
            return Direction.REVERSED, (
                f"nu > -(n+1) in the reversed regime (got nu={p.nu}, n={p.n})")
        return Direction.REVERSED, None
    if not p.n > -1.0:
        return Direction.UPPER, f"n > -1 (got n={p.n})"
    if not p.nu > -(p.n + 1.0) / 2.0:
        return Direction.UPPER, f"nu > -(n+1)/2 (got nu={p.nu}, n={p.n})"
    if p.gamma != 0.0 and not p.nu >= 0.5:
        return Direction.UPPER, f"nu >= 1/2 when gamma > 0 (got nu={p.nu})"
    return Direction.UPPER, None


def _ok_new1(p: Point) -> Optional[str]:
    err = _common(p)
    if err:
        return err
    return _new1_regime(p)[1]


def _v_new1(p: Point, _tol, _mx):
    s = 2.0 * p.nu + p.n + 1.0
    combo = (kernel.besseli(p.nu + p.n + 1.0, p.x) * (2.0 * (p.nu + p.n + 1.0))
             - kernel.besseli(p.nu + p.n + 3.0, p.x) * (p.n + 1.0))
    return _no_series(_prefactor(p, p.nu) * combo / (s * (1.0 - p.gamma)))


def _ok_lower4(p: Point) -> Optional[str]:
    err = _common(p)
    if err:
        return err
    if not p.n > -1.0:
        return f"n > -1 (got n={p.n})"
    if not p.nu > -(p.n + 1.0) / 2.0:
        return f"nu > -(n+1)/2 (got nu={p.nu}, n={p.n})"
    return None


def _v_lower4(p: Point, _tol, _mx):
    s = 2.0 * p.nu + p.n + 1.0
    s3 = 2.0 * p.nu + p.n + 3.0
    combo = (kernel.besseli(p.nu + p.n + 1.0, p.x) * (2.0 * (p.nu + p.n + 1.0))
             - kernel.besseli(p.nu + p.n + 3.0, p.x)
             * (2.0 * (p.n + 1.0) * (p.nu + p.n + 3.0) / s3)
             + kernel.besseli(p.nu + p.n + 5.0, p.x)
             * ((p.n + 1.0) * (p.n + 3.0) / s3))
    return _no_series(_prefactor(p, p.nu) * combo / s)


def _ok_twosided(p: Point) -> Optional[str]:
    if p.gamma != 0.0:
        return f"gamma = 0 (got gamma={p.gamma})"
    return _ok_lower4(p)


def _family_nu_nun(p: Point) -> IntegralSpec:
    return IntegralSpec(p.nu, p.nu + p.n, p.gamma, p.x)


# -- series lower bounds -------------------------------------------------

def _v_lower1(p: Point, tol, mx):
    total, terms, tail = geometric_tail_series(p.nu, p.gamma, p.x, tol, mx)
    pre = _prefactor(p, p.nu + 1.0)
    return pre * total, terms, pre * tail


def _v_lower3(p: Point, tol, mx):
    total, terms, tail = geometric_tail_series(p.nu, p.gamma, p.x, tol, mx)
    pre = _prefactor(p, p.nu)
    return pre * total, terms, pre * tail


# -- reciprocal-x corrected lower bounds ---------------------------------

def _v_lower2_like(p: Point, _tol, _mx):
    bracket = 1.0 - (2.0 * p.nu * (2.0 * p.nu + c_nu(p.nu - 1.0))
                     / ((2.0 * p.nu - 1.0) * (1.0 - p.gamma) * p.x))
    val = (_prefactor(p, p.nu) * kernel.besseli(p.nu, p.x)
           * ScaledValue.from_float(bracket) / (1.0 - p.gamma))
    return _no_series(val)


# -- remaining individual bounds -----------------------------------------

def _ok_prop1(p: Point) -> Optional[str]:
    err = _common(p)
    if err:
        return err
    if p.mu is None:
        return "mu must be supplied"
    if not (p.mu >= p.nu >= 0.5):
        return f"mu >= nu >= 1/2 (got mu={p.mu}, nu={p.nu})"
    return None


def _v_prop1(p: Point, _tol, _mx):
    if p.mu is None:
        raise InvalidDomain("PROP1 needs mu")
    return _no_series(_prefactor(p, p.mu) * kernel.besseli(p.nu, p.x)
                      / (1.0 - p.gamma))


def _v_need2(p: Point, _tol, _mx):
    combo = (kernel.besseli(p.nu + 1.0, p.x)
             * (2.0 * (p.nu + 1.0) / p.x + p.gamma)
             + kernel.besseli(p.nu + 2.0, p.x) * (p.gamma * p.gamma)
             if p.gamma > 0 else
             kernel.besseli(p.nu + 1.0, p.x) * (2.0 * (p.nu + 1.0) / p.x))
    return _no_series(_prefactor(p, p.nu + 1.0) * combo / (2.0 * p.nu + 1.0))


def _ok_day(p: Point) -> Optional[str]:
    err = _common(p)
    if err:
        return err
    if not p.n > -3.0:
        return f"n > -3 (got n={p.n})"
    if not p.nu > -(p.n + 3.0) / 2.0:
        return f"nu > -(n+3)/2 (got nu={p.nu}, n={p.n})"
    return None


def _v_day(p: Point, _tol, _mx):
    return _no_series(_prefactor(p, p.nu) * kernel.besseli(p.nu + p.n + 3.0, p.x))


class _New1Entry(_Entry):
    def direction_at(self, point: Point) -> Direction:
        return _new1_regime(point)[0]


class _Lower1Entry(_Entry):
    def direction_at(self, point: Point) -> Direction:
        # at gamma = 0 the series collapses to I_{nu+1} and
        # d/dt (t^(nu+1) I_{nu+1}(t)) = t^(nu+1) I_nu(t) makes it exact
        return Direction.EQUALITY if point.gamma == 0.0 else Direction.LOWER


CATALOG: dict[BoundId, _Entry] = {
    BoundId.MAIN: _Entry(
        Direction.UPPER, False, False, _ok_nu_gt(-0.5), _v_main, _family_nu_nu,
        "constant (2(nu+1)+c_nu)/((2nu+1)(1-gamma)) times e^-gx x^nu I_{nu+1}"),
    BoundId.SIMPLE: _Entry(
        Direction.UPPER, False, False, _ok_nu_gt(-0.5), _v_simple, _family_nu_nu,
        "constant (2nu+3)/((2nu+1)(1-gamma)) times e^-gx x^nu I_{nu+1}"),
    BoundId.GAU1: _Entry(
        Direction.UPPER, False, False, _ok_halfplus, _v_gau1, _family_nu_nu,
        "constant 2(nu+1)/((2nu+1)(1-gamma)) times e^-gx x^nu I_{nu+1}"),
    BoundId.BAAAD: _Entry(
        Direction.UPPER, False, False, _ok_halfplus, _v_baaad, _family_nu_nu,
        "like GAU1 with the I_{nu+3} correction retained"),
    BoundId.NEW1: _New1Entry(
        Direction.UPPER, True, False, _ok_new1, _v_new1, _family_nu_nun,
        "two-term I_{nu+n+1}, I_{nu+n+3} upper bound for the shifted order"),
    BoundId.LOWER4: _Entry(
        Direction.LOWER, True, False, _ok_lower4, _v_lower4, _family_nu_nun,
        "three-term I_{nu+n+1,3,5} lower bound for the shifted order"),
    BoundId.TWOSIDED_L: _Entry(
        Direction.LOWER, True, False, _ok_twosided, _v_lower4, _family_nu_nun,
        "gamma = 0 specialisation of LOWER4"),
    BoundId.TWOSIDED_U: _Entry(
        Direction.UPPER, True, False, _ok_twosided, _v_new1, _family_nu_nun,
        "gamma = 0 specialisation of NEW1"),
    BoundId.LOWER1: _Lower1Entry(
        Direction.LOWER, False, False, _ok_nu_gt(-1.0), _v_lower1,
        lambda p: IntegralSpec(p.nu + 1.0, p.nu, p.gamma, p.x),
        "geometric series e^-gx x^(nu+1) sum g^k I_{nu+k+1} under F(nu+1, nu); "
        "exact equality at gamma = 0"),
    BoundId.LOWER3: _Entry(
        Direction.LOWER, False, False, _ok_nu_gt(-0.5), _v_lower3, _family_nu_nu,
        "geometric series e^-gx x^nu sum g^k I_{nu+k+1} under F(nu, nu)"),
    BoundId.INTINEQ0: _Entry(
        Direction.LOWER, False, False, _ok_nu_gt(0.5), _v_lower2_like,
        lambda p: IntegralSpec(p.nu, p.nu + 1.0, p.gamma, p.x),
        "1/x-corrected multiple of e^-gx x^nu I_nu under F(nu, nu+1)"),
    BoundId.LOWER2: _Entry(
        Direction.LOWER, False, False, _ok_nu_gt(0.5), _v_lower2_like, _family_nu_nu,
        "1/x-corrected multiple of e^-gx x^nu I_nu under F(nu, nu)"),
    BoundId.PROP1: _Entry(
        Direction.UPPER, False, True, _ok_prop1, _v_prop1,
        lambda p: IntegralSpec(p.mu if p.mu is not None else p.nu, p.nu, p.gamma, p.x),
        "e^-gx x^mu I_nu/(1-gamma); reverses for mu < 1/2 at large x"),
    BoundId.NEED2: _Entry(
        Direction.UPPER, False, False, _ok_nu_gt(-0.5), _v_need2, _family_nu_nu,
        "((2(nu+1)/x + g) I_{nu+1} + g^2 I_{nu+2}) e^-gx x^(nu+1)/(2nu+1)"),
    BoundId.DAY: _Entry(
        Direction.LOWER, True, False, _ok_day, _v_day,
        lambda p: IntegralSpec(p.nu, p.nu + p.n + 2.0, p.gamma, p.x),
        "single term e^-gx x^nu I_{nu+n+3} under F(nu, nu+n+2)"),
}


def bound_value(id: BoundId, nu: float, n: float = 0.0, mu: Optional[float] = None,
                gamma: float = 0.0, x: float = 1.0,
                series_tol: float = DEFAULT_SERIES_TOL,
                max_terms: Optional[int] = None,
                check_domain: bool = True) -> BoundEval:
    """Evaluate one catalog bound at a parameter point.

    ``check_domain=False`` skips the hypothesis check (exploratory mode,
    e.g. probing PROP1 beyond its validity); the formula itself must still
    be computable there.
    """
    entry = CATALOG[id]
    point = Point(nu=nu, n=n, mu=mu, gamma=gamma, x=x)
    if check_domain:
        reason = entry.invalid_reason(point)
        if reason is not None:
            raise InvalidDomain(f"{id.value}: violated hypothesis: {reason}")
    value, terms, tail = entry.evaluate(point, series_tol, max_terms)
    return BoundEval(bound=id, point=point, value=value,
                     direction=entry.direction_at(point),
                     truncation_terms=terms, tail_bound=tail)


# ----------------------------------------------------------------------
# Stein-factor products M_{nu,beta,n}
# ----------------------------------------------------------------------

def m_value(nu: float, beta: float, n: int, x: float, tol: float = 1e-11) -> ScaledValue:
    """``e^(-beta x) K_{nu+n}(x) x^(1-nu) integral_0^x e^(beta t) t^nu I_nu(t) dt``.

    The exponential tilt ``beta`` lies in (-1, 0]; the integral is the
    family member with ``gamma = -beta``.
    """
    if not nu > -0.5:
        raise InvalidDomain(f"m_value requires nu > -1/2, got {nu}")
    if not -1.0 < beta <= 0.0:
        raise InvalidDomain(f"m_value requires -1 < beta <= 0, got {beta}")
    if n not in (0, 1, 2):
        raise InvalidDomain(f"m_value requires n in {{0, 1, 2}}, got {n}")
    if not x > 0:
        raise InvalidDomain(f"m_value requires x > 0, got {x}")
    integral = bessel_integral(IntegralSpec(nu, nu, -beta, x), tol).value
    pre = ScaledValue.from_log(-beta * x + (1.0 - nu) * math.log(x))
    return pre * kernel.besselk(nu + n, x) * integral


def m_bound_constant(nu: float, beta: float, n: int) -> float:
    """Uniform-in-x upper bound for ``m_value`` at the same parameters."""
    if not nu > -0.5:
        raise InvalidDomain(f"m_bound_constant requires nu > -1/2, got {nu}")
    if not -1.0 < beta <= 0.0:
        raise InvalidDomain(f"m_bound_constant requires -1 < beta <= 0, got {beta}")
    denom = (2.0 * nu + 1.0) * (1.0 + beta)
    if n == 2:
        return (2.0 * (nu + 1.0) + c_nu(nu)) / denom
    if n in (0, 1):
        return (nu + 1.0 + c_nu(nu) / 2.0) / denom
    raise InvalidDomain(f"m_bound_constant requires n in {{0, 1, 2}}, got {n}")
