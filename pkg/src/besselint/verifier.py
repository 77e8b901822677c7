"""Certification harness: verdicts, grid sweeps, tables, tightness, crossover.

A check compares one catalog bound against the quadrature oracle at one
parameter point and renders HOLDS / VIOLATED / INCONCLUSIVE.  The
inconclusive band is the combined numerical uncertainty (oracle error
estimate + series tail + a small kernel floor): a strict inequality can
never be certified numerically at an equality point, so points whose
margin falls inside the band are neither passes nor failures.

Sweeps share oracle work aggressively: points are grouped by integrand
``(mu, ord, gamma)`` and each group is evaluated cumulatively along its
ascending x-grid, so a full certification grid costs little more than
one integral per group.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .bounds import (
    CATALOG,
    DEFAULT_SERIES_TOL,
    BoundEval,
    BoundId,
    Direction,
    Point,
    bound_value,
)
from .errors import BesselIntError, InvalidDomain, NotFound
from . import kernel
from .oracle import (
    IntegralSpec,
    QuadResult,
    bessel_integral,
    cumulative_bessel_integral,
)
from .scaled import ScaledValue

__all__ = [
    "Verdict",
    "CheckReport",
    "SkippedPoint",
    "SweepResult",
    "Grid",
    "RelErrTable",
    "default_grid",
    "check_point",
    "sweep",
    "relative_error_table",
    "tightness_scan",
    "find_crossover",
]

#: relative slack granted to the kernel evaluations inside bound formulas
KERNEL_UNCERTAINTY = 2e-12


class Verdict(Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


def _sv_dict(v: ScaledValue) -> dict:
    return {
        "sign": v.sign,
        "log_abs": v.log_abs,
        "decimal": v.to_float() if abs(v.log_abs) < 700.0 else None,
    }


def _sv_from_dict(d: dict) -> ScaledValue:
    return ScaledValue(int(d["sign"]), float(d["log_abs"]))


def _point_dict(p: Point) -> dict:
    return {"nu": p.nu, "n": p.n, "mu": p.mu, "gamma": p.gamma, "x": p.x}


def _point_from_dict(d: dict) -> Point:
    mu = d.get("mu")
    return Point(nu=float(d["nu"]), n=float(d.get("n", 0.0)),
                 mu=None if mu is None else float(mu),
                 gamma=float(d.get("gamma", 0.0)), x=float(d["x"]))


@dataclass(frozen=True)
class CheckReport:
    bound: BoundId
    point: Point
    bound_value: ScaledValue
    oracle_value: ScaledValue
    oracle_err: ScaledValue
    verdict: Verdict
    rel_margin: float
    uncertainty: float
    direction: Direction
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "bound": self.bound.value,
            "point": _point_dict(self.point),
            "bound_value": _sv_dict(self.bound_value),
            "oracle_value": _sv_dict(self.oracle_value),
            "oracle_err": _sv_dict(self.oracle_err),
            "verdict": self.verdict.value,
            "rel_margin": self.rel_margin,
            "uncertainty": self.uncertainty,
            "direction": self.direction.value,
            "reason": self.reason,
        }

    @staticmethod
    def from_dict(d: dict) -> "CheckReport":
        return CheckReport(
            bound=BoundId(d["bound"]),
            point=_point_from_dict(d["point"]),
            bound_value=_sv_from_dict(d["bound_value"]),
            oracle_value=_sv_from_dict(d["oracle_value"]),
            oracle_err=_sv_from_dict(d["oracle_err"]),
            verdict=Verdict(d["verdict"]),
            rel_margin=float(d["rel_margin"]),
            uncertainty=float(d["uncertainty"]),
            direction=Direction(d["direction"]),
            reason=d.get("reason"),
        )


@dataclass(frozen=True)
class SkippedPoint:
    bound: BoundId
    point: Point
    reason: str

    def to_dict(self) -> dict:
        return {"bound": self.bound.value, "point": _point_dict(self.point),
                "reason": self.reason}


@dataclass
class SweepResult:
    reports: list[CheckReport]
    skipped: list[SkippedPoint]
    counts: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "results": [r.to_dict() for r in self.reports],
            "skipped": [s.to_dict() for s in self.skipped],
            "summary": dict(self.counts),
        }


def _margin(direction: Direction, ratio: float) -> float:
    """Signed relative margin; positive means the inequality holds."""
    if direction is Direction.UPPER:
        return ratio - 1.0
    if direction in (Direction.LOWER, Direction.REVERSED):
        return 1.0 - ratio
    return -abs(ratio - 1.0)  # equality: any gap counts against


def _report_from_values(ev: BoundEval, oracle: QuadResult, tol: float) -> CheckReport:
    direction = ev.direction
    if oracle.value.is_zero():
        raise InvalidDomain("oracle integral is zero; no relative margin exists")
    ratio = (ev.value / oracle.value).to_float()
    margin = _margin(direction, ratio)
    unc = oracle.rel_err() + KERNEL_UNCERTAINTY
    if ev.tail_bound.sign and ev.value.sign:
        unc += (ev.tail_bound / abs(ev.value)).to_float()
    if not oracle.converged:
        unc = max(unc, tol)
    if margin > unc:
        verdict = Verdict.HOLDS
    elif margin < -unc:
        verdict = Verdict.VIOLATED
    else:
        verdict = Verdict.INCONCLUSIVE
    return CheckReport(
        bound=ev.bound, point=ev.point, bound_value=ev.value,
        oracle_value=oracle.value, oracle_err=oracle.abs_err,
        verdict=verdict, rel_margin=margin, uncertainty=unc,
        direction=direction,
    )


def check_point(id: BoundId, point: Point, tol: float = 1e-10,
                exploratory: bool = False) -> CheckReport:
    """Verdict for one bound at one point; oracle runs at tol/10.

    ``exploratory=True`` skips the hypothesis check so that a bound can be
    probed outside its validity domain (e.g. PROP1 with mu < 1/2, which is
    expected to flip at large x).
    """
    entry = CATALOG[id]
    if not exploratory:
        reason = entry.invalid_reason(point)
        if reason is not None:
            raise InvalidDomain(f"{id.value}: violated hypothesis: {reason}")
    ev = bound_value(id, nu=point.nu, n=point.n, mu=point.mu,
                     gamma=point.gamma, x=point.x, check_domain=False)
    spec = entry.integrand(point)
    oracle = bessel_integral(spec, max(tol / 10.0, 1e-13))
    return _report_from_values(ev, oracle, tol)


# ----------------------------------------------------------------------
# grid sweeps
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    nu_values: tuple[float, ...]
    gamma_values: tuple[float, ...]
    x_values: tuple[float, ...]
    n_values: tuple[float, ...] = (0.0,)
    mu_values: tuple[float, ...] = ()


def logspace(lo: float, hi: float, count: int) -> tuple[float, ...]:
    if count < 2:
        return (lo,)
    la, lb = math.log10(lo), math.log10(hi)
    return tuple(10.0 ** (la + (lb - la) * i / (count - 1)) for i in range(count))


def default_grid() -> Grid:
    """Certification grid: boundary-adjacent orders, tilts up to 0.99,
    24 log-spaced arguments spanning both asymptotic regimes."""
    return Grid(
        nu_values=(-0.49, -0.25, 0.0, 0.25, 0.5, 1.0, 2.5, 5.0, 10.0),
        gamma_values=(0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99),
        x_values=logspace(1e-3, 200.0, 24),
        n_values=(-0.5, 0.0, 1.0, 2.0),
        mu_values=(0.0, 0.4, 0.5, 1.0, 2.0),
    )


def sweep(ids: Sequence[BoundId], grid: Grid, tol: float = 1e-10,
          threads: Optional[int] = None,
          series_tol: float = DEFAULT_SERIES_TOL) -> SweepResult:
    """Check every bound at every valid grid point.

    Out-of-domain points are skipped and recorded with the violated
    hypothesis; evaluation errors become INCONCLUSIVE reports with the
    failure reason.  Output ordering is canonical regardless of thread
    count.
    """
    oracle_tol = max(tol / 10.0, 1e-13)
    tasks: list[tuple[BoundId, Point]] = []
    skipped: list[SkippedPoint] = []
    for bid in sorted(set(ids), key=lambda b: b.value):
        entry = CATALOG[bid]
        n_axis = sorted(grid.n_values) if entry.uses_n else [0.0]
        mu_axis = sorted(grid.mu_values) if entry.uses_mu else [None]
        for nu in sorted(grid.nu_values):
            for n in n_axis:
                for mu in mu_axis:
                    for gamma in sorted(grid.gamma_values):
                        for x in sorted(grid.x_values):
                            point = Point(nu=nu, n=n, mu=mu, gamma=gamma, x=x)
                            reason = entry.invalid_reason(point)
                            if reason is not None:
                                skipped.append(SkippedPoint(bid, point, reason))
                            else:
                                tasks.append((bid, point))

    # group oracle work by integrand; each group is one cumulative pass
    rows: dict[tuple[float, float, float], set[float]] = {}
    for bid, point in tasks:
        spec = CATALOG[bid].integrand(point)
        rows.setdefault((spec.mu, spec.ord, spec.gamma), set()).add(spec.x)

    oracle_cache: dict[tuple[float, float, float, float], QuadResult] = {}

    def eval_row(item):
        (mu, ordv, gamma), xset = item
        xs = sorted(xset)
        return [((mu, ordv, gamma, x), qr)
                for x, qr in zip(xs, cumulative_bessel_integral(mu, ordv, gamma, xs, oracle_tol))]

    row_items = sorted(rows.items())
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(eval_row, row_items):
                oracle_cache.update(chunk)
    else:
        for item in row_items:
            oracle_cache.update(eval_row(item))

    reports: list[CheckReport] = []
    counts = {"holds": 0, "violated": 0, "inconclusive": 0}
    for bid, point in tasks:
        try:
            ev = bound_value(bid, nu=point.nu, n=point.n, mu=point.mu,
                             gamma=point.gamma, x=point.x,
                             series_tol=series_tol, check_domain=False)
            spec = CATALOG[bid].integrand(point)
            oracle = oracle_cache[(spec.mu, spec.ord, spec.gamma, spec.x)]
            report = _report_from_values(ev, oracle, tol)
        except BesselIntError as exc:
            report = CheckReport(
                bound=bid, point=point, bound_value=ScaledValue.zero(),
                oracle_value=ScaledValue.zero(), oracle_err=ScaledValue.zero(),
                verdict=Verdict.INCONCLUSIVE, rel_margin=math.nan,
                uncertainty=math.inf, direction=CATALOG[bid].direction_at(point),
                reason=f"{type(exc).__name__}: {exc}",
            )
        reports.append(report)
        counts[report.verdict.value] += 1

    order = {bid: i for i, bid in enumerate(sorted(CATALOG, key=lambda b: b.value))}
    reports.sort(key=lambda r: (order[r.bound], r.point.sort_key()))
    skipped.sort(key=lambda s: (order[s.bound], s.point.sort_key()))
    return SweepResult(reports=reports, skipped=skipped, counts=counts)


# ----------------------------------------------------------------------
# relative-error tables
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class RelErrTable:
    bound: BoundId
    nu_values: tuple[float, ...]
    x_values: tuple[float, ...]
    entries: tuple[tuple[float, ...], ...]  # rows by nu, columns by x

    def to_dict(self) -> dict:
        return {
            "bound": self.bound.value,
            "nu_values": list(self.nu_values),
            "x_values": list(self.x_values),
            "entries": [list(row) for row in self.entries],
        }


def _round4(v: float) -> float:
    """Half-up rounding to 4 decimal places."""
    return math.floor(v * 10000.0 + 0.5) / 10000.0


def relative_error_table(bound: BoundId, nu_values: Sequence[float],
                         x_values: Sequence[float], tol: float = 1e-11) -> RelErrTable:
    """Relative errors |bound - F|/F of the two-sided enclosure at gamma=0, n=0."""
    if bound not in (BoundId.TWOSIDED_L, BoundId.TWOSIDED_U):
        raise InvalidDomain("tables are defined for twosided_l / twosided_u")
    xs = sorted(x_values)
    rows = []
    for nu in nu_values:
        oracle_vals = cumulative_bessel_integral(nu, nu, 0.0, xs, tol)
        by_x = dict(zip(xs, oracle_vals))
        row = []
        for x in x_values:
            ev = bound_value(bound, nu=nu, n=0.0, gamma=0.0, x=x)
            f = by_x[x].value
            row.append(_round4(abs(ev.value - f).to_float() / f.to_float()
                               if f.log_abs < 700.0
                               else math.exp(abs(ev.value - f).log_abs - f.log_abs)))
        rows.append(tuple(row))
    return RelErrTable(bound=bound, nu_values=tuple(nu_values),
                       x_values=tuple(x_values), entries=tuple(rows))


# ----------------------------------------------------------------------
# tightness scans and the PROP1 crossover
# ----------------------------------------------------------------------

def tightness_scan(id: BoundId, template: Point, x_sequence: Sequence[float],
                   tol: float = 1e-10) -> list[float]:
    """Bound/oracle ratios along an x-sequence at otherwise fixed parameters.

    The caller asserts the monotone approach to 1 in the claimed limit.
    """
    entry = CATALOG[id]
    points = [Point(nu=template.nu, n=template.n, mu=template.mu,
                    gamma=template.gamma, x=x) for x in x_sequence]
    for p in points:
        reason = entry.invalid_reason(p)
        if reason is not None:
            raise InvalidDomain(f"{id.value}: violated hypothesis: {reason}")
    xs = sorted({p.x for p in points})
    spec0 = entry.integrand(points[0])
    oracle_vals = dict(zip(xs, cumulative_bessel_integral(
        spec0.mu, spec0.ord, spec0.gamma, xs, max(tol / 10.0, 1e-13))))
    ratios = []
    for p in points:
        ev = bound_value(id, nu=p.nu, n=p.n, mu=p.mu, gamma=p.gamma, x=p.x)
        ratios.append((ev.value / oracle_vals[p.x].value).to_float())
    return ratios


def find_crossover(mu: float, nu: float, gamma: float, x_max: float = 500.0,
                   tol: float = 1e-11) -> Optional[float]:
    """Abscissa where ``F - e^(-gamma x) x^mu I_nu(x)/(1-gamma)`` changes sign.

    For ``mu >= nu >= 1/2`` the difference stays negative for every x and
    the function returns None.  For ``mu < 1/2`` a sign change exists for
    large enough x; if none is found below ``x_max``, :class:`NotFound`
    reports the range searched.  Bisection refines the bracket to relative
    width 1e-6.
    """
    if not mu + nu > -1.0:
        raise InvalidDomain(f"needs mu + nu > -1, got {mu + nu}")
    if not 0.0 <= gamma < 1.0:
        raise InvalidDomain(f"needs 0 <= gamma < 1, got {gamma}")
    if not x_max > 0:
        raise InvalidDomain(f"needs x_max > 0, got {x_max}")
    if mu >= nu >= 0.5:
        return None

    def defect_sign(x: float) -> int:
        f = bessel_integral(IntegralSpec(mu, nu, gamma, x), tol).value
        comp = (ScaledValue.from_log(-gamma * x + mu * math.log(x))
                * kernel.besseli(nu, x) / (1.0 - gamma))
        return (f - comp).sign

    lo = min(0.1, x_max / 10.0)
    s_lo = defect_sign(lo)
    hi = lo
    bracket = None
    while hi < x_max:
        hi = min(hi * 1.6, x_max)
        s_hi = defect_sign(hi)
        if s_hi != s_lo and s_hi != 0:
            bracket = (lo, hi)
            break
        lo, s_lo = hi, s_hi
        if hi >= x_max:
            break
    if bracket is None:
        if mu < 0.5:
            raise NotFound(
                f"no sign change of the mu={mu}, nu={nu}, gamma={gamma} defect "
                f"below x_max={x_max}")
        return None
    a, b = bracket
    s_a = defect_sign(a)
    for _ in range(200):
        mid = 0.5 * (a + b)
        if (b - a) <= 1e-6 * mid:
            return mid
        s_mid = defect_sign(mid)
        if s_mid == s_a:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)
