"""Distortion estimates for weighted radial maps of the unit disk.

Four groups of results, all driven by the tail integral
T(r) = integral_r^1 dt / ring_norm(Q; t):

* the area bound for images of concentric disks,

      m(fB_r) <= pi (1 + (2 pi)^{p-1} (p-2) T(r))^{2/(2-p)}   (p > 2)
      m(fB_r) <= pi exp(-4 pi T(r))                           (p = 2),

  sharp for the identity with unit weight and for power contractions with
  their own dilatation as weight;

* the pointwise growth inequality 2^p pi^{p/2} / ring_norm(t) <= Phi'/Phi^{p/2}
  for Phi(t) = area of the image of the disk of radius t;

* point behavior near the origin: the rescaling radius R(r) with
  pi R(r)^2 = area bound, the liminf surrogate for |f|/R, and the limsup
  surrogates for the dilatation average (q_zero) and the local stretch;

* the finite-Lipschitz consistency checks (finiteness implication and the
  scaling law of stretch / q_zero^{1/(p-2)}).

limsup/liminf are operationalized as extrema over the tail of a decreasing
geometric radius grid; a sustained-growth heuristic upgrades a diverging
tail to the flagged value inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError, ValidationError
from .geometry import Annulus, ExponentP, PlanePoint, QField, as_exponent
from .maps import RadialMap, image_disk_area, kp_field, scale_map
from .modulus import lower_modulus_bound, ring_norm
from .quadrature import DEFAULT_SPEC, QuadratureSpec, disk_average
from .report import (CheckEntry, VerificationReport, entry_equality,
                     entry_flagged, entry_inequality)

__all__ = [
    "AreaBoundParams",
    "PointBehaviorResult",
    "area_bound",
    "verify_area_theorem",
    "verify_growth_inequality",
    "point_radius_R",
    "liminf_scan",
    "q_zero",
    "stretch_estimate",
    "lipschitz_consistency",
    "geometric_grid",
    "decay_constant_derived",
    "decay_constant_alternate",
    "decay_product",
    "decay_comparison",
]

# Tail length for limsup/liminf surrogates on decreasing grids.
TAIL_POINTS = 8
# Number of trailing ratios that must all exceed 1 to flag divergence.
GROWTH_TREND = 5
# Strictness slack for the growth-ratio heuristic, so that constant
# sequences with quadrature noise never count as growing.
_GROWTH_EPS = 1e-6
# Below this, a finite q_zero limit is reported as vacuous: both sides of
# the finiteness implication collapse to 0 on the grid.
_VACUOUS_LIMIT = 1e-3


@dataclass(frozen=True)
class AreaBoundParams:
    """Inputs of the area bound: exponent, weight on the unit disk, and the
    inner radius whose disk image is being bounded."""

    p: ExponentP
    weight: QField
    r: float

    def __post_init__(self):
        object.__setattr__(self, "p", as_exponent(self.p))
        if not (0.0 < self.r < 1.0):
            raise ValidationError(f"inner radius must lie in (0,1), got {self.r}")
        if not (self.weight.domain_radius >= 1.0 - 1e-12):
            raise ValidationError(
                "the weight must be defined on the whole unit disk, got "
                f"domain radius {self.weight.domain_radius}")


@dataclass(frozen=True)
class PointBehaviorResult:
    """Liminf surrogate of |f|/R over a decreasing radius grid.

    ``tail_spread`` (max - min of the tail ratios) indicates how settled the
    surrogate is at the grid's resolution.
    """

    liminf_estimate: float
    grid: tuple
    ratio_at: tuple
    tail_spread: float


def _tail_integral(weight: QField, p: ExponentP, r: float,
                   spec: QuadratureSpec) -> float:
    """T(r) = integral_r^1 dt / ring_norm(weight; t), reusing the ring
    modulus bound on the annulus (r, 1) around the weight's center."""
    return lower_modulus_bound(weight, Annulus(weight.center, r, 1.0), p, spec)


def area_bound(params: AreaBoundParams,
               spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Branch-appropriate area bound for the image of the disk of radius r.

    A divergent tail integral drives either branch to the flagged value 0
    (the image would be forced to a null set).
    """
    ep = params.p
    if ep.p < 2.0:
        raise DomainError(f"the area bound needs p >= 2, got {ep.p}")
    tail = _tail_integral(params.weight, ep, params.r, spec)
    if math.isinf(tail):
        return 0.0
    if ep.p == 2.0:
        return math.pi * math.exp(-4.0 * math.pi * tail)
    base = 1.0 + (2.0 * math.pi) ** (ep.p - 1.0) * (ep.p - 2.0) * tail
    if not base >= 1.0:
        raise DomainError(f"bound base degenerated below 1: {base}")
    return math.pi * base ** (2.0 / (2.0 - ep.p))


def point_radius_R(p: "ExponentP | float", weight: QField, r: float,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The rescaling radius R(r) with pi R(r)^2 = area_bound(r) exactly:

        R(r) = (1 + (2 pi)^{p-1} (p-2) T(r))^{-1/(p-2)}   (p > 2)
        R(r) = exp(-2 pi T(r))                            (p = 2)
    """
    ep = as_exponent(p)
    if ep.p < 2.0:
        raise DomainError(f"the rescaling radius needs p >= 2, got {ep.p}")
    if not (0.0 < r < 1.0):
        raise DomainError(f"inner radius must lie in (0,1), got {r}")
    tail = _tail_integral(weight, ep, r, spec)
    if math.isinf(tail):
        return 0.0
    if ep.p == 2.0:
        return math.exp(-2.0 * math.pi * tail)
    base = 1.0 + (2.0 * math.pi) ** (ep.p - 1.0) * (ep.p - 2.0) * tail
    if not base >= 1.0:
        raise DomainError(f"bound base degenerated below 1: {base}")
    return base ** (-1.0 / (ep.p - 2.0))


def verify_area_theorem(radial_map: RadialMap, p: "ExponentP | float",
                        r_grid: Sequence[float],
                        spec: QuadratureSpec = DEFAULT_SPEC) -> VerificationReport:
    """Check image_disk_area <= area_bound with the map's own dilatation as
    the weight, one row per radius; tolerance 1e-8 * pi on the margin.

    A vanished bound (divergent tail integral) cannot be asserted against a
    homeomorphism and is recorded as a degenerate row.
    """
    ep = as_exponent(p)
    weight = kp_field(radial_map, ep.p)
    report = VerificationReport()
    for r in r_grid:
        actual = image_disk_area(radial_map, r)
        bound = area_bound(AreaBoundParams(ep, weight, r), spec)
        name = f"r={r:g}"
        if bound == 0.0:
            report.append(entry_flagged(name, "degenerate", actual, bound))
        else:
            report.append(entry_inequality(name, actual, bound,
                                           tolerance=1e-8 * math.pi))
    return report


def verify_growth_inequality(radial_map: RadialMap, p: "ExponentP | float",
                             t_grid: Sequence[float],
                             spec: QuadratureSpec = DEFAULT_SPEC
                             ) -> VerificationReport:
    """Check 2^p pi^{p/2} / ring_norm(K_p; t) <= Phi'(t) / Phi(t)^{p/2}
    pointwise on the grid, with Phi computed exactly from the profile."""
    ep = as_exponent(p)
    weight = kp_field(radial_map, ep.p)
    report = VerificationReport()
    for t in t_grid:
        norm = ring_norm(weight, weight.center, t, ep, spec)
        lhs = 0.0 if math.isinf(norm) else 2.0 ** ep.p * math.pi ** (ep.p / 2.0) / norm
        rho = radial_map.profile(t)
        slope = radial_map.profile_derivative(t)
        area = math.pi * rho * rho
        rhs = 2.0 * math.pi * rho * slope / area ** (ep.p / 2.0)
        tolerance = 1e-9 * max(1.0, abs(lhs), abs(rhs))
        report.append(entry_inequality(f"t={t:g}", lhs, rhs, tolerance))
    return report


def geometric_grid(start: float = 0.5, ratio: float = 0.7,
                   count: int = 40) -> list[float]:
    """Strictly decreasing geometric radius grid start * ratio^k, k < count."""
    if not (0.0 < start < 1.0):
        raise ValidationError(f"grid start must lie in (0,1), got {start}")
    if not (0.0 < ratio < 1.0):
        raise ValidationError(f"grid ratio must lie in (0,1), got {ratio}")
    if count < 2:
        raise ValidationError(f"grid needs at least 2 points, got {count}")
    return [start * ratio ** k for k in range(count)]


def _validate_decreasing_grid(grid: Sequence[float]) -> list[float]:
    values = [float(g) for g in grid]
    if len(values) < 2:
        raise ValidationError("decreasing grids need at least 2 points")
    if any(not (0.0 < g < 1.0) for g in values) or \
            any(b >= a for a, b in zip(values, values[1:])):
        raise ValidationError("grid must decrease strictly toward 0 within (0,1)")
    return values


def _tail_flagged_extremum(values: Sequence[float], *, largest: bool
                           ) -> tuple[float, float]:
    """(extremum over the tail, tail spread); inf when any value is inf or
    when the trailing GROWTH_TREND ratios all exceed 1 (sustained growth)."""
    if any(math.isinf(v) for v in values):
        return math.inf, math.inf
    if len(values) > GROWTH_TREND:
        trailing = values[-(GROWTH_TREND + 1):]
        ratios = [b / a for a, b in zip(trailing, trailing[1:])]
        if all(r > 1.0 + _GROWTH_EPS for r in ratios):
            return math.inf, math.inf
    tail = values[-TAIL_POINTS:]
    spread = max(tail) - min(tail)
    return (max(tail) if largest else min(tail)), spread


def liminf_scan(radial_map: RadialMap, p: "ExponentP | float", weight: QField,
                r_grid_to_zero: Sequence[float],
                spec: QuadratureSpec = DEFAULT_SPEC) -> PointBehaviorResult:
    """Liminf surrogate of |f| / R toward the origin: the minimum of
    rho(r) / R(r) over the tail of the decreasing grid."""
    ep = as_exponent(p)
    grid = _validate_decreasing_grid(r_grid_to_zero)
    ratios = []
    for r in grid:
        rescale = point_radius_R(ep, weight, r, spec)
        ratios.append(math.inf if rescale == 0.0
                      else radial_map.profile(r) / rescale)
    estimate, spread = _tail_flagged_extremum(ratios, largest=False)
    return PointBehaviorResult(liminf_estimate=estimate, grid=tuple(grid),
                               ratio_at=tuple(ratios), tail_spread=spread)


def q_zero(weight: QField, center: PlanePoint, p: "ExponentP | float",
           eps_grid: Sequence[float],
           spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Limsup surrogate of the dilatation's small-disk averages,

        (average of Q^{1/(p-1)} over B(center, eps))^{p-1},

    maximized over the grid tail; sustained growth flags the value inf."""
    ep = as_exponent(p)
    grid = _validate_decreasing_grid(eps_grid)
    lam = ep.lam
    values = []
    for eps in grid:
        avg = disk_average(lambda z: weight.eval(z) ** lam, center, eps, spec)
        values.append(avg ** (ep.p - 1.0) if math.isfinite(avg) else math.inf)
    return _tail_flagged_extremum(values, largest=True)[0]


def stretch_estimate(radial_map: RadialMap, eps_grid: Sequence[float]) -> float:
    """Limsup surrogate of the stretch at the origin: max of rho(eps)/eps
    over the grid tail, inf under sustained growth."""
    grid = _validate_decreasing_grid(eps_grid)
    values = [radial_map.profile(eps) / eps for eps in grid]
    return _tail_flagged_extremum(values, largest=True)[0]


def lipschitz_consistency(radial_map: RadialMap, p: "ExponentP | float",
                          eps_grid: Sequence[float],
                          spec: QuadratureSpec = DEFAULT_SPEC
                          ) -> VerificationReport:
    """The two exactly assertable consequences of the finite-Lipschitz
    criterion at the origin, for p > 2:

    (a) finiteness implication: a finite dilatation limit forces a finite
        stretch estimate (rows "hypothesis-not-met" when the limit is
        infinite, "info" when it is vacuously tiny);
    (b) scaling law: stretch / q_zero^{1/(p-2)} is invariant under post-
        scaling f -> c f, which multiplies both sides by c.
    """
    ep = as_exponent(p)
    if not ep.p > 2.0:
        raise DomainError(f"the Lipschitz criterion needs p > 2, got {ep.p}")
    grid = _validate_decreasing_grid(eps_grid)
    report = VerificationReport()

    def limits(m: RadialMap) -> tuple[float, float]:
        weight = kp_field(m, ep.p)
        return (q_zero(weight, weight.center, ep, grid, spec),
                stretch_estimate(m, grid))

    dilatation_limit, stretch = limits(radial_map)
    if math.isinf(dilatation_limit):
        report.append(entry_flagged("finite-dilatation-implies-finite-stretch",
                                    "hypothesis-not-met",
                                    dilatation_limit, stretch))
        return report
    if dilatation_limit <= _VACUOUS_LIMIT:
        report.append(entry_flagged("finite-dilatation-implies-finite-stretch "
                                    "(vacuous: limit collapses to 0)",
                                    "info", dilatation_limit, stretch))
    else:
        report.append(_finiteness_entry(dilatation_limit, stretch))
    ratio = stretch / dilatation_limit ** (1.0 / (ep.p - 2.0))
    for c in (0.5, 2.0, 10.0):
        scaled_limit, scaled_stretch = limits(scale_map(radial_map, c))
        scaled_ratio = scaled_stretch / scaled_limit ** (1.0 / (ep.p - 2.0))
        report.append(entry_equality(f"scaling-invariance c={c:g}",
                                     scaled_ratio, ratio,
                                     tolerance=1e-8 * abs(ratio)))
    return report


def _finiteness_entry(dilatation_limit: float, stretch: float) -> CheckEntry:
    """Row for implication (a): passes iff the stretch estimate is finite."""
    finite = math.isfinite(stretch)
    return CheckEntry(name="finite-dilatation-implies-finite-stretch",
                      lhs=dilatation_limit, rhs=stretch,
                      margin=math.inf if finite else -math.inf,
                      tolerance=0.0, passed=finite,
                      status="pass" if finite else "fail")


# ---------------------------------------------------------------------------
# decay constants near the puncture
# ---------------------------------------------------------------------------


def decay_constant_derived(p: float) -> float:
    """((2 pi)^{p-1} (p-2))^{-1/(p-2)}: the constant the identity's decay
    product actually approaches (re-derivable from the tail integral)."""
    ep = as_exponent(p)
    if not ep.p > 2.0:
        raise DomainError(f"decay constants need p > 2, got {ep.p}")
    return ((2.0 * math.pi) ** (ep.p - 1.0) * (ep.p - 2.0)) ** (-1.0 / (ep.p - 2.0))


def decay_constant_alternate(p: float) -> float:
    """(2 pi)^{1-p} (p-2)^{1/(2-p)}: an alternative closed form; agrees with
    the derived constant only at p = 3."""
    ep = as_exponent(p)
    if not ep.p > 2.0:
        raise DomainError(f"decay constants need p > 2, got {ep.p}")
    return (2.0 * math.pi) ** (1.0 - ep.p) * (ep.p - 2.0) ** (1.0 / (2.0 - ep.p))


def decay_product(radial_map: RadialMap, p: "ExponentP | float",
                  weight: QField, r: float,
                  spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """|f| * T(r)^{1/(p-2)} at radius r; for the identity with unit weight it
    tends to the derived decay constant as r -> 0."""
    ep = as_exponent(p)
    if not ep.p > 2.0:
        raise DomainError(f"the decay product needs p > 2, got {ep.p}")
    if not (0.0 < r < 1.0):
        raise DomainError(f"radius must lie in (0,1), got {r}")
    tail = _tail_integral(weight, ep, r, spec)
    return radial_map.profile(r) * tail ** (1.0 / (ep.p - 2.0))


def decay_comparison(p: float, r_grid_to_zero: Sequence[float] | None = None,
                         spec: QuadratureSpec = DEFAULT_SPEC
                         ) -> VerificationReport:
    """Compare the two decay-constant forms against the identity's empirical
    limit.  At p = 3 the three agree and are asserted; at other p the forms
    disagree, so the comparison is emitted as an informational row only."""
    ep = as_exponent(p)
    grid = _validate_decreasing_grid(r_grid_to_zero or geometric_grid())
    unit = QField.constant(1.0)
    identity = RadialMap(lambda r: r, lambda r: 1.0, label="identity")
    empirical = decay_product(identity, ep, unit, grid[-1], spec)
    derived = decay_constant_derived(ep.p)
    alternate = decay_constant_alternate(ep.p)
    report = VerificationReport()
    report.append(entry_equality("empirical-vs-derived", empirical, derived,
                                 tolerance=1e-5 * derived))
    if ep.p == 3.0:
        report.append(entry_equality("derived-vs-alternate", derived, alternate,
                                     tolerance=1e-12 * derived))
    else:
        report.append(entry_flagged("derived-vs-alternate (forms disagree "
                                    "away from p=3)", "info", derived, alternate))
    return report
