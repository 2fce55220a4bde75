"""Capacities of round ring condensers and their lower bounds.

The capacity of a ring condenser is computed through its identity with the
modulus of the curve family connecting the two boundary circles of the gap
annulus; the variational potential problem is never discretized.  Three
closed-form lower bounds are provided:

* a perimeter bound        perimeter_inf^p / gap_area^{p-1}        (p >= 1),
* a compact-measure bound  2 pi^{p/2} ((2-p)/(p-1))^{p-1}
                           * compact_area^{(2-p)/2}                (1 < p < 2),
* a diameter bound         gamma * diameter^p / open_area^{p-1}    (1 < p <= 2),

where the diameter bound's constant gamma is not pinned by theory and must
be supplied by the caller (default 1); :func:`estimate_gamma` reports the
largest constant consistent with a parameter sweep.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .errors import DomainError
from .geometry import ORIGIN, RingCondenser, as_exponent
from .modulus import connecting_modulus_annulus
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .report import VerificationReport, entry_inequality

__all__ = [
    "annulus_capacity",
    "cap_bound_perimeter",
    "cap_bound_measure",
    "cap_bound_diameter",
    "check_capacity_bounds",
    "estimate_gamma",
]


def annulus_capacity(cond: RingCondenser, q: float,
                     spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """q-capacity of a round ring condenser: the modulus of the family of
    curves connecting the compact disk's boundary to the outer circle."""
    return connecting_modulus_annulus(cond.inner_radius, cond.outer_radius, q, spec)


def cap_bound_perimeter(perimeter_inf: float, gap_area: float, p: float) -> float:
    """Lower bound perimeter_inf^p / gap_area^{p-1}.

    ``perimeter_inf`` is the infimal length of a boundary separating the
    compact set from the outer boundary inside the gap; for a round ring
    condenser it is the inner circumference.  Valid for every p >= 1; at
    p = 1 the area exponent vanishes and the bound is the perimeter itself.
    """
    if not (perimeter_inf > 0.0 and gap_area > 0.0):
        raise DomainError("perimeter and gap area must be positive, got "
                          f"{perimeter_inf} and {gap_area}")
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"perimeter bound needs p >= 1, got {p}")
    return perimeter_inf ** p / gap_area ** (p - 1.0)


def cap_bound_measure(compact_area: float, p: float) -> float:
    """Lower bound 2 pi^{p/2} ((2-p)/(p-1))^{p-1} compact_area^{(2-p)/2}.

    Only meaningful for 1 < p < 2: the coefficient degenerates at p = 1 and
    vanishes as p -> 2.
    """
    if not (1.0 < p < 2.0):
        raise DomainError(f"measure bound needs 1 < p < 2, got {p}")
    if not (compact_area > 0.0):
        raise DomainError(f"compact area must be positive, got {compact_area}")
    coeff = 2.0 * math.pi ** (p / 2.0) * ((2.0 - p) / (p - 1.0)) ** (p - 1.0)
    return coeff * compact_area ** ((2.0 - p) / 2.0)


def cap_bound_diameter(diameter: float, open_area: float, p: float,
                       gamma: float = 1.0) -> float:
    """Lower bound gamma * diameter^p / open_area^{p-1} for 1 < p <= 2.

    gamma is a caller-supplied positive constant (only the inequality's
    shape is theory-backed); a zero diameter gives the trivial bound 0.
    """
    if not (1.0 < p <= 2.0):
        raise DomainError(f"diameter bound needs 1 < p <= 2, got {p}")
    if not (gamma > 0.0 and open_area > 0.0 and diameter >= 0.0):
        raise DomainError("diameter bound needs gamma > 0, open_area > 0, "
                          f"diameter >= 0; got {gamma}, {open_area}, {diameter}")
    return gamma * diameter ** p / open_area ** (p - 1.0)


def check_capacity_bounds(cond: RingCondenser, p_list: Iterable[float],
                          gamma: float = 1.0, tolerance: float = 1e-9,
                          spec: QuadratureSpec = DEFAULT_SPEC) -> VerificationReport:
    """Compare the capacity against every applicable lower bound.

    One entry per (bound, p) with margin = capacity - bound; bounds whose
    exponent range excludes a given p are skipped, never failed.
    """
    report = VerificationReport()
    for p in p_list:
        ep = as_exponent(p)
        capacity = annulus_capacity(cond, ep.p, spec)
        report.append(entry_inequality(
            f"perimeter-bound p={ep.p:g}",
            cap_bound_perimeter(cond.separating_perimeter_inf, cond.gap_area, ep.p),
            capacity, tolerance))
        if 1.0 < ep.p < 2.0:
            report.append(entry_inequality(
                f"measure-bound p={ep.p:g}",
                cap_bound_measure(cond.compact_area, ep.p),
                capacity, tolerance))
        if 1.0 < ep.p <= 2.0:
            report.append(entry_inequality(
                f"diameter-bound p={ep.p:g}",
                cap_bound_diameter(cond.diameter, cond.open_area, ep.p, gamma),
                capacity, tolerance))
    return report


def estimate_gamma(inner_radii: Sequence[float], outer: float,
                   p_values: Sequence[float],
                   spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Empirical diameter-bound constant: the minimum over the sweep of

        capacity * open_area^{p-1} / diameter^p,

    i.e. the largest gamma for which the diameter bound holds on the whole
    grid.  The value is reported, never asserted against theory.
    """
    best = math.inf
    for p in p_values:
        if not (1.0 < p <= 2.0):
            raise DomainError(f"diameter bound needs 1 < p <= 2, got {p}")
        for r1 in inner_radii:
            cond = RingCondenser(ORIGIN, r1, outer)
            capacity = annulus_capacity(cond, p, spec)
            best = min(best, capacity * cond.open_area ** (p - 1.0)
                       / cond.diameter ** p)
    return best
