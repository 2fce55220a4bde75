"""Adaptive quadrature over circles, radial intervals, and small disks.

These three integrals are the only notion of integration used anywhere in
the package:

* :func:`circle_integral`   -- arc-length integral over a circle |z-c| = r,
  by adaptive composite Simpson in the angle with interval halving;
* :func:`radial_integral`   -- 1-D integral over (r1, r2) by a globally
  adaptive *open* scheme (midpoint tripling + Richardson extrapolation per
  segment, worst-segment bisection), so integrands are never evaluated at
  the endpoints and integrable endpoint singularities converge;
* :func:`disk_average`      -- mean value over a disk, as the nested radial
  integral of circle means, computed in normalized coordinates so that its
  accuracy is independent of the disk size.

Degenerate values are flags, not exceptions: an integrand that evaluates to
``inf``, or running estimates that blow past the divergence guard, make the
integral report ``math.inf``.  Budget exhaustion with a still-noisy estimate
raises :class:`~ringcap.errors.AccuracyError` carrying the best estimate.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from .errors import AccuracyError, DomainError, ValidationError
from .geometry import PlanePoint

__all__ = ["QuadratureSpec", "DEFAULT_SPEC", "circle_integral", "radial_integral",
           "disk_average"]

# Running estimates larger than this are reported as a diverging integral.
DIVERGENCE_GUARD = 1e12

# Cap on worst-segment bisections per radial integral, against pathological
# integrands; ordinary singular integrands need a few dozen.
_SPLIT_BUDGET = 4096

# Romberg depth per open segment: midpoint rule with 1, 3, 9, 27 nodes.
_SEGMENT_LEVELS = 4

# Segments touching an endpoint of the original interval are split at this
# fraction of their width from that endpoint (instead of bisected), so the
# tip shrinks geometrically and integrable endpoint singularities converge
# within the depth cap.
_ENDPOINT_SPLIT = 0.125


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy budget shared by all quadrature routines.

    An estimate is accepted once its error bound drops below
    ``max(abs_tol, rel_tol * |estimate|)``.  For circle integrals the bound
    is enforced on the unit-radius core integral (the angle integral of the
    integrand), so absolute accuracy scales with the circle radius and tiny
    circles are *not* integrated more coarsely in relative terms.
    ``max_refinements`` caps Simpson interval halvings (circles) and the
    bisection depth of any one segment (radial integrals).
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_refinements: int = 24

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValidationError("quadrature tolerances must be positive")
        if self.max_refinements < 1:
            raise ValidationError("max_refinements must be >= 1")

    def threshold(self, estimate: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(estimate))


DEFAULT_SPEC = QuadratureSpec()


def _check_sample(v: float, where: str) -> float:
    if math.isnan(v):
        raise DomainError(f"integrand returned NaN {where}")
    return v


# ---------------------------------------------------------------------------
# circle integrals (adaptive composite Simpson in the angle)
# ---------------------------------------------------------------------------


def _circle_core(g: Callable[[PlanePoint], float], center: PlanePoint, r: float,
                 spec: QuadratureSpec,
                 history: "list[tuple[float, float]] | None" = None) -> float:
    """Angle integral of g over the circle |z - center| = r (no arc factor)."""
    two_pi = 2.0 * math.pi

    def f(theta: float) -> float:
        return _check_sample(g(PlanePoint.from_polar(center, r, theta)),
                             f"on circle r={r} at theta={theta}")

    n = 4
    h = two_pi / n
    vals = [f(i * h) for i in range(n + 1)]
    if any(math.isinf(v) for v in vals):
        return math.inf
    s_prev = (h / 3.0) * (vals[0] + vals[-1]
                          + 4.0 * sum(vals[1:-1:2]) + 2.0 * sum(vals[2:-1:2]))
    for _ in range(spec.max_refinements):
        n *= 2
        h = two_pi / n
        new_vals = [f((2 * i + 1) * h) for i in range(n // 2)]
        if any(math.isinf(v) for v in new_vals):
            return math.inf
        merged = []
        for old, new in zip(vals, new_vals):
            merged.extend((old, new))
        merged.append(vals[-1])
        vals = merged
        s = (h / 3.0) * (vals[0] + vals[-1]
                         + 4.0 * sum(vals[1:-1:2]) + 2.0 * sum(vals[2:-1:2]))
        err = abs(s - s_prev)
        if history is not None:
            history.append((s, err))
        if err <= spec.threshold(s):
            return s
        s_prev = s
    raise AccuracyError(f"circle integral did not converge at r={r}",
                        estimate=s_prev, error_bound=err)


def circle_integral(g: Callable[[PlanePoint], float], center: PlanePoint, r: float,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Arc-length integral of g over the circle of radius r about center.

    Computes ``r * integral_0^{2 pi} g(center + r e^{i theta}) d theta``.
    A degenerate circle (r = 0) carries no length, so the integral is 0.
    """
    if r < 0 or not math.isfinite(r):
        raise ValidationError(f"circle radius must be finite and >= 0, got {r}")
    if r == 0.0:
        return 0.0
    return r * _circle_core(g, center, r, spec)


# ---------------------------------------------------------------------------
# radial integrals (globally adaptive, open rules only)
# ---------------------------------------------------------------------------


def _open_segment(f: Callable[[float], float], a: float, b: float
                  ) -> tuple[float, float]:
    """Integrate f over (a, b) by midpoint tripling + Richardson extrapolation.

    Uses 1, 3, 9, 27 midpoint nodes (all interior; earlier nodes are reused
    by the tripling) and extrapolates the h^2 error expansion.  Returns the
    last diagonal estimate and the difference of the last two diagonals as
    its error bound; (inf, inf) when the integrand is infinite on a node.
    """
    width = b - a

    def node(x: float) -> float:
        # Keep nodes strictly interior even at float resolution, so an
        # endpoint singularity is never sampled exactly.
        if x <= a:
            return math.nextafter(a, b)
        if x >= b:
            return math.nextafter(b, a)
        return x

    vals = [f(node(a + 0.5 * width))]
    if math.isinf(vals[0]):
        return math.inf, math.inf
    rows = [[width * vals[0]]]
    value, err = rows[0][0], math.inf
    for k in range(1, _SEGMENT_LEVELS):
        n = 3 ** k
        h = width / n
        level_vals = []
        for j in range(n):
            if j % 3 == 1:
                level_vals.append(vals[j // 3])
            else:
                v = f(node(a + (j + 0.5) * h))
                if math.isinf(v):
                    return math.inf, math.inf
                level_vals.append(v)
        vals = level_vals
        row = [h * math.fsum(vals)]
        for m in range(1, k + 1):
            row.append(row[m - 1] + (row[m - 1] - rows[k - 1][m - 1]) / (9.0 ** m - 1.0))
        rows.append(row)
        value, err = row[-1], abs(row[-1] - rows[k - 1][-1])
    return value, err


def _radial_adaptive(h: Callable[[float], float], r1: float, r2: float,
                     spec: QuadratureSpec,
                     error_trace: "list[float] | None" = None) -> float:
    def f(t: float) -> float:
        return _check_sample(h(t), f"at t={t}")

    value, err = _open_segment(f, r1, r2)
    # Heap of (-err, insertion counter, a, b, depth, value); the counter makes
    # ordering deterministic when error bounds tie.
    counter = 0
    queue: list[tuple[float, int, float, float, int, float]] = []
    heapq.heappush(queue, (-err, counter, r1, r2, 0, value))
    frozen_val = 0.0   # segments at max depth, no longer split
    frozen_err = 0.0
    for _ in range(_SPLIT_BUDGET):
        total_val = frozen_val + math.fsum(item[5] for item in queue)
        total_err = frozen_err + math.fsum(-item[0] for item in queue)
        if math.isinf(total_val) or abs(total_val) > DIVERGENCE_GUARD:
            return math.inf
        if error_trace is not None:
            error_trace.append(total_err)
        if total_err <= spec.threshold(total_val):
            return total_val
        while queue and -queue[0][0] > 0 and queue[0][4] >= spec.max_refinements:
            neg_err, _, _, _, _, val = heapq.heappop(queue)
            frozen_val += val
            frozen_err += -neg_err
        if not queue:
            raise AccuracyError("radial integral did not converge "
                                "(all segments at max bisection depth)",
                                estimate=total_val, error_bound=total_err)
        neg_err, _, a, b, depth, val = heapq.heappop(queue)
        touches_left = a == r1
        touches_right = b == r2
        if touches_left and not touches_right:
            mid = a + (b - a) * _ENDPOINT_SPLIT
        elif touches_right and not touches_left:
            mid = b - (b - a) * _ENDPOINT_SPLIT
        else:
            mid = 0.5 * (a + b)
        if not (a < mid < b):
            # Width at float resolution; the segment cannot be refined.
            frozen_val += val
            frozen_err += -neg_err
            continue
        for (lo, hi) in ((a, mid), (mid, b)):
            v, e = _open_segment(f, lo, hi)
            counter += 1
            heapq.heappush(queue, (-e, counter, lo, hi, depth + 1, v))
    total_val = frozen_val + math.fsum(item[5] for item in queue)
    total_err = frozen_err + math.fsum(-item[0] for item in queue)
    if math.isinf(total_val) or abs(total_val) > DIVERGENCE_GUARD:
        return math.inf
    if total_err <= spec.threshold(total_val):
        return total_val
    raise AccuracyError("radial integral exhausted its subdivision budget",
                        estimate=total_val, error_bound=total_err)


def radial_integral(h: Callable[[float], float], r1: float, r2: float,
                    spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integral of h over (r1, r2), 0 <= r1 < r2, by open adaptive quadrature.

    The integrand is never evaluated at r1 or r2, so integrable endpoint
    singularities (exponents > -1) are handled directly.  Divergence --
    an infinite sample or estimates beyond the guard -- yields ``math.inf``.
    """
    if not (math.isfinite(r1) and math.isfinite(r2)):
        raise ValidationError(f"radial limits must be finite, got ({r1}, {r2})")
    if not (0.0 <= r1 < r2):
        raise ValidationError(f"radial limits must satisfy 0 <= r1 < r2, got ({r1}, {r2})")
    return _radial_adaptive(h, r1, r2, spec)


# ---------------------------------------------------------------------------
# disk averages
# ---------------------------------------------------------------------------


def disk_average(g: Callable[[PlanePoint], float], center: PlanePoint, eps: float,
                 spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Mean value of g over the disk of radius eps about center.

    Evaluated as ``(1/pi) * integral_0^1 u * core(eps * u) du`` with
    ``core(rho)`` the angle integral of g on the circle of radius rho; the
    normalized form keeps the working magnitudes of order g even for very
    small disks, so relative accuracy does not degrade as eps -> 0.
    """
    if not (eps > 0 and math.isfinite(eps)):
        raise ValidationError(f"disk radius must be positive and finite, got {eps}")

    def integrand(u: float) -> float:
        return u * _circle_core(g, center, eps * u, spec)

    return _radial_adaptive(integrand, 0.0, 1.0, spec) / math.pi
