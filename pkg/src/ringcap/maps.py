"""Radial homeomorphisms of the unit disk with exact derivative data.

A radial map sends z to (rho(|z|)/|z|) * z for a strictly increasing profile
rho with rho(0) = 0.  Rotational symmetry makes every quantity the distortion
estimates need available in closed form:

    |f_z| + |f_zbar| = max(rho'(r), rho(r)/r),
    J_f              = rho'(r) * rho(r) / r,
    K_p              = (|f_z| + |f_zbar|)^p / J_f,

and the image of the disk of radius r is exactly the disk of radius rho(r).
These maps are the ground truth against which the area, growth, and
point-behavior inequalities are verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import DomainError, ValidationError
from .geometry import PlanePoint, QField, as_exponent

__all__ = [
    "RadialMap",
    "DerivativeData",
    "radial_power_map",
    "piecewise_power_map",
    "scale_map",
    "derivative_data",
    "kp_field",
    "image_disk_area",
    "min_modulus",
    "homeomorphism_certificate",
]


@dataclass(frozen=True)
class RadialMap:
    """A radial homeomorphism given by its profile rho and its derivative.

    Invariants: rho(0) = 0, rho strictly increasing and continuous on [0, 1),
    rho' positive almost everywhere on (0, 1).
    """

    profile: Callable[[float], float]
    profile_derivative: Callable[[float], float]
    label: str

    def __call__(self, r: float) -> float:
        return self.profile(r)

    def plane_map(self, z: PlanePoint) -> PlanePoint:
        """The full planar map z -> (rho(|z|)/|z|) z, fixing the origin."""
        r = math.hypot(z.x, z.y)
        if r == 0.0:
            return PlanePoint(0.0, 0.0)
        scale = self.profile(r) / r
        return PlanePoint(z.x * scale, z.y * scale)


@dataclass(frozen=True)
class DerivativeData:
    """Pointwise derivative aggregates of a radial map on a circle.

    ``stretch_sum`` is |f_z| + |f_zbar|, which for an orientation-preserving
    radial map equals the larger of the radial and tangential stretches.
    """

    stretch_sum: float
    jacobian: float
    at_radius: float

    def __post_init__(self):
        if self.jacobian > 0.0 and self.stretch_sum < math.sqrt(self.jacobian):
            raise ValidationError(
                "stretch sum cannot undercut the Jacobian square root: "
                f"{self.stretch_sum} < sqrt({self.jacobian})"
            )


def radial_power_map(alpha: float) -> RadialMap:
    """The power stretch rho(r) = r^alpha (identity at alpha = 1)."""
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise DomainError(f"power maps need alpha > 0, got {alpha}")
    return RadialMap(
        profile=lambda r: r ** alpha,
        profile_derivative=lambda r: alpha * r ** (alpha - 1.0),
        label=f"power a={alpha:g}",
    )


def piecewise_power_map(alphas: Sequence[float],
                        knots: Sequence[float]) -> RadialMap:
    """A C^1 radial map whose profile is a shifted power a_i + b_i r^{alpha_i}
    on each segment between consecutive knots, normalized to rho(1) = 1.

    Pure powers cannot be glued C^1 (matching value and slope at a knot pins
    both coefficients), hence the shifts.  Coefficients are solved left to
    right: the first segment starts at rho(0) = 0, and each knot passes its
    value and slope to the next segment.
    """
    alphas = [float(a) for a in alphas]
    knots = [float(k) for k in knots]
    if len(alphas) < 1 or len(knots) != len(alphas) - 1:
        raise ValidationError("need one exponent per segment: "
                              f"{len(alphas)} exponents, {len(knots)} knots")
    if any(not (a > 0.0 and math.isfinite(a)) for a in alphas):
        raise DomainError(f"segment exponents must be positive, got {alphas}")
    if any(not (0.0 < k < 1.0) for k in knots) or \
            any(b <= a for a, b in zip(knots, knots[1:])):
        raise ValidationError(f"knots must be strictly increasing in (0,1), got {knots}")

    shifts = [0.0]
    coeffs = [1.0]
    for i, k in enumerate(knots):
        value = shifts[i] + coeffs[i] * k ** alphas[i]
        slope = alphas[i] * coeffs[i] * k ** (alphas[i] - 1.0)
        b = slope * k ** (1.0 - alphas[i + 1]) / alphas[i + 1]
        shifts.append(value - b * k ** alphas[i + 1])
        coeffs.append(b)
    edges = knots + [1.0]
    total = shifts[-1] + coeffs[-1]  # rho(1) before normalization

    def segment(r: float) -> int:
        for i, edge in enumerate(edges):
            if r <= edge:
                return i
        return len(alphas) - 1

    def profile(r: float) -> float:
        i = segment(r)
        return (shifts[i] + coeffs[i] * r ** alphas[i]) / total

    def derivative(r: float) -> float:
        i = segment(r)
        return alphas[i] * coeffs[i] * r ** (alphas[i] - 1.0) / total

    label = "piecewise a=" + ",".join(f"{a:g}" for a in alphas)
    return RadialMap(profile, derivative, label)


def scale_map(base: RadialMap, c: float) -> RadialMap:
    """Post-compose with the scaling w -> c w (profile and derivative both
    multiply by c); used by the Lipschitz scaling-law checks."""
    if not (c > 0.0 and math.isfinite(c)):
        raise DomainError(f"scaling factor must be positive, got {c}")
    return RadialMap(
        profile=lambda r: c * base.profile(r),
        profile_derivative=lambda r: c * base.profile_derivative(r),
        label=f"{base.label} scaled c={c:g}",
    )


def derivative_data(radial_map: RadialMap, r: float) -> DerivativeData:
    """Exact derivative aggregates at radius r in (0, 1)."""
    if not (0.0 < r < 1.0):
        raise DomainError(f"derivative data needs 0 < r < 1, got {r}")
    radial = radial_map.profile_derivative(r)
    tangential = radial_map.profile(r) / r
    return DerivativeData(stretch_sum=max(radial, tangential),
                          jacobian=radial * tangential,
                          at_radius=r)


def kp_field(radial_map: RadialMap, p: "float") -> QField:
    """The p-dilatation of a radial map as a radial weight field on the disk:

        K_p(r) = max(rho', rho/r)^p / (rho' rho / r).

    A degenerate (vanishing or infinite) Jacobian on a circle flags the field
    value as infinite there; the origin is refused (the power-law behavior
    r^{(alpha-1)(p-2)} of power maps does not extrapolate).
    """
    ep = as_exponent(p)

    def dilatation(r: float) -> float:
        if r == 0.0:
            raise DomainError("dilatation at the origin is refused")
        radial = radial_map.profile_derivative(r)
        tangential = radial_map.profile(r) / r
        jacobian = radial * tangential
        if not (jacobian > 0.0 and math.isfinite(jacobian)):
            return math.inf
        return max(radial, tangential) ** ep.p / jacobian

    return QField.radial(dilatation, domain_radius=1.0,
                         label=f"K_{ep.p:g} of {radial_map.label}")


def image_disk_area(radial_map: RadialMap, r: float) -> float:
    """Area of the image of the disk of radius r: pi rho(r)^2 exactly."""
    if not (0.0 < r <= 1.0):
        raise DomainError(f"image area needs 0 < r <= 1, got {r}")
    return math.pi * radial_map.profile(r) ** 2


def min_modulus(radial_map: RadialMap, r: float) -> float:
    """min over |z| = r of |f(z)|, which is rho(r) by symmetry."""
    if not (0.0 < r < 1.0):
        raise DomainError(f"min modulus needs 0 < r < 1, got {r}")
    return radial_map.profile(r)


def homeomorphism_certificate(radial_map: RadialMap, n: int = 1000) -> bool:
    """Check strict increase of the profile on an n-point grid of (0, 1)."""
    values = [radial_map.profile(i / (n + 1)) for i in range(1, n + 1)]
    if radial_map.profile(0.0) != 0.0:
        return False
    previous = 0.0
    for v in values:
        if not v > previous:
            return False
        previous = v
    return True
