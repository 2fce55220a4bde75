"""Planar geometry primitives: points, exponents, rings, and weight fields.

Everything downstream works on disks and annuli centered at a designated
point z0, with a measurable weight Q > 0 sampled along circles around z0.
The weight is represented by :class:`QField`, which supports four variants:

* ``constant``       -- Q(z) = c,
* ``radial``         -- Q(z) = q(|z - center|),
* ``analytic``       -- Q(z) given by an arbitrary positive callable,
* ``polar_grid``     -- positive samples on an (r, theta) grid, evaluated by
  bilinear interpolation in (r, theta) with clamping at the radial edges and
  periodic wraparound in theta.

Field evaluation is strictly positive; ``math.inf`` is an allowed *flagged*
value (it arises from degenerate Jacobians of test maps), while zero,
negative, or NaN samples raise :class:`~ringcap.errors.InvalidFieldError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InvalidFieldError, ValidationError

__all__ = [
    "PlanePoint",
    "ORIGIN",
    "ExponentP",
    "as_exponent",
    "Annulus",
    "RingCondenser",
    "FamilyKind",
    "CurveFamilyDescriptor",
    "QField",
    "qfield_eval",
    "validate_annulus",
]

# Relative slack used for closed-disk domain membership tests, so that points
# sitting exactly on the rim (up to rounding) are accepted.
_RIM_SLACK = 1e-12


@dataclass(frozen=True)
class PlanePoint:
    """A point of the plane, used both as field argument and ring center."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValidationError(f"plane point must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "PlanePoint") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    @staticmethod
    def from_polar(center: "PlanePoint", r: float, theta: float) -> "PlanePoint":
        return PlanePoint(center.x + r * math.cos(theta), center.y + r * math.sin(theta))


ORIGIN = PlanePoint(0.0, 0.0)


@dataclass(frozen=True)
class ExponentP:
    """An integrability exponent p > 1 together with its derived exponents.

    ``q = p/(p-1)`` is the Hoelder conjugate and ``lam = 1/(p-1)`` is the
    weight exponent that appears in every circle norm below.
    """

    p: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > 1.0):
            raise DomainError(f"exponent must satisfy p > 1, got p={self.p}")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    @property
    def lam(self) -> float:
        return 1.0 / (self.p - 1.0)


def as_exponent(p: "ExponentP | float") -> ExponentP:
    """Coerce a float into an ExponentP (validating p > 1)."""
    return p if isinstance(p, ExponentP) else ExponentP(float(p))


@dataclass(frozen=True)
class Annulus:
    """Open circular ring {z : r1 < |z - center| < r2} with 0 < r1 < r2 < inf."""

    center: PlanePoint
    r1: float
    r2: float

    def __post_init__(self):
        validate_annulus(self)

    @property
    def ratio(self) -> float:
        return self.r2 / self.r1


def validate_annulus(a: Annulus) -> Annulus:
    """Check the ring invariants 0 < r1 < r2 < inf; returns the annulus."""
    if not (math.isfinite(a.r1) and math.isfinite(a.r2)):
        raise ValidationError(f"annulus radii must be finite, got ({a.r1}, {a.r2})")
    if not (0.0 < a.r1 < a.r2):
        raise ValidationError(
            f"annulus radii must satisfy 0 < r1 < r2, got r1={a.r1}, r2={a.r2}"
        )
    return a


@dataclass(frozen=True)
class RingCondenser:
    """A condenser (closed disk, ambient open disk) around a common center.

    The pair is (E, A) with E the closed disk of radius ``inner_radius`` and
    A the open disk of radius ``outer_radius``; its gap is a round annulus.
    """

    center: PlanePoint
    inner_radius: float
    outer_radius: float

    def __post_init__(self):
        if not (0.0 < self.inner_radius < self.outer_radius < math.inf):
            raise ValidationError(
                "condenser radii must satisfy 0 < inner < outer < inf, got "
                f"inner={self.inner_radius}, outer={self.outer_radius}"
            )

    @property
    def gap(self) -> Annulus:
        return Annulus(self.center, self.inner_radius, self.outer_radius)

    @property
    def compact_area(self) -> float:
        return math.pi * self.inner_radius**2

    @property
    def open_area(self) -> float:
        return math.pi * self.outer_radius**2

    @property
    def gap_area(self) -> float:
        return math.pi * (self.outer_radius**2 - self.inner_radius**2)

    @property
    def diameter(self) -> float:
        return 2.0 * self.inner_radius

    @property
    def separating_perimeter_inf(self) -> float:
        """Infimal length of a smooth curve separating the plates: any such
        curve encloses the inner disk, so its length is at least 2*pi*inner."""
        return 2.0 * math.pi * self.inner_radius


class FamilyKind(Enum):
    """The two curve families attached to a ring: the circles it contains,
    and the curves connecting its boundary components across the gap."""

    CIRCLES = "circles"
    CONNECTING = "connecting"


@dataclass(frozen=True)
class CurveFamilyDescriptor:
    """A symbolic handle on a curve family in a ring (never enumerated)."""

    annulus: Annulus
    kind: FamilyKind


class QField:
    """A strictly positive measurable weight on a disk around ``center``.

    Use the factory classmethods; evaluation goes through :meth:`eval` (or
    the free function :func:`qfield_eval`), which enforces the domain and
    positivity invariants at every queried point.
    """

    def __init__(
        self,
        variant: str,
        evaluate: Callable[[PlanePoint], float],
        center: PlanePoint = ORIGIN,
        domain_radius: float = math.inf,
        label: str = "",
    ):
        if not (domain_radius > 0.0):
            raise ValidationError(f"domain radius must be positive, got {domain_radius}")
        self.variant = variant
        self._evaluate = evaluate
        self.center = center
        self.domain_radius = domain_radius
        self.label = label or variant

    # -- factories ---------------------------------------------------------

    @classmethod
    def constant(cls, value: float, center: PlanePoint = ORIGIN,
                 domain_radius: float = math.inf) -> "QField":
        if not (value > 0.0) or math.isnan(value):
            raise InvalidFieldError(f"constant field value must be positive, got {value}")
        return cls("constant", lambda z: value, center, domain_radius,
                   label=f"const{value:g}")

    @classmethod
    def radial(cls, profile: Callable[[float], float], center: PlanePoint = ORIGIN,
               domain_radius: float = math.inf, label: str = "radial") -> "QField":
        def evaluate(z: PlanePoint) -> float:
            return profile(center.distance_to(z))
        return cls("radial", evaluate, center, domain_radius, label=label)

    @classmethod
    def analytic(cls, fn: Callable[[PlanePoint], float], center: PlanePoint = ORIGIN,
                 domain_radius: float = math.inf, label: str = "analytic") -> "QField":
        return cls("analytic", fn, center, domain_radius, label=label)

    @classmethod
    def polar_grid(cls, samples: Sequence[Sequence[float]], center: PlanePoint,
                   radii: Sequence[float], angles: Sequence[float],
                   label: str = "grid") -> "QField":
        """Bilinear (r, theta) interpolation of positive samples.

        ``samples[i][j]`` is the value at radius ``radii[i]`` and angle
        ``angles[j]``; angles live in [0, 2*pi) and wrap periodically, radii
        are clamped at both edges (queries beyond the outer radius see the
        outermost ring of samples).
        """
        s = np.asarray(samples, dtype=float)
        r = np.asarray(radii, dtype=float)
        t = np.asarray(angles, dtype=float)
        if s.ndim != 2 or s.shape != (r.size, t.size):
            raise ValidationError(
                f"samples shape {s.shape} does not match (radii, angles) = ({r.size}, {t.size})"
            )
        if r.size < 2 or t.size < 2:
            raise ValidationError("polar grid needs at least two radii and two angles")
        if not (np.all(np.diff(r) > 0) and np.all(r > 0)):
            raise ValidationError("grid radii must be positive and strictly increasing")
        if not (np.all(np.diff(t) > 0) and t[0] >= 0.0 and t[-1] < 2.0 * math.pi):
            raise ValidationError("grid angles must be strictly increasing in [0, 2*pi)")
        if not np.all(np.isfinite(s)) or not np.all(s > 0):
            raise InvalidFieldError("grid samples must be finite and strictly positive")

        two_pi = 2.0 * math.pi
        # Close the angular seam by appending the first column at angle t0 + 2*pi.
        t_ext = np.append(t, t[0] + two_pi)
        s_ext = np.hstack([s, s[:, :1]])

        def evaluate(z: PlanePoint) -> float:
            rr = center.distance_to(z)
            rr = min(max(rr, r[0]), r[-1])
            th = math.atan2(z.y - center.y, z.x - center.x) % two_pi
            if th < t_ext[0]:
                th += two_pi
            i = int(np.clip(np.searchsorted(r, rr, side="right") - 1, 0, r.size - 2))
            j = int(np.clip(np.searchsorted(t_ext, th, side="right") - 1, 0, t_ext.size - 2))
            fr = (rr - r[i]) / (r[i + 1] - r[i])
            ft = (th - t_ext[j]) / (t_ext[j + 1] - t_ext[j])
            return float(
                s_ext[i, j] * (1 - fr) * (1 - ft)
                + s_ext[i + 1, j] * fr * (1 - ft)
                + s_ext[i, j + 1] * (1 - fr) * ft
                + s_ext[i + 1, j + 1] * fr * ft
            )

        return cls("polar_grid", evaluate, center, float(r[-1]), label=label)

    # -- evaluation --------------------------------------------------------

    def eval(self, z: PlanePoint) -> float:
        d = self.center.distance_to(z)
        if d > self.domain_radius * (1.0 + _RIM_SLACK):
            raise DomainError(
                f"point ({z.x}, {z.y}) lies outside the field domain "
                f"(|z - center| = {d} > {self.domain_radius})"
            )
        value = self._evaluate(z)
        if math.isnan(value) or value <= 0.0:
            raise InvalidFieldError(
                f"field evaluated to non-positive/NaN value {value} at ({z.x}, {z.y})"
            )
        return value

    def __call__(self, z: PlanePoint) -> float:
        return self.eval(z)


def qfield_eval(field: QField, z: PlanePoint) -> float:
    """Evaluate a weight field at a point (domain- and positivity-checked)."""
    return field.eval(z)
