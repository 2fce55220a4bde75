"""Ring moduli of curve families and the weighted-infimum lemma behind them.

For an exponent p > 1 and a positive weight Q on a ring around z0, the key
quantity is the circle norm

    ring_norm(Q; r) = ( circle_integral of Q^{1/(p-1)} at radius r )^{p-1},

and the lower bound for the p-modulus of the family of circles in the ring
(r1, r2) is the radial integral

    I = integral_{r1}^{r2} dr / ring_norm(Q; r).

Both closed-form routes in this module are backed by an independent discrete
route: :func:`weighted_infimum_closed` evaluates the minimization

    inf { sum phi_i a_i^q mu_i :  a_i >= 0,  sum a_i mu_i = 1 }

in closed form, and :func:`weighted_infimum_numeric` solves the same problem
by projected gradient descent, so the two can be checked against each other
without sharing any code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError, DegenerateCaseError, DomainError, ValidationError
from .geometry import (Annulus, CurveFamilyDescriptor, ExponentP, FamilyKind,
                       PlanePoint, QField, as_exponent)
from .quadrature import DEFAULT_SPEC, QuadratureSpec, circle_integral, radial_integral

__all__ = [
    "RadialDensity",
    "DiscreteMeasureSpace",
    "ring_norm",
    "lower_modulus_bound",
    "circle_family_modulus",
    "connecting_modulus_annulus",
    "family_modulus",
    "weighted_infimum_closed",
    "weighted_infimum_numeric",
    "extremal_density",
    "eta0",
    "jensen_functional",
]

# A radial density must integrate to 1 within this slack to be admissible.
_DENSITY_TOL = 1e-8


@dataclass(frozen=True)
class RadialDensity:
    """A nonnegative density eta on (r1, r2), normalized to unit integral.

    ``evaluate`` may be unbounded near the endpoints; the open radial
    quadrature never samples them.
    """

    evaluate: Callable[[float], float]
    r1: float
    r2: float
    label: str = "eta"

    def __post_init__(self):
        if not (0.0 < self.r1 < self.r2 < math.inf):
            raise ValidationError(
                f"density support must satisfy 0 < r1 < r2, got ({self.r1}, {self.r2})"
            )

    def __call__(self, r: float) -> float:
        return self.evaluate(r)

    def normalization_defect(self, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
        """|integral eta - 1|, recomputed by radial quadrature."""
        return abs(radial_integral(self.evaluate, self.r1, self.r2, spec) - 1.0)

    def validate(self, spec: QuadratureSpec = DEFAULT_SPEC) -> "RadialDensity":
        defect = self.normalization_defect(spec)
        if not (defect <= _DENSITY_TOL):
            raise ValidationError(
                f"density '{self.label}' is not normalized: |integral - 1| = {defect}"
            )
        return self

    @staticmethod
    def uniform(r1: float, r2: float) -> "RadialDensity":
        value = 1.0 / (r2 - r1)
        return RadialDensity(lambda r: value, r1, r2, label="uniform")

    @staticmethod
    def from_profile(profile: Callable[[float], float], r1: float, r2: float,
                     spec: QuadratureSpec = DEFAULT_SPEC,
                     label: str = "profile") -> "RadialDensity":
        """Normalize a nonnegative profile into a density by dividing by its
        integral (which must be finite and positive)."""
        total = radial_integral(profile, r1, r2, spec)
        if not (0.0 < total < math.inf):
            raise DegenerateCaseError(
                f"profile cannot be normalized (integral = {total})",
                branch="zero-mass" if total == 0.0 else "infinite-mass",
            )
        return RadialDensity(lambda r: profile(r) / total, r1, r2, label=label)


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    """A finite measure space with point weights and a positive integrand phi.

    ``weights[i]`` is the measure of point i and ``phi[i]`` the value of the
    weight function there; both must be positive and finite.
    """

    weights: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        f = np.asarray(self.phi, dtype=float)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "phi", f)
        if w.ndim != 1 or f.shape != w.shape or w.size == 0:
            raise ValidationError("weights and phi must be equal-length 1-D arrays")
        if not (np.all(np.isfinite(w)) and np.all(w > 0)):
            raise ValidationError("all weights must be positive and finite")
        if not (np.all(np.isfinite(f)) and np.all(f > 0)):
            raise ValidationError("all phi values must be positive and finite")

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    @staticmethod
    def from_function(fn: Callable[[float], float], n: int,
                      a: float = 0.0, b: float = 1.0) -> "DiscreteMeasureSpace":
        """Midpoint sampling of a function on [a, b] into n cells of equal mass."""
        if n < 1:
            raise ValidationError("need at least one sample point")
        x = a + (np.arange(n) + 0.5) * (b - a) / n
        return DiscreteMeasureSpace(np.full(n, (b - a) / n),
                                    np.array([fn(v) for v in x], dtype=float))


# ---------------------------------------------------------------------------
# circle norms and the modulus criterion
# ---------------------------------------------------------------------------


def ring_norm(qfield: QField, center: PlanePoint, r: float,
              p: "ExponentP | float", spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The circle norm (integral of Q^{1/(p-1)} over |z-center|=r)^{p-1}.

    Reported as ``math.inf`` when the circle integral is infinite (flagged
    degenerate weight values on the circle).
    """
    ep = as_exponent(p)
    if not (r > 0 and math.isfinite(r)):
        raise DomainError(f"ring_norm needs a positive finite radius, got {r}")
    lam = ep.lam
    core = circle_integral(lambda z: qfield.eval(z) ** lam, center, r, spec)
    if math.isinf(core):
        return math.inf
    return core ** (ep.p - 1.0)


def lower_modulus_bound(qfield: QField, annulus: Annulus, p: "ExponentP | float",
                        spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Lower bound I = integral_{r1}^{r2} dr / ring_norm(Q; r) for the
    p-modulus of the circle family of the ring.

    Degenerate branches are flagged values: a diverging radial integral
    reports ``math.inf``; a circle norm that is infinite on (nearly) every
    circle makes the integrand vanish and the bound tend to 0.
    """
    ep = as_exponent(p)

    def integrand(r: float) -> float:
        norm = ring_norm(qfield, annulus.center, r, ep, spec)
        if math.isinf(norm):
            return 0.0
        return 1.0 / norm

    return radial_integral(integrand, annulus.r1, annulus.r2, spec)


def circle_family_modulus(r1: float, r2: float, p: "ExponentP | float",
                          spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Exact p-modulus of the family of circles in the ring (r1, r2):
    integral_{r1}^{r2} (2 pi r)^{1-p} dr.  A degenerate ring r1 = r2 carries
    an empty family, so the modulus is 0."""
    ep = as_exponent(p)
    if not (0.0 < r1 <= r2 < math.inf):
        raise ValidationError(f"radii must satisfy 0 < r1 <= r2, got ({r1}, {r2})")
    if r1 == r2:
        return 0.0
    return radial_integral(lambda r: (2.0 * math.pi * r) ** (1.0 - ep.p), r1, r2, spec)


def connecting_modulus_annulus(r1: float, r2: float, q: float,
                               spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """q-modulus of the family connecting the boundary circles of (r1, r2).

    Equals ``2 pi c^q J`` with ``J = integral r^{-1/(q-1)} dr`` and
    ``c = 1/J``, i.e. ``2 pi J^{1-q}``; for q = 2 this is the classical
    ``2 pi / log(r2/r1)``.
    """
    eq = as_exponent(q)
    if not (0.0 < r1 < r2 < math.inf):
        raise ValidationError(f"radii must satisfy 0 < r1 < r2, got ({r1}, {r2})")
    if eq.p == 2.0:
        return 2.0 * math.pi / math.log(r2 / r1)
    s = 1.0 / (eq.p - 1.0)
    j = radial_integral(lambda r: r ** (-s), r1, r2, spec)
    return 2.0 * math.pi * j ** (1.0 - eq.p)


def family_modulus(family: CurveFamilyDescriptor, exponent: float,
                   spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Modulus of a described curve family, dispatched on its kind."""
    a = family.annulus
    if family.kind is FamilyKind.CIRCLES:
        return circle_family_modulus(a.r1, a.r2, exponent, spec)
    return connecting_modulus_annulus(a.r1, a.r2, exponent, spec)


# ---------------------------------------------------------------------------
# the weighted-infimum lemma: closed form and independent numeric route
# ---------------------------------------------------------------------------


def weighted_infimum_closed(space: DiscreteMeasureSpace, q: float
                            ) -> tuple[float, np.ndarray]:
    """Closed form of inf { sum phi a^q mu : a >= 0, sum a mu = 1 }.

    With lam = 1/(q-1) the value is ``(sum phi^{-lam} mu)^{-1/lam}`` and the
    unique minimizer is ``a0 = gamma * phi^{-lam}`` with
    ``gamma = (sum phi^{-lam} mu)^{-1}``.  When the normalizing sum
    overflows, the infimum degenerates to the flagged value 0.
    """
    eq = as_exponent(q)
    lam = 1.0 / (eq.p - 1.0)
    s = float(np.sum(self_pow(space.phi, -lam) * space.weights))
    if math.isinf(s):
        return 0.0, np.zeros_like(space.phi)
    gamma = 1.0 / s
    alpha0 = gamma * self_pow(space.phi, -lam)
    return s ** (-1.0 / lam), alpha0


def self_pow(arr: np.ndarray, exponent: float) -> np.ndarray:
    """Elementwise power that propagates overflow as inf without warnings."""
    with np.errstate(over="ignore", divide="ignore"):
        return np.asarray(arr, dtype=float) ** exponent


def infimum_objective(space: DiscreteMeasureSpace, q: float,
                      alpha: np.ndarray) -> float:
    """The functional sum phi_i alpha_i^q mu_i being minimized."""
    return float(np.sum(space.phi * np.abs(alpha) ** q * space.weights))


def project_to_constraint(alpha: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Euclidean projection onto { a >= 0, sum a_i mu_i = 1 }.

    The KKT form is a_i = max(v_i - theta * mu_i, 0) with theta fixed by the
    mass constraint; theta is found exactly by sorting the breakpoints
    v_i / mu_i (Wang & Carreira-Perpinan style, adapted to weights).
    """
    v = np.asarray(alpha, dtype=float)
    mu = np.asarray(weights, dtype=float)
    ratios = v / mu
    order = np.argsort(ratios)[::-1]
    mv = np.cumsum(mu[order] * v[order])
    mm = np.cumsum(mu[order] ** 2)
    thetas = (mv - 1.0) / mm
    # Largest k with ratio_(k) > theta_k keeps components 0..k active.
    active = ratios[order] > thetas
    k = int(np.nonzero(active)[0][-1]) if np.any(active) else 0
    theta = thetas[k]
    return np.maximum(v - theta * mu, 0.0)


def weighted_infimum_numeric(space: DiscreteMeasureSpace, q: float,
                             iters: int = 20_000, tol: float = 1e-12) -> float:
    """Projected gradient descent for the same infimum, independent of the
    closed form.

    Starts from the feasible uniform point and iterates accelerated projected
    gradient steps (momentum with adaptive restart) with a backtracked local
    Lipschitz estimate: the curvature of the objective varies over the
    feasible slice, so a step fixed at the start would overshoot once mass
    concentrates.  Returns the best objective seen, stopping once it has
    stagnated (relative decrease below ``tol``) while the fixed-point
    residual of the projected step vanishes, five iterations in a row.
    Exhausting ``iters`` without stabilizing raises :class:`AccuracyError`
    carrying the best value found.
    """
    eq = as_exponent(q)
    qq = eq.p
    # Zero-mass points carry no objective or constraint weight; drop them
    # defensively (the constructor normally forbids them anyway).
    keep = space.weights > 0.0
    mu = space.weights[keep]
    phi = space.phi[keep]

    def objective(a: np.ndarray) -> float:
        return float(np.sum(phi * np.abs(a) ** qq * mu))

    alpha = np.full(mu.size, 1.0 / float(np.sum(mu)))
    best = objective(alpha)
    lipschitz = qq * float(np.max(phi * mu ** (qq - 1.0)))
    y = alpha.copy()
    t = 1.0
    quiet = 0
    for _ in range(iters):
        at_y = objective(y)
        # Gradient of the even extension phi |a|^q mu: extrapolated points
        # may dip below zero, and the projection pulls them back.
        grad = qq * phi * np.abs(y) ** (qq - 1.0) * np.sign(y) * mu
        for _ in range(80):
            new = project_to_constraint(y - grad / lipschitz, mu)
            shift = new - y
            obj = objective(new)
            majorant = (at_y + float(grad @ shift)
                        + 0.5 * lipschitz * float(shift @ shift))
            if obj <= majorant + 1e-15 * abs(at_y):
                break
            lipschitz *= 2.0
        residual = float(np.max(np.abs(new - y)))
        if float((y - new) @ (new - alpha)) > 0.0:
            # Momentum points against the descent direction: restart it.
            t = 1.0
            y = new.copy()
        else:
            t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
            y = new + ((t - 1.0) / t_next) * (new - alpha)
            t = t_next
        improved = best - obj
        best = min(best, obj)
        alpha = new
        lipschitz = max(lipschitz / 1.5, 1e-300)
        stagnant = improved <= tol * max(abs(best), 1e-300)
        settled = residual <= 1e-6 * (1.0 + float(np.max(np.abs(new))))
        if stagnant and settled:
            quiet += 1
            if quiet >= 5:
                return best
        else:
            quiet = 0
    raise AccuracyError("projected gradient descent did not stabilize",
                        estimate=best, error_bound=math.inf)


# ---------------------------------------------------------------------------
# extremal densities and the Jensen functional
# ---------------------------------------------------------------------------


def extremal_density(qfield: QField, center: PlanePoint, p: "ExponentP | float",
                     z: PlanePoint, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The optimal admissible density for the circle family,

        rho0(z) = Q(z) / ring_norm(Q; |z - center|),

    where the norm is taken over the circle through z.  Undefined at the
    center (no circle through it)."""
    r = center.distance_to(z)
    if r == 0.0:
        raise DomainError("extremal density is undefined at the ring center")
    norm = ring_norm(qfield, center, r, p, spec)
    if math.isinf(norm):
        return 0.0
    return qfield.eval(z) / norm


def eta0(qfield: QField, annulus: Annulus, p: "ExponentP | float",
         spec: QuadratureSpec = DEFAULT_SPEC) -> RadialDensity:
    """The normalized radial density eta0(r) = 1 / (I * ring_norm(Q; r)),
    with I the lower modulus bound of the ring.

    Degenerate I (0 or infinite) admits no density and raises
    :class:`DegenerateCaseError` naming the branch.
    """
    ep = as_exponent(p)
    bound = lower_modulus_bound(qfield, annulus, ep, spec)
    if bound == 0.0:
        raise DegenerateCaseError("lower modulus bound vanishes; "
                                  "circle norms are infinite on almost every circle",
                                  branch="I=0")
    if math.isinf(bound):
        raise DegenerateCaseError("lower modulus bound diverges",
                                  branch="I=inf")

    def evaluate(r: float) -> float:
        return 1.0 / (bound * ring_norm(qfield, annulus.center, r, ep, spec))

    return RadialDensity(evaluate, annulus.r1, annulus.r2, label="eta0")


def jensen_functional(qfield: QField, annulus: Annulus, p: "ExponentP | float",
                      eta: RadialDensity, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """The radial functional

        J(eta) = integral_{r1}^{r2} eta(r)^{p/(p-1)}
                 * (circle integral of Q^{1/(p-1)} at radius r) dr,

    minimized over normalized densities exactly by :func:`eta0`, with minimum
    value I^{-1/(p-1)}."""
    ep = as_exponent(p)
    if not (abs(eta.r1 - annulus.r1) <= 1e-12 * annulus.r1
            and abs(eta.r2 - annulus.r2) <= 1e-12 * annulus.r2):
        raise ValidationError(
            f"density support ({eta.r1}, {eta.r2}) does not match the ring "
            f"({annulus.r1}, {annulus.r2})"
        )
    lam = ep.lam

    def integrand(r: float) -> float:
        core = circle_integral(lambda z: qfield.eval(z) ** lam,
                               annulus.center, r, spec)
        return eta(r) ** ep.q * core

    return radial_integral(integrand, annulus.r1, annulus.r2, spec)
