"""Exception hierarchy for ringcap.

Degenerate *values* (a diverging integral, an infinite field sample) are
reported as ``math.inf`` flags, not exceptions; exceptions are reserved for
calls that cannot produce a meaningful number at all.
"""

from __future__ import annotations


class RingcapError(Exception):
    """Base class for all ringcap errors."""


class ValidationError(RingcapError):
    """A constructed object violates its invariants (radii order, grid shape...)."""


class InvalidFieldError(ValidationError):
    """A weight field produced (or was built from) non-positive or NaN values."""


class DomainError(RingcapError):
    """A mathematically meaningless request: p <= 1, point outside the field
    domain, evaluation at the ring center, a bound outside its exponent range."""


class AccuracyError(RingcapError):
    """An iterative routine exhausted its budget before meeting tolerances.

    Carries the best available estimate and the last error bound so callers
    can still inspect how close the run got.
    """

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (estimate={estimate!r}, error_bound={error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class DegenerateCaseError(RingcapError):
    """A formula's hypotheses fail in a named degenerate branch (e.g. the
    normalizing integral is 0 or infinite, so no density can be formed)."""

    def __init__(self, message: str, branch: str):
        super().__init__(f"{message} [branch: {branch}]")
        self.branch = branch
