"""Weighted modulus, capacity, and distortion estimates on planar annuli.

The package computes ring norms of positive weights, lower bounds for the
modulus of separating curve families, closed-form connecting moduli and
capacities of round ring condensers, area-distortion bounds for radial
homeomorphisms of the unit disk, and point-behavior estimates at the
origin — each paired with the verification checks that pin it to a closed
form or an independent optimization oracle.
"""

from .capacity import (annulus_capacity, cap_bound_diameter,
                       cap_bound_measure, cap_bound_perimeter,
                       check_capacity_bounds, estimate_gamma)
from .distortion import (AreaBoundParams, PointBehaviorResult, area_bound,
                         decay_comparison, decay_constant_derived,
                         decay_constant_alternate, decay_product,
                         geometric_grid, liminf_scan, lipschitz_consistency,
                         point_radius_R, q_zero, stretch_estimate,
                         verify_area_theorem, verify_growth_inequality)
from .errors import (AccuracyError, DegenerateCaseError, DomainError,
                     InvalidFieldError, RingcapError, ValidationError)
from .geometry import (ORIGIN, Annulus, CurveFamilyDescriptor, ExponentP,
                       FamilyKind, PlanePoint, QField, RingCondenser,
                       as_exponent)
from .maps import (DerivativeData, RadialMap, derivative_data,
                   homeomorphism_certificate, image_disk_area, kp_field,
                   min_modulus, piecewise_power_map, radial_power_map,
                   scale_map)
from .modulus import (DiscreteMeasureSpace, RadialDensity,
                      circle_family_modulus, connecting_modulus_annulus,
                      eta0, extremal_density, family_modulus,
                      infimum_objective, jensen_functional,
                      lower_modulus_bound, project_to_constraint, ring_norm,
                      weighted_infimum_closed, weighted_infimum_numeric)
from .quadrature import (DEFAULT_SPEC, QuadratureSpec, circle_integral,
                         disk_average, radial_integral)
from .report import (CSV_COLUMNS, CheckEntry, CsvRow, VerificationReport,
                     entry_equality, entry_flagged, entry_inequality,
                     read_csv_rows, rows_from_report, write_csv_rows)
from .suites import SUITES, RadiusGrid, SuiteConfig, run_suite

__version__ = "0.1.0"
