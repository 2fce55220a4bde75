"""Named verification suites over a configurable parameter matrix.

Each suite turns one body of results into CSV rows (see ``report``):

* ``infimum``   — closed-form vs projected-gradient weighted infima on
                  random discrete measure spaces, plus constraint residuals
                  and no-descent certificates;
* ``modulus``   — ring-norm closed forms, the ring modulus bound against the
                  circle-family closed form, the connecting/separating
                  duality product, and the Jensen minimality rows;
* ``capacity``  — annulus capacity against the perimeter / compact-measure /
                  diameter lower bounds;
* ``area``      — image-disk area against the area bound for power maps
                  paired with their own dilatation;
* ``point``     — pointwise growth inequality, |f|/R ratio scans toward the
                  origin, rescaling-radius consistency, and the decay
                  constant comparison;
* ``lipschitz`` — finiteness implication and scaling law of the local
                  Lipschitz criterion (p > 2).

``all`` runs the six in the order above.  Tasks fan out over a bounded
worker pool; all randomness is drawn up front from the configured seed, and
rows are sorted deterministically before writing, so a rerun with the same
config is byte-identical.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .capacity import (annulus_capacity, cap_bound_diameter,
                       cap_bound_measure, cap_bound_perimeter)
from .distortion import (AreaBoundParams, area_bound, decay_comparison,
                         geometric_grid, liminf_scan, lipschitz_consistency,
                         point_radius_R, verify_area_theorem,
                         verify_growth_inequality)
from .errors import ValidationError
from .geometry import ORIGIN, Annulus, QField, RingCondenser
from .maps import kp_field, radial_power_map
from .modulus import (DiscreteMeasureSpace, RadialDensity,
                      circle_family_modulus, connecting_modulus_annulus,
                      eta0, infimum_objective, jensen_functional,
                      lower_modulus_bound, project_to_constraint, ring_norm,
                      weighted_infimum_closed, weighted_infimum_numeric)
from .plots import emit_plots
from .quadrature import DEFAULT_SPEC, QuadratureSpec
from .report import (CsvRow, entry_equality, entry_inequality, format_params,
                     rows_from_report, sort_rows, write_csv_rows)

__all__ = ["SUITES", "RadiusGrid", "SuiteConfig", "run_suite"]

SUITES = ("infimum", "modulus", "capacity", "area", "point", "lipschitz")

# Matrix sizes for the random infimum draws (cycled per draw index).
_INFIMUM_SIZES = (100, 200, 400, 800)
_INFIMUM_DRAWS = 8


@dataclass(frozen=True)
class RadiusGrid:
    """Radius grid specification: endpoints, count, and spacing."""

    lo: float = 0.1
    hi: float = 0.9
    count: int = 9
    spacing: str = "linear"

    def validate(self) -> None:
        if not (0.0 < self.lo < self.hi < 1.0):
            raise ValidationError(
                f"radius grid needs 0 < min < max < 1, got [{self.lo}, {self.hi}]")
        if self.count < 2:
            raise ValidationError(f"radius grid needs count >= 2, got {self.count}")
        if self.spacing not in ("linear", "geometric"):
            raise ValidationError(f"unknown grid spacing {self.spacing!r}")

    def values(self) -> list[float]:
        steps = self.count - 1
        if self.spacing == "geometric":
            ratio = self.hi / self.lo
            return [self.lo * ratio ** (k / steps) for k in range(self.count)]
        width = self.hi - self.lo
        return [self.lo + width * k / steps for k in range(self.count)]


@dataclass(frozen=True)
class SuiteConfig:
    """Everything a suite run depends on; mirrored 1:1 by the JSON config."""

    suite: str = "all"
    p_values: tuple = (1.5, 2.0, 3.0)
    alphas: tuple = (0.5, 1.0, 2.0)
    radii: RadiusGrid = field(default_factory=RadiusGrid)
    q_constant: float = 1.0
    seed: int = 42
    output_dir: str = "."
    quadrature: QuadratureSpec = DEFAULT_SPEC

    def validate(self) -> None:
        if self.suite != "all" and self.suite not in SUITES:
            raise ValidationError(
                f"unknown suite {self.suite!r}; choose one of {('all',) + SUITES}")
        if not self.p_values:
            raise ValidationError("p_values must not be empty")
        for p in self.p_values:
            if not (isinstance(p, (int, float)) and math.isfinite(p) and p > 1.0):
                raise ValidationError(f"every exponent must satisfy p > 1, got {p}")
        if not self.alphas:
            raise ValidationError("alphas must not be empty")
        for a in self.alphas:
            if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0.0):
                raise ValidationError(f"every alpha must be positive, got {a}")
        self.radii.validate()
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ValidationError(f"seed must be a nonnegative integer, got {self.seed}")
        if not (math.isfinite(self.q_constant) and self.q_constant > 0.0):
            raise ValidationError(f"q_constant must be positive, got {self.q_constant}")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "SuiteConfig":
        """Build a config from a JSON-style mapping; unknown keys are errors
        so typos surface as usage problems instead of silent defaults."""
        config = cls()
        known = {"suite", "p_values", "alphas", "maps", "radii", "q_spec",
                 "tolerances", "seed", "output_dir", "q_constant"}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        if "suite" in data:
            config = replace(config, suite=str(data["suite"]))
        if "p_values" in data:
            config = replace(config, p_values=tuple(float(p) for p in data["p_values"]))
        if "alphas" in data:
            config = replace(config, alphas=tuple(float(a) for a in data["alphas"]))
        if "maps" in data:
            alphas = []
            for spec in data["maps"]:
                if spec.get("kind") != "power":
                    raise ValidationError(f"unsupported map spec: {spec}")
                alphas.append(float(spec["alpha"]))
            config = replace(config, alphas=tuple(alphas))
        if "radii" in data:
            grid = data["radii"]
            config = replace(config, radii=RadiusGrid(
                lo=float(grid.get("min", config.radii.lo)),
                hi=float(grid.get("max", config.radii.hi)),
                count=int(grid.get("count", config.radii.count)),
                spacing=str(grid.get("spacing", config.radii.spacing))))
        if "q_spec" in data:
            spec = data["q_spec"]
            if spec.get("kind", "constant") != "constant":
                raise ValidationError(f"unsupported weight spec: {spec}")
            config = replace(config, q_constant=float(spec.get("value", 1.0)))
        if "q_constant" in data:
            config = replace(config, q_constant=float(data["q_constant"]))
        if "tolerances" in data:
            tol = data["tolerances"]
            base = config.quadrature
            config = replace(config, quadrature=QuadratureSpec(
                abs_tol=float(tol.get("abs_tol", base.abs_tol)),
                rel_tol=float(tol.get("rel_tol", base.rel_tol)),
                max_refinements=int(tol.get("max_refinements", base.max_refinements))))
        if "seed" in data:
            config = replace(config, seed=int(data["seed"]))
        if "output_dir" in data:
            config = replace(config, output_dir=str(data["output_dir"]))
        return config


# ---------------------------------------------------------------------------
# suite task builders: each returns a list of zero-argument callables that
# produce CSV rows; all randomness is pre-drawn so execution order is free
# ---------------------------------------------------------------------------


def _infimum_rows(config: SuiteConfig, q: float, draw: int,
                  phi: np.ndarray, mu: np.ndarray,
                  mixes: np.ndarray) -> list[CsvRow]:
    space = DiscreteMeasureSpace(weights=mu, phi=phi)
    closed, alpha0 = weighted_infimum_closed(space, q)
    numeric = weighted_infimum_numeric(space, q)
    params = format_params(q=q, n=phi.size, draw=draw, seed=config.seed)
    rows = rows_from_report("infimum", "closed-vs-numeric", params,
                            [entry_equality("", numeric, closed, 1e-6 * closed)])
    residual = float(alpha0 @ mu)
    rows += rows_from_report("infimum", "simplex-constraint", params,
                             [entry_equality("", residual, 1.0, 1e-12)])
    perturbed = []
    for mix in mixes:
        feasible = mix / float(mix @ mu)
        candidate = project_to_constraint(alpha0 + 0.05 * (feasible - alpha0), mu)
        perturbed.append(infimum_objective(space, q, candidate))
    rows += rows_from_report("infimum", "no-descent", params,
                             [entry_inequality("", closed, min(perturbed),
                                               1e-9 * closed)])
    return rows


def _infimum_tasks(config: SuiteConfig) -> list[Callable[[], list[CsvRow]]]:
    rng = np.random.default_rng(config.seed)
    tasks = []
    for q in config.p_values:
        for draw in range(_INFIMUM_DRAWS):
            n = _INFIMUM_SIZES[draw % len(_INFIMUM_SIZES)]
            phi = rng.uniform(0.2, 5.0, n)
            mu = rng.uniform(0.5, 1.5, n) / n
            mixes = rng.uniform(0.0, 1.0, (3, n))
            tasks.append(partial(_infimum_rows, config, float(q), draw,
                                 phi, mu, mixes))
    return tasks


def _modulus_rows(config: SuiteConfig, p: float) -> list[CsvRow]:
    spec = config.quadrature
    weight = QField.constant(config.q_constant)
    unit = QField.constant(1.0)
    radii = config.radii.values()
    rows: list[CsvRow] = []
    for r in radii:
        measured = ring_norm(weight, ORIGIN, r, p, spec)
        closed = config.q_constant * (2.0 * math.pi * r) ** (p - 1.0)
        rows += rows_from_report(
            "modulus", "ring-norm-closed-form",
            format_params(Q=config.q_constant, p=p, r=r),
            [entry_equality("", measured, closed, 1e-9 * closed)])
    annulus = Annulus(ORIGIN, radii[0], radii[-1])
    bound = lower_modulus_bound(weight, annulus, p, spec)
    closed = circle_family_modulus(radii[0], radii[-1], p, spec) / config.q_constant
    rows += rows_from_report(
        "modulus", "bound-vs-circle-family",
        format_params(Q=config.q_constant, p=p, r1=radii[0], r2=radii[-1]),
        [entry_equality("", bound, closed, 1e-8 * closed)])
    for r1 in radii[:5]:
        connecting = connecting_modulus_annulus(r1, 1.0, p / (p - 1.0), spec)
        separating = lower_modulus_bound(unit, Annulus(ORIGIN, r1, 1.0), p, spec)
        product = connecting * separating ** (1.0 / (p - 1.0))
        rows += rows_from_report(
            "modulus", "duality-product",
            format_params(p=p, r1=r1, r2=1.0),
            [entry_equality("", product, 1.0, 1e-6)])
    ring_bound = lower_modulus_bound(weight, annulus, p, spec)
    target = ring_bound ** (-1.0 / (p - 1.0))
    density = eta0(weight, annulus, p, spec)
    at_minimum = jensen_functional(weight, annulus, p, density, spec)
    jensen_params = format_params(Q=config.q_constant, p=p,
                                  r1=radii[0], r2=radii[-1])
    rows += rows_from_report(
        "modulus", "jensen-minimum", jensen_params,
        [entry_equality("", at_minimum, target, 1e-6 * target)])
    uniform = RadialDensity.uniform(radii[0], radii[-1])
    at_uniform = jensen_functional(weight, annulus, p, uniform, spec)
    rows += rows_from_report(
        "modulus", "jensen-uniform-dominates", jensen_params,
        [entry_inequality("", at_minimum, at_uniform, 1e-9 * abs(at_uniform))])
    return rows


def _modulus_tasks(config: SuiteConfig) -> list[Callable[[], list[CsvRow]]]:
    return [partial(_modulus_rows, config, float(p)) for p in config.p_values]


def _capacity_rows(config: SuiteConfig, p: float) -> list[CsvRow]:
    spec = config.quadrature
    rows: list[CsvRow] = []
    for r1 in config.radii.values():
        cond = RingCondenser(ORIGIN, r1, 1.0)
        capacity = annulus_capacity(cond, p, spec)
        params = format_params(p=p, r1=r1, r2=1.0)
        rows += rows_from_report(
            "capacity", "perimeter-bound", params,
            [entry_inequality("", cap_bound_perimeter(
                cond.separating_perimeter_inf, cond.gap_area, p),
                capacity, 1e-9)])
        if 1.0 < p < 2.0:
            rows += rows_from_report(
                "capacity", "measure-bound", params,
                [entry_inequality("", cap_bound_measure(cond.compact_area, p),
                                  capacity, 1e-9)])
        if 1.0 < p <= 2.0:
            rows += rows_from_report(
                "capacity", "diameter-bound",
                format_params(gamma=1.0, p=p, r1=r1, r2=1.0),
                [entry_inequality("", cap_bound_diameter(
                    cond.diameter, cond.open_area, p), capacity, 1e-9)])
    return rows


def _capacity_tasks(config: SuiteConfig) -> list[Callable[[], list[CsvRow]]]:
    return [partial(_capacity_rows, config, float(p)) for p in config.p_values]


def _area_rows(config: SuiteConfig, alpha: float, p: float) -> list[CsvRow]:
    report = verify_area_theorem(radial_power_map(alpha), p,
                                 config.radii.values(), config.quadrature)
    return rows_from_report("area", "image-area-bound",
                            format_params(a=alpha, p=p), report)


def _area_tasks(config: SuiteConfig) -> list[Callable[[], list[CsvRow]]]:
    return [partial(_area_rows, config, float(a), float(p))
            for a in config.alphas for p in config.p_values if p >= 2.0]


def _growth_rows(config: SuiteConfig, alpha: float, p: float) -> list[CsvRow]:
    report = verify_growth_inequality(radial_power_map(alpha), p,
                                      config.radii.values(), config.quadrature)
    return rows_from_report("point", "growth-inequality",
                            format_params(a=alpha, p=p), report)


def _ratio_rows(config: SuiteConfig, alpha: float, p: float) -> list[CsvRow]:
    power = radial_power_map(alpha)
    scan = liminf_scan(power, p, kp_field(power, p), geometric_grid(),
                       config.quadrature)
    params = format_params(a=alpha, p=p)
    entries = [entry_inequality(f"r={r:g}", ratio, 1.0, 1e-6)
               for r, ratio in zip(scan.grid, scan.ratio_at)]
    rows = rows_from_report("point", "point-ratio", params, entries)
    rows += rows_from_report(
        "point", "liminf-summary", params,
        [entry_inequality("", scan.liminf_estimate, 1.0, 1e-6)])
    return rows


def _rescale_rows(config: SuiteConfig, p: float) -> list[CsvRow]:
    spec = config.quadrature
    weight = QField.constant(config.q_constant)
    entries = []
    for r in config.radii.values():
        rescale = point_radius_R(p, weight, r, spec)
        bound = area_bound(AreaBoundParams(p, weight, r), spec)
        entries.append(entry_equality(f"r={r:g}", math.pi * rescale * rescale,
                                      bound, 1e-9 * bound))
    return rows_from_report("point", "rescale-consistency",
                            format_params(Q=config.q_constant, p=p), entries)


def _decay_rows(config: SuiteConfig, p: float) -> list[CsvRow]:
    report = decay_comparison(p, spec=config.quadrature)
    return rows_from_report("point", "decay-constants",
                            format_params(p=p), report)


def _point_tasks(config: SuiteConfig) -> list[Callable[[], list[CsvRow]]]:
    tasks: list[Callable[[], list[CsvRow]]] = []
    for a in config.alphas:
        for p in config.p_values:
            if p >= 2.0:
                tasks.append(partial(_growth_rows, config, float(a), float(p)))
                tasks.append(partial(_ratio_rows, config, float(a), float(p)))
    for p in config.p_values:
        if p >= 2.0:
            tasks.append(partial(_rescale_rows, config, float(p)))
        if p > 2.0:
            tasks.append(partial(_decay_rows, config, float(p)))
    return tasks


def _lipschitz_rows(config: SuiteConfig, alpha: float, p: float) -> list[CsvRow]:
    report = lipschitz_consistency(radial_power_map(alpha), p,
                                   geometric_grid(), config.quadrature)
    return rows_from_report("lipschitz", "lipschitz-criterion",
                            format_params(a=alpha, p=p), report)


def _lipschitz_tasks(config: SuiteConfig) -> list[Callable[[], list[CsvRow]]]:
    return [partial(_lipschitz_rows, config, float(a), float(p))
            for a in config.alphas for p in config.p_values if p > 2.0]


_TASK_BUILDERS = {
    "infimum": _infimum_tasks,
    "modulus": _modulus_tasks,
    "capacity": _capacity_tasks,
    "area": _area_tasks,
    "point": _point_tasks,
    "lipschitz": _lipschitz_tasks,
}


def run_suite(config: SuiteConfig) -> tuple[list[CsvRow], int]:
    """Run the configured suite(s); write ``report.csv`` and the plot files
    into the output directory; return (sorted rows, exit code).

    Exit code 0 iff no row has status ``fail``.
    """
    config.validate()
    selected = SUITES if config.suite == "all" else (config.suite,)
    tasks: list[Callable[[], list[CsvRow]]] = []
    for name in selected:
        tasks.extend(_TASK_BUILDERS[name](config))
    workers = max(1, min(8, os.cpu_count() or 1, len(tasks) or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda task: task(), tasks))
    rows = sort_rows(row for chunk in results for row in chunk)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv_rows(rows, out_dir / "report.csv")
    emit_plots(rows, out_dir)
    failed = sum(1 for row in rows if row.status == "fail")
    return rows, (1 if failed else 0)
