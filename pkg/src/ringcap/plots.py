"""Figure rendering for verification reports.

Three plot families, one SVG each, derived purely from CSV rows so the
``plot`` command can re-render a saved report without recomputing:

* ``area_bounds.svg``     image-disk area (solid) against the area bound
                          (dashed) over the radius, per (map, exponent);
* ``capacity_bounds.svg`` annulus capacity against its three lower bounds
                          over the exponent, at a representative inner
                          radius;
* ``point_ratios.svg``    the |f|/R ratio over a radius grid shrinking to
                          the origin, per (map, exponent).

Output is deterministic: fixed hash salt for SVG element ids and no
timestamp metadata, so identical rows give identical bytes.
"""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "ringcap"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .report import CsvRow  # noqa: E402

__all__ = ["emit_plots"]


def _parse_params(params: str) -> dict:
    out = {}
    for token in params.split():
        if "=" in token:
            key, value = token.split("=", 1)
            out[key] = value
    return out


def _series(rows: Sequence[CsvRow], x_key: str):
    """Group rows by their params minus x_key; yield sorted (label, xs, rows)."""
    groups: dict = {}
    for row in rows:
        fields = _parse_params(row.params)
        if x_key not in fields:
            continue
        x = float(fields.pop(x_key))
        label = " ".join(f"{k}={v}" for k, v in sorted(fields.items())
                         if k != "seed")
        groups.setdefault(label, []).append((x, row))
    for label in sorted(groups):
        points = sorted(groups[label], key=lambda item: item[0])
        yield label, [x for x, _ in points], [row for _, row in points]


def _new_axes():
    figure, axes = plt.subplots(figsize=(6.4, 4.8))
    return figure, axes


def _save(figure, path: Path) -> Path:
    figure.savefig(path, format="svg", metadata={"Date": None})
    plt.close(figure)
    return path


def _plot_area(rows: Sequence[CsvRow], out_dir: Path) -> Path:
    figure, axes = _new_axes()
    for label, xs, series in _series(rows, "r"):
        axes.plot(xs, [row.lhs for row in series], "-", label=f"{label} image")
        axes.plot(xs, [row.rhs for row in series], "--", label=f"{label} bound")
    axes.set_xlabel("disk radius r")
    axes.set_ylabel("area")
    axes.set_title("image-disk area vs area bound")
    axes.legend(fontsize=7)
    return _save(figure, out_dir / "area_bounds.svg")


def _plot_capacity(rows: Sequence[CsvRow], out_dir: Path) -> Path:
    radii = sorted({_parse_params(row.params).get("r1") for row in rows} - {None},
                   key=float)
    chosen = radii[len(radii) // 2]
    at_radius = [row for row in rows
                 if _parse_params(row.params).get("r1") == chosen]
    figure, axes = _new_axes()
    by_check: dict = {}
    for row in at_radius:
        p = float(_parse_params(row.params)["p"])
        by_check.setdefault(row.check, []).append((p, row))
    capacity_points = sorted({(p, row.rhs) for points in by_check.values()
                              for p, row in points})
    axes.plot([p for p, _ in capacity_points],
              [c for _, c in capacity_points], "k-", label="capacity")
    for check in sorted(by_check):
        points = sorted(by_check[check], key=lambda item: item[0])
        axes.plot([p for p, _ in points], [row.lhs for _, row in points],
                  "--", marker="o", label=check)
    axes.set_xlabel("exponent p")
    axes.set_ylabel("capacity / lower bound")
    axes.set_title(f"annulus capacity vs lower bounds (r1={chosen})")
    axes.legend(fontsize=8)
    return _save(figure, out_dir / "capacity_bounds.svg")


def _plot_ratios(rows: Sequence[CsvRow], out_dir: Path) -> Path:
    figure, axes = _new_axes()
    for label, xs, series in _series(rows, "r"):
        axes.plot(xs, [row.lhs for row in series], "-", label=label)
    axes.set_xscale("log")
    axes.set_xlabel("radius r")
    axes.set_ylabel("|f| / R")
    axes.set_title("rescaled point behavior toward the origin")
    axes.legend(fontsize=8)
    return _save(figure, out_dir / "point_ratios.svg")


_FAMILIES = (
    (lambda row: row.check == "image-area-bound", _plot_area),
    (lambda row: row.check.endswith("-bound") and row.suite == "capacity",
     _plot_capacity),
    (lambda row: row.check == "point-ratio", _plot_ratios),
)


def emit_plots(rows: Iterable[CsvRow], output_dir: "Path | str") -> list[Path]:
    """Render every plot family that has data; return the written paths.

    An empty report produces no files and a warning on stderr.
    """
    rows = list(rows)
    if not rows:
        print("warning: empty report, no plots written", file=sys.stderr)
        return []
    out_dir = Path(output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for selector, render in _FAMILIES:
        family_rows = [row for row in rows if selector(row)]
        if family_rows:
            written.append(render(family_rows, out_dir))
    return written
