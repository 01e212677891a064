"""Experiment report rows and CSV/JSON writers with a fixed column order."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, fields
from pathlib import Path


@dataclass(frozen=True)
class SweepRecord:
    """One continuation stage: both sides of the sharp-interface bound.

    ``sharp_line_energy`` is exactly 2k times the mid-level isoline length and
    ``ratio`` is the diffuse value over it.
    """

    eps: float
    mm_value: float
    dirichlet: float
    potential: float
    willmore: float
    jump_length: float
    sharp_line_energy: float
    ratio: float
    iterations: int
    wallclock_seconds: float

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


SWEEP_COLUMNS = [f.name for f in fields(SweepRecord)]


def write_report(records, fmt: str, path) -> None:
    """Write sweep records as CSV (header plus one row each) or a JSON array."""
    path = Path(path)
    rows = [r.to_dict() if hasattr(r, "to_dict") else dict(r) for r in records]
    if fmt == "csv":
        with open(path, "w", newline="") as out:
            writer = csv.writer(out)
            writer.writerow(SWEEP_COLUMNS)
            for row in rows:
                writer.writerow([repr(row[c]) if isinstance(row[c], float)
                                 else row[c] for c in SWEEP_COLUMNS])
    elif fmt == "json":
        with open(path, "w") as out:
            json.dump(rows, out, indent=2, sort_keys=False)
            out.write("\n")
    else:
        raise ValueError(f"unknown report format {fmt!r} (use 'csv' or 'json')")


def read_report_json(path) -> list[SweepRecord]:
    with open(path) as handle:
        rows = json.load(handle)
    return [SweepRecord(**row) for row in rows]


@dataclass(frozen=True)
class MembraneReport:
    """Diffuse versus sharp two-phase membrane energies on one surface."""

    a1: float
    a2: float
    delta: float
    eps: float
    mm_value: float
    willmore_diffuse: float
    total_diffuse: float
    willmore_sharp: float
    line_energy_sharp: float
    total_sharp: float
    hypothesis_bound: float
    hypothesis_ok: bool
    lower_bound_ok: bool
    max_density: float
    density_bound_value: float
    density_violation: bool
    iterations: int

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class VaryingReport:
    """Family-of-surfaces diagnostics against the limit surface."""

    amplitudes: list[float]
    member_areas: list[float]
    limit_area: float
    area_gaps: list[float]
    areas_monotone: bool
    mfp_gaps: dict[str, list[float]]
    mfp_monotone: dict[str, bool]
    mm_values: list[float]
    limit_line_energy: float
    liminf_ok: bool

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def write_json(report, path) -> None:
    data = report.to_dict() if hasattr(report, "to_dict") else report
    with open(path, "w") as out:
        json.dump(data, out, indent=2, sort_keys=False)
        out.write("\n")
