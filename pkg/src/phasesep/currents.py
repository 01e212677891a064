"""Masses of discrete graph currents over a surface, jump sets, and
convergence diagnostics.

For a piecewise-constant field the graph over the surface splits exactly into
horizontal sheets (undistorted surface area) and vertical walls over the jump
edges, so total mass minus surface area equals jump height times jump length
as an identity. For piecewise-linear fields the graph is a tilted sheet with
area factor sqrt(1 + |grad|^2) per triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fields import PhaseField
from .surface import SurfaceMeasure, TriMesh, p1_gradient, triangle_areas


@dataclass(frozen=True)
class GraphCurrent:
    """Stratified mass of a graph over the surface.

    horizontal_mass: mass of the surface-parallel part.
    vertical_mass: wall mass over jump edges (P0); tilt excess (P1 diagnostics).
    """

    horizontal_mass: float
    vertical_mass: float
    total_mass: float


@dataclass(frozen=True)
class JumpCurve:
    """Polyline on the mesh separating phases; segments are (S, 2, 3) point pairs."""

    segments: np.ndarray
    length: float

    def __post_init__(self):
        segments = np.asarray(self.segments, dtype=float).reshape(-1, 2, 3)
        segments.setflags(write=False)
        object.__setattr__(self, "segments", segments)

    @property
    def is_empty(self) -> bool:
        return len(self.segments) == 0


def _segments_length(segments: np.ndarray) -> float:
    if len(segments) == 0:
        return 0.0
    return float(np.linalg.norm(segments[:, 1] - segments[:, 0], axis=1).sum())


def graph_mass_p0(mesh: TriMesh, measure: SurfaceMeasure,
                  phase: PhaseField) -> GraphCurrent:
    """Exact stratified mass of the graph of a per-triangle field.

    horizontal = total surface area; vertical = sum over interior edges of
    |jump| * edge length; total is their sum.
    """
    values = phase.check_p0(mesh)
    edges = mesh.interior_edges
    tri_pairs = mesh.interior_edge_triangles
    jumps = np.abs(values[tri_pairs[:, 0]] - values[tri_pairs[:, 1]])
    vertical = float(jumps @ mesh.edge_lengths(edges))
    horizontal = measure.total_area
    return GraphCurrent(horizontal, vertical, horizontal + vertical)


def graph_mass_p1(mesh: TriMesh, measure: SurfaceMeasure,
                  phase: PhaseField) -> GraphCurrent:
    """Mass of the graph of a per-vertex field: sum_T area_T sqrt(1 + |grad|^2).

    The vertical component is reported as total minus surface area (the tilt
    excess); for P1 graphs the strata mix and this is a diagnostic only.
    """
    values = phase.check_p1(mesh)
    grad = p1_gradient(mesh, values)
    factor = np.sqrt(1.0 + np.einsum("ij,ij->i", grad, grad))
    total = float(measure.triangle_areas @ factor)
    return GraphCurrent(measure.total_area, total - measure.total_area, total)


def jump_curve_p0(mesh: TriMesh, phase: PhaseField) -> JumpCurve:
    """Interior edges whose two incident triangles carry different values."""
    values = phase.check_p0(mesh)
    edges = mesh.interior_edges
    tri_pairs = mesh.interior_edge_triangles
    differs = values[tri_pairs[:, 0]] != values[tri_pairs[:, 1]]
    jump_edges = edges[differs]
    segments = np.stack([mesh.vertices[jump_edges[:, 0]],
                         mesh.vertices[jump_edges[:, 1]]], axis=1)
    return JumpCurve(segments, _segments_length(segments))


def level_curve_p1(mesh: TriMesh, phase: PhaseField, level: float) -> JumpCurve:
    """Marching-triangles isocontour of a per-vertex field.

    Vertices exactly at the level are shifted to level + eta with
    eta = 1e-12 * field range, which removes degenerate crossings
    deterministically. An empty curve is returned when the level misses the
    field range.
    """
    values = phase.check_p1(mesh)
    span = float(values.max() - values.min()) if values.size else 0.0
    if span == 0.0:
        return JumpCurve(np.empty((0, 2, 3)), 0.0)
    shifted = values - level
    eta = 1e-12 * span
    shifted[shifted == 0.0] = eta

    tri = mesh.triangles
    s = shifted[tri]
    pos = s > 0.0
    crossed = ~(pos.all(axis=1) | (~pos).all(axis=1))
    if not crossed.any():
        return JumpCurve(np.empty((0, 2, 3)), 0.0)
    s = s[crossed]
    tri = tri[crossed]

    points = []
    for a, b in ((0, 1), (1, 2), (2, 0)):
        hit = (s[:, a] > 0.0) != (s[:, b] > 0.0)
        denom = np.where(hit, s[:, a] - s[:, b], 1.0)
        t = s[:, a] / denom
        pa = mesh.vertices[tri[:, a]]
        pb = mesh.vertices[tri[:, b]]
        points.append((hit, pa + t[:, None] * (pb - pa)))
    # exactly two of the three edges cross in every crossed triangle
    hits = np.stack([h for h, _ in points], axis=1)
    coords = np.stack([p for _, p in points], axis=1)
    first = hits.argmax(axis=1)
    hits_rest = hits.copy()
    hits_rest[np.arange(len(hits)), first] = False
    second = hits_rest.argmax(axis=1)
    idx = np.arange(len(hits))
    segments = np.stack([coords[idx, first], coords[idx, second]], axis=1)
    return JumpCurve(segments, _segments_length(segments))


# ---------------------------------------------------------------------------
# Convergence diagnostics over families of surfaces


@dataclass(frozen=True)
class StrictnessReport:
    """Mass convergence of a family of surfaces toward a limit surface."""

    member_areas: list[float]
    limit_area: float
    gaps: list[float]
    monotone_convergent: bool

    @property
    def flag(self) -> str:
        return "MONOTONE-CONVERGENT" if self.monotone_convergent else "NON-MONOTONE"

    def to_dict(self) -> dict:
        return {
            "member_areas": self.member_areas,
            "limit_area": self.limit_area,
            "gaps": self.gaps,
            "flag": self.flag,
        }


@dataclass(frozen=True)
class MfpTestRow:
    """One test function: family integrals and their gaps to the limit."""

    name: str
    integrals: list[float]
    limit_integral: float
    gaps: list[float]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "integrals": self.integrals,
            "limit_integral": self.limit_integral,
            "gaps": self.gaps,
        }


@dataclass(frozen=True)
class MfpReport:
    rows: list[MfpTestRow] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"rows": [row.to_dict() for row in self.rows]}


def strictness_report(family: Sequence[tuple[TriMesh, SurfaceMeasure]],
                      limit: tuple[TriMesh, SurfaceMeasure]) -> StrictnessReport:
    """Per-member total area versus the limit area, with the gap sequence."""
    if not family:
        raise ValueError("strictness_report needs a nonempty family")
    areas = [m.total_area for _, m in family]
    limit_area = limit[1].total_area
    gaps = [abs(a - limit_area) for a in areas]
    monotone = all(b <= a for a, b in zip(gaps, gaps[1:]))
    return StrictnessReport(areas, limit_area, gaps, monotone)


def _pair_integral(mesh: TriMesh, measure: SurfaceMeasure, phase: PhaseField,
                   test: Callable) -> float:
    """int phi(x, u(x)) dmu with the lumped quadrature matching the energies."""
    if phase.kind == "P1":
        values = phase.check_p1(mesh)
        points = mesh.vertices
        weights = measure.vertex_masses
    else:
        values = phase.check_p0(mesh)
        points = mesh.vertices[mesh.triangles].mean(axis=1)
        weights = measure.triangle_areas
    integrand = np.array([float(test(points[i], values[i]))
                          for i in range(len(values))])
    return float(weights @ integrand)


def mfp_test(family: Sequence[tuple[TriMesh, SurfaceMeasure, PhaseField]],
             limit: tuple[TriMesh, SurfaceMeasure, PhaseField],
             testset: Sequence[Callable]) -> MfpReport:
    """Measure-function-pair diagnostics: integrals of phi(x, u) along the family.

    Each test function is evaluated against every family member and the limit;
    the report carries the integral sequences and their gaps. With phi == 1 the
    gaps reproduce the strictness (area) gaps exactly.
    """
    if not family:
        raise ValueError("mfp_test needs a nonempty family")
    rows = []
    for index, test in enumerate(testset):
        name = getattr(test, "__name__", None)
        if not name or name == "<lambda>":
            name = f"phi_{index}"
        integrals = [_pair_integral(mesh, measure, phase, test)
                     for mesh, measure, phase in family]
        limit_integral = _pair_integral(*limit, test)
        gaps = [abs(v - limit_integral) for v in integrals]
        rows.append(MfpTestRow(name, integrals, limit_integral, gaps))
    return MfpReport(rows)
