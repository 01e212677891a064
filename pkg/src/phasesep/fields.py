"""Scalar phase fields on a mesh: per-vertex (P1) or per-triangle (P0)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import SurfaceMeasure, TriMesh


@dataclass(frozen=True)
class PhaseField:
    """Immutable scalar field; ``kind`` is "P1" (vertex) or "P0" (triangle)."""

    values: np.ndarray
    kind: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("field values must be one-dimensional")
        if self.kind not in ("P0", "P1"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def p0(cls, values) -> "PhaseField":
        return cls(np.asarray(values, dtype=float), "P0")

    @classmethod
    def p1(cls, values) -> "PhaseField":
        return cls(np.asarray(values, dtype=float), "P1")

    def check_p0(self, mesh: TriMesh) -> np.ndarray:
        if self.kind != "P0":
            raise ValueError(f"expected a P0 (per-triangle) field, got {self.kind}")
        if self.values.shape != (mesh.n_triangles,):
            raise ValueError(f"expected one value per triangle ({mesh.n_triangles}), "
                             f"got {self.values.shape[0]}")
        return self.values

    def check_p1(self, mesh: TriMesh) -> np.ndarray:
        if self.kind != "P1":
            raise ValueError(f"expected a P1 (per-vertex) field, got {self.kind}")
        if self.values.shape != (mesh.n_vertices,):
            raise ValueError(f"expected one value per vertex ({mesh.n_vertices}), "
                             f"got {self.values.shape[0]}")
        return self.values


def field_mass(field: PhaseField, mesh: TriMesh, measure: SurfaceMeasure) -> float:
    """int u dmu with lumped vertex quadrature (P1) or triangle areas (P0)."""
    if field.kind == "P1":
        return float(measure.vertex_masses @ field.check_p1(mesh))
    return float(measure.triangle_areas @ field.check_p0(mesh))


def vertex_average(field: PhaseField, mesh: TriMesh,
                   measure: SurfaceMeasure) -> np.ndarray:
    """Mass-weighted average of incident triangle values at each vertex."""
    values = field.check_p0(mesh)
    acc = np.zeros(mesh.n_vertices)
    np.add.at(acc, mesh.triangles.ravel(),
              np.repeat(measure.triangle_areas * values / 3.0, 3))
    return acc / measure.vertex_masses


def threshold_majority(field: PhaseField, mesh: TriMesh,
                       level: float = 0.5) -> PhaseField:
    """Binary P0 field: 1 where at least two of the triangle's vertices reach level."""
    values = field.check_p1(mesh)
    above = (values[mesh.triangles] >= level).sum(axis=1)
    return PhaseField.p0((above >= 2).astype(float))
