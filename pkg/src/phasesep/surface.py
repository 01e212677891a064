"""Triangulated surfaces, test geometries, and discrete differential operators.

Meshes are oriented triangle soups with consistent winding; the discrete
surface measure is the per-triangle area vector together with one-third
lumped vertex masses. Tangential gradients of piecewise-linear fields are
exact per triangle; the mean curvature vector uses cotangent weights over
the lumped mass.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import sparse

from .errors import GeometryError, UnsupportedGeometryError

DEGENERATE_AREA_FACTOR = 1e-14


class TriMesh:
    """Oriented triangulated surface embedded in R^3.

    Parameters
    ----------
    vertices : (V, 3) float array
    triangles : (T, 3) int array of oriented vertex triples

    Raises GeometryError for out-of-range indices, degenerate triangles
    (area below 1e-14 times the mean), or inconsistent orientation
    (a directed interior edge traversed twice the same way).
    """

    def __init__(self, vertices, triangles):
        vertices = np.ascontiguousarray(vertices, dtype=float)
        triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise GeometryError("vertices must be an (V, 3) array")
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise GeometryError("triangles must be a (T, 3) array")
        if triangles.size and (triangles.min() < 0 or triangles.max() >= len(vertices)):
            raise GeometryError("triangle index out of range")
        vertices.setflags(write=False)
        triangles.setflags(write=False)
        self.vertices = vertices
        self.triangles = triangles
        self._validate()

    def _validate(self):
        areas = triangle_areas(self.vertices, self.triangles)
        if areas.size:
            floor = DEGENERATE_AREA_FACTOR * areas.mean()
            bad = np.nonzero(areas <= floor)[0]
            if bad.size:
                raise GeometryError(f"degenerate triangle {bad[0]} (area {areas[bad[0]]:.3e})")
        # Orientation: each directed edge may appear once; an interior edge is
        # traversed once in each direction by its two triangles.
        tri = self.triangles
        edges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
        keys = edges[:, 0] * len(self.vertices) + edges[:, 1]
        if np.unique(keys).size != keys.size:
            raise GeometryError("inconsistent orientation: repeated directed edge")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    @cached_property
    def _edge_tables(self):
        """Undirected edge tables: (edges, interior mask, incident triangles)."""
        tri = self.triangles
        nv = self.n_vertices
        halfedges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
        owner = np.tile(np.arange(self.n_triangles), 3)
        lo = halfedges.min(axis=1)
        hi = halfedges.max(axis=1)
        keys = lo * nv + hi
        order = np.argsort(keys, kind="stable")
        keys_sorted = keys[order]
        unique_keys, start, counts = np.unique(keys_sorted, return_index=True,
                                               return_counts=True)
        if np.any(counts > 2):
            raise GeometryError("non-manifold edge (more than two incident triangles)")
        edges = np.column_stack([unique_keys // nv, unique_keys % nv])
        tri_a = owner[order[start]]
        tri_b = np.full(len(unique_keys), -1, dtype=np.int64)
        second = counts == 2
        tri_b[second] = owner[order[start[second] + 1]]
        return edges, second, np.column_stack([tri_a, tri_b])

    @property
    def edges(self) -> np.ndarray:
        """All undirected edges as (E, 2) sorted vertex pairs."""
        return self._edge_tables[0]

    @property
    def interior_edges(self) -> np.ndarray:
        edges, interior, _ = self._edge_tables
        return edges[interior]

    @property
    def interior_edge_triangles(self) -> np.ndarray:
        """(Ei, 2) triangle pairs across each interior edge."""
        edges, interior, tris = self._edge_tables
        return tris[interior]

    @property
    def boundary_edges(self) -> np.ndarray:
        edges, interior, _ = self._edge_tables
        return edges[~interior]

    @property
    def is_closed(self) -> bool:
        return len(self.boundary_edges) == 0

    def edge_lengths(self, edges: np.ndarray) -> np.ndarray:
        vec = self.vertices[edges[:, 1]] - self.vertices[edges[:, 0]]
        return np.linalg.norm(vec, axis=1)

    @cached_property
    def mean_edge_length(self) -> float:
        return float(self.edge_lengths(self.edges).mean())

    def scaled(self, factor: float) -> "TriMesh":
        return TriMesh(self.vertices * float(factor), self.triangles)

    def translated(self, offset) -> "TriMesh":
        return TriMesh(self.vertices + np.asarray(offset, dtype=float), self.triangles)


@dataclass(frozen=True)
class SurfaceMeasure:
    """Discrete area measure: per-triangle areas and one-third lumped vertex masses."""

    triangle_areas: np.ndarray
    vertex_masses: np.ndarray
    total_area: float

    def __post_init__(self):
        self.triangle_areas.setflags(write=False)
        self.vertex_masses.setflags(write=False)


def triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p0 = vertices[triangles[:, 0]]
    cross = np.cross(vertices[triangles[:, 1]] - p0, vertices[triangles[:, 2]] - p0)
    return 0.5 * np.linalg.norm(cross, axis=1)


def measures(mesh: TriMesh) -> SurfaceMeasure:
    """Triangle areas by the cross-product formula and one-third vertex lumping."""
    areas = triangle_areas(mesh.vertices, mesh.triangles)
    floor = DEGENERATE_AREA_FACTOR * areas.mean()
    bad = np.nonzero(areas <= floor)[0]
    if bad.size:
        raise GeometryError(f"degenerate triangle {bad[0]} (area {areas[bad[0]]:.3e})")
    masses = np.zeros(mesh.n_vertices)
    np.add.at(masses, mesh.triangles.ravel(), np.repeat(areas / 3.0, 3))
    return SurfaceMeasure(areas, masses, float(areas.sum()))


def total_area(measure: SurfaceMeasure) -> float:
    return measure.total_area


# ---------------------------------------------------------------------------
# Generators


@dataclass(frozen=True)
class Icosphere:
    subdivisions: int = 0
    radius: float = 1.0


@dataclass(frozen=True)
class FlatStrip:
    nx: int = 1
    ny: int = 1
    lx: float = 1.0
    ly: float = 1.0


@dataclass(frozen=True)
class PerturbedSphere:
    subdivisions: int = 0
    radius: float = 1.0
    amplitude: float = 0.0
    frequency: int = 1


MeshSpec = Icosphere | FlatStrip | PerturbedSphere

_ICO_VERTS = None
_ICO_FACES = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
], dtype=np.int64)


def _icosahedron_vertices() -> np.ndarray:
    global _ICO_VERTS
    if _ICO_VERTS is None:
        phi = (1.0 + np.sqrt(5.0)) / 2.0
        raw = np.array([
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ], dtype=float)
        _ICO_VERTS = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    return _ICO_VERTS


def _subdivide(vertices: np.ndarray, triangles: np.ndarray):
    """One 4-to-1 midpoint subdivision, new vertices appended deterministically."""
    nv = len(vertices)
    pairs = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]],
                            triangles[:, [2, 0]]])
    lo = pairs.min(axis=1)
    hi = pairs.max(axis=1)
    keys = lo * nv + hi
    unique_keys, inverse = np.unique(keys, return_inverse=True)
    mid = 0.5 * (vertices[unique_keys // nv] + vertices[unique_keys % nv])
    new_vertices = np.vstack([vertices, mid])
    m01, m12, m20 = np.split(nv + inverse, 3)
    t0, t1, t2 = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    new_triangles = np.concatenate([
        np.column_stack([t0, m01, m20]),
        np.column_stack([t1, m12, m01]),
        np.column_stack([t2, m20, m12]),
        np.column_stack([m01, m12, m20]),
    ])
    return new_vertices, new_triangles


def _unit_icosphere(subdivisions: int):
    vertices = _icosahedron_vertices()
    triangles = _ICO_FACES
    for _ in range(subdivisions):
        vertices, triangles = _subdivide(vertices, triangles)
        vertices = vertices / np.linalg.norm(vertices, axis=1, keepdims=True)
    return vertices, triangles


def generate(spec: MeshSpec) -> TriMesh:
    """Build one of the test geometries.

    Icosphere and PerturbedSphere are closed; FlatStrip has a boundary.
    """
    if isinstance(spec, Icosphere):
        if spec.subdivisions < 0 or spec.radius <= 0:
            raise ValueError(f"invalid icosphere spec {spec}")
        vertices, triangles = _unit_icosphere(spec.subdivisions)
        return TriMesh(spec.radius * vertices, triangles)
    if isinstance(spec, FlatStrip):
        if spec.nx < 1 or spec.ny < 1 or spec.lx <= 0 or spec.ly <= 0:
            raise ValueError(f"invalid strip spec {spec}")
        xs = np.linspace(0.0, spec.lx, spec.nx + 1)
        ys = np.linspace(0.0, spec.ly, spec.ny + 1)
        gx, gy = np.meshgrid(xs, ys, indexing="xy")
        vertices = np.column_stack([gx.ravel(), gy.ravel(),
                                    np.zeros(gx.size)])
        cols = spec.nx + 1
        i, j = np.meshgrid(np.arange(spec.nx), np.arange(spec.ny), indexing="xy")
        v00 = (j * cols + i).ravel()
        v10 = v00 + 1
        v01 = v00 + cols
        v11 = v01 + 1
        # split each cell along the (v00, v11) diagonal
        triangles = np.concatenate([
            np.column_stack([v00, v10, v11]),
            np.column_stack([v00, v11, v01]),
        ])
        return TriMesh(vertices, triangles)
    if isinstance(spec, PerturbedSphere):
        if spec.subdivisions < 0 or spec.radius <= 0 or spec.amplitude < 0 \
                or spec.frequency < 1:
            raise ValueError(f"invalid perturbed sphere spec {spec}")
        unit, triangles = _unit_icosphere(spec.subdivisions)
        theta = np.arccos(np.clip(unit[:, 2], -1.0, 1.0))
        phi = np.arctan2(unit[:, 1], unit[:, 0])
        radial = spec.radius + spec.amplitude * np.sin(spec.frequency * theta) \
            * np.sin(spec.frequency * phi)
        return TriMesh(radial[:, None] * unit, triangles)
    raise ValueError(f"unknown mesh spec {spec!r}")


def disjoint_union(first: TriMesh, second: TriMesh) -> TriMesh:
    """Concatenate two meshes into one (indices of the second are shifted)."""
    vertices = np.vstack([first.vertices, second.vertices])
    triangles = np.vstack([first.triangles, second.triangles + first.n_vertices])
    return TriMesh(vertices, triangles)


# ---------------------------------------------------------------------------
# Discrete operators


def triangle_normals(mesh: TriMesh, normalized: bool = True) -> np.ndarray:
    p0 = mesh.vertices[mesh.triangles[:, 0]]
    cross = np.cross(mesh.vertices[mesh.triangles[:, 1]] - p0,
                     mesh.vertices[mesh.triangles[:, 2]] - p0)
    if normalized:
        cross = cross / np.linalg.norm(cross, axis=1, keepdims=True)
    return cross


def p1_gradient(mesh: TriMesh, values: np.ndarray) -> np.ndarray:
    """Per-triangle tangential gradient of the piecewise-linear interpolant.

    The returned (T, 3) vectors are constant per triangle and lie in the
    triangle plane.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (mesh.n_vertices,):
        raise ValueError(f"expected one value per vertex ({mesh.n_vertices}), "
                         f"got shape {values.shape}")
    tri = mesh.triangles
    p0, p1, p2 = (mesh.vertices[tri[:, k]] for k in range(3))
    cross = np.cross(p1 - p0, p2 - p0)
    double_area = np.linalg.norm(cross, axis=1)
    normal = cross / double_area[:, None]
    # grad u = (1/2A) sum_i u_i (n x e_i) with e_i the edge opposite vertex i
    e0 = p2 - p1
    e1 = p0 - p2
    e2 = p1 - p0
    u0, u1, u2 = (values[tri[:, k], None] for k in range(3))
    grad = (u0 * np.cross(normal, e0) + u1 * np.cross(normal, e1)
            + u2 * np.cross(normal, e2)) / double_area[:, None]
    return grad


def p1_stiffness(mesh: TriMesh) -> sparse.csr_matrix:
    """Cotangent stiffness matrix K with u^T K u = sum_T area_T |grad u|_T^2."""
    tri = mesh.triangles
    p = [mesh.vertices[tri[:, k]] for k in range(3)]
    cot = np.empty((mesh.n_triangles, 3))
    for k in range(3):
        a = p[(k + 1) % 3] - p[k]
        b = p[(k + 2) % 3] - p[k]
        cot[:, k] = np.einsum("ij,ij->i", a, b) / np.linalg.norm(np.cross(a, b), axis=1)
    rows, cols, vals = [], [], []
    for k in range(3):
        i = tri[:, (k + 1) % 3]
        j = tri[:, (k + 2) % 3]
        w = 0.5 * cot[:, k]
        rows += [i, j, i, j]
        cols += [j, i, i, j]
        vals += [-w, -w, w, w]
    matrix = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(mesh.n_vertices, mesh.n_vertices))
    matrix.sum_duplicates()
    return matrix


def mean_curvature(mesh: TriMesh, measure: SurfaceMeasure,
                   stiffness: sparse.spmatrix | None = None) -> np.ndarray:
    """Discrete mean curvature vector at each vertex (sum-of-principal convention).

    Cotangent Laplacian of the positions over the lumped vertex mass; for a
    sphere of radius r the result points toward the center with magnitude 2/r.
    Requires a closed mesh.
    """
    if not mesh.is_closed:
        raise UnsupportedGeometryError("mean curvature needs a closed mesh")
    if stiffness is None:
        stiffness = p1_stiffness(mesh)
    return -(stiffness @ mesh.vertices) / measure.vertex_masses[:, None]
