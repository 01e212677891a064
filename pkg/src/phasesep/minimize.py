"""Mass-constrained minimization of the diffuse interface energy.

Projected gradient descent in the lumped-mass inner product: the gradient is
divided by the vertex masses, projected onto the zero-mean constraint
tangent, and stepped with a Barzilai-Borwein proposal guarded by a
backtracking line search. The mass constraint is the closed-form shift
u + (m - int u dmu) / mu(total), so every iterate is feasible.
"""

from __future__ import annotations

import csv
import time
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra

from .energy import EnergyBreakdown, modica_mortola
from .errors import ContinuationError, ResolutionWarning, StagnationError
from .fields import PhaseField, field_mass
from .potential import DoubleWell
from .surface import SurfaceMeasure, TriMesh, p1_stiffness

MAX_BACKTRACKS = 60
MAX_NULL_STEPS = 200
ARMIJO_SLOPE = 1e-4
BB_CLIP = (1e-6, 1e2)


@dataclass(frozen=True)
class MinimizeOptions:
    """Options for the constrained descent; mass_target is int u dmu."""

    mass_target: float
    max_iterations: int = 2000
    grad_tolerance: float = 1e-6
    step_init: float = 0.1
    backtrack_factor: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.grad_tolerance <= 0 or self.step_init <= 0:
            raise ValueError("tolerances and step size must be positive")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError("backtrack_factor must lie in (0, 1)")


@dataclass(frozen=True)
class MinimizeResult:
    field: PhaseField
    breakdown: EnergyBreakdown
    iterations: int
    converged: bool
    wallclock_seconds: float


@dataclass(frozen=True)
class ContinuationStage:
    eps: float
    field: PhaseField
    breakdown: EnergyBreakdown
    iterations: int
    wallclock_seconds: float


def project_mass(phase: PhaseField, measure: SurfaceMeasure, m: float) -> PhaseField:
    """Weighted-L2 projection onto the affine constraint int u dmu = m."""
    values = np.asarray(phase.values, dtype=float)
    if phase.kind != "P1":
        raise ValueError("mass projection applies to per-vertex fields")
    if measure.total_area <= 0:
        raise ValueError("measure must have positive total area")
    shift = (m - float(measure.vertex_masses @ values)) / measure.total_area
    return PhaseField.p1(values + shift)


def mm_gradient(mesh: TriMesh, measure: SurfaceMeasure, phase: PhaseField,
                eps: float, w: DoubleWell,
                stiffness: sparse.spmatrix | None = None) -> np.ndarray:
    """Exact gradient of the discrete diffuse energy with respect to vertex values."""
    values = phase.check_p1(mesh)
    if stiffness is None:
        stiffness = p1_stiffness(mesh)
    return 2.0 * eps * (stiffness @ values) \
        + measure.vertex_masses * w.evaluate(values, order=1) / eps


def default_init(mesh: TriMesh, measure: SurfaceMeasure,
                 opts: MinimizeOptions) -> PhaseField:
    """Near-mixture start: seeded values in [0.45, 0.55], then mass projection."""
    rng = np.random.default_rng(opts.seed)
    values = 0.45 + 0.1 * rng.random(mesh.n_vertices)
    return project_mass(PhaseField.p1(values), measure, opts.mass_target)


def minimize_mm(mesh: TriMesh, measure: SurfaceMeasure, eps: float,
                w: DoubleWell, opts: MinimizeOptions,
                init: PhaseField | None = None,
                trace_path=None) -> MinimizeResult:
    """Projected gradient descent on the diffuse energy under the mass constraint.

    Terminates when the mass-weighted norm of the projected gradient drops
    below ``opts.grad_tolerance`` or after ``opts.max_iterations`` accepted
    steps. Raises StagnationError (carrying the last iterate) if the line
    search cannot decrease the energy within 60 halvings.
    """
    t_start = time.perf_counter()
    stiffness = p1_stiffness(mesh)
    mass = measure.vertex_masses
    area = measure.total_area
    m = opts.mass_target

    if init is None:
        u = default_init(mesh, measure, opts).values.copy()
    else:
        u = init.check_p1(mesh).copy()
        u += (m - float(mass @ u)) / area

    def energy(vec: np.ndarray) -> float:
        return eps * float(vec @ (stiffness @ vec)) \
            + float(mass @ w.evaluate(vec)) / eps

    def projected_gradient(vec: np.ndarray) -> np.ndarray:
        grad = 2.0 * eps * (stiffness @ vec) + mass * w.evaluate(vec, order=1) / eps
        pointwise = grad / mass
        return pointwise - float(mass @ pointwise) / area

    trace_file = None
    trace_writer = None
    if trace_path is not None:
        trace_file = open(trace_path, "w", newline="")
        trace_writer = csv.writer(trace_file)
        trace_writer.writerow(["iteration", "energy", "grad_norm", "step"])

    try:
        e_current = energy(u)
        direction = projected_gradient(u)
        gnorm = float(np.sqrt(mass @ (direction * direction)))
        step = opts.step_init
        prev_u = None
        prev_direction = None
        converged = gnorm <= opts.grad_tolerance
        iterations = 0
        null_steps = 0

        while not converged and iterations < opts.max_iterations:
            if prev_u is not None:
                du = u - prev_u
                dg = direction - prev_direction
                denom = float(mass @ (du * dg))
                if denom > 0.0:
                    step = float(mass @ (du * du)) / denom
            step = float(np.clip(step, BB_CLIP[0] * opts.step_init,
                                 BB_CLIP[1] * opts.step_init))

            # backtracking keeps the energy non-increasing; once the Armijo
            # margin underflows, ties count as accepted null steps and a long
            # run of them means no measurable progress remains
            accepted = False
            trial_step = step
            for _ in range(MAX_BACKTRACKS + 1):
                u_trial = u - trial_step * direction
                u_trial += (m - float(mass @ u_trial)) / area
                e_trial = energy(u_trial)
                if e_trial <= e_current - ARMIJO_SLOPE * trial_step * gnorm * gnorm:
                    accepted = True
                    break
                trial_step *= opts.backtrack_factor
            if not accepted:
                raise StagnationError(
                    f"line search stalled after {MAX_BACKTRACKS} halvings "
                    f"(iteration {iterations}, energy {e_current:.6e})",
                    field=PhaseField.p1(u),
                    breakdown=_final_breakdown(mesh, measure, u, eps, w),
                    iterations=iterations)
            null_steps = null_steps + 1 if e_trial >= e_current else 0
            if null_steps > MAX_NULL_STEPS:
                raise StagnationError(
                    f"no measurable energy decrease for {MAX_NULL_STEPS} "
                    f"iterations (iteration {iterations}, energy "
                    f"{e_current:.6e}, grad norm {gnorm:.3e})",
                    field=PhaseField.p1(u),
                    breakdown=_final_breakdown(mesh, measure, u, eps, w),
                    iterations=iterations)

            prev_u, prev_direction = u, direction
            u, e_current, step = u_trial, e_trial, trial_step
            direction = projected_gradient(u)
            gnorm = float(np.sqrt(mass @ (direction * direction)))
            iterations += 1
            converged = gnorm <= opts.grad_tolerance
            if trace_writer is not None:
                trace_writer.writerow([iterations, repr(e_current), repr(gnorm),
                                       repr(step)])
    finally:
        if trace_file is not None:
            trace_file.close()

    return MinimizeResult(PhaseField.p1(u),
                          _final_breakdown(mesh, measure, u, eps, w),
                          iterations, converged,
                          time.perf_counter() - t_start)


def _final_breakdown(mesh, measure, values, eps, w) -> EnergyBreakdown:
    # the resolution guard already warned when the solve started
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        return modica_mortola(mesh, measure, PhaseField.p1(values), eps, w)


# ---------------------------------------------------------------------------
# Recovery construction and continuation


def initial_binary_phase(mesh: TriMesh, measure: SurfaceMeasure,
                         mass_target: float) -> PhaseField:
    """Planar-sweep binary field whose phase-1 area approximates the target mass.

    Triangles are filled in decreasing barycenter coordinate along the axis of
    largest extent; deterministic for a given mesh.
    """
    extent = mesh.vertices.max(axis=0) - mesh.vertices.min(axis=0)
    axis = int(np.argmax(extent))
    coord = mesh.vertices[mesh.triangles, axis].mean(axis=1)
    order = np.lexsort((np.arange(mesh.n_triangles), -coord))
    target = float(np.clip(mass_target, 0.0, measure.total_area))
    cumulative = np.cumsum(measure.triangle_areas[order])
    count = int(np.searchsorted(cumulative, target, side="left"))
    if count < len(order) and target > 0:
        count += 1
    values = np.zeros(mesh.n_triangles)
    values[order[:count]] = 1.0
    return PhaseField.p0(values)


def _vertex_graph(mesh: TriMesh) -> sparse.csr_matrix:
    edges = mesh.edges
    lengths = mesh.edge_lengths(edges)
    n = mesh.n_vertices
    graph = sparse.csr_matrix(
        (np.concatenate([lengths, lengths]),
         (np.concatenate([edges[:, 0], edges[:, 1]]),
          np.concatenate([edges[:, 1], edges[:, 0]]))), shape=(n, n))
    return graph


def _phase_from_jump_curve(mesh: TriMesh, jump) -> PhaseField:
    """Two-color the triangle adjacency across an edge-aligned jump curve."""
    segments = np.asarray(jump.segments, dtype=float).reshape(-1, 2, 3)
    if len(segments) == 0:
        raise ValueError("cannot infer phases from an empty jump curve; "
                         "pass a binary per-triangle field instead")
    tol = 1e-9 * max(mesh.mean_edge_length, 1e-30)
    endpoint_index = {}
    for i, v in enumerate(mesh.vertices):
        endpoint_index[tuple(np.round(v / tol).astype(np.int64))] = i
    jump_edges = set()
    for seg in segments:
        try:
            a = endpoint_index[tuple(np.round(seg[0] / tol).astype(np.int64))]
            b = endpoint_index[tuple(np.round(seg[1] / tol).astype(np.int64))]
        except KeyError:
            raise ValueError("jump curve segments must join mesh vertices; "
                             "level-set curves need the thresholded field") from None
        jump_edges.add((min(a, b), max(a, b)))

    edges = mesh.interior_edges
    tri_pairs = mesh.interior_edge_triangles
    keep = np.array([(min(e), max(e)) not in jump_edges for e in edges])
    n = mesh.n_triangles
    adj = sparse.csr_matrix(
        (np.ones(keep.sum() * 2),
         (np.concatenate([tri_pairs[keep, 0], tri_pairs[keep, 1]]),
          np.concatenate([tri_pairs[keep, 1], tri_pairs[keep, 0]]))),
        shape=(n, n))
    n_comp, labels = sparse.csgraph.connected_components(adj, directed=False)
    cut = tri_pairs[~keep]
    if len(cut) == 0:
        raise ValueError("jump curve does not match any interior mesh edge")
    # components adjacent across a jump edge must take opposite phases
    comp_adj: dict[int, set[int]] = {}
    for a, b in cut:
        comp_adj.setdefault(labels[a], set()).add(labels[b])
        comp_adj.setdefault(labels[b], set()).add(labels[a])
    phase = np.full(n_comp, -1, dtype=np.int64)
    for root in sorted(comp_adj):
        if phase[root] != -1:
            continue
        phase[root] = 0
        stack = [root]
        while stack:
            comp = stack.pop()
            for other in comp_adj[comp]:
                if phase[other] == -1:
                    phase[other] = 1 - phase[comp]
                    stack.append(other)
                elif phase[other] == phase[comp]:
                    raise ValueError("jump curve does not separate the surface")
    phase[phase == -1] = 0  # sheets the jump never touches
    return PhaseField.p0(phase[labels].astype(float))


def recovery_field(mesh: TriMesh, measure: SurfaceMeasure, jump, eps: float,
                   w: DoubleWell) -> PhaseField:
    """Smooth the sharp phase boundary into the optimal 1d transition profile.

    ``jump`` is a binary per-triangle field (or an edge-aligned JumpCurve);
    each vertex receives profile(signed_distance / eps), where the distance is
    the edge-length Dijkstra distance to the jump set and the sign comes from
    the phase side. Values are clamped to [0, 1].
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if isinstance(jump, PhaseField):
        phase = jump
        values = phase.check_p0(mesh)
        if not np.all((values == 0.0) | (values == 1.0)):
            raise ValueError("recovery needs a binary field with values in {0, 1}")
    else:
        phase = _phase_from_jump_curve(mesh, jump)
        values = phase.values

    edges = mesh.interior_edges
    tri_pairs = mesh.interior_edge_triangles
    differs = values[tri_pairs[:, 0]] != values[tri_pairs[:, 1]]
    jump_vertices = np.unique(edges[differs])
    profile = w.optimal_profile()

    if jump_vertices.size == 0:
        level = float(values[0]) if len(values) else 1.0
        return PhaseField.p1(np.full(mesh.n_vertices, level))

    graph = _vertex_graph(mesh)
    dist = dijkstra(graph, directed=False, indices=jump_vertices, min_only=True)

    # a vertex inherits the phase of its incident triangles; mixed vertices
    # sit on the jump where the distance vanishes and the sign is irrelevant
    incident_sum = np.zeros(mesh.n_vertices)
    incident_cnt = np.zeros(mesh.n_vertices)
    np.add.at(incident_sum, mesh.triangles.ravel(), np.repeat(values, 3))
    np.add.at(incident_cnt, mesh.triangles.ravel(), 1.0)
    sign = np.where(incident_sum * 2.0 >= incident_cnt, 1.0, -1.0)

    out = profile(sign * dist / eps)
    return PhaseField.p1(np.clip(out, 0.0, 1.0))


def epsilon_continuation(mesh: TriMesh, measure: SurfaceMeasure, eps_list,
                         w: DoubleWell, opts: MinimizeOptions,
                         init: PhaseField | None = None,
                         trace_dir=None) -> list[ContinuationStage]:
    """Solve a strictly decreasing eps schedule, warm-starting each stage.

    The first stage starts from the supplied field, or from the recovery
    profile around a planar-sweep phase matching the mass target. A failed
    stage raises ContinuationError carrying the completed stages.
    """
    eps_list = [float(e) for e in eps_list]
    if not eps_list:
        raise ValueError("eps schedule must be nonempty")
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps values must be positive")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps schedule must be strictly decreasing")

    if init is None:
        sharp = initial_binary_phase(mesh, measure, opts.mass_target)
        current = recovery_field(mesh, measure, sharp, eps_list[0], w)
    else:
        current = init

    stages: list[ContinuationStage] = []
    for index, eps in enumerate(eps_list):
        trace_path = None
        if trace_dir is not None:
            trace_path = f"{trace_dir}/trace_{index:02d}.csv"
        try:
            result = minimize_mm(mesh, measure, eps, w, opts, init=current,
                                 trace_path=trace_path)
        except StagnationError as exc:
            raise ContinuationError(
                f"stage {index} (eps = {eps:g}) stalled: {exc}",
                stages=stages) from exc
        stages.append(ContinuationStage(eps, result.field, result.breakdown,
                                        result.iterations,
                                        result.wallclock_seconds))
        current = result.field
    return stages


def mass_of(phase: PhaseField, mesh: TriMesh, measure: SurfaceMeasure) -> float:
    return field_mass(phase, mesh, measure)
