"""Experiment drivers: eps sweeps, the two-phase membrane study, and
varying-surface families. Each driver reads a parsed config, writes CSV/JSON
reports plus rendered figures into an output directory, and returns the
report objects.
"""

from __future__ import annotations

import logging
import warnings
from pathlib import Path

import numpy as np

from . import plots
from .config import Config, ConfigError, mesh_spec_from_config
from .currents import jump_curve_p0, level_curve_p1, mfp_test, strictness_report
from .energy import Interpolant, density_bound, modica_mortola, willmore
from .errors import ContinuationError, ResolutionWarning
from .fields import PhaseField, threshold_majority, vertex_average
from .meshio import write_field_with_mesh
from .minimize import MinimizeOptions, epsilon_continuation
from .potential import DoubleWell
from .reports import (MembraneReport, SweepRecord, VaryingReport, write_json,
                      write_report)
from .surface import (Icosphere, PerturbedSphere, TriMesh, disjoint_union,
                      generate, mean_curvature, measures)

log = logging.getLogger("phasesep")

MEMBRANE_LOWER_BOUND_SLACK = 0.10
VARYING_LIMINF_SLACK = 0.05


def _potential_from_config(config: Config) -> DoubleWell:
    kind = (config.get("potential", "kind", "quartic") or "quartic").lower()
    if kind == "quartic":
        return DoubleWell.quartic()
    if kind == "tabulated":
        path = config.get("potential", "path", required=True)
        return DoubleWell.from_file(path)
    raise ConfigError(f"unknown potential kind {kind!r}")


def _mesh_from_config(config: Config) -> TriMesh:
    spec = mesh_spec_from_config(config)
    if spec == "sphere_pair":
        subdivisions = config.get_int("mesh", "subdivisions", 0)
        radius = config.get_float("mesh", "radius", 1.0)
        separation = config.get_float("mesh", "separation", 4.0 * radius)
        one = generate(Icosphere(subdivisions, radius))
        return disjoint_union(one.translated([-separation / 2.0, 0.0, 0.0]),
                              one.translated([separation / 2.0, 0.0, 0.0]))
    return generate(spec)


def _options_from_config(config: Config, section: str, mass: float) -> MinimizeOptions:
    return MinimizeOptions(
        mass_target=mass,
        max_iterations=config.get_int(section, "max_iterations", 2000),
        grad_tolerance=config.get_float(section, "grad_tolerance", 1e-6),
        step_init=config.get_float(section, "step_init", 0.1),
        backtrack_factor=config.get_float(section, "backtrack_factor", 0.5),
        seed=config.get_int(section, "seed", 0),
    )


def run_sweep(config: Config, out_dir, deterministic: bool = False):
    """Continuation over the configured eps schedule with per-stage records.

    Emits sweep.csv / sweep.json, the final field per stage as OFF plus a
    scalar sidecar, and sweep.png. Stage failures are logged and the records
    for completed stages are still written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mesh = _mesh_from_config(config)
    measure = measures(mesh)
    w = _potential_from_config(config)
    k = w.tension_constant()
    eps_list = config.get_floats("sweep", "eps", required=True)
    if not eps_list:
        raise ConfigError("[sweep] eps must hold at least one value")
    mass = config.get_float("sweep", "mass", required=True)
    opts = _options_from_config(config, "sweep", mass)
    ip = Interpolant(config.get_float("sweep", "a1", 1.0),
                     config.get_float("sweep", "a2", 1.0))

    try:
        stages = epsilon_continuation(mesh, measure, eps_list, w, opts)
        failure = None
    except ContinuationError as exc:
        stages = exc.stages
        failure = str(exc)
        log.error("sweep continuation stopped early: %s", failure)

    records = []
    for index, stage in enumerate(stages):
        jump = level_curve_p1(mesh, stage.field, 0.5)
        sharp_line = 2.0 * k * jump.length
        ratio = stage.breakdown.mm_value / sharp_line if sharp_line > 0 else 0.0
        bending = willmore(mesh, measure, stage.field, ip) if mesh.is_closed else 0.0
        records.append(SweepRecord(
            eps=stage.eps,
            mm_value=stage.breakdown.mm_value,
            dirichlet=stage.breakdown.dirichlet,
            potential=stage.breakdown.potential,
            willmore=bending,
            jump_length=jump.length,
            sharp_line_energy=sharp_line,
            ratio=ratio,
            iterations=stage.iterations,
            wallclock_seconds=0.0 if deterministic else stage.wallclock_seconds,
        ))
        write_field_with_mesh(out_dir / f"field_{index:02d}.off", mesh,
                              stage.field.values)

    write_report(records, "csv", out_dir / "sweep.csv")
    write_report(records, "json", out_dir / "sweep.json")
    plots.sweep_figure(records, out_dir / "sweep.png")
    if failure is not None:
        (out_dir / "sweep_error.txt").write_text(failure + "\n")
    return records


def run_membrane(config: Config, out_dir, deterministic: bool = False):
    """Two-phase membrane study: diffuse and sharp energies on one surface.

    Checks the small-bending hypothesis (bending below 8 pi min(a1, a2) minus
    delta), the probe-ball density bound, and that the diffuse total dominates
    the thresholded sharp total up to 10% slack. Hypothesis violations are
    flagged in the report; the run continues.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mesh = _mesh_from_config(config)
    if not mesh.is_closed:
        raise ConfigError("membrane study needs a closed surface")
    measure = measures(mesh)
    w = _potential_from_config(config)
    k = w.tension_constant()
    a1 = config.get_float("membrane", "a1", 1.0)
    a2 = config.get_float("membrane", "a2", 1.0)
    delta = config.get_float("membrane", "delta", 0.5)
    ip = Interpolant(a1, a2)
    eps_list = config.get_floats("membrane", "eps", [0.1])
    probe_radii = config.get_floats("membrane", "probe_radii", [0.3])

    field_mode = (config.get("membrane", "field", "minimize") or "minimize").lower()
    iterations = 0
    if field_mode.startswith("constant"):
        parts = field_mode.split()
        value = float(parts[1]) if len(parts) > 1 else 1.0
        field = PhaseField.p1(np.full(mesh.n_vertices, value))
        eps = eps_list[-1]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            breakdown = modica_mortola(mesh, measure, field, eps, w)
    elif field_mode == "minimize":
        mass = config.get_float("membrane", "mass", required=True)
        opts = _options_from_config(config, "membrane", mass)
        stages = epsilon_continuation(mesh, measure, eps_list, w, opts)
        field = stages[-1].field
        breakdown = stages[-1].breakdown
        eps = stages[-1].eps
        iterations = sum(stage.iterations for stage in stages)
    else:
        raise ConfigError(f"unknown membrane field mode {field_mode!r}")

    curvature = mean_curvature(mesh, measure)
    bending_diffuse = willmore(mesh, measure, field, ip, curvature=curvature)
    total_diffuse = bending_diffuse + breakdown.mm_value

    binary = threshold_majority(field, mesh)
    ubar = vertex_average(binary, mesh, measure)
    h2 = np.einsum("ij,ij->i", curvature, curvature)
    bending_sharp = 0.25 * float(measure.vertex_masses
                                 @ ((a1 * ubar + a2 * (1.0 - ubar)) * h2))
    line_sharp = 2.0 * k * jump_curve_p0(mesh, binary).length
    total_sharp = bending_sharp + line_sharp

    bound = 8.0 * np.pi * min(a1, a2) - delta
    hypothesis_ok = bending_diffuse < bound
    if not hypothesis_ok:
        log.warning("bending hypothesis violated: %.6f >= %.6f",
                    bending_diffuse, bound)
    density = density_bound(mesh, measure, field, ip, probe_radii)
    lower_bound_ok = total_diffuse >= total_sharp * (1.0 - MEMBRANE_LOWER_BOUND_SLACK)

    report = MembraneReport(
        a1=a1, a2=a2, delta=delta, eps=eps,
        mm_value=breakdown.mm_value,
        willmore_diffuse=bending_diffuse,
        total_diffuse=total_diffuse,
        willmore_sharp=bending_sharp,
        line_energy_sharp=line_sharp,
        total_sharp=total_sharp,
        hypothesis_bound=bound,
        hypothesis_ok=bool(hypothesis_ok),
        lower_bound_ok=bool(lower_bound_ok),
        max_density=density.max_density,
        density_bound_value=density.bound,
        density_violation=density.violation,
        iterations=iterations,
    )
    write_json(report, out_dir / "membrane.json")
    write_field_with_mesh(out_dir / "membrane_field.off", mesh, field.values)
    plots.membrane_figure(report, out_dir / "membrane.png")
    return report


def _field_recipe(config: Config, mesh: TriMesh) -> PhaseField:
    recipe = (config.get("varying", "field", "constant 1") or "").split()
    if not recipe:
        raise ConfigError("[varying] field recipe is empty")
    name = recipe[0].lower()
    if name == "constant":
        value = float(recipe[1]) if len(recipe) > 1 else 1.0
        return PhaseField.p1(np.full(mesh.n_vertices, value))
    if name == "logistic_z":
        width = float(recipe[1]) if len(recipe) > 1 else 0.2
        return PhaseField.p1(1.0 / (1.0 + np.exp(-mesh.vertices[:, 2] / width)))
    raise ConfigError(f"unknown field recipe {name!r}")


def _bump(x, y):
    t = float(np.dot(x, x)) / 9.0
    return np.exp(1.0 - 1.0 / (1.0 - t)) if t < 1.0 else 0.0


def default_testset():
    """Ambient test functions phi(x, y): constants, moments, a bump in x."""
    def one(x, y):
        return 1.0

    def value(x, y):
        return y

    def value_squared(x, y):
        return y * y

    def bump_x(x, y):
        return _bump(x, y)

    return [one, value, value_squared, bump_x]


def run_varying(config: Config, out_dir, deterministic: bool = False):
    """Family of radially perturbed spheres against the round limit sphere.

    Emits the mass-convergence (strictness) gaps, measure-function-pair gaps
    for the default test set, per-member diffuse energies with the limit line
    energy, and whether the lower-bound inequality holds within 5% slack.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    w = _potential_from_config(config)
    k = w.tension_constant()
    subdivisions = config.get_int("varying", "subdivisions", 3)
    radius = config.get_float("varying", "radius", 1.0)
    frequency = config.get_int("varying", "frequency", 3)
    amplitudes = config.get_floats("varying", "amplitudes", required=True)
    eps = config.get_float("varying", "eps", 0.2)

    limit_mesh = generate(Icosphere(subdivisions, radius))
    limit_measure = measures(limit_mesh)
    field = _field_recipe(config, limit_mesh)

    family = []
    for amplitude in amplitudes:
        mesh = generate(PerturbedSphere(subdivisions, radius, amplitude, frequency))
        family.append((mesh, measures(mesh)))

    strict = strictness_report(family, (limit_mesh, limit_measure))
    mfp = mfp_test([(mesh, measure, field) for mesh, measure in family],
                   (limit_mesh, limit_measure, field), default_testset())

    mm_values = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        for mesh, measure in family:
            mm_values.append(modica_mortola(mesh, measure, field, eps, w).mm_value)
    limit_jump = level_curve_p1(limit_mesh, field, 0.5)
    limit_line_energy = 2.0 * k * limit_jump.length
    liminf_ok = all(v >= limit_line_energy * (1.0 - VARYING_LIMINF_SLACK)
                    for v in mm_values)

    report = VaryingReport(
        amplitudes=[float(a) for a in amplitudes],
        member_areas=strict.member_areas,
        limit_area=strict.limit_area,
        area_gaps=strict.gaps,
        areas_monotone=strict.monotone_convergent,
        mfp_gaps={row.name: row.gaps for row in mfp.rows},
        mfp_monotone={row.name: all(b <= a for a, b in zip(row.gaps, row.gaps[1:]))
                      for row in mfp.rows},
        mm_values=mm_values,
        limit_line_energy=limit_line_energy,
        liminf_ok=bool(liminf_ok),
    )
    write_json(report, out_dir / "varying.json")
    plots.varying_figure(report, out_dir / "varying.png")
    return report
