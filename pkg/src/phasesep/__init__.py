"""Diffuse-interface phase separation energies on triangulated surfaces."""

from .config import Config, ConfigError
from .currents import (GraphCurrent, JumpCurve, MfpReport, StrictnessReport,
                       graph_mass_p0, graph_mass_p1, jump_curve_p0,
                       level_curve_p1, mfp_test, strictness_report)
from .energy import (DensityReport, EnergyBreakdown, Interpolant,
                     density_bound, interpolant_eval, modica_mortola,
                     sharp_energy, total_energy, willmore)
from .errors import (CapabilityError, ContinuationError, GeometryError,
                     MeshFormatError, ResolutionWarning, StagnationError,
                     UnsupportedGeometryError)
from .experiments import run_membrane, run_sweep, run_varying
from .fields import PhaseField, field_mass, threshold_majority, vertex_average
from .meshio import (read_mesh, read_scalars, write_field_with_mesh,
                     write_mesh, write_polyline_obj, write_scalars)
from .minimize import (ContinuationStage, MinimizeOptions, MinimizeResult,
                       default_init, epsilon_continuation,
                       initial_binary_phase, minimize_mm, mm_gradient,
                       project_mass, recovery_field)
from .potential import DoubleWell
from .reports import (MembraneReport, SweepRecord, VaryingReport,
                      read_report_json, write_report)
from .surface import (FlatStrip, Icosphere, PerturbedSphere, SurfaceMeasure,
                      TriMesh, disjoint_union, generate, mean_curvature,
                      measures, p1_gradient, p1_stiffness, total_area)

__version__ = "0.1.0"

__all__ = [
    "CapabilityError", "Config", "ConfigError", "ContinuationError",
    "ContinuationStage", "DensityReport", "DoubleWell", "EnergyBreakdown",
    "FlatStrip", "GeometryError", "GraphCurrent", "Icosphere", "Interpolant",
    "JumpCurve", "MembraneReport", "MeshFormatError", "MfpReport",
    "MinimizeOptions", "MinimizeResult", "PerturbedSphere", "PhaseField",
    "ResolutionWarning", "StagnationError", "StrictnessReport",
    "SurfaceMeasure", "SweepRecord", "TriMesh", "UnsupportedGeometryError",
    "VaryingReport", "default_init", "density_bound", "disjoint_union",
    "epsilon_continuation", "field_mass", "generate", "graph_mass_p0",
    "graph_mass_p1", "initial_binary_phase", "interpolant_eval",
    "jump_curve_p0", "level_curve_p1", "mean_curvature", "measures",
    "mfp_test", "minimize_mm", "mm_gradient", "modica_mortola", "p1_gradient",
    "p1_stiffness", "project_mass", "read_mesh", "read_report_json",
    "read_scalars", "recovery_field", "run_membrane", "run_sweep",
    "run_varying", "sharp_energy", "strictness_report", "threshold_majority",
    "total_area", "total_energy", "vertex_average", "willmore",
    "write_field_with_mesh", "write_mesh", "write_polyline_obj",
    "write_report", "write_scalars",
]
