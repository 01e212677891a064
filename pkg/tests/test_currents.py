import numpy as np
import pytest

from phasesep import (FlatStrip, Icosphere, PerturbedSphere, PhaseField,
                      generate, graph_mass_p0, graph_mass_p1, jump_curve_p0,
                      level_curve_p1, measures, mfp_test, strictness_report)

SQRT2 = np.sqrt(2.0)


def split_field(mesh):
    """One triangle at 0, the other at 1 on the unit strip."""
    return PhaseField.p0(np.arange(mesh.n_triangles) % 2 * 1.0)


def hemisphere_field(mesh):
    bary = mesh.vertices[mesh.triangles].mean(axis=1)
    return PhaseField.p0((bary[:, 2] > 0).astype(float))


def brute_force_wall_mass(mesh, values):
    """Edge enumeration oracle: pair triangles through a shared-edge dict."""
    owners = {}
    for t, (a, b, c) in enumerate(mesh.triangles):
        for edge in ((a, b), (b, c), (c, a)):
            owners.setdefault(tuple(sorted(map(int, edge))), []).append(t)
    total = 0.0
    for (a, b), tris in owners.items():
        if len(tris) == 2:
            length = float(np.linalg.norm(mesh.vertices[a] - mesh.vertices[b]))
            total += abs(values[tris[0]] - values[tris[1]]) * length
    return total


def test_graph_mass_p0_strip_split(unit_strip):
    mesh, measure = unit_strip
    current = graph_mass_p0(mesh, measure, split_field(mesh))
    assert current.horizontal_mass == pytest.approx(1.0, abs=1e-15)
    assert current.vertical_mass == pytest.approx(SQRT2, rel=1e-12)
    assert current.total_mass == pytest.approx(1.0 + SQRT2, rel=1e-12)


def test_graph_mass_p0_constant(ico3):
    mesh, measure = ico3
    current = graph_mass_p0(mesh, measure, PhaseField.p0(np.full(mesh.n_triangles, 0.4)))
    assert current.vertical_mass == 0.0
    assert current.total_mass == measure.total_area


def test_graph_mass_p0_hemisphere_matches_oracle(ico3):
    mesh, measure = ico3
    phase = hemisphere_field(mesh)
    current = graph_mass_p0(mesh, measure, phase)
    oracle = brute_force_wall_mass(mesh, phase.values)
    assert current.vertical_mass == pytest.approx(oracle, rel=1e-12)
    assert current.vertical_mass == pytest.approx(
        jump_curve_p0(mesh, phase).length, rel=1e-12)


def test_mass_identity_random_binary(ico3, strip8, rng):
    # total mass minus surface area equals jump height times jump length
    for mesh, measure in (ico3, strip8):
        for _ in range(25):
            b = rng.uniform(0.0, 10.0) + 1e-6
            phase = PhaseField.p0(
                b * (rng.random(mesh.n_triangles) > 0.5).astype(float))
            current = graph_mass_p0(mesh, measure, phase)
            excess = current.total_mass - measure.total_area
            expected = b * jump_curve_p0(mesh, phase).length
            assert excess == pytest.approx(expected, rel=1e-12)
            assert current.total_mass == pytest.approx(
                current.horizontal_mass + current.vertical_mass, rel=1e-12)


def test_vertical_mass_additive_over_levels(ico3, rng):
    # coarea: values {0, b1, b1+b2} split into two binary thresholds
    mesh, measure = ico3
    b1, b2 = 0.75, 1.5
    levels = np.array([0.0, b1, b1 + b2])
    phase = PhaseField.p0(levels[rng.integers(0, 3, mesh.n_triangles)])
    low = PhaseField.p0(np.minimum(phase.values, b1))
    high = PhaseField.p0(phase.values - low.values)
    total = graph_mass_p0(mesh, measure, phase).vertical_mass
    split = graph_mass_p0(mesh, measure, low).vertical_mass \
        + graph_mass_p0(mesh, measure, high).vertical_mass
    assert total == pytest.approx(split, rel=1e-12)


def test_graph_mass_p1_basics(unit_strip):
    mesh, measure = unit_strip
    constant = graph_mass_p1(mesh, measure, PhaseField.p1(np.full(4, 2.0)))
    assert constant.total_mass == pytest.approx(1.0, rel=1e-14)
    tilted = graph_mass_p1(mesh, measure, PhaseField.p1(mesh.vertices[:, 0]))
    assert tilted.total_mass == pytest.approx(SQRT2, rel=1e-14)


def test_graph_mass_p1_bounds(ico3, rng):
    mesh, measure = ico3
    from phasesep import p1_gradient
    for _ in range(10):
        values = rng.normal(size=mesh.n_vertices)
        current = graph_mass_p1(mesh, measure, PhaseField.p1(values))
        assert current.total_mass >= measure.total_area
        grad_l1 = float(measure.triangle_areas @ np.linalg.norm(
            p1_gradient(mesh, values), axis=1))
        assert current.total_mass <= measure.total_area + grad_l1 + 1e-12


def test_graph_mass_p1_equality_iff_constant(ico3, rng):
    mesh, measure = ico3
    exact = graph_mass_p1(mesh, measure,
                          PhaseField.p1(np.full(mesh.n_vertices, 0.3)))
    assert exact.total_mass == pytest.approx(measure.total_area, rel=1e-14)
    bumpy = graph_mass_p1(mesh, measure,
                          PhaseField.p1(rng.normal(size=mesh.n_vertices)))
    assert bumpy.total_mass > measure.total_area + 1e-6


def test_jump_curve_strip(unit_strip):
    mesh, _ = unit_strip
    curve = jump_curve_p0(mesh, split_field(mesh))
    assert len(curve.segments) == 1
    assert curve.length == pytest.approx(SQRT2, rel=1e-14)
    empty = jump_curve_p0(mesh, PhaseField.p0(np.ones(mesh.n_triangles)))
    assert empty.is_empty
    assert empty.length == 0.0


def test_hemisphere_zigzag_lengths():
    # the separating edge path always dominates the equator; under
    # subdivision it settles toward a limit above 2 pi
    lengths = []
    for s in (2, 3, 4):
        mesh = generate(Icosphere(s, 1.0))
        lengths.append(jump_curve_p0(mesh, hemisphere_field(mesh)).length)
    assert all(length >= 2 * np.pi for length in lengths)
    assert abs(lengths[2] - lengths[1]) < abs(lengths[1] - lengths[0])


def test_level_curve_strip(unit_strip):
    mesh, _ = unit_strip
    phase = PhaseField.p1(mesh.vertices[:, 0])
    curve = level_curve_p1(mesh, phase, 0.5)
    assert curve.length == pytest.approx(1.0, rel=1e-12)
    assert 1 <= len(curve.segments) <= 2
    np.testing.assert_allclose(curve.segments[..., 0], 0.5, atol=1e-12)


def test_level_curve_equator(ico4):
    mesh, _ = ico4
    curve = level_curve_p1(mesh, PhaseField.p1(mesh.vertices[:, 2]), 0.0)
    assert curve.length == pytest.approx(2 * np.pi, rel=0.01)


def test_level_curve_out_of_range(unit_strip):
    mesh, _ = unit_strip
    phase = PhaseField.p1(mesh.vertices[:, 0])
    assert level_curve_p1(mesh, phase, 2.0).is_empty
    assert level_curve_p1(mesh, phase, -1.0).is_empty
    constant = PhaseField.p1(np.full(mesh.n_vertices, 0.5))
    assert level_curve_p1(mesh, constant, 0.5).is_empty


def test_level_curve_vertex_tiebreak(unit_strip):
    # a vertex exactly at the level must not produce degenerate output
    mesh, _ = unit_strip
    phase = PhaseField.p1(mesh.vertices[:, 0])
    curve = level_curve_p1(mesh, phase, 0.0)
    assert np.isfinite(curve.length)


def test_level_curve_rescaling_invariance(ico3, rng):
    mesh, _ = ico3
    values = rng.normal(size=mesh.n_vertices)
    base = level_curve_p1(mesh, PhaseField.p1(values), 0.1)
    for a, c in ((2.5, 0.3), (-1.25, 1.0)):
        mapped = level_curve_p1(mesh, PhaseField.p1(a * values + c),
                                a * 0.1 + c)
        assert mapped.length == pytest.approx(base.length, rel=1e-12)


def test_strictness_perturbed_family(ico3):
    family = []
    for j in range(1, 6):
        mesh = generate(PerturbedSphere(3, 1.0, 0.2 / j, 3))
        family.append((mesh, measures(mesh)))
    report = strictness_report(family, ico3)
    assert report.monotone_convergent
    assert all(b < a for a, b in zip(report.gaps, report.gaps[1:]))
    assert report.flag == "MONOTONE-CONVERGENT"


def test_strictness_trivial_and_scaled(unit_strip):
    mesh, measure = unit_strip
    trivial = strictness_report([(mesh, measure)], (mesh, measure))
    assert trivial.gaps == [0.0]
    family = []
    for j in range(1, 5):
        scale = 1.0 + 1.0 / j
        scaled = generate(FlatStrip(1, 1, scale, scale))
        family.append((scaled, measures(scaled)))
    report = strictness_report(family, (mesh, measure))
    expected = [(1.0 + 1.0 / j) ** 2 - 1.0 for j in range(1, 5)]
    np.testing.assert_allclose(report.gaps, expected, rtol=1e-12)
    assert report.monotone_convergent


def test_mfp_identical_family(ico3):
    mesh, measure = ico3
    phase = PhaseField.p1(mesh.vertices[:, 2])
    family = [(mesh, measure, phase)] * 3
    report = mfp_test(family, (mesh, measure, phase),
                      [lambda x, y: 1.0, lambda x, y: y])
    for row in report.rows:
        assert all(g == 0.0 for g in row.gaps)


def test_mfp_constant_one_reduces_to_areas(ico3):
    members = []
    for j in range(1, 4):
        mesh = generate(PerturbedSphere(3, 1.0, 0.2 / j, 3))
        members.append((mesh, measures(mesh)))
    field = PhaseField.p1(np.linspace(0.0, 1.0, members[0][0].n_vertices))
    family = [(mesh, measure, field) for mesh, measure in members]
    limit = (*ico3, field)
    report = mfp_test(family, limit, [lambda x, y: 1.0])
    strict = strictness_report(members, ico3)
    np.testing.assert_allclose(report.rows[0].gaps, strict.gaps, rtol=1e-12)


def test_mfp_value_gaps_shrink(ico3):
    members = []
    for j in range(1, 5):
        mesh = generate(PerturbedSphere(3, 1.0, 0.2 / j, 3))
        members.append((mesh, measures(mesh)))
    field = PhaseField.p1(
        1.0 / (1.0 + np.exp(-ico3[0].vertices[:, 2] / 0.2)))
    family = [(mesh, measure, field) for mesh, measure in members]
    report = mfp_test(family, (*ico3, field), [lambda x, y: y])
    gaps = report.rows[0].gaps
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_field_size_validation(ico3):
    mesh, measure = ico3
    with pytest.raises(ValueError):
        graph_mass_p0(mesh, measure, PhaseField.p0(np.zeros(3)))
    with pytest.raises(ValueError):
        graph_mass_p1(mesh, measure, PhaseField.p1(np.zeros(3)))
    with pytest.raises(ValueError):
        graph_mass_p1(mesh, measure, PhaseField.p0(np.zeros(mesh.n_triangles)))
