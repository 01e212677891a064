import json

import numpy as np
import pytest

from phasesep import (Icosphere, JumpCurve, MeshFormatError, PhaseField,
                      generate, jump_curve_p0)
from phasesep.config import Config, ConfigError, mesh_spec_from_config
from phasesep.meshio import (read_mesh, read_scalars, write_field_with_mesh,
                             write_mesh, write_polyline_obj, write_scalars)
from phasesep.reports import SweepRecord, read_report_json, write_report


def test_off_roundtrip(tmp_path):
    mesh = generate(Icosphere(2, 1.0))
    path = tmp_path / "sphere.off"
    write_mesh(path, mesh)
    back = read_mesh(path)
    np.testing.assert_array_equal(back.vertices, mesh.vertices)
    np.testing.assert_array_equal(back.triangles, mesh.triangles)


def test_obj_roundtrip(tmp_path):
    mesh = generate(Icosphere(1, 0.7))
    path = tmp_path / "sphere.obj"
    write_mesh(path, mesh)
    back = read_mesh(path)
    np.testing.assert_array_equal(back.vertices, mesh.vertices)
    np.testing.assert_array_equal(back.triangles, mesh.triangles)


def test_off_quad_face_rejected(tmp_path):
    path = tmp_path / "quad.off"
    path.write_text("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n")
    with pytest.raises(MeshFormatError, match="line 7"):
        read_mesh(path)


def test_obj_quad_face_rejected(tmp_path):
    path = tmp_path / "quad.obj"
    path.write_text("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n")
    with pytest.raises(MeshFormatError, match="line 5"):
        read_mesh(path)


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        read_mesh("/nonexistent/mesh.off")
    with pytest.raises(FileNotFoundError):
        read_scalars("/nonexistent/field.txt")


def test_off_bad_vertex_line(tmp_path):
    path = tmp_path / "bad.off"
    path.write_text("OFF\n3 1 0\n0 0 0\n1 zero 0\n0 1 0\n3 0 1 2\n")
    with pytest.raises(MeshFormatError, match="line 4"):
        read_mesh(path)


def test_off_truncated(tmp_path):
    path = tmp_path / "short.off"
    path.write_text("OFF\n5 1 0\n0 0 0\n1 0 0\n0 1 0\n")
    with pytest.raises(MeshFormatError):
        read_mesh(path)


def test_unknown_extension(tmp_path):
    path = tmp_path / "mesh.stl"
    path.write_text("solid nope\n")
    with pytest.raises(MeshFormatError):
        read_mesh(path)
    with pytest.raises(MeshFormatError):
        write_mesh(path, generate(Icosphere(0, 1.0)))


def test_scalar_sidecar_roundtrip(tmp_path, rng):
    values = rng.normal(size=37)
    path = tmp_path / "field.scalars.txt"
    write_scalars(path, values)
    np.testing.assert_array_equal(read_scalars(path), values)


def test_field_with_mesh(tmp_path, rng):
    mesh = generate(Icosphere(1, 1.0))
    values = rng.random(mesh.n_vertices)
    write_field_with_mesh(tmp_path / "out.off", mesh, values)
    back = read_mesh(tmp_path / "out.off")
    scalars = read_scalars(tmp_path / "out.scalars.txt")
    assert back.n_vertices == len(scalars)
    np.testing.assert_array_equal(scalars, values)


def test_polyline_export(tmp_path):
    mesh = generate(Icosphere(2, 1.0))
    bary = mesh.vertices[mesh.triangles].mean(axis=1)
    curve = jump_curve_p0(mesh, PhaseField.p0((bary[:, 2] > 0).astype(float)))
    path = tmp_path / "jump.obj"
    write_polyline_obj(path, curve)
    text = path.read_text().splitlines()
    v_lines = [l for l in text if l.startswith("v ")]
    l_lines = [l for l in text if l.startswith("l ")]
    assert len(v_lines) == 2 * len(curve.segments)
    assert len(l_lines) == len(curve.segments)


def test_empty_polyline(tmp_path):
    curve = JumpCurve(np.empty((0, 2, 3)), 0.0)
    path = tmp_path / "empty.obj"
    write_polyline_obj(path, curve)
    assert path.read_text() == ""


# ---------------------------------------------------------------------------
# config parsing


def test_config_parse_and_getters():
    config = Config.parse("""
[mesh]
kind = icosphere
subdivisions = 3
radius = 2.0

[sweep]
eps = 0.2, 0.1 0.05
seed = 7
""")
    assert config.get("mesh", "kind") == "icosphere"
    assert config.get_int("mesh", "subdivisions") == 3
    assert config.get_float("mesh", "radius") == 2.0
    assert config.get_floats("sweep", "eps") == [0.2, 0.1, 0.05]
    assert config.get("sweep", "missing", "fallback") == "fallback"
    spec = mesh_spec_from_config(config)
    assert spec == Icosphere(3, 2.0)


def test_config_errors_carry_line_numbers():
    with pytest.raises(ConfigError, match="line 2"):
        Config.parse("\n[broken\nkind = x\n")
    with pytest.raises(ConfigError, match="line 1"):
        Config.parse("kind = icosphere\n")
    with pytest.raises(ConfigError, match="line 3"):
        Config.parse("[mesh]\nkind = flat_strip\nnonsense line\n")


def test_config_typed_getter_errors():
    config = Config.parse("[mesh]\nkind = icosphere\nsubdivisions = many\n")
    with pytest.raises(ConfigError):
        config.get_int("mesh", "subdivisions")
    with pytest.raises(ConfigError):
        config.get("mesh", "absent", required=True)


def test_config_mesh_specs():
    strip = Config.parse("[mesh]\nkind = flat_strip\nnx = 4\nny = 2\nlx = 2\nly = 1\n")
    from phasesep import FlatStrip, PerturbedSphere
    assert mesh_spec_from_config(strip) == FlatStrip(4, 2, 2.0, 1.0)
    wobble = Config.parse(
        "[mesh]\nkind = perturbed_sphere\nsubdivisions = 2\nradius = 1\n"
        "amplitude = 0.1\nfrequency = 5\n")
    assert mesh_spec_from_config(wobble) == PerturbedSphere(2, 1.0, 0.1, 5)
    pair = Config.parse("[mesh]\nkind = sphere_pair\n")
    assert mesh_spec_from_config(pair) == "sphere_pair"
    with pytest.raises(ConfigError):
        mesh_spec_from_config(Config.parse("[mesh]\nkind = torus\n"))


def test_config_missing_file():
    with pytest.raises(FileNotFoundError):
        Config.load("/nonexistent/run.cfg")


# ---------------------------------------------------------------------------
# report writing


def _record(eps=0.1):
    return SweepRecord(eps=eps, mm_value=0.33, dirichlet=0.2, potential=0.13,
                       willmore=0.0, jump_length=1.0, sharp_line_energy=1 / 3,
                       ratio=0.99, iterations=17, wallclock_seconds=0.0)


def test_write_report_empty_csv(tmp_path):
    path = tmp_path / "empty.csv"
    write_report([], "csv", path)
    lines = path.read_text().splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("eps,mm_value,dirichlet,potential,willmore,"
                               "jump_length,sharp_line_energy,ratio,")


def test_write_report_single_record(tmp_path):
    path = tmp_path / "one.csv"
    write_report([_record()], "csv", path)
    assert len(path.read_text().splitlines()) == 2


def test_report_json_roundtrip(tmp_path):
    records = [_record(0.2), _record(0.1)]
    path = tmp_path / "records.json"
    write_report(records, "json", path)
    assert read_report_json(path) == records
    raw = json.loads(path.read_text())
    assert list(raw[0].keys())[0] == "eps"


def test_write_report_rejects_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        write_report([], "xml", tmp_path / "nope.xml")
