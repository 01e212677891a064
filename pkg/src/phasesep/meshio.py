"""ASCII OFF and minimal OBJ mesh files, scalar sidecars, polyline export.

Writers emit coordinates at 17 significant digits so that write/read round
trips are bit-lossless for doubles. Only triangles are supported; OBJ parsing
is restricted to v/f records (vertex attributes after '/' are ignored).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .currents import JumpCurve
from .errors import MeshFormatError
from .surface import TriMesh

_FMT = "{:.17g}"


def read_mesh(path) -> TriMesh:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"mesh file not found: {path}")
    suffix = path.suffix.lower()
    if suffix == ".off":
        return _read_off(path)
    if suffix == ".obj":
        return _read_obj(path)
    raise MeshFormatError(f"unsupported mesh extension {suffix!r} (use .off or .obj)")


def write_mesh(path, mesh: TriMesh) -> None:
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".off":
        _write_off(path, mesh)
    elif suffix == ".obj":
        _write_obj(path, mesh)
    else:
        raise MeshFormatError(f"unsupported mesh extension {suffix!r} (use .off or .obj)")


def _meaningful_lines(path: Path):
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _read_off(path: Path) -> TriMesh:
    lines = _meaningful_lines(path)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise MeshFormatError("empty OFF file") from None
    if header != "OFF":
        raise MeshFormatError("expected OFF header", lineno)
    try:
        lineno, counts = next(lines)
    except StopIteration:
        raise MeshFormatError("missing OFF count line") from None
    parts = counts.split()
    if len(parts) != 3:
        raise MeshFormatError("count line must hold 'V F E'", lineno)
    try:
        nv, nf = int(parts[0]), int(parts[1])
    except ValueError:
        raise MeshFormatError("counts must be integers", lineno) from None

    vertices = np.empty((nv, 3))
    for i in range(nv):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise MeshFormatError(f"expected {nv} vertices, file ended at {i}") from None
        fields = line.split()
        if len(fields) != 3:
            raise MeshFormatError("vertex line must hold three coordinates", lineno)
        try:
            vertices[i] = [float(f) for f in fields]
        except ValueError:
            raise MeshFormatError("bad vertex coordinate", lineno) from None

    triangles = np.empty((nf, 3), dtype=np.int64)
    for i in range(nf):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise MeshFormatError(f"expected {nf} faces, file ended at {i}") from None
        fields = line.split()
        try:
            arity = int(fields[0])
        except (ValueError, IndexError):
            raise MeshFormatError("bad face record", lineno) from None
        if arity != 3:
            raise MeshFormatError(f"only triangles supported, got a face of {arity} "
                                  "vertices", lineno)
        if len(fields) < 4:
            raise MeshFormatError("triangle needs three vertex indices", lineno)
        try:
            triangles[i] = [int(f) for f in fields[1:4]]
        except ValueError:
            raise MeshFormatError("bad vertex index", lineno) from None
    return TriMesh(vertices, triangles)


def _write_off(path: Path, mesh: TriMesh) -> None:
    with open(path, "w") as out:
        out.write("OFF\n")
        out.write(f"{mesh.n_vertices} {mesh.n_triangles} {len(mesh.edges)}\n")
        for v in mesh.vertices:
            out.write(" ".join(_FMT.format(c) for c in v) + "\n")
        for t in mesh.triangles:
            out.write(f"3 {t[0]} {t[1]} {t[2]}\n")


def _read_obj(path: Path) -> TriMesh:
    vertices = []
    triangles = []
    for lineno, line in _meaningful_lines(path):
        fields = line.split()
        tag = fields[0]
        if tag == "v":
            if len(fields) < 4:
                raise MeshFormatError("v record needs three coordinates", lineno)
            try:
                vertices.append([float(f) for f in fields[1:4]])
            except ValueError:
                raise MeshFormatError("bad vertex coordinate", lineno) from None
        elif tag == "f":
            refs = fields[1:]
            if len(refs) != 3:
                raise MeshFormatError(f"only triangles supported, got a face of "
                                      f"{len(refs)} vertices", lineno)
            try:
                triangles.append([int(r.split("/", 1)[0]) - 1 for r in refs])
            except ValueError:
                raise MeshFormatError("bad face index", lineno) from None
        # other records (vn, vt, o, g, s, usemtl, ...) are ignored
    if not vertices:
        raise MeshFormatError("OBJ file holds no vertices")
    return TriMesh(np.array(vertices), np.array(triangles, dtype=np.int64))


def _write_obj(path: Path, mesh: TriMesh) -> None:
    with open(path, "w") as out:
        for v in mesh.vertices:
            out.write("v " + " ".join(_FMT.format(c) for c in v) + "\n")
        for t in mesh.triangles:
            out.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")


def write_scalars(path, values) -> None:
    """Sidecar scalar field: one value per line, vertex order of the mesh file."""
    values = np.asarray(values, dtype=float)
    with open(path, "w") as out:
        for v in values:
            out.write(_FMT.format(v) + "\n")


def read_scalars(path) -> np.ndarray:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"scalar file not found: {path}")
    values = []
    for lineno, line in _meaningful_lines(path):
        try:
            values.append(float(line))
        except ValueError:
            raise MeshFormatError("bad scalar value", lineno) from None
    return np.array(values)


def write_field_with_mesh(path, mesh: TriMesh, values) -> None:
    """Write an OFF mesh plus a .scalars.txt sidecar holding a vertex field."""
    path = Path(path)
    _write_off(path, mesh)
    write_scalars(path.with_suffix(".scalars.txt"), values)


def write_polyline_obj(path, curve: JumpCurve) -> None:
    """Export a jump curve as OBJ line records (one l record per segment)."""
    with open(path, "w") as out:
        for seg in curve.segments:
            for point in seg:
                out.write("v " + " ".join(_FMT.format(c) for c in point) + "\n")
        for i in range(len(curve.segments)):
            out.write(f"l {2 * i + 1} {2 * i + 2}\n")
