"""Wavefront OBJ/MTL and PNG/JPEG texture reading and writing.

Design Decision: OBJ + MTL + diffuse map only

Rationale: The scan datasets ship as ``<name>.obj`` + ``<name>.mtl`` + texture
image. Only the diffuse map (``map_Kd``) carries colour for scoring, so other
material channels, normals, groups and smoothing records are ignored.

Parsing rules:
- blank lines, ``#`` comments and CRLF endings are tolerated
- ``f`` corners may be ``v``, ``v/vt``, ``v/vt/vn`` or ``v//vn``; negative
  indices are relative to the end of the list read so far
- polygons with more than three corners are fan-triangulated from corner 0
- faces mixing textured and untextured corners are rejected, as are meshes
  whose faces disagree on having texture coordinates
- unknown records are ignored (logged once per keyword at debug level)

Error Handling:
- Missing OBJ file: FileNotFoundError
- Malformed record, index out of range: MeshFormatError with the line number
- Unsupported or corrupt image: TextureFormatError
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from sharp_bench.models.mesh import SharpBenchError, TexturedMesh, TextureImage


logger = logging.getLogger(__name__)

SUPPORTED_IMAGE_FORMATS = {"PNG", "JPEG"}
MATERIAL_NAME = "material_0"

# map_Kd options and their argument count; None: one to three numbers
MAP_OPTIONS: dict[str, int | None] = {
    "-blendu": 1,
    "-blendv": 1,
    "-boost": 1,
    "-bm": 1,
    "-cc": 1,
    "-clamp": 1,
    "-imfchan": 1,
    "-mm": 2,
    "-o": None,
    "-s": None,
    "-t": None,
    "-texres": 1,
    "-type": 1,
}


class MeshFormatError(SharpBenchError):
    """OBJ or MTL content cannot be parsed."""

    def __init__(self, message: str, path: Path | None = None, line_number: int | None = None):
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        super().__init__(f"{location}{message}")


class TextureFormatError(SharpBenchError):
    """Texture image is unsupported or corrupt."""

    pass


@dataclass(frozen=True)
class MeshBundle:
    """A mesh together with the files it was read from or written to.

    Attributes:
        mesh: The loaded mesh
        obj_path: Geometry file
        mtl_path: Material file, if any
        texture_path: Diffuse texture image, if any
    """

    mesh: TexturedMesh
    obj_path: Path | None = None
    mtl_path: Path | None = None
    texture_path: Path | None = None


def load_texture(path: Path) -> TextureImage:
    """Read a PNG or JPEG image, mapping 8-bit channels to [0, 1].

    Raises:
        FileNotFoundError: If the file does not exist
        TextureFormatError: If the format is unsupported or the file is corrupt
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Texture not found: {path}")

    try:
        with Image.open(path) as img:
            if img.format not in SUPPORTED_IMAGE_FORMATS:
                raise TextureFormatError(
                    f"Unsupported texture format {img.format} in {path}"
                )
            img.load()
            rgb = np.asarray(img.convert("RGB"), dtype=np.float64)
    except TextureFormatError:
        raise
    except (OSError, SyntaxError, ValueError) as e:
        raise TextureFormatError(f"Corrupt texture file {path}: {e}") from e

    logger.debug(f"Loaded texture {path} ({rgb.shape[1]}x{rgb.shape[0]})")
    return TextureImage(rgb / 255.0)


def save_texture(texture: TextureImage, path: Path) -> None:
    """Write an 8-bit image; JPEG for .jpg/.jpeg suffixes, PNG otherwise."""
    path = Path(path)
    data = np.round(texture.pixels * 255.0).astype(np.uint8)
    fmt = "JPEG" if path.suffix.lower() in (".jpg", ".jpeg") else "PNG"
    options = {"quality": 95} if fmt == "JPEG" else {}
    Image.fromarray(data, "RGB").save(path, format=fmt, **options)


def _resolve_index(token: str, count: int, path: Path, line_number: int) -> int:
    try:
        raw = int(token)
    except ValueError:
        raise MeshFormatError(f"Invalid index '{token}'", path, line_number)
    if raw == 0:
        raise MeshFormatError("Index 0 is not valid in OBJ", path, line_number)
    idx = raw - 1 if raw > 0 else count + raw
    if not 0 <= idx < count:
        raise MeshFormatError(
            f"Index {raw} out of range ({count} entries)", path, line_number
        )
    return idx


def _parse_floats(tokens: list[str], n: int, path: Path, line_number: int) -> list[float]:
    if len(tokens) < n:
        raise MeshFormatError(
            f"Expected at least {n} values, got {len(tokens)}", path, line_number
        )
    try:
        return [float(t) for t in tokens[:n]]
    except ValueError:
        raise MeshFormatError(f"Invalid number in {tokens[:n]}", path, line_number)


def _map_filename(args: list[str]) -> str:
    """File name of a ``map_Kd`` record, after any leading options."""
    i = 0
    while i < len(args) and args[i] in MAP_OPTIONS:
        count = MAP_OPTIONS[args[i]]
        i += 1
        if count is None:
            # up to three numbers, never the last token
            taken = 0
            while taken < 3 and i < len(args) - 1 and _is_number(args[i]):
                i += 1
                taken += 1
        else:
            i += count
    return " ".join(args[i:])


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _parse_mtl(mtl_path: Path, material: str | None) -> Path | None:
    """Return the diffuse texture referenced by ``material`` (or the first one)."""
    maps: dict[str, Path] = {}
    current: str | None = None
    text = mtl_path.read_text(encoding="utf-8", errors="replace")
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "newmtl" and len(tokens) > 1:
            current = " ".join(tokens[1:])
        elif tokens[0] == "map_Kd" and len(tokens) > 1 and current is not None:
            filename = _map_filename(tokens[1:])
            if filename:
                maps[current] = mtl_path.parent / filename

    if material is not None and material in maps:
        return maps[material]
    if maps:
        return next(iter(maps.values()))
    return None


def load_mesh(path: Path) -> MeshBundle:
    """Parse a Wavefront OBJ file and its diffuse texture.

    Args:
        path: Path to the ``.obj`` file

    Returns:
        MeshBundle with the mesh and resolved material/texture paths

    Raises:
        FileNotFoundError: If the OBJ (or referenced texture) is missing
        MeshFormatError: On malformed records or out-of-range indices
        TextureFormatError: On unreadable texture images
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Mesh file not found: {path}")

    positions: list[list[float]] = []
    texcoords: list[list[float]] = []
    triangles: list[tuple[int, int, int]] = []
    corner_tex: list[tuple[int, int, int]] = []
    mtllibs: list[str] = []
    material: str | None = None
    textured_faces: bool | None = None
    ignored: set[str] = set()

    text = path.read_text(encoding="utf-8", errors="replace")
    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]

        if keyword == "v":
            positions.append(_parse_floats(tokens[1:], 3, path, line_number))
        elif keyword == "vt":
            uv = _parse_floats(tokens[1:], 2 if len(tokens) > 2 else 1, path, line_number)
            texcoords.append([uv[0], uv[1] if len(uv) > 1 else 0.0])
        elif keyword == "f":
            corners = tokens[1:]
            if len(corners) < 3:
                raise MeshFormatError("Face with fewer than 3 corners", path, line_number)
            vids: list[int] = []
            tids: list[int] = []
            for corner in corners:
                parts = corner.split("/")
                vids.append(_resolve_index(parts[0], len(positions), path, line_number))
                if len(parts) > 1 and parts[1]:
                    tids.append(_resolve_index(parts[1], len(texcoords), path, line_number))
            if tids and len(tids) != len(vids):
                raise MeshFormatError(
                    "Face mixes textured and untextured corners", path, line_number
                )
            has_tex = bool(tids)
            if textured_faces is None:
                textured_faces = has_tex
            elif textured_faces != has_tex:
                raise MeshFormatError(
                    "Mesh mixes faces with and without texture coordinates",
                    path,
                    line_number,
                )
            for i in range(1, len(vids) - 1):
                tri = (vids[0], vids[i], vids[i + 1])
                if len(set(tri)) < 3:
                    raise MeshFormatError(
                        f"Degenerate face repeats a vertex: {[t + 1 for t in tri]}",
                        path,
                        line_number,
                    )
                triangles.append(tri)
                if has_tex:
                    corner_tex.append((tids[0], tids[i], tids[i + 1]))
        elif keyword == "mtllib":
            mtllibs.append(" ".join(tokens[1:]))
        elif keyword == "usemtl":
            if material is None and len(tokens) > 1:
                material = " ".join(tokens[1:])
        elif keyword not in ignored:
            ignored.add(keyword)
            logger.debug(f"Ignoring OBJ records of type '{keyword}' in {path}")

    vertices = np.asarray(positions, dtype=np.float64).reshape(-1, 3)
    tri_array = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    corner_uvs = None
    if textured_faces:
        tc = np.asarray(texcoords, dtype=np.float64).reshape(-1, 2)
        corner_uvs = tc[np.asarray(corner_tex, dtype=np.int64).reshape(-1, 3)]

    mtl_path: Path | None = None
    texture_path: Path | None = None
    texture: TextureImage | None = None
    for lib in mtllibs:
        candidate = path.parent / lib
        if not candidate.exists():
            logger.warning(f"Material library not found: {candidate}")
            continue
        mtl_path = candidate
        texture_path = _parse_mtl(candidate, material)
        if texture_path is not None:
            break

    if texture_path is not None:
        texture = load_texture(texture_path)
        if corner_uvs is None:
            if len(tri_array):
                raise MeshFormatError(
                    "Material has a texture map but faces have no texture coordinates",
                    path,
                )
            corner_uvs = np.zeros((0, 3, 2))

    mesh = TexturedMesh(vertices, tri_array, corner_uvs, texture)
    logger.debug(
        f"Loaded {path}: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles, "
        f"textured={mesh.is_textured}"
    )
    return MeshBundle(mesh=mesh, obj_path=path, mtl_path=mtl_path, texture_path=texture_path)


def save_mesh(bundle: MeshBundle | TexturedMesh, path: Path) -> MeshBundle:
    """Write ``<name>.obj`` (+ ``<name>.mtl`` and ``<name>.png`` when textured).

    Positions and texture coordinates are printed with 17 significant digits,
    so :func:`load_mesh` reproduces them exactly. Output bytes depend only on
    the mesh, which keeps batch runs byte-identical.

    Returns:
        MeshBundle pointing at the written files

    Raises:
        OSError: If the files cannot be written
    """
    mesh = bundle.mesh if isinstance(bundle, MeshBundle) else bundle
    path = Path(path)
    mtl_path: Path | None = None
    texture_path: Path | None = None

    buf = io.StringIO()
    buf.write("# sharp-bench\n")
    if mesh.texture is not None:
        mtl_path = path.with_suffix(".mtl")
        texture_path = path.with_suffix(".png")
        buf.write(f"mtllib {mtl_path.name}\n")
        buf.write(f"usemtl {MATERIAL_NAME}\n")

    if mesh.n_vertices:
        np.savetxt(buf, mesh.vertices, fmt="v %.17g %.17g %.17g")

    if mesh.corner_uvs is not None and mesh.n_triangles:
        flat = mesh.corner_uvs.reshape(-1, 2)
        unique_uvs, inverse = np.unique(flat, axis=0, return_inverse=True)
        np.savetxt(buf, unique_uvs, fmt="vt %.17g %.17g")
        tex_idx = inverse.reshape(-1, 3) + 1
        faces = np.empty((mesh.n_triangles, 6), dtype=np.int64)
        faces[:, 0::2] = mesh.triangles + 1
        faces[:, 1::2] = tex_idx
        np.savetxt(buf, faces, fmt="f %d/%d %d/%d %d/%d")
    elif mesh.n_triangles:
        np.savetxt(buf, mesh.triangles + 1, fmt="f %d %d %d")

    path.write_text(buf.getvalue(), encoding="utf-8")

    if mesh.texture is not None and mtl_path is not None and texture_path is not None:
        mtl_path.write_text(
            f"newmtl {MATERIAL_NAME}\n"
            "Ka 1 1 1\n"
            "Kd 1 1 1\n"
            f"map_Kd {texture_path.name}\n",
            encoding="utf-8",
        )
        save_texture(mesh.texture, texture_path)

    logger.debug(f"Saved {path}: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles")
    return MeshBundle(mesh=mesh, obj_path=path, mtl_path=mtl_path, texture_path=texture_path)


def discover_meshes(directory: Path) -> dict[str, Path]:
    """Map file stem -> ``.obj`` path for every OBJ in ``directory`` (sorted)."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"Directory not found: {directory}")
    return {p.stem: p for p in sorted(directory.glob("*.obj"))}
