"""
This module reads and writes the line-oriented mesh file format.

Format:
    polymesh 1
    nodes N
    x y                  (N lines, full-precision decimals)
    elements M
    k i1 ... ik          (M lines, 0-based counterclockwise rings)
    levels M             (optional, one integer per line)
    nodeset <name> n     (zero or more blocks, one index per line)
    edgeset <name> n     (zero or more blocks, "element local_edge" per line)

Lines starting with `#` and blank lines are ignored.

Functions:
- save_mesh(mesh, path): Writes a mesh; coordinates use repr() so that
  loading reproduces them bit for bit.
- load_mesh(path): Parses and validates a mesh file.
"""

from pathlib import Path
from typing import Iterator, List, Tuple, Union

from polydamage.errors import MeshError
from polydamage.models import PolyMesh
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]


def save_mesh(mesh: PolyMesh, path: PathLike) -> None:
    """
    Writes a mesh file.

    Args:
        mesh (PolyMesh): Mesh to write.
        path (PathLike): Destination; parent directories are created.

    Raises:
        OSError: If the file cannot be written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["polymesh 1", f"nodes {mesh.n_nodes}"]
    lines += [f"{float(x)!r} {float(y)!r}" for x, y in mesh.nodes]
    lines.append(f"elements {mesh.n_elements}")
    lines += [" ".join(str(i) for i in (len(ring),) + ring) for ring in mesh.elements]
    if any(mesh.levels):
        lines.append(f"levels {mesh.n_elements}")
        lines += [str(level) for level in mesh.levels]
    for name, members in mesh.node_sets.items():
        lines.append(f"nodeset {name} {len(members)}")
        lines += [str(i) for i in members]
    for name, members in mesh.edge_sets.items():
        lines.append(f"edgeset {name} {len(members)}")
        lines += [f"{e} {k}" for e, k in members]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("wrote mesh %s (%d elements)", path, mesh.n_elements)


def _content_lines(path: Path) -> Iterator[Tuple[int, List[str]]]:
    with path.open("r", encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            text = raw.split("#", 1)[0].strip()
            if text:
                yield number, text.split()


def load_mesh(path: PathLike) -> PolyMesh:
    """
    Reads and validates a mesh file.

    Args:
        path (PathLike): Mesh file.

    Returns:
        PolyMesh: The mesh.

    Raises:
        MeshError: On malformed content (message carries `path:line`) or when
            the mesh violates an invariant (message names the invariant).
        OSError: If the file cannot be read.
    """
    path = Path(path)
    lines = _content_lines(path)
    where = str(path)

    def take(expected: str) -> Tuple[int, List[str]]:
        try:
            return next(lines)
        except StopIteration:
            raise MeshError(f"{where}: unexpected end of file, expected {expected}") from None

    def header(expected: str, fields: int) -> Tuple[int, List[str]]:
        number, words = take(f"'{expected}'")
        if words[0] != expected or len(words) != fields:
            raise MeshError(f"{where}:{number}: expected '{expected}' header, got '{' '.join(words)}'")
        return number, words

    def count(number: int, word: str) -> int:
        try:
            value = int(word)
        except ValueError:
            raise MeshError(f"{where}:{number}: '{word}' is not an integer") from None
        if value < 0:
            raise MeshError(f"{where}:{number}: negative count {value}")
        return value

    number, words = take("'polymesh 1'")
    if words != ["polymesh", "1"]:
        raise MeshError(f"{where}:{number}: expected 'polymesh 1' header")

    number, words = header("nodes", 2)
    nodes = []
    for _ in range(count(number, words[1])):
        number, words = take("node coordinates")
        if len(words) != 2:
            raise MeshError(f"{where}:{number}: a node line needs exactly two coordinates")
        try:
            nodes.append((float(words[0]), float(words[1])))
        except ValueError:
            raise MeshError(f"{where}:{number}: invalid coordinate") from None

    number, words = header("elements", 2)
    elements = []
    for _ in range(count(number, words[1])):
        number, words = take("an element ring")
        indices = [count(number, w) for w in words]
        if not indices or indices[0] != len(indices) - 1:
            raise MeshError(f"{where}:{number}: element arity does not match the number of indices")
        elements.append(tuple(indices[1:]))

    levels = None
    node_sets, edge_sets = {}, {}
    for number, words in lines:
        if words[0] == "levels" and len(words) == 2:
            levels = []
            for _ in range(count(number, words[1])):
                n, w = take("a level")
                levels.append(count(n, w[0]))
        elif words[0] in ("nodeset", "edgeset") and len(words) == 3:
            kind, name = words[0], words[1]
            members = []
            for _ in range(count(number, words[2])):
                n, w = take(f"a {kind} entry")
                if kind == "nodeset":
                    if len(w) != 1:
                        raise MeshError(f"{where}:{n}: a nodeset entry is one index")
                    members.append(count(n, w[0]))
                else:
                    if len(w) != 2:
                        raise MeshError(f"{where}:{n}: an edgeset entry is 'element local_edge'")
                    members.append((count(n, w[0]), count(n, w[1])))
            target = node_sets if kind == "nodeset" else edge_sets
            if name in target:
                raise MeshError(f"{where}:{number}: duplicate {kind} '{name}'")
            target[name] = members
        else:
            raise MeshError(f"{where}:{number}: unexpected line '{' '.join(words)}'")

    try:
        mesh = PolyMesh(nodes, elements, node_sets, edge_sets, levels)
    except MeshError as exc:
        raise MeshError(f"{where}: {exc}") from None
    logger.info("loaded mesh %s (%d elements, %d nodes)", path, mesh.n_elements, mesh.n_nodes)
    return mesh
