"""
This module defines the PolyMesh class, an immutable polygonal mesh.

Classes:
- PolyMesh: Nodes, variable-arity counterclockwise element rings, named node
  sets and named edge sets, validated on construction.

Usage:
- Meshes are produced by the generators in `polydamage.fem.mesh` or read with
  `polydamage.fem.mesh_io.load_mesh`. Every operation returns a new mesh.

Example:
    >>> mesh = PolyMesh(
    ...     nodes=[[0, 0], [1, 0], [1, 1], [0, 1]],
    ...     elements=[(0, 1, 2, 3)],
    ... )
    >>> mesh.total_area()
    1.0
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from polydamage.errors import MeshError

Ring = Tuple[int, ...]
EdgeRef = Tuple[int, int]


def ring_area(coords: np.ndarray) -> float:
    """Signed shoelace area of a closed polygon given by its vertex coordinates."""
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return float((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def _segments_intersect(p1, p2, q1, q2, tol: float) -> bool:
    d1 = _cross(q1, q2, p1)
    d2 = _cross(q1, q2, p2)
    d3 = _cross(p1, p2, q1)
    d4 = _cross(p1, p2, q2)
    if ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and \
            ((d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)):
        return True

    def on_segment(a, b, c, d):
        return abs(d) <= tol and min(a[0], b[0]) - tol <= c[0] <= max(a[0], b[0]) + tol \
            and min(a[1], b[1]) - tol <= c[1] <= max(a[1], b[1]) + tol

    return (on_segment(q1, q2, p1, d1) or on_segment(q1, q2, p2, d2)
            or on_segment(p1, p2, q1, d3) or on_segment(p1, p2, q2, d4))


@dataclass(frozen=True, eq=False)
class PolyMesh:
    """
    A polygonal mesh whose elements are counterclockwise vertex rings.

    Hanging nodes are ordinary ring vertices of the coarser neighbour, so every
    interior edge is shared by exactly two rings with opposite orientation.

    Attributes:
        nodes (np.ndarray): Read-only (N, 2) array of coordinates.
        elements (Tuple[Ring, ...]): Vertex rings, arity >= 3.
        node_sets (Dict[str, Tuple[int, ...]]): Named node index lists.
        edge_sets (Dict[str, Tuple[EdgeRef, ...]]): Named (element, local edge)
            pairs; local edge k joins ring[k] and ring[k + 1].
        levels (Optional[Tuple[int, ...]]): Refinement level per element.

    Raises:
        MeshError: If any invariant is violated. The message names the
            invariant (arity, range, simplicity, orientation, conformity).
    """

    nodes: np.ndarray
    elements: Tuple[Ring, ...]
    node_sets: Mapping[str, Tuple[int, ...]] = field(default_factory=dict)
    edge_sets: Mapping[str, Tuple[EdgeRef, ...]] = field(default_factory=dict)
    levels: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        nodes = np.array(self.nodes, dtype=float).reshape(-1, 2)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "elements", tuple(tuple(int(i) for i in ring) for ring in self.elements))
        object.__setattr__(self, "node_sets", {
            str(name): tuple(int(i) for i in members) for name, members in self.node_sets.items()
        })
        object.__setattr__(self, "edge_sets", {
            str(name): tuple((int(e), int(k)) for e, k in members) for name, members in self.edge_sets.items()
        })
        if self.levels is None:
            object.__setattr__(self, "levels", tuple(0 for _ in self.elements))
        else:
            object.__setattr__(self, "levels", tuple(int(level) for level in self.levels))
        self._validate()

#------------------------------------------------------------------

    def _validate(self) -> None:
        n_nodes = len(self.nodes)
        if not np.all(np.isfinite(self.nodes)):
            raise MeshError("range: node coordinates must be finite")
        if len(self.levels) != len(self.elements):
            raise MeshError("levels: one refinement level per element is required")

        scale = self.diameter() or 1.0
        tol = 1e-12 * scale * scale

        for e, ring in enumerate(self.elements):
            if len(ring) < 3:
                raise MeshError(f"arity: element {e} has {len(ring)} vertices, at least 3 required")
            if min(ring) < 0 or max(ring) >= n_nodes:
                raise MeshError(f"range: element {e} references a node outside 0..{n_nodes - 1}")
            if len(set(ring)) != len(ring):
                raise MeshError(f"simplicity: element {e} repeats a vertex")
            coords = self.nodes[list(ring)]
            if ring_area(coords) <= tol:
                raise MeshError(f"orientation: element {e} is not counterclockwise (signed area <= 0)")
            self._check_self_intersection(e, coords, tol)

        owners = self._check_edge_conformity()
        self._check_hanging_nodes(owners, scale)

        for name, members in self.node_sets.items():
            if any(i < 0 or i >= n_nodes for i in members):
                raise MeshError(f"range: node set '{name}' references a node outside 0..{n_nodes - 1}")
        for name, members in self.edge_sets.items():
            for e, k in members:
                if e < 0 or e >= len(self.elements) or k < 0 or k >= len(self.elements[e]):
                    raise MeshError(f"range: edge set '{name}' references a missing edge ({e}, {k})")

    def _check_self_intersection(self, e: int, coords: np.ndarray, tol: float) -> None:
        n = len(coords)
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                if _segments_intersect(coords[i], coords[(i + 1) % n], coords[j], coords[(j + 1) % n], tol):
                    raise MeshError(f"simplicity: element {e} has self-intersecting edges {i} and {j}")

    def _check_edge_conformity(self) -> Dict[Tuple[int, int], int]:
        owners: Dict[Tuple[int, int], int] = {}
        for e, ring in enumerate(self.elements):
            for a, b in zip(ring, ring[1:] + ring[:1]):
                if (a, b) in owners:
                    raise MeshError(
                        f"conformity: edge ({a}, {b}) is used with the same orientation "
                        f"by elements {owners[(a, b)]} and {e}"
                    )
                owners[(a, b)] = e
        return owners

    def _check_hanging_nodes(self, owners: Dict[Tuple[int, int], int], scale: float) -> None:
        boundary = [edge for edge in owners if (edge[1], edge[0]) not in owners]
        if not boundary:
            return
        used = np.unique(np.fromiter((i for ring in self.elements for i in ring), dtype=int))
        points = self.nodes[used]
        for a, b in boundary:
            pa, pb = self.nodes[a], self.nodes[b]
            edge = pb - pa
            length2 = float(edge @ edge)
            t = (points - pa) @ edge / length2
            offset = np.abs(edge[0] * (points[:, 1] - pa[1]) - edge[1] * (points[:, 0] - pa[0]))
            inside = (t > 1e-9) & (t < 1 - 1e-9) & (offset <= 1e-9 * max(length2, scale * scale))
            if np.any(inside):
                node = int(used[np.argmax(inside)])
                raise MeshError(
                    f"conformity: node {node} lies on edge ({a}, {b}) of element "
                    f"{owners[(a, b)]} but is not one of its ring vertices"
                )

#------------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMesh):
            return NotImplemented
        return (
            self.nodes.shape == other.nodes.shape
            and bool(np.array_equal(self.nodes, other.nodes))
            and self.elements == other.elements
            and dict(self.node_sets) == dict(other.node_sets)
            and dict(self.edge_sets) == dict(other.edge_sets)
            and self.levels == other.levels
        )

    __hash__ = None

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def element_coords(self, e: int) -> np.ndarray:
        """Returns the (n, 2) vertex coordinates of element e in ring order."""
        return self.nodes[list(self.elements[e])]

    def element_area(self, e: int) -> float:
        return ring_area(self.element_coords(e))

    def areas(self) -> np.ndarray:
        return np.array([self.element_area(e) for e in range(self.n_elements)])

    def total_area(self) -> float:
        return float(np.sum(self.areas()))

    def element_diameter(self, e: int) -> float:
        """Largest vertex-to-vertex distance of element e."""
        coords = self.element_coords(e)
        diff = coords[:, None, :] - coords[None, :, :]
        return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))

    def diameter(self) -> float:
        """Diagonal of the bounding box of all nodes."""
        if len(self.nodes) == 0:
            return 0.0
        return float(np.hypot(*(self.nodes.max(axis=0) - self.nodes.min(axis=0))))

    def edges(self, e: int) -> List[Tuple[int, int]]:
        """Directed edges (ring[k], ring[k + 1]) of element e."""
        ring = self.elements[e]
        return list(zip(ring, ring[1:] + ring[:1]))

    def iter_edges(self) -> Iterator[Tuple[int, int, int, int]]:
        """Yields (element, local edge, start node, end node) for every ring edge."""
        for e, ring in enumerate(self.elements):
            for k, (a, b) in enumerate(zip(ring, ring[1:] + ring[:1])):
                yield e, k, a, b

    def boundary_edges(self) -> List[EdgeRef]:
        """Edges without an opposite twin, as (element, local edge) pairs."""
        directed = {(a, b) for _, _, a, b in self.iter_edges()}
        return [(e, k) for e, k, a, b in self.iter_edges() if (b, a) not in directed]

    def boundary_nodes(self) -> np.ndarray:
        """Sorted indices of nodes lying on the mesh boundary."""
        nodes = set()
        for e, k in self.boundary_edges():
            a, b = self.edges(e)[k]
            nodes.update((a, b))
        return np.array(sorted(nodes), dtype=int)

    def edge_nodes(self, edge_set: Sequence[EdgeRef]) -> np.ndarray:
        """Sorted unique node indices touched by the given edges."""
        nodes = set()
        for e, k in edge_set:
            nodes.update(self.edges(e)[k])
        return np.array(sorted(nodes), dtype=int)

    def set_nodes(self, name: str) -> np.ndarray:
        """
        Resolves a node set or an edge set by name to node indices.

        Raises:
            KeyError: If neither a node set nor an edge set has that name;
                the message lists the available sets.
        """
        if name in self.node_sets:
            return np.array(self.node_sets[name], dtype=int)
        if name in self.edge_sets:
            return self.edge_nodes(self.edge_sets[name])
        raise KeyError(f"unknown set '{name}'; available: {', '.join(self.set_names()) or 'none'}")

    def set_names(self) -> List[str]:
        return sorted(set(self.node_sets) | set(self.edge_sets))

    def nearest_node(self, point: Sequence[float]) -> Tuple[int, float]:
        """Returns the index of the node closest to point and its distance."""
        distance = np.hypot(*(self.nodes - np.asarray(point, dtype=float)).T)
        index = int(np.argmin(distance))
        return index, float(distance[index])
