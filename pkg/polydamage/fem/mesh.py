"""
This module generates and refines polygonal meshes.

Functions:
- generate_structured: Axis-aligned quad grid with grid-aligned rectangular cutouts.
- generate_quarter_plate_hole: Mapped quad mesh of a quarter plate with a circular hole.
- refine_polytree: Splits target cells into one child per corner; neighbours
  absorb the inserted midpoints as extra ring vertices (hanging nodes).
- cells_in_box: Elements whose vertex centroid lies in a box.
- element_neighbours: Edge-neighbour sets of every element.
- build_mesh: Mesh described by a MeshRecipe.

Usage:
    mesh = generate_structured((0, 0, 10, 2), 10, 2, cutouts=[(4, 0, 5, 1)])
    fine = refine_polytree(mesh, RefinementPlan.uniform([3, 4], levels=2))
"""

import math
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np

from polydamage.errors import MeshError
from polydamage.models import MeshRecipe, PolyMesh, RefinementPlan, ring_area
from polydamage.utils.logger import get_logger

from .mesh_io import load_mesh

logger = get_logger(__name__)

Box = Tuple[float, float, float, float]

#------------------------------------------------------------------
# Structured grids
#------------------------------------------------------------------


def _grid_index(value: float, start: float, step: float, count: int, what: str) -> int:
    position = (value - start) / step
    index = int(round(position))
    if abs(position - index) > 1e-9 or index < 0 or index > count:
        raise MeshError(what)
    return index


def generate_structured(
    domain: Box,
    nx: int,
    ny: int,
    cutouts: Sequence[Box] = ()
) -> PolyMesh:
    """
    Builds a grid of nx * ny quadrilaterals over an axis-aligned rectangle.

    Cells inside a cutout are removed. Nodes are numbered row by row over the
    nodes still in use; elements are ordered by row then column and each ring
    starts at its lower-left corner. Local edges: 0 bottom, 1 right, 2 top, 3 left.

    Args:
        domain (Box): (x0, y0, x1, y1).
        nx (int): Cells along x.
        ny (int): Cells along y.
        cutouts (Sequence[Box]): Rectangles to remove, each aligned to grid lines.

    Returns:
        PolyMesh: Mesh with edge and node sets "left", "right", "bottom", "top"
        and "cutout<k>" for the boundary of cutout k.

    Raises:
        MeshError: If counts are below 1, the domain is empty, or a cutout is
            not aligned to the grid or not inside the domain.
    """
    if nx < 1 or ny < 1:
        raise MeshError("structured grid: nx and ny must be >= 1")
    x0, y0, x1, y1 = (float(v) for v in domain)
    if not (x1 > x0 and y1 > y0):
        raise MeshError("structured grid: domain must have positive width and height")
    hx, hy = (x1 - x0) / nx, (y1 - y0) / ny

    removed = np.full((nx, ny), -1, dtype=int)
    for k, cutout in enumerate(cutouts):
        cx0, cy0, cx1, cy1 = (float(v) for v in cutout)
        what = f"cutout {k} ({cx0:g}, {cy0:g}, {cx1:g}, {cy1:g}) is not aligned to the grid or not inside the domain"
        i0 = _grid_index(cx0, x0, hx, nx, what)
        i1 = _grid_index(cx1, x0, hx, nx, what)
        j0 = _grid_index(cy0, y0, hy, ny, what)
        j1 = _grid_index(cy1, y0, hy, ny, what)
        if i1 <= i0 or j1 <= j0:
            raise MeshError(f"cutout {k} ({cx0:g}, {cy0:g}, {cx1:g}, {cy1:g}) is empty")
        block = removed[i0:i1, j0:j1]
        block[block < 0] = k

    kept = removed < 0
    if not kept.any():
        raise MeshError("structured grid: the cutouts remove every cell")

    used = np.zeros((nx + 1, ny + 1), dtype=bool)
    for di in (0, 1):
        for dj in (0, 1):
            used[di:nx + di, dj:ny + dj] |= kept

    node_id = np.full((nx + 1, ny + 1), -1, dtype=int)
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    nodes: List[Tuple[float, float]] = []
    for j in range(ny + 1):
        for i in range(nx + 1):
            if used[i, j]:
                node_id[i, j] = len(nodes)
                nodes.append((xs[i], ys[j]))

    elements = []
    edge_sets: Dict[str, List[Tuple[int, int]]] = {"left": [], "right": [], "bottom": [], "top": []}
    for k in range(len(cutouts)):
        edge_sets[f"cutout{k}"] = []

    def cutout_of(i: int, j: int) -> int:
        if 0 <= i < nx and 0 <= j < ny:
            return int(removed[i, j])
        return -1

    for j in range(ny):
        for i in range(nx):
            if not kept[i, j]:
                continue
            e = len(elements)
            elements.append((node_id[i, j], node_id[i + 1, j], node_id[i + 1, j + 1], node_id[i, j + 1]))
            if j == 0:
                edge_sets["bottom"].append((e, 0))
            if i == nx - 1:
                edge_sets["right"].append((e, 1))
            if j == ny - 1:
                edge_sets["top"].append((e, 2))
            if i == 0:
                edge_sets["left"].append((e, 3))
            for local, (ni, nj) in enumerate(((i, j - 1), (i + 1, j), (i, j + 1), (i - 1, j))):
                k = cutout_of(ni, nj)
                if k >= 0:
                    edge_sets[f"cutout{k}"].append((e, local))

    node_sets = {}
    for name, members in edge_sets.items():
        touched = set()
        for e, local in members:
            ring = elements[e]
            touched.update((ring[local], ring[(local + 1) % 4]))
        node_sets[name] = sorted(touched)

    mesh = PolyMesh(nodes, elements, node_sets, edge_sets)
    logger.info("structured mesh: %d elements, %d nodes", mesh.n_elements, mesh.n_nodes)
    return mesh

#------------------------------------------------------------------
# Quarter plate with a hole
#------------------------------------------------------------------


def generate_quarter_plate_hole(
    a: float,
    L_half: float,
    H_half: float,
    n_r: int,
    n_t: int
) -> PolyMesh:
    """
    Builds a mapped quad mesh of [0, L_half] x [0, H_half] minus the disc r < a.

    The outer path runs up the right edge and then left along the top edge;
    it is split so that the corner (L_half, H_half) is a node. Arc nodes sit
    at the polar angles of the outer nodes and each radial line is divided
    uniformly into n_r cells. Node (k, i) has index k * (n_r + 1) + i, with k
    counting tangential stations from the x axis and i radial stations from the arc.

    Returns:
        PolyMesh: Mesh with sets "hole", "right", "top", "bottom" (y = 0) and
        "left" (x = 0).

    Raises:
        MeshError: If 0 < a < min(L_half, H_half) fails, a count is below 2,
            or the mapping produces a non-positive cell.
    """
    if not 0 < a < min(L_half, H_half):
        raise MeshError(f"plate with hole: hole radius {a:g} must lie in (0, min(L_half, H_half))")
    if n_r < 2 or n_t < 2:
        raise MeshError("plate with hole: n_r and n_t must be >= 2")

    n_right = min(max(int(round(n_t * H_half / (H_half + L_half))), 1), n_t - 1)
    n_top = n_t - n_right
    outer = [(L_half, H_half * s / n_right) for s in range(n_right + 1)]
    outer += [(L_half - L_half * s / n_top, H_half) for s in range(1, n_top + 1)]
    outer_xy = np.array(outer)
    theta = np.arctan2(outer_xy[:, 1], outer_xy[:, 0])
    inner_xy = a * np.column_stack((np.cos(theta), np.sin(theta)))
    inner_xy[-1] = (0.0, a)
    inner_xy[0] = (a, 0.0)

    fractions = np.arange(n_r + 1) / n_r
    nodes = (inner_xy[:, None, :] + (outer_xy - inner_xy)[:, None, :] * fractions[None, :, None]).reshape(-1, 2)

    def nid(k: int, i: int) -> int:
        return k * (n_r + 1) + i

    elements = []
    edge_sets: Dict[str, List[Tuple[int, int]]] = {"hole": [], "right": [], "top": [], "bottom": [], "left": []}
    for k in range(n_t):
        for i in range(n_r):
            e = len(elements)
            ring = (nid(k, i), nid(k, i + 1), nid(k + 1, i + 1), nid(k + 1, i))
            if ring_area(nodes[list(ring)]) <= 0:
                raise MeshError(f"plate with hole: cell ({k}, {i}) has a non-positive mapped area")
            elements.append(ring)
            if i == 0:
                edge_sets["hole"].append((e, 3))
            if i == n_r - 1:
                edge_sets["right" if k < n_right else "top"].append((e, 1))
            if k == 0:
                edge_sets["bottom"].append((e, 0))
            if k == n_t - 1:
                edge_sets["left"].append((e, 2))

    node_sets = {}
    for name, members in edge_sets.items():
        touched = set()
        for e, local in members:
            ring = elements[e]
            touched.update((ring[local], ring[(local + 1) % 4]))
        node_sets[name] = sorted(touched)

    mesh = PolyMesh(nodes, elements, node_sets, edge_sets)
    logger.info("plate-with-hole mesh: %d elements (n_r=%d, n_t=%d)", mesh.n_elements, n_r, n_t)
    return mesh

#------------------------------------------------------------------
# Polytree refinement
#------------------------------------------------------------------


def cells_in_box(mesh: PolyMesh, box: Box) -> List[int]:
    """Elements whose vertex centroid lies inside box (boundary included)."""
    x0, y0, x1, y1 = box
    tol = 1e-12 * (mesh.diameter() or 1.0)
    cells = []
    for e in range(mesh.n_elements):
        cx, cy = mesh.element_coords(e).mean(axis=0)
        if x0 - tol <= cx <= x1 + tol and y0 - tol <= cy <= y1 + tol:
            cells.append(e)
    return cells


def element_neighbours(mesh: PolyMesh) -> List[Set[int]]:
    """Returns, per element, the elements sharing at least one ring edge with it."""
    owner = {(a, b): e for e, _, a, b in mesh.iter_edges()}
    neighbours: List[Set[int]] = [set() for _ in range(mesh.n_elements)]
    for (a, b), e in owner.items():
        twin = owner.get((b, a))
        if twin is not None:
            neighbours[e].add(twin)
    return neighbours


def _corners(coords: np.ndarray) -> List[int]:
    n = len(coords)
    corners = []
    for k in range(n):
        before = coords[k] - coords[k - 1]
        after = coords[(k + 1) % n] - coords[k]
        cross = before[0] * after[1] - before[1] * after[0]
        if abs(cross) > 1e-10 * np.linalg.norm(before) * np.linalg.norm(after):
            corners.append(k)
    return corners


def _balance(mesh: PolyMesh, marked: Set[int]) -> Set[int]:
    neighbours = element_neighbours(mesh)
    levels = mesh.levels
    closed = set(marked)
    queue = list(marked)
    while queue:
        e = queue.pop()
        for n in neighbours[e]:
            if n not in closed and levels[n] < levels[e]:
                closed.add(n)
                queue.append(n)
    return closed


def _split(mesh: PolyMesh, marked: Set[int]) -> Tuple[PolyMesh, List[List[int]]]:
    nodes = [tuple(p) for p in mesh.nodes]
    inserted: Dict[Tuple[int, int], int] = {}
    plans = {}

    for e in sorted(marked):
        ring = mesh.elements[e]
        coords = mesh.element_coords(e)
        corner_pos = _corners(coords)
        if len(corner_pos) < 3:
            raise MeshError(f"refinement: element {e} has fewer than three corners")
        center = coords[corner_pos].mean(axis=0)
        n = len(ring)
        for k in range(n):
            tri = np.array([coords[k], coords[(k + 1) % n], center])
            if ring_area(tri) <= 1e-14 * mesh.element_area(e):
                raise MeshError(f"refinement: element {e} is not star-shaped about its centroid")

        midpoints = []
        for m, start in enumerate(corner_pos):
            stop = corner_pos[(m + 1) % len(corner_pos)]
            side = [ring[(start + s) % n] for s in range(((stop - start) % n) + 1)]
            pa, pb = mesh.nodes[side[0]], mesh.nodes[side[-1]]
            middle = 0.5 * (pa + pb)
            direction = pb - pa
            length2 = float(direction @ direction)
            found = None
            for v in side[1:-1]:
                if np.linalg.norm(mesh.nodes[v] - middle) <= 1e-9 * math.sqrt(length2):
                    found = v
                    break
            if found is None:
                target = float((middle - pa) @ direction) / length2
                for u, v in zip(side, side[1:]):
                    tu = float((mesh.nodes[u] - pa) @ direction) / length2
                    tv = float((mesh.nodes[v] - pa) @ direction) / length2
                    if tu < target < tv:
                        key = (min(u, v), max(u, v))
                        if key not in inserted:
                            inserted[key] = len(nodes)
                            nodes.append(tuple(middle))
                        found = inserted[key]
                        break
            if found is None:
                raise MeshError(f"refinement: cannot place the midpoint of side {m} of element {e}")
            midpoints.append(found)
        center_id = len(nodes)
        nodes.append(tuple(center))
        plans[e] = ([ring[c] for c in corner_pos], midpoints, center_id)

    def augmented(ring: Tuple[int, ...]) -> List[int]:
        out = []
        for u, v in zip(ring, ring[1:] + ring[:1]):
            out.append(u)
            m = inserted.get((min(u, v), max(u, v)))
            if m is not None:
                out.append(m)
        return out

    elements: List[Tuple[int, ...]] = []
    levels: List[int] = []
    children: List[List[int]] = []
    for e, ring in enumerate(mesh.elements):
        full = augmented(ring)
        if e not in plans:
            children.append([len(elements)])
            elements.append(tuple(full))
            levels.append(mesh.levels[e])
            continue
        corners, midpoints, center_id = plans[e]
        position = {v: p for p, v in enumerate(full)}
        n = len(full)
        kids = []
        for m, corner in enumerate(corners):
            before = position[midpoints[m - 1]]
            after = position[midpoints[m]]
            start = position[corner]
            child = [full[(start + s) % n] for s in range(((after - start) % n) + 1)]
            child.append(center_id)
            child += [full[(before + s) % n] for s in range((start - before) % n)]
            kids.append(len(elements))
            elements.append(tuple(child))
            levels.append(mesh.levels[e] + 1)
        children.append(kids)

    owner = {}
    for e, ring in enumerate(elements):
        for k, (u, v) in enumerate(zip(ring, ring[1:] + ring[:1])):
            owner[(u, v)] = (e, k)

    edge_sets = {}
    for name, members in mesh.edge_sets.items():
        remapped = []
        for e, k in members:
            a, b = mesh.edges(e)[k]
            chain = [a, b]
            m = inserted.get((min(a, b), max(a, b)))
            if m is not None:
                chain = [a, m, b]
            remapped += [owner[(u, v)] for u, v in zip(chain, chain[1:])]
        edge_sets[name] = remapped

    directed = {(a, b) for _, _, a, b in mesh.iter_edges()}
    node_sets = {}
    for name, members in mesh.node_sets.items():
        member_set = set(members)
        extra = [
            m for (u, v), m in inserted.items()
            if u in member_set and v in member_set and ((u, v) not in directed or (v, u) not in directed)
        ]
        node_sets[name] = list(members) + sorted(extra)

    return PolyMesh(nodes, elements, node_sets, edge_sets, levels), children


def refine_polytree(mesh: PolyMesh, plan: RefinementPlan) -> PolyMesh:
    """
    Applies a polytree refinement plan.

    Each targeted cell is split by its corner centroid and the midpoints of its
    sides into one child per corner, `levels` times. Inserted midpoints become
    ring vertices of unrefined neighbours. With `plan.balance`, neighbours are
    split as needed so that edge neighbours differ by at most one level.

    Args:
        mesh (PolyMesh): Mesh to refine.
        plan (RefinementPlan): Targets (element indices of `mesh`) and levels.

    Returns:
        PolyMesh: New mesh; `mesh` is unchanged. Children carry level + 1.

    Raises:
        MeshError: If a target does not exist or a cell to split is not
            star-shaped about its centroid.
    """
    if plan.is_empty:
        return mesh
    for target in plan.targets:
        if target >= mesh.n_elements:
            raise MeshError(f"refinement: target element {target} does not exist ({mesh.n_elements} elements)")

    remaining: Dict[int, int] = {}
    for target, level in zip(plan.targets, plan.levels):
        remaining[target] = max(remaining.get(target, 0), level)

    current = mesh
    while remaining:
        marked = set(remaining)
        if plan.balance:
            marked = _balance(current, marked)
        current, children = _split(current, marked)
        remaining = {
            child: level - 1
            for e, level in remaining.items() if level > 1
            for child in children[e]
        }

    logger.info("refined mesh: %d -> %d elements", mesh.n_elements, current.n_elements)
    return current


def build_mesh(recipe: MeshRecipe) -> PolyMesh:
    """
    Builds the mesh a recipe describes, then applies its refinement boxes in order.

    Raises:
        MeshError: If generation or refinement fails.
        OSError: If a mesh file cannot be read.
    """
    if recipe.generator == "plate_hole":
        mesh = generate_quarter_plate_hole(recipe.a, recipe.L, recipe.H, recipe.n_r, recipe.n_t)
    elif recipe.generator == "file":
        mesh = load_mesh(recipe.path)
    else:
        mesh = generate_structured(recipe.domain, recipe.nx, recipe.ny, recipe.cutouts)

    for box, levels in recipe.refine:
        targets = cells_in_box(mesh, box)
        if not targets:
            logger.warning("refinement box %s contains no element centroid", box)
            continue
        mesh = refine_polytree(mesh, RefinementPlan.uniform(targets, levels, recipe.balance))
    return mesh
