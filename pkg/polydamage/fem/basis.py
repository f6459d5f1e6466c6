"""
This module implements the piecewise-linear polygonal basis.

An n-gon is split into n triangles by joining its vertex centroid to each
ring edge. Inside triangle k (vertices v_k, v_{k+1}, centroid) the shape
functions are the linear triangle functions, with value 1/n for every vertex
function at the centroid.

Classes:
- SubTriangulation: Centroid fan of one element.
- QuadPoint: Position, weight, Jacobian, shape values and compatible operator B.

Functions:
- subtriangulate: Builds the centroid fan of a ring.
- shape_eval: Shape values and gradients at a point of a sub-triangle.
- quadrature: Integration points of an element.
- element_arrays: The same data as stacked arrays, for assembly.
- strain_operator: Compatible operator B from shape gradients.

Strain vectors are (xx, yy, xy) with engineering shear; dof 2i is u_x of
ring vertex i and 2i + 1 is u_y.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from polydamage.errors import MeshError

# barycentric coordinates (vertex k, vertex k+1, centroid) and reference weights
RULES = {
    1: (np.array([[1 / 3, 1 / 3, 1 / 3]]), np.array([0.5])),
    3: (
        np.array([[2 / 3, 1 / 6, 1 / 6], [1 / 6, 2 / 3, 1 / 6], [1 / 6, 1 / 6, 2 / 3]]),
        np.array([1 / 6, 1 / 6, 1 / 6]),
    ),
}


@dataclass(frozen=True)
class SubTriangulation:
    """
    Centroid fan of an n-gon.

    Attributes:
        vertices (np.ndarray): (n, 2) ring coordinates.
        centroid (np.ndarray): (2,) vertex mean.
        areas (np.ndarray): (n,) area of triangle k = (v_k, v_{k+1}, centroid).
    """

    vertices: np.ndarray
    centroid: np.ndarray
    areas: np.ndarray

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> float:
        return float(np.sum(self.areas))

    def triangle(self, k: int) -> np.ndarray:
        """(3, 2) coordinates of sub-triangle k."""
        return np.array([self.vertices[k], self.vertices[(k + 1) % self.n], self.centroid])

    def lambda_gradients(self) -> np.ndarray:
        """(n, 3, 2) gradients of the three barycentric functions of every sub-triangle."""
        p0 = self.vertices
        p1 = np.roll(self.vertices, -1, axis=0)
        p2 = np.broadcast_to(self.centroid, p0.shape)
        twice = 2.0 * self.areas[:, None]
        g0 = np.column_stack((p1[:, 1] - p2[:, 1], p2[:, 0] - p1[:, 0])) / twice
        g1 = np.column_stack((p2[:, 1] - p0[:, 1], p0[:, 0] - p2[:, 0])) / twice
        g2 = np.column_stack((p0[:, 1] - p1[:, 1], p1[:, 0] - p0[:, 0])) / twice
        return np.stack((g0, g1, g2), axis=1)

    def shape_gradients(self) -> np.ndarray:
        """(n_tri, n, 2) gradients of the n shape functions, constant per sub-triangle."""
        n = self.n
        lam = self.lambda_gradients()
        grads = np.repeat(lam[:, 2:3, :] / n, n, axis=1)
        index = np.arange(n)
        grads[index, index] += lam[:, 0]
        grads[index, (index + 1) % n] += lam[:, 1]
        return grads


def subtriangulate(ring: Sequence[int], nodes: np.ndarray) -> SubTriangulation:
    """
    Builds the centroid fan of an element.

    Args:
        ring (Sequence[int]): Counterclockwise vertex indices.
        nodes (np.ndarray): (N, 2) node coordinates.

    Returns:
        SubTriangulation: n triangles in ring order.

    Raises:
        MeshError: If a sub-triangle has non-positive area.
    """
    vertices = np.asarray(nodes, dtype=float)[list(ring)]
    centroid = vertices.mean(axis=0)
    following = np.roll(vertices, -1, axis=0)
    a = vertices - centroid
    b = following - centroid
    areas = 0.5 * (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0])
    scale = float(np.max(np.sum(a * a, axis=1)))
    if np.any(areas <= 1e-13 * scale):
        k = int(np.argmin(areas))
        raise MeshError(f"sub-triangle {k} of ring {tuple(ring)} has non-positive area {areas[k]:.3e}")
    return SubTriangulation(vertices, centroid, areas)


def _barycentric(triangle: np.ndarray, point: np.ndarray) -> np.ndarray:
    p0, p1, p2 = triangle
    matrix = np.column_stack((p1 - p0, p2 - p0))
    l1, l2 = np.linalg.solve(matrix, np.asarray(point, dtype=float) - p0)
    return np.array([1.0 - l1 - l2, l1, l2])


def shape_eval(sub: SubTriangulation, k: int, point: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Evaluates the shape functions at a point of sub-triangle k.

    Args:
        sub (SubTriangulation): Element fan.
        k (int): Sub-triangle containing the point.
        point (Sequence[float]): Global coordinates.

    Returns:
        Tuple[np.ndarray, np.ndarray]: phi (n,) and grad phi (n, 2).

    Raises:
        ValueError: If the point is outside sub-triangle k.
    """
    lam = _barycentric(sub.triangle(k), point)
    if np.any(lam < -1e-12):
        raise ValueError(f"point {tuple(point)} is outside sub-triangle {k}")
    n = sub.n
    phi = np.full(n, lam[2] / n)
    phi[k] += lam[0]
    phi[(k + 1) % n] += lam[1]
    return phi, sub.shape_gradients()[k]


def strain_operator(grads: np.ndarray) -> np.ndarray:
    """
    Builds B from shape gradients.

    Args:
        grads (np.ndarray): (..., n, 2) shape-function gradients.

    Returns:
        np.ndarray: (..., 3, 2n) operator with rows (xx, yy, xy), engineering shear.
    """
    n = grads.shape[-2]
    B = np.zeros(grads.shape[:-2] + (3, 2 * n))
    B[..., 0, 0::2] = grads[..., 0]
    B[..., 1, 1::2] = grads[..., 1]
    B[..., 2, 0::2] = grads[..., 1]
    B[..., 2, 1::2] = grads[..., 0]
    return B


def element_arrays(sub: SubTriangulation, rule: int = 3):
    """
    Stacked integration data of one element.

    Points are ordered by sub-triangle, then by rule point.

    Args:
        sub (SubTriangulation): Element fan.
        rule (int): Points per sub-triangle, 1 or 3.

    Returns:
        Tuple of positions (g, 2), weights (g,), Jacobians (g,), owning
        sub-triangle (g,), phi (g, n) and B (g, 3, 2n).

    Raises:
        ValueError: If the rule is not 1 or 3.
    """
    if rule not in RULES:
        raise ValueError(f"rule: expected 1 or 3 points per sub-triangle, got {rule}")
    bary, weights = RULES[rule]
    n = sub.n
    q = len(weights)
    index = np.arange(n)

    p0 = sub.vertices
    p1 = np.roll(sub.vertices, -1, axis=0)
    positions = (bary[None, :, 0:1] * p0[:, None, :]
                 + bary[None, :, 1:2] * p1[:, None, :]
                 + bary[None, :, 2:3] * sub.centroid[None, None, :]).reshape(-1, 2)

    phi = np.repeat((bary[:, 2] / n)[None, :, None], n, axis=0) * np.ones((n, q, n))
    phi[index, :, index] += bary[None, :, 0]
    phi[index, :, (index + 1) % n] += bary[None, :, 1]
    phi = phi.reshape(-1, n)

    B = np.repeat(strain_operator(sub.shape_gradients()), q, axis=0)
    detj = np.repeat(2.0 * sub.areas, q)
    w = np.tile(weights, n)
    owner = np.repeat(index, q)
    return positions, w, detj, owner, phi, B


@dataclass(frozen=True)
class QuadPoint:
    """
    One integration point of an element.

    Attributes:
        position (np.ndarray): Global coordinates.
        weight (float): Reference weight.
        detj (float): Jacobian determinant of the sub-triangle map.
        triangle (int): Owning sub-triangle.
        phi (np.ndarray): (n,) shape values.
        B (np.ndarray): (3, 2n) compatible operator.
    """

    position: np.ndarray
    weight: float
    detj: float
    triangle: int
    phi: np.ndarray
    B: np.ndarray

    @property
    def wj(self) -> float:
        return self.weight * self.detj


def quadrature(ring: Sequence[int], nodes: np.ndarray, rule: int = 3) -> List[QuadPoint]:
    """
    Integration points of an element: `rule` points in each of its n sub-triangles.

    Raises:
        MeshError: If the centroid fan is degenerate.
        ValueError: If the rule is not 1 or 3.
    """
    positions, w, detj, owner, phi, B = element_arrays(subtriangulate(ring, nodes), rule)
    return [
        QuadPoint(positions[g], float(w[g]), float(detj[g]), int(owner[g]), phi[g], B[g])
        for g in range(len(w))
    ]
