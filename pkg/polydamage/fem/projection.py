"""
This module builds the assumed-strain operator of a polygonal element.

The compatible strains of the sub-triangles are projected, in the least-squares
sense over the element, onto strain fields that are linear in x and y:

    eps~(x) = S(x) M^-1 Q,   M = sum_g S_g^T S_g w_g|J_g|,   Q = sum_g S_g^T B_g d w_g|J_g|

with S(x) = [1, xi, eta] evaluated in coordinates centred at the area
centroid of the element and scaled by the distance of its farthest
integration point.

Classes:
- StrainProjection: Moment matrix, monomial coefficients beta and B~ per integration point.

Functions:
- build_projection: Projection of one element from its integration data.
- assumed_strain_at: eps~ at an arbitrary point of the element.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from polydamage.errors import MeshError


@dataclass(frozen=True)
class StrainProjection:
    """
    Attributes:
        center (np.ndarray): Origin of the local monomials.
        scale (float): Length dividing the local coordinates.
        M (np.ndarray): (3, 3) moment matrix.
        beta (np.ndarray): (3, 3, 2n) coefficients; eps~(x) = sum_k S_k(x) beta[k] d.
        B_tilde (np.ndarray): (g, 3, 2n) assumed-strain operator per integration point.
    """

    center: np.ndarray
    scale: float
    M: np.ndarray
    beta: np.ndarray
    B_tilde: np.ndarray

    def monomials(self, points: np.ndarray) -> np.ndarray:
        """(..., 3) values of [1, xi, eta] at points (..., 2)."""
        local = (np.asarray(points, dtype=float) - self.center) / self.scale
        return np.concatenate((np.ones(local.shape[:-1] + (1,)), local), axis=-1)

    def operator_at(self, point: Sequence[float]) -> np.ndarray:
        """(3, 2n) assumed-strain operator at a point."""
        return np.einsum("k,kij->ij", self.monomials(np.asarray(point, dtype=float)), self.beta)


def build_projection(
    positions: np.ndarray,
    wj: np.ndarray,
    B: np.ndarray,
    element: Optional[int] = None
) -> StrainProjection:
    """
    Builds the assumed-strain projection of one element.

    Args:
        positions (np.ndarray): (g, 2) integration point coordinates.
        wj (np.ndarray): (g,) products w|J|.
        B (np.ndarray): (g, 3, 2n) compatible operators.
        element (Optional[int]): Element index, used in diagnostics.

    Returns:
        StrainProjection: M, beta = M^-1 Q and B~ at every integration point.

    Raises:
        MeshError: If M is singular (fewer than three points, or collinear points).
    """
    label = "element" if element is None else f"element {element}"
    positions = np.asarray(positions, dtype=float)
    wj = np.asarray(wj, dtype=float)
    if len(positions) < 3:
        raise MeshError(f"projection: {label} needs at least three integration points")

    center = np.sum(positions * wj[:, None], axis=0) / np.sum(wj)
    scale = float(np.max(np.hypot(*(positions - center).T))) or 1.0
    local = (positions - center) / scale
    S = np.column_stack((np.ones(len(positions)), local))

    M = np.einsum("gk,gl,g->kl", S, S, wj)
    eigenvalues = np.linalg.eigvalsh(M)
    if eigenvalues[0] <= 1e-12 * eigenvalues[-1]:
        raise MeshError(f"projection: moment matrix of {label} is singular (collinear integration points)")
    factor = cho_factor(M)

    Q = np.einsum("gk,gij,g->kij", S, B, wj)
    beta = cho_solve(factor, Q.reshape(3, -1)).reshape(Q.shape)
    B_tilde = np.einsum("gk,kij->gij", S, beta)
    return StrainProjection(center, scale, M, beta, B_tilde)


def assumed_strain_at(projection: StrainProjection, d: np.ndarray, point: Sequence[float]) -> np.ndarray:
    """
    Returns eps~ = S(x) M^-1 Q d at a point of the element.

    Args:
        projection (StrainProjection): Element projection.
        d (np.ndarray): (2n,) element displacement vector.
        point (Sequence[float]): Global coordinates.

    Returns:
        np.ndarray: (3,) strain (xx, yy, xy) with engineering shear.
    """
    return projection.operator_at(point) @ np.asarray(d, dtype=float)
