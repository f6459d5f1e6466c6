"""
This module assembles global quantities of a polygonal mesh.

Classes:
- ArityGroup: Stacked data of all elements with the same number of vertices.
- Discretization: Integration points, assumed-strain operators and the
  assembly routines built on them.

Integration points are numbered element by element, in element order, and
within an element by sub-triangle then rule point. Every global sum is formed
with `np.bincount` or a COO-to-CSR conversion over a fixed entry order, so
results do not depend on thread scheduling.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from polydamage.errors import MeshError
from polydamage.models import PolyMesh
from polydamage.utils.logger import get_logger

from .basis import element_arrays, subtriangulate
from .projection import StrainProjection, build_projection

logger = get_logger(__name__)

Traction = Union[Sequence[float], Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class ArityGroup:
    """
    Attributes:
        n (int): Vertices per element.
        elements (np.ndarray): (m,) element indices.
        conn (np.ndarray): (m, n) node indices.
        dofs (np.ndarray): (m, 2n) global dofs.
        points (np.ndarray): (m, g) global integration-point indices.
        phi (np.ndarray): (m, g, n) shape values.
        B_tilde (np.ndarray): (m, g, 3, 2n) assumed-strain operators.
        B (np.ndarray): (m, g, 3, 2n) compatible operators.
    """

    n: int
    elements: np.ndarray
    conn: np.ndarray
    dofs: np.ndarray
    points: np.ndarray
    phi: np.ndarray
    B_tilde: np.ndarray
    B: np.ndarray


class Discretization:
    """
    Integration data and assembly of a mesh.

    Attributes:
        mesh (PolyMesh): The mesh.
        rule (int): Points per sub-triangle.
        thickness (float): Out-of-plane thickness multiplying every integral.
        positions (np.ndarray): (N, 2) integration point coordinates.
        wj (np.ndarray): (N,) w|J| per point (thickness excluded).
        gp_element (np.ndarray): (N,) owning element.
        offsets (np.ndarray): (n_elements + 1,) first point of every element.
        projections (List[StrainProjection]): Per element.
        groups (List[ArityGroup]): Elements grouped by arity.

    Raises:
        MeshError: If an element has a degenerate fan or a singular moment matrix.
    """

    def __init__(self, mesh: PolyMesh, rule: int = 3, thickness: float = 1.0) -> None:
        if not thickness > 0:
            raise ValueError("thickness: must be positive")
        self.mesh = mesh
        self.rule = rule
        self.thickness = float(thickness)
        self.n_dofs = 2 * mesh.n_nodes

        per_element = []
        counts = np.zeros(mesh.n_elements, dtype=int)
        for e, ring in enumerate(mesh.elements):
            try:
                sub = subtriangulate(ring, mesh.nodes)
            except MeshError as exc:
                raise MeshError(f"element {e}: {exc}") from None
            positions, w, detj, _, phi, B = element_arrays(sub, rule)
            wj = w * detj
            projection = build_projection(positions, wj, B, element=e)
            per_element.append((positions, wj, phi, B, projection))
            counts[e] = len(wj)

        self.offsets = np.concatenate(([0], np.cumsum(counts)))
        self.positions = np.concatenate([p[0] for p in per_element]) if per_element else np.zeros((0, 2))
        self.wj = np.concatenate([p[1] for p in per_element]) if per_element else np.zeros(0)
        self.gp_element = np.repeat(np.arange(mesh.n_elements), counts)
        self.projections: List[StrainProjection] = [p[4] for p in per_element]

        self.groups: List[ArityGroup] = []
        arities = np.array([len(ring) for ring in mesh.elements])
        for n in sorted(set(arities.tolist())):
            members = np.flatnonzero(arities == n)
            conn = np.array([mesh.elements[e] for e in members], dtype=int)
            dofs = np.empty((len(members), 2 * n), dtype=int)
            dofs[:, 0::2] = 2 * conn
            dofs[:, 1::2] = 2 * conn + 1
            points = self.offsets[members][:, None] + np.arange(counts[members[0]])[None, :]
            self.groups.append(ArityGroup(
                n=n,
                elements=members,
                conn=conn,
                dofs=dofs,
                points=points,
                phi=np.stack([per_element[e][2] for e in members]),
                B_tilde=np.stack([per_element[e][4].B_tilde for e in members]),
                B=np.stack([per_element[e][3] for e in members]),
            ))
        logger.info(
            "discretization: %d elements, %d integration points, arities %s",
            mesh.n_elements, self.n_points, sorted(set(arities.tolist())),
        )

#------------------------------------------------------------------

    @property
    def n_points(self) -> int:
        return len(self.wj)

    def strains(self, d: np.ndarray, compatible: bool = False) -> np.ndarray:
        """(N, 3) assumed strains (or compatible strains) at every point."""
        out = np.zeros((self.n_points, 3))
        for group in self.groups:
            operator = group.B if compatible else group.B_tilde
            out[group.points] = np.einsum("mgij,mj->mgi", operator, d[group.dofs])
        return out

    def displacements_at_points(self, d: np.ndarray) -> np.ndarray:
        """(N, 2) interpolated displacements at every point."""
        nodal = d.reshape(-1, 2)
        out = np.zeros((self.n_points, 2))
        for group in self.groups:
            out[group.points] = np.einsum("mgn,mnc->mgc", group.phi, nodal[group.conn])
        return out

    def scatter(self, per_point: np.ndarray) -> np.ndarray:
        """
        Assembles sum_i B~_i^T v_i w_i|J_i| t into a global vector.

        Args:
            per_point (np.ndarray): (N, 3) stress-like vectors.
        """
        f = np.zeros(self.n_dofs)
        for group in self.groups:
            local = np.einsum(
                "mgij,mgi,mg->mj", group.B_tilde, per_point[group.points], self.wj[group.points]
            ) * self.thickness
            f += np.bincount(group.dofs.ravel(), weights=local.ravel(), minlength=self.n_dofs)
        return f

    def internal_force(self, d: np.ndarray, omega: np.ndarray, C: np.ndarray) -> np.ndarray:
        """f_int = sum_i (1 - omega_i) B~_i^T C B~_i d w_i|J_i| t."""
        sigma = (1.0 - omega)[:, None] * (self.strains(d) @ C.T)
        return self.scatter(sigma)

    def stiffness(self, C: np.ndarray, scale: Optional[np.ndarray] = None) -> sparse.csr_matrix:
        """K = sum_i s_i B~_i^T C B~_i w_i|J_i| t, with s_i = 1 when scale is None."""
        scale = np.ones(self.n_points) if scale is None else scale
        rows, cols, vals = [], [], []
        for group in self.groups:
            factor = self.wj[group.points] * scale[group.points] * self.thickness
            ke = np.einsum("mgki,kl,mglj,mg->mij", group.B_tilde, C, group.B_tilde, factor)
            size = 2 * group.n
            rows.append(np.repeat(group.dofs, size, axis=1).ravel())
            cols.append(np.tile(group.dofs, (1, size)).ravel())
            vals.append(ke.ravel())
        matrix = sparse.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.n_dofs, self.n_dofs),
        )
        return matrix.tocsr()

    def point_matrix(self, per_point: np.ndarray, active: Optional[np.ndarray] = None) -> sparse.csr_matrix:
        """
        Sparse (N, n_dofs) matrix whose row i is (B~_i^T v_i)^T scattered to dofs.

        Args:
            per_point (np.ndarray): (N, 3) vectors v_i.
            active (Optional[np.ndarray]): Boolean mask; inactive rows are left empty.
        """
        rows, cols, vals = [], [], []
        for group in self.groups:
            local = np.einsum("mgij,mgi->mgj", group.B_tilde, per_point[group.points])
            keep = np.ones(group.points.shape, dtype=bool) if active is None else active[group.points]
            size = 2 * group.n
            rows.append(np.repeat(group.points[keep], size))
            cols.append(np.broadcast_to(group.dofs[:, None, :], local.shape)[keep].ravel())
            vals.append(local[keep].ravel())
        matrix = sparse.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.n_points, self.n_dofs),
        )
        return matrix.tocsr()

    def traction_load(
        self,
        edges: Sequence[Tuple[int, int]],
        traction: Traction,
        points: int = 2
    ) -> np.ndarray:
        """
        Consistent nodal forces of a surface traction on ring edges.

        Shape functions are linear along a ring edge, so each edge contributes
        to its two end nodes only.

        Args:
            edges (Sequence[Tuple[int, int]]): (element, local edge) pairs.
            traction: Constant (tx, ty) or a callable mapping (k, 2) points to (k, 2) tractions.
            points (int): Gauss-Legendre points per edge.

        Returns:
            np.ndarray: (n_dofs,) load vector, thickness included.
        """
        xi, weights = np.polynomial.legendre.leggauss(points)
        s = 0.5 * (xi + 1.0)
        f = np.zeros(self.n_dofs)
        for e, k in edges:
            a, b = self.mesh.edges(e)[k]
            pa, pb = self.mesh.nodes[a], self.mesh.nodes[b]
            length = float(np.hypot(*(pb - pa)))
            x = pa[None, :] + s[:, None] * (pb - pa)[None, :]
            if callable(traction):
                t = np.asarray(traction(x), dtype=float).reshape(-1, 2)
            else:
                t = np.broadcast_to(np.asarray(traction, dtype=float), x.shape)
            scale = 0.5 * length * weights * self.thickness
            f[2 * a:2 * a + 2] += np.sum(((1.0 - s) * scale)[:, None] * t, axis=0)
            f[2 * b:2 * b + 2] += np.sum((s * scale)[:, None] * t, axis=0)
        return f
