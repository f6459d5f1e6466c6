"""
This module solves linear elastic problems with the assumed-strain elements
and runs the linear patch test.

Classes:
- ElasticSolution: Displacements, the discretization used and the residual.
- PatchResult: Outcome of a patch test.

Functions:
- check_constraints: Rejects dof maps that leave a rigid-body motion free.
- solve_elastic: One linear solve K d = f with prescribed displacements.
- patch_test: Affine Dirichlet data on the whole boundary; interior error.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from polydamage.errors import SolverError
from polydamage.fem.assembly import Discretization, Traction
from polydamage.fem.material import elastic_matrix
from polydamage.fem.solver import solve_linear
from polydamage.models import DofMap, MaterialModel, PolyMesh
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class ElasticSolution:
    d: np.ndarray
    disc: Discretization
    residual: np.ndarray

    def stresses(self, model: MaterialModel) -> np.ndarray:
        return self.disc.strains(self.d) @ elastic_matrix(model).T


@dataclass(frozen=True)
class PatchResult:
    """
    Attributes:
        max_error (float): Largest interior nodal error relative to the largest exact displacement.
        stress_error (float): Largest point stress error relative to the exact stress norm.
        n_elements (int): Elements of the patch.
        max_arity (int): Largest ring arity (5 or more means hanging nodes).
        passed (bool): Both errors below the tolerance.
    """

    max_error: float
    stress_error: float
    n_elements: int
    max_arity: int
    passed: bool


def check_constraints(mesh: PolyMesh, dofmap: DofMap) -> None:
    """
    Raises:
        SolverError: If the constrained dofs do not suppress the three rigid-body motions.
    """
    x, y = mesh.nodes[:, 0], mesh.nodes[:, 1]
    rigid = np.zeros((dofmap.n_dofs, 3))
    rigid[0::2, 0] = 1.0
    rigid[1::2, 1] = 1.0
    rigid[0::2, 2] = -(y - y.mean())
    rigid[1::2, 2] = x - x.mean()
    if np.linalg.matrix_rank(rigid[dofmap.constrained], tol=1e-9 * max(mesh.diameter(), 1.0)) < 3:
        raise SolverError("insufficient constraints: a rigid-body motion is left free")


def solve_elastic(
    mesh: PolyMesh,
    model: MaterialModel,
    dofmap: DofMap,
    tractions: Sequence[Tuple[Sequence[Tuple[int, int]], Traction]] = (),
    rule: int = 3,
    thickness: float = 1.0,
    control: float = 0.0,
    discretization: Optional[Discretization] = None,
) -> ElasticSolution:
    """
    Solves the undamaged problem.

    Args:
        mesh (PolyMesh): Mesh.
        model (MaterialModel): Elastic constants (damage parameters unused).
        dofmap (DofMap): Prescribed displacements, evaluated at `control`.
        tractions: (edges, traction) pairs; a traction is a constant vector or
            a callable of the edge points.
        rule (int): Points per sub-triangle.
        thickness (float): Out-of-plane thickness.
        control (float): Control value scaling the driven prescribed data.
        discretization (Optional[Discretization]): Reused when given.

    Returns:
        ElasticSolution: Displacements and the residual K d - f.

    Raises:
        SolverError: If the system is singular or under-constrained.
    """
    check_constraints(mesh, dofmap)
    disc = discretization or Discretization(mesh, rule, thickness)
    K = disc.stiffness(elastic_matrix(model))
    f = np.zeros(disc.n_dofs)
    for edges, traction in tractions:
        f += disc.traction_load(edges, traction)

    d = np.zeros(disc.n_dofs)
    d[dofmap.constrained] = dofmap.prescribed(control)
    free = dofmap.free
    if len(free):
        rhs = f[free] - K[free][:, dofmap.constrained].dot(d[dofmap.constrained])
        d[free] = solve_linear(K[free][:, free], rhs)
    residual = K.dot(d) - f
    logger.info("elastic solve: %d free dofs, |r_free| = %.3e", len(free), float(np.linalg.norm(residual[free])))
    return ElasticSolution(d, disc, residual)


def affine_field(coefficients: Sequence[float], points: np.ndarray) -> np.ndarray:
    """(k, 2) displacements u_x = a0 + a1 x + a2 y, u_y = b0 + b1 x + b2 y."""
    a0, a1, a2, b0, b1, b2 = coefficients
    x, y = points[:, 0], points[:, 1]
    return np.column_stack((a0 + a1 * x + a2 * y, b0 + b1 * x + b2 * y))


def patch_test(
    mesh: PolyMesh,
    model: MaterialModel,
    coefficients: Sequence[float],
    rule: int = 3,
    tolerance: float = 1e-9,
) -> PatchResult:
    """
    Prescribes an affine field on every boundary node and compares the interior.

    Returns:
        PatchResult: Relative interior displacement error and stress error.
    """
    exact = affine_field(coefficients, mesh.nodes).ravel()
    boundary = mesh.boundary_nodes()
    dofs = np.sort(np.concatenate((2 * boundary, 2 * boundary + 1)))
    dofmap = DofMap.from_values(mesh.n_nodes, dofs, exact[dofs])
    solution = solve_elastic(mesh, model, dofmap, rule=rule)

    scale = float(np.max(np.abs(exact))) or 1.0
    interior = dofmap.free
    max_error = float(np.max(np.abs(solution.d[interior] - exact[interior]))) / scale if len(interior) else 0.0

    a0, a1, a2, b0, b1, b2 = coefficients
    strain = np.array([a1, b2, a2 + b1])
    stress_exact = elastic_matrix(model) @ strain
    stresses = solution.stresses(model)
    norm = float(np.linalg.norm(stress_exact)) or 1.0
    stress_error = float(np.max(np.linalg.norm(stresses - stress_exact, axis=1))) / norm

    result = PatchResult(
        max_error=max_error,
        stress_error=stress_error,
        n_elements=mesh.n_elements,
        max_arity=max(len(ring) for ring in mesh.elements),
        passed=max_error < tolerance and stress_error < tolerance,
    )
    logger.info("patch test: interior error %.3e, stress error %.3e", max_error, stress_error)
    return result
