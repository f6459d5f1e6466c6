"""
This module solves the nonlocal damage problem under displacement control.

Classes:
- SimulationResult: Records, snapshots and the last committed state of a run.
- NonlocalDamageSolver: Trial-state evaluation, internal force, consistent
  tangent and the Newton step with increment bisection.

Functions:
- run_simulation: Drives a solver through a schedule of control increments.

The tangent is K = K_l - G^T W H where K_l is the secant stiffness, W holds the
normalised nonlocal weights, row i of G is omega'_i w_i|J_i| t B~_i^T C B~_i d
for loading points (zero otherwise) and row j of H is eta_j^T B~_j.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from polydamage.errors import ConvergenceError, SimulationFailed, SolverError
from polydamage.models import (
    DofMap,
    KernelSpec,
    MaterialModel,
    NonlocalTable,
    PolyMesh,
    SimState,
    Snapshot,
    SolverSettings,
    StepRecord,
)
from polydamage.utils.logger import get_logger

from .assembly import Discretization
from .averaging import build_table, nonlocal_eq_strain
from .material import damage, damage_derivative, elastic_matrix, equivalent_strain, trial_history

logger = get_logger(__name__)


def solve_linear(K: sparse.spmatrix, rhs: np.ndarray) -> np.ndarray:
    """
    Solves a general sparse system with a direct LU factorisation.

    Raises:
        SolverError: If the matrix is singular or the solution is not finite.
    """
    try:
        solution = splu(sparse.csc_matrix(K)).solve(rhs)
    except RuntimeError as exc:
        raise SolverError(f"singular system ({exc}); check that rigid-body motions are constrained") from None
    if not np.all(np.isfinite(solution)):
        raise SolverError("singular system: the solution is not finite")
    return solution


@dataclass
class SimulationResult:
    """
    Attributes:
        records (List[StepRecord]): One per committed step.
        snapshots (List[Snapshot]): Field snapshots at the configured steps.
        state (SimState): Last committed state.
        failed (bool): True when the run stopped on a failed step.
    """

    records: List[StepRecord]
    snapshots: List[Snapshot]
    state: SimState
    failed: bool = False
    message: str = ""


class NonlocalDamageSolver:
    """
    Incremental Newton solver for the nonlocal damage model.

    Args:
        mesh (PolyMesh): Mesh.
        model (MaterialModel): Material.
        kernel (KernelSpec): Nonlocal kernel.
        dofmap (DofMap): Constrained dofs and their prescribed data.
        settings (SolverSettings): Newton controls.
        f_fixed (Optional[np.ndarray]): Dead external load.
        f_drive (Optional[np.ndarray]): External load per unit control.
        rule (int): Points per sub-triangle.
        thickness (float): Out-of-plane thickness.
        discretization (Optional[Discretization]): Reused when given.
        table (Optional[NonlocalTable]): Reused when given.
        monitors (Optional[Dict[str, Tuple[int, int]]]): Named dof pairs whose
            difference is recorded per step.
    """

    def __init__(
        self,
        mesh: PolyMesh,
        model: MaterialModel,
        kernel: KernelSpec,
        dofmap: DofMap,
        settings: SolverSettings = SolverSettings(),
        f_fixed: Optional[np.ndarray] = None,
        f_drive: Optional[np.ndarray] = None,
        rule: int = 3,
        thickness: float = 1.0,
        discretization: Optional[Discretization] = None,
        table: Optional[NonlocalTable] = None,
        monitors: Optional[Dict[str, Tuple[int, int]]] = None,
    ) -> None:
        self.mesh = mesh
        self.model = model
        self.kernel = kernel
        self.dofmap = dofmap
        self.settings = settings
        self.disc = discretization or Discretization(mesh, rule, thickness)
        self.table = table or build_table(self.disc.positions, self.disc.wj, kernel, workers=settings.workers)
        self.C = elastic_matrix(model)
        self.f_fixed = np.zeros(self.disc.n_dofs) if f_fixed is None else np.asarray(f_fixed, dtype=float)
        self.f_drive = np.zeros(self.disc.n_dofs) if f_drive is None else np.asarray(f_drive, dtype=float)
        self.monitors = dict(monitors or {})

#------------------------------------------------------------------

    def initial_state(self) -> SimState:
        """Undamaged state with kappa = kappa0 and the fixed prescribed values applied."""
        n = self.disc.n_points
        d = np.zeros(self.disc.n_dofs)
        d[self.dofmap.constrained] = self.dofmap.prescribed(0.0)
        zeros = np.zeros(n)
        return SimState(
            d=d,
            kappa=np.full(n, self.model.kappa0),
            loading=np.zeros(n, dtype=bool),
            eps_eq=zeros.copy(),
            eps_nl=zeros.copy(),
            omega=zeros.copy(),
        )

    def trial_state(self, committed: SimState, d: np.ndarray) -> SimState:
        """
        Evaluates point fields for displacements d on top of a committed history.

        kappa = max(kappa_committed, eps_nl); loading iff eps_nl >= kappa_committed.
        """
        eps = self.disc.strains(d)
        eps_eq, _ = equivalent_strain(self.model, eps)
        eps_nl = nonlocal_eq_strain(self.table, eps_eq)
        kappa, loading = trial_history(committed.kappa, eps_nl)
        return SimState(
            d=d,
            kappa=kappa,
            loading=loading,
            eps_eq=eps_eq,
            eps_nl=eps_nl,
            omega=damage(self.model, kappa),
            step=committed.step,
            control=committed.control,
            records=committed.records,
        )

    def assemble_internal(self, state: SimState) -> np.ndarray:
        """f_int of the state's displacements and damage."""
        return self.disc.internal_force(state.d, state.omega, self.C)

    def assemble_tangent(self, state: SimState) -> sparse.csr_matrix:
        """
        Consistent tangent K_l - G^T W H of a (trial) state.

        Only loading points above the threshold contribute to the nonlocal part.
        """
        K_local = self.disc.stiffness(self.C, 1.0 - state.omega)
        coefficient = damage_derivative(self.model, state.kappa) * state.loading * self.disc.wj * self.disc.thickness
        active = coefficient > 0.0
        if not np.any(active):
            return K_local

        eps = self.disc.strains(state.d)
        _, eta = equivalent_strain(self.model, eps)
        sigma_hat = eps @ self.C.T
        G = self.disc.point_matrix(coefficient[:, None] * sigma_hat, active)[active]
        H = self.disc.point_matrix(eta)
        # row j: sum over active i averaging j of (a_ij / a_i) G_i
        spread = self.table.reverse[:, active].dot(sparse.diags(1.0 / self.table.sums[active]).dot(G))
        return (K_local - spread.T.dot(H)).tocsr()

    def residual(self, state: SimState, control: float) -> np.ndarray:
        return self.assemble_internal(state) - (self.f_fixed + control * self.f_drive)

#------------------------------------------------------------------

    def _newton(self, committed: SimState, control: float, step: int) -> Tuple[SimState, np.ndarray, int]:
        settings = self.settings
        free = self.dofmap.free
        d = committed.d.copy()
        d[self.dofmap.constrained] = self.dofmap.prescribed(control)
        f_ext = self.f_fixed + control * self.f_drive

        first = None
        floor = 0.0
        iteration = 0
        while True:
            iteration += 1
            trial = self.trial_state(committed, d)
            f_int = self.assemble_internal(trial)
            r = f_int - f_ext
            norm = float(np.linalg.norm(r[free]))
            if first is None:
                first = norm
                floor = settings.tol_abs * max(float(np.linalg.norm(f_int)), float(np.linalg.norm(f_ext)))
            ratio = norm / first if first > 0 else 0.0
            logger.debug("step %d iteration %d: |r| = %.3e (ratio %.3e)", step, iteration, norm, ratio)

            if norm <= floor or (iteration > 1 and norm <= settings.tol_rel * first):
                return trial, r, max(iteration - 1, 1)
            if iteration > settings.max_iter or not np.isfinite(norm):
                raise ConvergenceError(step, control, iteration - 1, ratio)

            K = self.assemble_tangent(trial)
            try:
                delta = solve_linear(K[free][:, free], -r[free])
            except SolverError:
                raise ConvergenceError(step, control, iteration, ratio) from None
            d = d.copy()
            d[free] += delta

    def _advance(self, committed: SimState, increment: float, step: int, depth: int) -> Tuple[SimState, np.ndarray, int]:
        control = committed.control + increment
        try:
            trial, r, iterations = self._newton(committed, control, step)
        except ConvergenceError as exc:
            if depth >= self.settings.bisection:
                raise
            logger.warning(
                "step %d: %s; bisecting the increment (depth %d)", step, exc, depth + 1,
            )
            half = 0.5 * increment
            middle, _, first_iterations = self._advance(committed, half, step, depth + 1)
            trial, r, second_iterations = self._advance(middle, half, step, depth + 1)
            return trial, r, first_iterations + second_iterations
        trial.control = control
        return trial, r, iterations

    def solve_step(self, state: SimState, increment: float) -> SimState:
        """
        Advances the control value by `increment` and returns the committed state.

        Newton iterations run on free dofs; history is committed only on
        convergence. A failing increment is halved up to `settings.bisection` times.

        Raises:
            ConvergenceError: If the step fails after every bisection.
        """
        step = state.step + 1
        trial, r, iterations = self._advance(state, increment, step, 0)
        record = StepRecord(
            step=step,
            control=trial.control,
            reaction=self.dofmap.reaction(r),
            iterations=iterations,
            max_omega=float(np.max(trial.omega)) if trial.omega.size else 0.0,
            monitors={name: float(trial.d[b] - trial.d[a]) for name, (a, b) in self.monitors.items()},
        )
        committed = SimState(
            d=trial.d,
            kappa=trial.kappa,
            loading=trial.loading,
            eps_eq=trial.eps_eq,
            eps_nl=trial.eps_nl,
            omega=trial.omega,
            step=step,
            control=trial.control,
            records=list(state.records) + [record],
        )
        logger.info(
            "step %d committed: control %.6g, reaction %.6g, %d iterations, max omega %.4f",
            step, record.control, record.reaction, record.iterations, record.max_omega,
        )
        return committed

    def snapshot(self, state: SimState) -> Snapshot:
        return Snapshot(
            step=state.step,
            control=state.control,
            d=state.d.copy(),
            omega=state.omega.copy(),
            eps_nl=state.eps_nl.copy(),
            gp_element=self.disc.gp_element,
        )


def run_simulation(
    mesh: PolyMesh,
    model: MaterialModel,
    kernel: KernelSpec,
    schedule: Sequence[float],
    dofmap: DofMap,
    settings: SolverSettings = SolverSettings(),
    snapshot_every: int = 0,
    solver: Optional[NonlocalDamageSolver] = None,
    **solver_options,
) -> SimulationResult:
    """
    Runs a schedule of control increments.

    Args:
        mesh, model, kernel, dofmap, settings: Problem definition.
        schedule (Sequence[float]): Control increment of every step.
        snapshot_every (int): Snapshot cadence in steps; 0 keeps only the last step.
        solver (Optional[NonlocalDamageSolver]): Prebuilt solver to use.
        **solver_options: Forwarded to NonlocalDamageSolver.

    Returns:
        SimulationResult: Records of every committed step and the snapshots.

    Raises:
        SimulationFailed: If a step fails; `exc.result` holds everything
            committed before the failure.
    """
    solver = solver or NonlocalDamageSolver(mesh, model, kernel, dofmap, settings, **solver_options)
    state = solver.initial_state()
    snapshots: List[Snapshot] = []

    for number, increment in enumerate(schedule, start=1):
        try:
            state = solver.solve_step(state, increment)
        except ConvergenceError as exc:
            logger.error("step %d failed: %s", number, exc)
            if state.step and (not snapshots or snapshots[-1].step != state.step):
                snapshots.append(solver.snapshot(state))
            result = SimulationResult(list(state.records), snapshots, state, failed=True, message=str(exc))
            raise SimulationFailed(f"simulation stopped at step {number}: {exc}", result, exc) from exc
        if snapshot_every and state.step % snapshot_every == 0:
            snapshots.append(solver.snapshot(state))

    if state.step and (not snapshots or snapshots[-1].step != state.step):
        snapshots.append(solver.snapshot(state))
    return SimulationResult(list(state.records), snapshots, state)
