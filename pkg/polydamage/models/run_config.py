"""
This module defines RunConfig, the validated content of a configuration file,
and the blocks it is made of.

Classes:
- BoundaryBlock: Prescribed displacements on a set or at the node nearest a point.
- TractionBlock: Constant surface traction on an edge set.
- MonitorSpec: Relative displacement between two nodes recorded per step.
- OutputBlock: Output paths, VTK cadence and monitors.
- StudyBlock: Parameters of the convergence and patch studies.
- RunConfig: Everything a command needs, including the built mesh.

Usage:
- Instances are produced by `polydamage.cli.parse_config.parse_config`, which
  reports every problem at once; the classes themselves only hold data.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .dof_map import DirichletCondition, DofMap
from .kernel_spec import KernelSpec
from .material_model import MaterialModel
from .poly_mesh import PolyMesh
from .solver_settings import SolverSettings

Point = Tuple[float, float]


@dataclass(frozen=True)
class BoundaryBlock:
    label: str
    set_name: Optional[str] = None
    point: Optional[Point] = None
    components: Tuple[str, ...] = ("x", "y")
    value: float = 0.0
    drive: float = 0.0

    @property
    def driven(self) -> bool:
        return self.drive != 0.0

    def nodes(self, mesh: PolyMesh) -> np.ndarray:
        """
        Resolves the block to node indices of the mesh.

        Raises:
            KeyError: If the named set does not exist.
            ValueError: If no node lies at the requested point.
        """
        if self.set_name is not None:
            return mesh.set_nodes(self.set_name)
        index, distance = mesh.nearest_node(self.point)
        if distance > 1e-6 * mesh.diameter():
            raise ValueError(f"bc.{self.label}.point: no node at {self.point} (nearest is {distance:.3g} away)")
        return np.array([index], dtype=int)

    def condition(self, mesh: PolyMesh) -> DirichletCondition:
        return DirichletCondition(tuple(self.nodes(mesh)), self.components, self.value, self.drive)


@dataclass(frozen=True)
class TractionBlock:
    label: str
    set_name: str
    value: Point = (0.0, 0.0)
    drive: Point = (0.0, 0.0)


@dataclass(frozen=True)
class MonitorSpec:
    """Records u_c(second) - u_c(first) with c the component ("x" or "y")."""

    name: str
    first: Point
    second: Point
    component: str = "x"


@dataclass(frozen=True)
class OutputBlock:
    csv: Optional[str] = None
    vtk: Optional[str] = None
    vtk_every: int = 0
    table: Optional[str] = None
    mesh: Optional[str] = None
    monitors: Tuple[MonitorSpec, ...] = ()


@dataclass(frozen=True)
class StudyBlock:
    """
    Attributes:
        sizes (Tuple[int, ...]): n_r = n_t per plate-with-hole mesh.
        a, L, H (float): Hole radius, half-length and half-height.
        load (float): Far-field tension.
        csv (Optional[str]): Convergence report path.
        workers (int): Processes used by the convergence study.
        nx (int): Cells per side of the patch-test grid.
        refine (Tuple[int, ...]): Patch-test cells refined one level.
        field (Tuple[float, ...]): Affine patch field a0, a1, a2, b0, b1, b2
            with u_x = a0 + a1 x + a2 y and u_y = b0 + b1 x + b2 y.
    """

    sizes: Tuple[int, ...] = (8, 16, 32)
    a: float = 0.4
    L: float = 2.0
    H: float = 1.0
    load: float = 10.0
    csv: Optional[str] = None
    workers: int = 1
    nx: int = 2
    refine: Tuple[int, ...] = (0,)
    field: Tuple[float, ...] = (1e-3, 2e-3, -1e-3, -2e-3, 1.5e-3, 3e-3)


@dataclass(frozen=True)
class RunConfig:
    """
    Validated configuration of one command.

    Attributes:
        source (str): Configuration file path.
        command (str): Command the configuration was validated for.
        mesh (Optional[PolyMesh]): Built (and refined) mesh, None for studies.
        mesh_source (str): Mesh file path or generator description.
        rule (int): Quadrature points per sub-triangle (1 or 3).
        thickness (float): Out-of-plane thickness.
        units (str): Declared unit system, echoed in outputs.
        material (MaterialModel): Elastic and damage parameters.
        kernel (Optional[KernelSpec]): Nonlocal kernel, None when absent.
        settings (SolverSettings): Newton controls.
        steps (int): Number of load steps.
        increment (float): Control increment per step.
        boundaries (List[BoundaryBlock]): Dirichlet blocks in file order.
        tractions (List[TractionBlock]): Traction blocks in file order.
        output (OutputBlock): Output options.
        study (StudyBlock): Study options.
    """

    source: str
    command: str
    mesh: Optional[PolyMesh]
    mesh_source: str
    rule: int
    thickness: float
    units: str
    material: MaterialModel
    kernel: Optional[KernelSpec]
    settings: SolverSettings
    steps: int
    increment: float
    boundaries: List[BoundaryBlock] = field(default_factory=list)
    tractions: List[TractionBlock] = field(default_factory=list)
    output: OutputBlock = field(default_factory=OutputBlock)
    study: StudyBlock = field(default_factory=StudyBlock)

    def dof_map(self) -> DofMap:
        """Builds the dof partition from the boundary blocks."""
        return DofMap(self.mesh.n_nodes, [block.condition(self.mesh) for block in self.boundaries])

    def schedule(self) -> List[float]:
        return [self.increment] * self.steps

    def monitor_dofs(self) -> Dict[str, Tuple[int, int]]:
        """Maps each monitor name to its (first dof, second dof) pair."""
        dofs = {}
        for monitor in self.output.monitors:
            offset = 0 if monitor.component == "x" else 1
            first, _ = self.mesh.nearest_node(monitor.first)
            second, _ = self.mesh.nearest_node(monitor.second)
            dofs[monitor.name] = (2 * first + offset, 2 * second + offset)
        return dofs
