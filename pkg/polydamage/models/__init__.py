"""
This package provides the data model of the solver.

Classes:
- `PolyMesh`: Polygonal mesh with named node and edge sets.
- `RefinementPlan`: Elements and levels of a polytree refinement.
- `MeshRecipe`: Generator description of a mesh.
- `MaterialModel`, `Plane`, `Criterion`: Elastic and damage parameters.
- `PointHistory`: History threshold and loading flag of one point.
- `KernelSpec`, `KernelKind`: Nonlocal weight function.
- `NonlocalTable`: Stored interaction coefficients.
- `DofMap`, `DirichletCondition`: Dof partition and prescribed data.
- `SolverSettings`: Newton controls.
- `SimState`, `StepRecord`, `Snapshot`: Simulation state and results.
- `RunConfig` and its blocks: Validated configuration.
- `ConvergenceReport`, `ConvergenceRow`: Convergence study results.
"""

from .poly_mesh import PolyMesh, ring_area
from .refinement_plan import RefinementPlan
from .material_model import Criterion, MaterialModel, Plane
from .point_history import PointHistory
from .kernel_spec import KernelKind, KernelSpec
from .nonlocal_table import NonlocalTable
from .dof_map import DirichletCondition, DofMap
from .solver_settings import SolverSettings
from .sim_state import SimState, Snapshot, StepRecord
from .run_config import (
    BoundaryBlock,
    MonitorSpec,
    OutputBlock,
    RunConfig,
    StudyBlock,
    TractionBlock,
)
from .convergence_report import ConvergenceReport, ConvergenceRow
from .mesh_recipe import MeshRecipe
