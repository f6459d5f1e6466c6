"""
This package provides the finite-element machinery.

Modules:
- `mesh`: Structured and plate-with-hole generators, polytree refinement.
- `mesh_io`: Mesh file reader and writer.
- `basis`: Centroid-fan shape functions and quadrature.
- `projection`: Assumed-strain projection.
- `material`: Damage material point.
- `averaging`: Nonlocal kernels, interaction table and averaging.
- `assembly`: Integration data and global assembly.
- `solver`: Newton solver under displacement control.
"""

from .mesh import build_mesh, cells_in_box, generate_quarter_plate_hole, generate_structured, refine_polytree
from .mesh_io import load_mesh, save_mesh
from .basis import QuadPoint, SubTriangulation, quadrature, shape_eval, subtriangulate
from .projection import StrainProjection, assumed_strain_at, build_projection
from .material import (
    damage,
    damage_derivative,
    elastic_matrix,
    equivalent_strain,
    principal_strains,
    stress,
    update_history,
)
from .averaging import build_table, build_table_brute_force, kernel_eval, nonlocal_eq_strain
from .assembly import Discretization
from .solver import NonlocalDamageSolver, SimulationResult, run_simulation, solve_linear
