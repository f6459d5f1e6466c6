"""
This module runs the plate-with-hole convergence study.

The quarter model carries symmetry rollers on x = 0 and y = 0 and the exact
Kirsch tractions on the outer edges and on the chords approximating the hole,
so the Kirsch field is the exact solution of every discrete domain.

Functions:
- error_norms: Relative L2 displacement error and relative energy-norm strain error.
- solve_plate_hole: Solves one mesh and returns its convergence row.
- run_convergence: Solves a sequence of meshes and fits log-log slopes.
- fit_slope: Least-squares slope of log(error) against log(h).
- report_table: Rich table of a report.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, Tuple

import numpy as np

from polydamage.fem.assembly import Discretization
from polydamage.fem.material import elastic_matrix
from polydamage.fem.mesh import generate_quarter_plate_hole
from polydamage.models import (
    ConvergenceReport,
    ConvergenceRow,
    DirichletCondition,
    DofMap,
    MaterialModel,
    PolyMesh,
)
from polydamage.utils.console import render_table
from polydamage.utils.logger import get_logger

from .elastic import solve_elastic
from .kirsch import ExactKirschField

logger = get_logger(__name__)


def error_norms(
    disc: Discretization,
    d: np.ndarray,
    displacement: Callable[[np.ndarray], np.ndarray],
    strain: Callable[[np.ndarray], np.ndarray],
    model: MaterialModel,
) -> Tuple[float, float]:
    """
    Relative errors of a numerical field against exact evaluators.

    L2: sqrt(sum |u_h - u|^2 w|J|) / sqrt(sum |u|^2 w|J|).
    H1 (energy): the same pattern with (e~_h - e)^T C (e~_h - e) and e^T C e.

    Raises:
        ValueError: If an exact norm is zero.
    """
    points = disc.positions
    u_exact = displacement(points)
    u_h = disc.displacements_at_points(d)
    l2_den = float(np.sum(np.sum(u_exact * u_exact, axis=1) * disc.wj))

    C = elastic_matrix(model)
    e_exact = strain(points)
    e_diff = disc.strains(d) - e_exact
    h1_den = float(np.sum(np.einsum("gi,ij,gj->g", e_exact, C, e_exact) * disc.wj))
    if l2_den <= 0.0 or h1_den <= 0.0:
        raise ValueError("exact field: zero norm, relative errors are undefined")

    l2_num = float(np.sum(np.sum((u_h - u_exact) ** 2, axis=1) * disc.wj))
    h1_num = float(np.sum(np.einsum("gi,ij,gj->g", e_diff, C, e_diff) * disc.wj))
    return float(np.sqrt(l2_num / l2_den)), float(np.sqrt(h1_num / h1_den))


def _edge_normal(mesh: PolyMesh, e: int, k: int) -> np.ndarray:
    a, b = mesh.edges(e)[k]
    tangent = mesh.nodes[b] - mesh.nodes[a]
    return np.array([tangent[1], -tangent[0]]) / np.hypot(*tangent)


def kirsch_tractions(mesh: PolyMesh, field: ExactKirschField):
    """(edges, traction) pairs with the exact tractions on right, top and hole edges."""
    pairs = []
    for name in ("right", "top", "hole"):
        for e, k in mesh.edge_sets[name]:
            normal = _edge_normal(mesh, e, k)
            pairs.append(([(e, k)], lambda x, n=normal: field.traction(x, n)))
    return pairs


def solve_plate_hole(
    n: int,
    model: MaterialModel,
    a: float = 0.4,
    L: float = 2.0,
    H: float = 1.0,
    load: float = 10.0,
    rule: int = 3,
    mesh_id: int = 0,
) -> ConvergenceRow:
    """Solves the quarter plate with n_r = n_t = n and measures its errors."""
    mesh = generate_quarter_plate_hole(a, L, H, n, n)
    field = ExactKirschField(load, a, model)
    dofmap = DofMap(mesh.n_nodes, [
        DirichletCondition(tuple(mesh.set_nodes("bottom")), ("y",)),
        DirichletCondition(tuple(mesh.set_nodes("left")), ("x",)),
    ])
    solution = solve_elastic(mesh, model, dofmap, kirsch_tractions(mesh, field), rule=rule)
    l2, h1 = error_norms(solution.disc, solution.d, field.displacement, field.strain, model)
    h = min(mesh.element_diameter(e) for e in range(mesh.n_elements))
    logger.info("plate with hole n=%d: h=%.4g, L2=%.3e, H1=%.3e", n, h, l2, h1)
    return ConvergenceRow(mesh_id, mesh.n_elements, h, l2, h1)


def _solve_row(arguments) -> ConvergenceRow:
    return solve_plate_hole(*arguments)


def fit_slope(h: Sequence[float], errors: Sequence[float]) -> float:
    """Slope of the least-squares line through (log h, log error)."""
    slope, _ = np.polyfit(np.log(np.asarray(h, dtype=float)), np.log(np.asarray(errors, dtype=float)), 1)
    return float(slope)


def run_convergence(
    sizes: Sequence[int],
    model: MaterialModel,
    a: float = 0.4,
    L: float = 2.0,
    H: float = 1.0,
    load: float = 10.0,
    rule: int = 3,
    workers: int = 1,
) -> ConvergenceReport:
    """
    Solves one mesh per size and fits the convergence slopes.

    Args:
        sizes (Sequence[int]): n_r = n_t per mesh, at least three.
        workers (int): Processes; meshes are solved in parallel when > 1.

    Raises:
        ValueError: If fewer than three sizes are given.
    """
    if len(sizes) < 3:
        raise ValueError("sizes: at least three meshes are needed to fit slopes")
    arguments = [(n, model, a, L, H, load, rule, i) for i, n in enumerate(sorted(sizes))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_solve_row, arguments))
    else:
        rows = [_solve_row(args) for args in arguments]

    h = [row.h for row in rows]
    report = ConvergenceReport(
        rows=tuple(rows),
        l2_slope=fit_slope(h, [row.l2_rel for row in rows]),
        h1_slope=fit_slope(h, [row.h1_rel for row in rows]),
    )
    logger.info("convergence slopes: L2 %.3f, H1 %.3f", report.l2_slope, report.h1_slope)
    return report


def report_table(report: ConvergenceReport) -> str:
    rows = [
        [str(row.mesh_id), str(row.n_elem), f"{row.h:.4g}", f"{row.l2_rel:.4e}", f"{row.h1_rel:.4e}"]
        for row in report.rows
    ]
    table = render_table("Plate with hole", ["mesh", "elements", "h", "L2 rel", "H1 rel"], rows)
    return table + f"slopes: L2 {report.l2_slope:.3f}, H1 {report.h1_slope:.3f}"
