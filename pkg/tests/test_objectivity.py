"""Mesh objectivity of the notched three-point bending beam (run with --runslow)."""

import dataclasses

import numpy as np
import pytest

from polydamage.bench import preset_benchmarks
from polydamage.fem import Discretization, build_mesh, run_simulation
from polydamage.models import DirichletCondition, DofMap, KernelSpec, MaterialModel, SolverSettings

BEAM = MaterialModel(E=20000.0, nu=0.2, plane="stress", criterion="mazars", alpha=0.98, beta=300.0, kappa0=9e-5)
KERNEL = KernelSpec("truncated_quadratic", R=4.0)
BAND = (230.0, 0.0, 280.0, 100.0)
SCHEDULE = [-0.004] * 120


def _beam(levels):
    recipe = dataclasses.replace(preset_benchmarks()["notched-beam"].recipe, refine=((BAND, levels),))
    mesh = build_mesh(recipe)

    def node(point):
        index, distance = mesh.nearest_node(point)
        assert distance < 1e-9
        return (index,)

    dofmap = DofMap(mesh.n_nodes, [
        DirichletCondition(node((30.0, 0.0)), ("x", "y")),
        DirichletCondition(node((480.0, 0.0)), ("y",)),
        DirichletCondition(node((255.0, 100.0)), ("y",), drive=1.0),
    ])
    return mesh, dofmap


def _curve(levels):
    mesh, dofmap = _beam(levels)
    disc = Discretization(mesh, rule=1, thickness=100.0)
    result = run_simulation(
        mesh, BEAM, KERNEL, SCHEDULE, dofmap, SolverSettings(), rule=1, thickness=100.0, discretization=disc,
    )
    deflection = np.array([-r.control for r in result.records])
    force = np.array([-r.reaction for r in result.records])
    return mesh, disc, deflection, force, result


@pytest.mark.slow
def test_softening_response_is_mesh_objective():
    coarse_mesh, _, coarse_u, coarse_f, _ = _curve(2)
    fine_mesh, _, fine_u, fine_f, result = _curve(3)
    sizes = [min(m.element_diameter(e) for e in range(m.n_elements)) for m in (coarse_mesh, fine_mesh)]
    assert sizes[1] < sizes[0] < 2.0 * KERNEL.R

    peak = int(np.argmax(fine_f))
    assert fine_f[peak] > 0.0
    assert abs(coarse_f.max() - fine_f[peak]) <= 0.10 * fine_f[peak]

    post = 2.0 * fine_u[peak]
    assert post <= fine_u[-1]
    coarse_post, fine_post = np.interp(post, coarse_u, coarse_f), np.interp(post, fine_u, fine_f)
    assert abs(coarse_post - fine_post) <= 0.15 * fine_post

    assert fine_f[-1] < fine_f[peak]

    snapshot = result.snapshots[-1]
    omega = snapshot.cell_max(snapshot.omega, fine_mesh.n_elements)
    assert omega.max() >= 0.95
    damaged = np.array([fine_mesh.element_coords(e).mean(axis=0) for e in np.flatnonzero(omega >= 0.95)])
    assert np.all(np.abs(damaged[:, 0] - 255.0) <= 3.0 * KERNEL.R)
    assert np.all(damaged[:, 1] >= 50.0 - KERNEL.R)
