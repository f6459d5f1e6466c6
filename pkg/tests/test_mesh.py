"""Mesh generators, polytree refinement and the PolyMesh invariants."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polydamage.errors import MeshError
from polydamage.fem import build_mesh, cells_in_box, generate_quarter_plate_hole, generate_structured, refine_polytree
from polydamage.fem.mesh import element_neighbours
from polydamage.models import MeshRecipe, PolyMesh, RefinementPlan


def _max_level_jump(mesh: PolyMesh) -> int:
    jumps = [abs(mesh.levels[e] - mesh.levels[n]) for e, ns in enumerate(element_neighbours(mesh)) for n in ns]
    return max(jumps, default=0)


# =============================================================================
# Structured grids
# =============================================================================


def test_single_cell(unit_square):
    assert unit_square.n_elements == 1
    assert unit_square.n_nodes == 4
    assert unit_square.total_area() == pytest.approx(1.0)


def test_two_by_two(grid2):
    assert grid2.n_elements == 4
    assert grid2.n_nodes == 9
    assert grid2.total_area() == pytest.approx(1.0)
    assert grid2.elements[0] == (0, 1, 4, 3)


def test_boundary_sets(grid2):
    assert grid2.node_sets["bottom"] == (0, 1, 2)
    assert grid2.node_sets["left"] == (0, 3, 6)
    assert grid2.edge_sets["top"] == ((2, 2), (3, 2))
    assert sorted(grid2.boundary_nodes().tolist()) == [0, 1, 2, 3, 5, 6, 7, 8]


def test_cutout_removes_cells():
    mesh = generate_structured((0.0, 0.0, 10.0, 2.0), 10, 2, cutouts=[(4.0, 0.0, 5.0, 1.0)])
    assert mesh.n_elements == 19
    assert mesh.total_area() == pytest.approx(19.0)
    # left, right and top neighbours of the removed cell
    assert len(mesh.edge_sets["cutout0"]) == 3
    assert len(mesh.edge_sets["bottom"]) == 9


def test_misaligned_cutout_is_named():
    with pytest.raises(MeshError, match="cutout 0"):
        generate_structured((0.0, 0.0, 10.0, 2.0), 10, 2, cutouts=[(4.5, 0.0, 5.0, 1.0)])


def test_cutout_outside_domain():
    with pytest.raises(MeshError, match="cutout 1"):
        generate_structured((0.0, 0.0, 4.0, 4.0), 4, 4, cutouts=[(0.0, 0.0, 1.0, 1.0), (3.0, 3.0, 5.0, 4.0)])


@pytest.mark.parametrize("nx, ny", [(0, 1), (1, 0)])
def test_structured_counts_must_be_positive(nx, ny):
    with pytest.raises(MeshError, match="nx and ny"):
        generate_structured((0.0, 0.0, 1.0, 1.0), nx, ny)


# =============================================================================
# Quarter plate with a hole
# =============================================================================


def test_plate_hole_coarse():
    mesh = generate_quarter_plate_hole(0.4, 2.0, 1.0, 2, 2)
    assert mesh.n_elements == 4
    assert np.all(mesh.areas() > 0)
    hole = mesh.nodes[list(mesh.node_sets["hole"])]
    assert_allclose(np.hypot(hole[:, 0], hole[:, 1]), 0.4, atol=1e-12)


def test_plate_hole_area():
    mesh = generate_quarter_plate_hole(0.4, 2.0, 1.0, 16, 16)
    assert mesh.n_elements == 256
    exact = 2.0 * 1.0 - math.pi * 0.16 / 4.0
    assert mesh.total_area() == pytest.approx(exact, rel=5e-3)


def test_plate_hole_sets():
    mesh = generate_quarter_plate_hole(0.4, 2.0, 1.0, 4, 6)
    bottom = mesh.nodes[list(mesh.node_sets["bottom"])]
    left = mesh.nodes[list(mesh.node_sets["left"])]
    assert_allclose(bottom[:, 1], 0.0, atol=1e-15)
    assert_allclose(left[:, 0], 0.0, atol=1e-15)
    corner = mesh.nearest_node((2.0, 1.0))
    assert corner[1] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("a", [1.0, 1.5, 0.0])
def test_plate_hole_radius_precondition(a):
    with pytest.raises(MeshError, match="hole radius"):
        generate_quarter_plate_hole(a, 2.0, 1.0, 4, 4)


# =============================================================================
# Polytree refinement
# =============================================================================


def test_refine_one_cell(grid2):
    fine = refine_polytree(grid2, RefinementPlan.uniform([0], 1))
    assert fine.n_elements == 7
    arities = [len(ring) for ring in fine.elements]
    assert sorted(arities) == [4, 4, 4, 4, 4, 5, 5]
    # the two edge neighbours of cell 0 carry the hanging nodes
    assert arities[4] == 5 and arities[5] == 5 and arities[6] == 4
    assert fine.levels == (1, 1, 1, 1, 0, 0, 0)
    assert fine.total_area() == pytest.approx(1.0)
    assert grid2.n_elements == 4


def test_refined_sets_follow_children(grid2):
    fine = refine_polytree(grid2, RefinementPlan.uniform([0], 1))
    assert len(fine.edge_sets["bottom"]) == 3
    assert len(fine.node_sets["bottom"]) == 4
    bottom = fine.nodes[list(fine.node_sets["bottom"])]
    assert_allclose(bottom[:, 1], 0.0)


def test_refine_everything(grid2):
    fine = refine_polytree(grid2, RefinementPlan.uniform(grid2.n_elements, 1))
    assert fine.n_elements == 16
    assert all(len(ring) == 4 for ring in fine.elements)
    assert_allclose(fine.areas(), 1.0 / 16.0)


def test_empty_plan_is_identity(grid2):
    assert refine_polytree(grid2, RefinementPlan()) == grid2


def test_balance_limits_level_jumps(grid2):
    balanced = refine_polytree(grid2, RefinementPlan.uniform([0], 2, balance=True))
    assert _max_level_jump(balanced) <= 1
    assert balanced.total_area() == pytest.approx(1.0)

    unbalanced = refine_polytree(grid2, RefinementPlan.uniform([0], 2, balance=False))
    assert _max_level_jump(unbalanced) == 2
    assert unbalanced.n_elements < balanced.n_elements


def test_refine_missing_target(grid2):
    with pytest.raises(MeshError, match="does not exist"):
        refine_polytree(grid2, RefinementPlan.uniform([9], 1))


def test_plan_validation():
    with pytest.raises(ValueError, match="levels"):
        RefinementPlan((0, 1), (1,))
    with pytest.raises(ValueError, match="levels"):
        RefinementPlan((0,), (0,))


def test_cells_in_box(grid2):
    assert cells_in_box(grid2, (0.0, 0.0, 0.5, 0.5)) == [0]
    assert cells_in_box(grid2, (0.0, 0.0, 1.0, 0.5)) == [0, 1]


def test_build_mesh_applies_refinement_boxes():
    recipe = MeshRecipe("structured", (0.0, 0.0, 4.0, 1.0), 4, 1, refine=(((0.0, 0.0, 1.0, 1.0), 1),))
    mesh = build_mesh(recipe)
    assert mesh.n_elements == 7
    assert max(mesh.levels) == 1


# =============================================================================
# Invariants
# =============================================================================


SQUARE = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]


def test_clockwise_ring_rejected():
    with pytest.raises(MeshError, match="orientation"):
        PolyMesh(SQUARE, [(0, 3, 2, 1)])


def test_out_of_range_index_rejected():
    with pytest.raises(MeshError, match="range"):
        PolyMesh(SQUARE, [(0, 1, 2, 4)])


def test_two_vertex_ring_rejected():
    with pytest.raises(MeshError, match="arity"):
        PolyMesh(SQUARE, [(0, 1)])


def test_unknown_set_lists_available(grid2):
    with pytest.raises(KeyError, match="available: bottom, left, right, top"):
        grid2.set_nodes("topp")


def test_hanging_node_must_be_a_ring_vertex():
    nodes = [[0, 0], [1, 0], [1, 1], [0, 1], [2, 0], [2, 1], [1, 0.5]]
    # the right cell ignores the midpoint of the shared edge
    with pytest.raises(MeshError, match="conformity"):
        PolyMesh(nodes, [(0, 1, 6, 2, 3), (1, 4, 5, 2)])


def test_hanging_node_as_ring_vertex_is_valid():
    nodes = [[0, 0], [1, 0], [1, 1], [0, 1], [2, 0], [2, 1], [1, 0.5]]
    mesh = PolyMesh(nodes, [(0, 1, 6, 2, 3), (1, 4, 5, 2, 6)])
    assert mesh.total_area() == pytest.approx(2.0)
    assert element_neighbours(mesh) == [{1}, {0}]
