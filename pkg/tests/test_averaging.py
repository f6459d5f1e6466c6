"""Nonlocal kernels, the interaction table and the averaging operator."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import sparse

from polydamage.fem import (
    Discretization,
    build_table,
    build_table_brute_force,
    kernel_eval,
    nonlocal_eq_strain,
    refine_polytree,
)
from polydamage.models import KernelKind, KernelSpec, PolyMesh, RefinementPlan


@pytest.fixture
def refined_points(grid2):
    disc = Discretization(refine_polytree(grid2, RefinementPlan.uniform([0], 1)), rule=3)
    return disc.positions, disc.wj


# =============================================================================
# Kernels
# =============================================================================


def test_truncated_quadratic_values():
    spec = KernelSpec("truncated_quadratic", R=2.0)
    assert_allclose(kernel_eval(spec, [0.0, 1.0, 2.0, 3.0]), [1.0, 0.5625, 0.0, 0.0])


def test_gauss_values_and_cut():
    spec = KernelSpec("gauss", R=3.0, lc=1.0)
    assert_allclose(kernel_eval(spec, [0.0, 1.0, 3.0]), [1.0, math.exp(-0.5), math.exp(-4.5)])
    assert kernel_eval(spec, 3.0001) == 0.0


def test_kernel_rejects_negative_distance():
    with pytest.raises(ValueError, match="non-negative"):
        kernel_eval(KernelSpec(), -0.1)


def test_default_internal_length():
    spec = KernelSpec("gauss", R=7.0)
    assert spec.kind is KernelKind.GAUSS
    assert spec.lc == pytest.approx(7.0 / math.sqrt(7.0))
    assert KernelSpec.from_ratio("gauss", 6.0, 3.0).lc == pytest.approx(2.0)


@pytest.mark.parametrize("kwargs, message", [
    ({"R": 0.0}, "R: interaction radius must be positive"),
    ({"R": 1.0, "lc": -1.0}, "lc"),
    ({"kind": "box"}, "kernel"),
])
def test_kernel_spec_validation(kwargs, message):
    with pytest.raises(ValueError, match=message):
        KernelSpec(**kwargs)


# =============================================================================
# Table construction
# =============================================================================


@pytest.mark.parametrize("kind", ["gauss", "truncated_quadratic"])
def test_tree_matches_brute_force(refined_points, kind):
    positions, wj = refined_points
    spec = KernelSpec(kind, R=0.3)
    assert build_table(positions, wj, spec).same_as(build_table_brute_force(positions, wj, spec))


def test_parallel_query_is_identical(refined_points):
    positions, wj = refined_points
    spec = KernelSpec(R=0.4)
    assert build_table(positions, wj, spec, workers=-1).same_as(build_table(positions, wj, spec, workers=1))


def test_three_points_on_a_line():
    positions = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
    wj = np.array([1.0, 2.0, 1.0])
    table = build_table(positions, wj, KernelSpec(R=1.5))
    near = (1.0 - 1.0 / 2.25) ** 2
    expected = np.array([
        [1.0, 2.0 * near, 0.0],
        [near, 2.0, near],
        [0.0, 2.0 * near, 1.0],
    ])
    assert_allclose(table.matrix.toarray(), expected, rtol=1e-14)
    assert_allclose(table.sums, expected.sum(axis=1), rtol=1e-14)
    assert_allclose(nonlocal_eq_strain(table, [1.0, 0.0, 0.0]), [1.0 / (1.0 + 2.0 * near), near / (2.0 + 2.0 * near), 0.0],
                    rtol=1e-14)


def test_rows_are_sorted_and_contain_self(refined_points):
    positions, wj = refined_points
    table = build_table(positions, wj, KernelSpec(R=0.25))
    for i in range(table.n_points):
        indices, values = table.neighbors(i)
        assert np.all(np.diff(indices) > 0)
        assert i in indices
        assert np.all(values > 0)


def test_weights_are_symmetric_up_to_volume(refined_points):
    positions, wj = refined_points
    table = build_table(positions, wj, KernelSpec("gauss", R=0.5))
    kernel = (table.matrix @ sparse.diags(1.0 / wj)).toarray()
    assert_allclose(kernel, kernel.T, atol=1e-15)


def test_reverse_adjacency(refined_points):
    positions, wj = refined_points
    table = build_table(positions, wj, KernelSpec(R=0.3))
    reverse = table.reverse
    for j in (0, table.n_points // 2, table.n_points - 1):
        start, stop = reverse.indptr[j], reverse.indptr[j + 1]
        users = [i for i in range(table.n_points) if j in table.neighbors(i)[0]]
        assert reverse.indices[start:stop].tolist() == users
        assert_allclose(reverse.data[start:stop], table.matrix[users, j].toarray().ravel())


def test_full_coupling(unit_square):
    disc = Discretization(unit_square, rule=3)
    table = build_table(disc.positions, disc.wj, KernelSpec(R=10.0))
    assert table.n_points == 12
    assert table.n_pairs == 144


def test_local_limit(unit_square, rng):
    disc = Discretization(unit_square, rule=3)
    table = build_table(disc.positions, disc.wj, KernelSpec(R=1e-3))
    assert table.n_pairs == table.n_points
    values = rng.uniform(size=table.n_points)
    assert_allclose(nonlocal_eq_strain(table, values), values, rtol=1e-15)


def test_separated_bodies_do_not_interact():
    nodes = [[0, 0], [1, 0], [1, 1], [0, 1], [11, 0], [12, 0], [12, 1], [11, 1]]
    disc = Discretization(PolyMesh(nodes, [(0, 1, 2, 3), (4, 5, 6, 7)]), rule=3)
    table = build_table(disc.positions, disc.wj, KernelSpec(R=2.0))
    dense = table.matrix.toarray()
    assert np.count_nonzero(dense[:12, 12:]) == 0
    assert np.count_nonzero(dense[12:, :12]) == 0
    assert np.count_nonzero(dense[:12, :12]) == 144


# =============================================================================
# Averaging
# =============================================================================


def test_rows_of_weights_sum_to_one(refined_points):
    positions, wj = refined_points
    table = build_table(positions, wj, KernelSpec("gauss", R=0.35))
    assert_allclose(np.asarray(table.weights.sum(axis=1)).ravel(), 1.0, atol=1e-14)


def test_uniform_field_is_reproduced(refined_points):
    positions, wj = refined_points
    table = build_table(positions, wj, KernelSpec(R=0.35))
    assert_allclose(nonlocal_eq_strain(table, np.full(table.n_points, 2.5e-4)), 2.5e-4, rtol=1e-13)


def test_perturbation_stays_within_radius(refined_points):
    positions, wj = refined_points
    spec = KernelSpec(R=0.3)
    table = build_table(positions, wj, spec)
    base = np.zeros(table.n_points)
    bumped = base.copy()
    bumped[0] = 1.0
    changed = nonlocal_eq_strain(table, bumped) != nonlocal_eq_strain(table, base)
    distance = np.hypot(*(positions - positions[0]).T)
    assert np.all(distance[changed] <= spec.R)
    assert changed[0]


def test_size_mismatch(refined_points):
    positions, wj = refined_points
    table = build_table(positions, wj, KernelSpec(R=0.3))
    with pytest.raises(ValueError, match="values: expected"):
        nonlocal_eq_strain(table, np.zeros(table.n_points + 1))
