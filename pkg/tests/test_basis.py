"""Centroid-fan shape functions and element quadrature."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polydamage.errors import MeshError
from polydamage.fem import quadrature, shape_eval, subtriangulate
from polydamage.fem.basis import element_arrays, strain_operator

PENTAGON = np.array([[0.0, 0.0], [2.0, 0.0], [2.5, 1.5], [1.0, 2.5], [-0.5, 1.5]])
RING = (0, 1, 2, 3, 4)


def _area(coords):
    x, y = coords[:, 0], coords[:, 1]
    return 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@pytest.fixture
def fan():
    return subtriangulate(RING, PENTAGON)


def test_fan_covers_the_element(fan):
    assert fan.n == 5
    assert_allclose(fan.centroid, PENTAGON.mean(axis=0))
    assert fan.area == pytest.approx(_area(PENTAGON))
    assert np.all(fan.areas > 0)


def test_centroid_value_is_one_over_n(fan):
    for k in range(fan.n):
        phi, _ = shape_eval(fan, k, fan.centroid)
        assert_allclose(phi, 0.2, atol=1e-14)


def test_kronecker_property_at_vertices(fan):
    for k in range(fan.n):
        phi, _ = shape_eval(fan, k, PENTAGON[k])
        assert_allclose(phi, np.eye(5)[k], atol=1e-14)


@pytest.mark.parametrize("rule", [1, 3])
def test_partition_of_unity_and_linear_reproduction(fan, rule):
    positions, _, _, owner, phi, _ = element_arrays(fan, rule)
    assert_allclose(phi.sum(axis=1), 1.0, atol=1e-14)
    assert_allclose(phi @ PENTAGON, positions, atol=1e-14)
    grads = fan.shape_gradients()
    assert_allclose(grads.sum(axis=1), 0.0, atol=1e-13)
    # grad of sum x_i phi_i is the identity in every sub-triangle
    assert_allclose(np.einsum("tia,ib->tab", grads, PENTAGON), np.broadcast_to(np.eye(2), (5, 2, 2)), atol=1e-13)
    assert set(owner.tolist()) == set(range(5))


@pytest.mark.parametrize("rule", [1, 3])
def test_weights_integrate_the_area(rule):
    points = quadrature(RING, PENTAGON, rule)
    assert len(points) == 5 * rule
    assert sum(p.wj for p in points) == pytest.approx(_area(PENTAGON))


def test_rule_three_integrates_quadratics(fan):
    positions, w, detj, _, _, _ = element_arrays(fan, 3)
    wj = w * detj
    # x^2 over the unit square
    square = subtriangulate((0, 1, 2, 3), np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    sq_positions, sq_w, sq_detj, _, _, _ = element_arrays(square, 3)
    assert np.sum(sq_positions[:, 0] ** 2 * sq_w * sq_detj) == pytest.approx(1.0 / 3.0)
    assert np.sum(wj) == pytest.approx(fan.area)


def test_affine_displacement_gives_exact_strain(fan):
    a, b, c, d = 1e-3, -2e-4, 5e-4, 3e-4
    u = np.column_stack((a * PENTAGON[:, 0] + b * PENTAGON[:, 1], c * PENTAGON[:, 0] + d * PENTAGON[:, 1]))
    dofs = u.reshape(-1)
    for point in quadrature(RING, PENTAGON, 3):
        assert_allclose(point.B @ dofs, [a, d, b + c], atol=1e-15)


def test_strain_operator_layout():
    grads = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    B = strain_operator(grads)
    assert B.shape == (3, 6)
    assert_allclose(B[0], [1, 0, 3, 0, 5, 0])
    assert_allclose(B[1], [0, 2, 0, 4, 0, 6])
    assert_allclose(B[2], [2, 1, 4, 3, 6, 5])


def test_fan_from_outside_centroid_is_rejected():
    # L-shaped hexagon whose vertex mean lies in the notch
    nodes = np.array([[0.0, 0.0], [4.0, 0.0], [4.0, 1.0], [1.0, 1.0], [1.0, 4.0], [0.0, 4.0]])
    with pytest.raises(MeshError, match="non-positive area"):
        subtriangulate(range(6), nodes)


def test_point_outside_sub_triangle(fan):
    with pytest.raises(ValueError, match="outside sub-triangle"):
        shape_eval(fan, 0, (10.0, 10.0))


def test_unknown_rule(fan):
    with pytest.raises(ValueError, match="rule"):
        element_arrays(fan, 2)
