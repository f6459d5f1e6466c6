"""Assumed-strain projection of polygonal elements."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from polydamage.errors import MeshError
from polydamage.fem import assumed_strain_at, build_projection, subtriangulate
from polydamage.fem.basis import element_arrays

HEXAGON = np.array([[1.0, 0.0], [0.5, 0.9], [-0.5, 0.8], [-1.0, 0.1], [-0.4, -0.8], [0.6, -0.9]])


def _projection(nodes, rule=3):
    positions, w, detj, _, _, B = element_arrays(subtriangulate(range(len(nodes)), nodes), rule)
    wj = w * detj
    return build_projection(positions, wj, B, element=0), positions, wj, B


@pytest.mark.parametrize("rule", [1, 3])
def test_constant_strain_is_reproduced(rule):
    proj, positions, _, _ = _projection(HEXAGON, rule)
    a, b, c, d = 2e-3, 1e-3, -4e-4, -1e-3
    u = np.column_stack((a * HEXAGON[:, 0] + b * HEXAGON[:, 1], c * HEXAGON[:, 0] + d * HEXAGON[:, 1]))
    dofs = u.reshape(-1)
    assert_allclose(proj.B_tilde @ dofs, np.broadcast_to([a, d, b + c], (len(positions), 3)), atol=1e-15)
    assert_allclose(assumed_strain_at(proj, dofs, (0.1, -0.2)), [a, d, b + c], atol=1e-15)


def test_residual_is_orthogonal_to_linear_fields(rng):
    proj, positions, wj, B = _projection(HEXAGON)
    S = proj.monomials(positions)
    dofs = rng.normal(size=2 * len(HEXAGON))
    residual = (proj.B_tilde - B) @ dofs
    assert_allclose(np.einsum("gk,gi,g->ki", S, residual, wj), 0.0, atol=1e-13)


def test_projection_is_idempotent():
    proj, positions, wj, _ = _projection(HEXAGON)
    again = build_projection(positions, wj, proj.B_tilde)
    assert_allclose(again.B_tilde, proj.B_tilde, atol=1e-12)


def test_moment_matrix_is_centred():
    proj, _, wj, _ = _projection(HEXAGON)
    assert proj.M[0, 0] == pytest.approx(np.sum(wj))
    assert_allclose(proj.M[0, 1:], 0.0, atol=1e-14)
    assert_allclose(proj.M, proj.M.T)
    assert np.all(np.linalg.eigvalsh(proj.M) > 0)


def test_translation_does_not_change_the_operator():
    near, _, _, _ = _projection(HEXAGON)
    far, _, _, _ = _projection(HEXAGON + 1e4)
    assert_allclose(far.B_tilde, near.B_tilde, rtol=1e-8, atol=1e-8)


def test_operator_at_integration_points(rng):
    proj, positions, _, _ = _projection(HEXAGON)
    dofs = rng.normal(size=2 * len(HEXAGON))
    for g in (0, 7, len(positions) - 1):
        assert_allclose(assumed_strain_at(proj, dofs, positions[g]), proj.B_tilde[g] @ dofs, atol=1e-13)


def test_too_few_points():
    positions = np.array([[0.0, 0.0], [1.0, 0.0]])
    with pytest.raises(MeshError, match="at least three"):
        build_projection(positions, np.ones(2), np.zeros((2, 3, 6)), element=4)


def test_collinear_points():
    positions = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    with pytest.raises(MeshError, match="singular"):
        build_projection(positions, np.ones(4), np.zeros((4, 3, 6)))
