"""
This module implements the damage material point.

Functions:
- elastic_matrix: Plane stress or plane strain elasticity in engineering shear.
- stress: sigma = (1 - omega) C eps.
- out_of_plane: eps_zz and its derivative with respect to eps_xx (= eps_yy).
- principal_strains: In-plane principal strains and eps_zz.
- equivalent_strain: Mazars or modified von Mises equivalent strain and its gradient.
- damage / damage_derivative: Exponential softening law and its slope.
- update_history: Kuhn-Tucker update of a single point.
- trial_history: The same update for arrays of points.

All strain functions accept arrays of shape (..., 3) ordered (xx, yy, xy)
with xy the engineering shear gamma_xy.
"""

from typing import Tuple

import numpy as np

from polydamage.models import Criterion, MaterialModel, Plane, PointHistory


def elastic_matrix(model: MaterialModel) -> np.ndarray:
    """
    Returns the 3x3 elasticity matrix.

    Example:
        >>> elastic_matrix(MaterialModel(E=1.0, nu=0.0))
        array([[1. , 0. , 0. ],
               [0. , 1. , 0. ],
               [0. , 0. , 0.5]])
    """
    E, nu = model.E, model.nu
    if model.plane is Plane.STRESS:
        factor = E / (1.0 - nu * nu)
        return factor * np.array([[1.0, nu, 0.0], [nu, 1.0, 0.0], [0.0, 0.0, 0.5 * (1.0 - nu)]])
    factor = E / ((1.0 + nu) * (1.0 - 2.0 * nu))
    return factor * np.array([[1.0 - nu, nu, 0.0], [nu, 1.0 - nu, 0.0], [0.0, 0.0, 0.5 * (1.0 - 2.0 * nu)]])


def stress(model: MaterialModel, eps: np.ndarray, omega) -> np.ndarray:
    """
    Damaged stress (1 - omega) C eps.

    Raises:
        ValueError: If omega is outside [0, 1].
    """
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0) or np.any(omega > 1.0):
        raise ValueError("omega: damage must lie in [0, 1]")
    return (1.0 - omega)[..., None] * (np.asarray(eps, dtype=float) @ elastic_matrix(model).T)


def out_of_plane(model: MaterialModel) -> float:
    """d eps_zz / d eps_xx: -nu / (1 - nu) in plane stress, 0 in plane strain."""
    if model.plane is Plane.STRESS:
        return -model.nu / (1.0 - model.nu)
    return 0.0


def principal_strains(model: MaterialModel, eps: np.ndarray) -> np.ndarray:
    """
    Principal strains (e1 >= e2 in plane, e3 = eps_zz).

    Returns:
        np.ndarray: (..., 3).
    """
    eps = np.asarray(eps, dtype=float)
    exx, eyy, gxy = eps[..., 0], eps[..., 1], eps[..., 2]
    mean = 0.5 * (exx + eyy)
    radius = np.hypot(0.5 * (exx - eyy), 0.5 * gxy)
    ezz = out_of_plane(model) * (exx + eyy)
    return np.stack((mean + radius, mean - radius, ezz), axis=-1)


def _mazars(model: MaterialModel, eps: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    exx, eyy, gxy = eps[..., 0], eps[..., 1], eps[..., 2]
    c = out_of_plane(model)
    half_diff = 0.5 * (exx - eyy)
    half_shear = 0.5 * gxy
    radius = np.hypot(half_diff, half_shear)
    principal = principal_strains(model, eps)
    positive = 0.5 * (np.abs(principal) + principal)
    value = np.sqrt(np.sum(positive * positive, axis=-1))

    safe_radius = np.where(radius > 0.0, radius, 1.0)
    d_radius = np.stack(
        (0.5 * half_diff / safe_radius, -0.5 * half_diff / safe_radius, 0.5 * half_shear / safe_radius),
        axis=-1,
    ) * (radius > 0.0)[..., None]
    d_mean = np.broadcast_to(np.array([0.5, 0.5, 0.0]), eps.shape)
    d_zz = np.broadcast_to(np.array([c, c, 0.0]), eps.shape)

    weighted = (positive[..., 0:1] * (d_mean + d_radius)
                + positive[..., 1:2] * (d_mean - d_radius)
                + positive[..., 2:3] * d_zz)
    safe_value = np.where(value > 0.0, value, 1.0)
    eta = weighted / safe_value[..., None] * (value > 0.0)[..., None]
    return value, eta


def von_mises_constants(model: MaterialModel) -> Tuple[float, float, float, float]:
    """Coefficients (A, B, C, D) of eps_eq = A I1 + B sqrt(C I1^2 + D J2')."""
    k, nu = model.k, model.nu
    return (
        (k - 1.0) / (2.0 * k * (1.0 - 2.0 * nu)),
        1.0 / (2.0 * k),
        (k - 1.0) ** 2 / (1.0 - 2.0 * nu) ** 2,
        12.0 * k / (1.0 + nu) ** 2,
    )


def _von_mises(model: MaterialModel, eps: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    exx, eyy, gxy = eps[..., 0], eps[..., 1], eps[..., 2]
    c = out_of_plane(model)
    A, B, C, D = von_mises_constants(model)
    ezz = c * (exx + eyy)
    i1 = exx + eyy + ezz
    square_trace = exx * exx + eyy * eyy + ezz * ezz + 0.5 * gxy * gxy
    j2 = np.maximum((3.0 * square_trace - i1 * i1) / 6.0, 0.0)
    root = np.sqrt(C * i1 * i1 + D * j2)
    value = A * i1 + B * root

    d_i1 = np.broadcast_to(np.array([1.0 + c, 1.0 + c, 0.0]), eps.shape)
    d_trace = np.stack((2.0 * exx + 2.0 * ezz * c, 2.0 * eyy + 2.0 * ezz * c, gxy), axis=-1)
    d_j2 = (3.0 * d_trace - 2.0 * i1[..., None] * d_i1) / 6.0
    safe_root = np.where(root > 0.0, root, 1.0)
    d_root = (2.0 * C * i1[..., None] * d_i1 + D * d_j2) / (2.0 * safe_root[..., None])
    eta = A * d_i1 + B * d_root * (root > 0.0)[..., None]
    return value, eta


def equivalent_strain(model: MaterialModel, eps: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Equivalent strain and its gradient with respect to (xx, yy, xy).

    Mazars uses the positive parts of the principal strains; the modified von
    Mises form uses I1 and J2' with the strength ratio k. eps_zz follows the
    plane condition. At non-smooth points the gradient returned is the limit
    with zero contribution from the degenerate direction.

    Returns:
        Tuple[np.ndarray, np.ndarray]: eps_eq (...,) and eta (..., 3).
    """
    eps = np.asarray(eps, dtype=float)
    if model.criterion is Criterion.MAZARS:
        return _mazars(model, eps)
    return _von_mises(model, eps)


def damage(model: MaterialModel, kappa) -> np.ndarray:
    """omega(kappa) = 1 - kappa0/kappa (1 - alpha + alpha exp(-beta (kappa - kappa0))), 0 below kappa0."""
    kappa = np.asarray(kappa, dtype=float)
    safe = np.maximum(kappa, model.kappa0)
    decay = np.exp(-model.beta * (safe - model.kappa0))
    omega = 1.0 - model.kappa0 / safe * (1.0 - model.alpha + model.alpha * decay)
    return np.where(kappa > model.kappa0, omega, 0.0)


def damage_derivative(model: MaterialModel, kappa) -> np.ndarray:
    """d omega / d kappa, 0 up to and including kappa0."""
    kappa = np.asarray(kappa, dtype=float)
    safe = np.maximum(kappa, model.kappa0)
    decay = np.exp(-model.beta * (safe - model.kappa0))
    slope = (model.kappa0 / safe ** 2 * (1.0 - model.alpha + model.alpha * decay)
             + model.kappa0 / safe * model.alpha * model.beta * decay)
    return np.where(kappa > model.kappa0, slope, 0.0)


def update_history(history: PointHistory, eps_nl: float) -> PointHistory:
    """
    Kuhn-Tucker update: kappa = max(kappa_old, eps_nl); loading iff eps_nl >= kappa_old.

    Raises:
        ValueError: If eps_nl is negative.
    """
    if eps_nl < 0:
        raise ValueError("eps_nl: nonlocal equivalent strain must be non-negative")
    return PointHistory(max(history.kappa, float(eps_nl)), bool(eps_nl >= history.kappa))


def trial_history(kappa_committed: np.ndarray, eps_nl: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Array form of `update_history`: returns (kappa, loading)."""
    return np.maximum(kappa_committed, eps_nl), eps_nl >= kappa_committed
