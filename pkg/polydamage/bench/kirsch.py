"""
This module provides the Kirsch solution of an infinite plate with a circular
hole under uniaxial tension along x.

Classes:
- ExactKirschField: Stresses, strains and displacements at arbitrary points.

Functions:
- kirsch_exact: Polar stresses and Cartesian displacements at (r, phi), r >= a.

Polar stresses:
    s_rr = s/2 (1 - a^2/r^2) + s/2 (1 - 4a^2/r^2 + 3a^4/r^4) cos 2phi
    s_pp = s/2 (1 + a^2/r^2) - s/2 (1 + 3a^4/r^4) cos 2phi
    s_rp = -s/2 (1 + 2a^2/r^2 - 3a^4/r^4) sin 2phi

Displacements, with mu the shear modulus and k_m = (3 - nu)/(1 + nu) in plane
stress or 3 - 4 nu in plane strain:
    u_x = s a/(8 mu) [ (r/a)(k_m + 1) cos phi + 2(a/r)((1 + k_m) cos phi + cos 3phi) - 2(a/r)^3 cos 3phi ]
    u_y = s a/(8 mu) [ (r/a)(k_m - 3) sin phi + 2(a/r)((1 - k_m) sin phi + sin 3phi) - 2(a/r)^3 sin 3phi ]

The field is smooth for any r > 0, so point evaluators accept r < a; this is
used on the chords that approximate the hole.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from polydamage.fem.material import elastic_matrix
from polydamage.models import MaterialModel, Plane


@dataclass(frozen=True)
class ExactKirschField:
    """
    Attributes:
        sigma (float): Far-field tension along x.
        a (float): Hole radius.
        model (MaterialModel): Elastic constants and plane condition.
    """

    sigma: float
    a: float
    model: MaterialModel

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError("a: hole radius must be positive")

    def polar_stress(self, r, phi) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        s, q2, q4 = self.sigma, (self.a / r) ** 2, (self.a / r) ** 4
        c2, s2 = np.cos(2.0 * phi), np.sin(2.0 * phi)
        s_rr = 0.5 * s * (1.0 - q2) + 0.5 * s * (1.0 - 4.0 * q2 + 3.0 * q4) * c2
        s_pp = 0.5 * s * (1.0 + q2) - 0.5 * s * (1.0 + 3.0 * q4) * c2
        s_rp = -0.5 * s * (1.0 + 2.0 * q2 - 3.0 * q4) * s2
        return s_rr, s_pp, s_rp

    def polar_displacement(self, r, phi) -> Tuple[np.ndarray, np.ndarray]:
        """Cartesian (u_x, u_y) at polar coordinates (r, phi)."""
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        nu = self.model.nu
        mu = self.model.E / (2.0 * (1.0 + nu))
        km = (3.0 - nu) / (1.0 + nu) if self.model.plane is Plane.STRESS else 3.0 - 4.0 * nu
        q, q3 = self.a / r, (self.a / r) ** 3
        factor = self.sigma * self.a / (8.0 * mu)
        ux = factor * ((r / self.a) * (km + 1.0) * np.cos(phi)
                       + 2.0 * q * ((1.0 + km) * np.cos(phi) + np.cos(3.0 * phi))
                       - 2.0 * q3 * np.cos(3.0 * phi))
        uy = factor * ((r / self.a) * (km - 3.0) * np.sin(phi)
                       + 2.0 * q * ((1.0 - km) * np.sin(phi) + np.sin(3.0 * phi))
                       - 2.0 * q3 * np.sin(3.0 * phi))
        return ux, uy

    def stress(self, points: np.ndarray) -> np.ndarray:
        """(k, 3) Cartesian stresses (xx, yy, xy) at points (k, 2)."""
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        r = np.hypot(points[:, 0], points[:, 1])
        phi = np.arctan2(points[:, 1], points[:, 0])
        s_rr, s_pp, s_rp = self.polar_stress(r, phi)
        c, s = np.cos(phi), np.sin(phi)
        sxx = s_rr * c * c + s_pp * s * s - 2.0 * s_rp * s * c
        syy = s_rr * s * s + s_pp * c * c + 2.0 * s_rp * s * c
        sxy = (s_rr - s_pp) * s * c + s_rp * (c * c - s * s)
        return np.column_stack((sxx, syy, sxy))

    def strain(self, points: np.ndarray) -> np.ndarray:
        """(k, 3) strains (xx, yy, engineering xy) from the stresses."""
        return np.linalg.solve(elastic_matrix(self.model), self.stress(points).T).T

    def displacement(self, points: np.ndarray) -> np.ndarray:
        """(k, 2) displacements at points (k, 2)."""
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        r = np.hypot(points[:, 0], points[:, 1])
        phi = np.arctan2(points[:, 1], points[:, 0])
        return np.column_stack(self.polar_displacement(r, phi))

    def traction(self, points: np.ndarray, normal: np.ndarray) -> np.ndarray:
        """(k, 2) tractions sigma . n for a unit normal."""
        sigma = self.stress(points)
        nx, ny = normal
        return np.column_stack((sigma[:, 0] * nx + sigma[:, 2] * ny, sigma[:, 2] * nx + sigma[:, 1] * ny))


def kirsch_exact(field: ExactKirschField, r: float, phi: float):
    """
    Exact fields at polar coordinates outside the hole.

    Returns:
        Tuple: ((s_rr, s_pp, s_rp), (u_x, u_y)).

    Raises:
        ValueError: If r < a.
    """
    if r < field.a:
        raise ValueError(f"r: {r:g} lies inside the hole (a = {field.a:g})")
    stresses = tuple(float(v) for v in field.polar_stress(r, phi))
    displacements = tuple(float(v) for v in field.polar_displacement(r, phi))
    return stresses, displacements
