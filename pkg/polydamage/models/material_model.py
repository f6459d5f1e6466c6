"""
This module defines the MaterialModel class and its enumerations.

Classes:
- Plane: Plane stress or plane strain reduction.
- Criterion: Equivalent-strain criterion driving damage.
- MaterialModel: Isotropic elasticity plus exponential-softening damage parameters.

Usage:
- Validation happens on construction, the same way field objects validate
  their value; an invalid parameter raises ValueError naming the field.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Union


class Plane(str, Enum):
    STRESS = "stress"
    STRAIN = "strain"


class Criterion(str, Enum):
    MAZARS = "mazars"
    MODIFIED_VON_MISES = "von_mises"


@dataclass(frozen=True)
class MaterialModel:
    """
    Elastic and damage parameters of one material.

    Attributes:
        E (float): Young's modulus (stress units).
        nu (float): Poisson ratio, 0 <= nu < 0.5.
        plane (Plane): Plane stress or plane strain.
        criterion (Criterion): Mazars or modified von Mises.
        k (float): Compressive to tensile strength ratio (von Mises only).
        alpha (float): Residual-damage parameter in (0, 1].
        beta (float): Softening rate (1/strain).
        kappa0 (float): Damage threshold (strain).

    Raises:
        ValueError: If any parameter is outside its admissible range.
    """

    E: float
    nu: float
    plane: Union[Plane, str] = Plane.STRESS
    criterion: Union[Criterion, str] = Criterion.MAZARS
    k: float = 10.0
    alpha: float = 0.98
    beta: float = 300.0
    kappa0: float = 1e-4

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "plane", Plane(self.plane))
        except ValueError as exc:
            raise ValueError(f"plane: expected 'stress' or 'strain', got {self.plane!r}") from exc
        try:
            object.__setattr__(self, "criterion", Criterion(self.criterion))
        except ValueError as exc:
            raise ValueError(f"criterion: expected 'mazars' or 'von_mises', got {self.criterion!r}") from exc

        for name in ("E", "nu", "k", "alpha", "beta", "kappa0"):
            object.__setattr__(self, name, float(getattr(self, name)))

        if not self.E > 0:
            raise ValueError("E: Young's modulus must be positive")
        if not 0 <= self.nu < 0.5:
            raise ValueError("nu: Poisson ratio must satisfy 0 <= nu < 0.5")
        if not self.k > 0:
            raise ValueError("k: strength ratio must be positive")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha: residual-damage parameter must lie in (0, 1]")
        if not self.beta > 0:
            raise ValueError("beta: softening rate must be positive")
        if not self.kappa0 > 0:
            raise ValueError("kappa0: damage threshold must be positive")

    def with_changes(self, **changes) -> "MaterialModel":
        """Returns a validated copy with some parameters replaced."""
        return replace(self, **changes)
