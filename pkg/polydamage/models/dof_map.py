"""
This module defines the DofMap class, the partition of nodal degrees of
freedom into free and prescribed ones.

Classes:
- DirichletCondition: Nodes, components, fixed value and drive factor of one
  boundary block.
- DofMap: Global dof numbering (2i -> u_x, 2i + 1 -> u_y) and prescribed data.

Usage:
- Prescribed values at control value lambda are `fixed + lambda * drive`.
- The reaction of a run is the sum of residuals on driven dofs weighted by
  their drive factor.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

COMPONENTS = {"x": 0, "y": 1}


@dataclass(frozen=True)
class DirichletCondition:
    """
    One prescribed-displacement block.

    Attributes:
        nodes (Tuple[int, ...]): Constrained node indices.
        components (Tuple[str, ...]): Any of "x" and "y".
        value (float): Fixed part of the prescribed displacement.
        drive (float): Multiplier of the control value.
    """

    nodes: Tuple[int, ...]
    components: Tuple[str, ...] = ("x", "y")
    value: float = 0.0
    drive: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(int(i) for i in self.nodes))
        object.__setattr__(self, "components", tuple(str(c).strip().lower() for c in self.components))
        if not self.nodes:
            raise ValueError("nodes: a boundary condition needs at least one node")
        if not self.components or any(c not in COMPONENTS for c in self.components):
            raise ValueError("components: expected 'x', 'y' or 'x, y'")
        if not (np.isfinite(self.value) and np.isfinite(self.drive)):
            raise ValueError("value: prescribed values must be finite")

    def dofs(self) -> Iterable[int]:
        for node in self.nodes:
            for component in self.components:
                yield 2 * node + COMPONENTS[component]


class DofMap:
    """
    Free and constrained dofs of a mesh with n nodes.

    Attributes:
        n_dofs (int): 2 * n_nodes.
        constrained (np.ndarray): Sorted constrained dof indices.
        fixed (np.ndarray): Fixed part of the prescribed values.
        drive (np.ndarray): Drive factor of the prescribed values.
        free (np.ndarray): Sorted remaining dofs.

    Raises:
        ValueError: If two conditions prescribe different data on the same dof.
    """

    def __init__(self, n_nodes: int, conditions: Sequence[DirichletCondition] = ()) -> None:
        self.n_nodes = int(n_nodes)
        self.n_dofs = 2 * self.n_nodes
        prescribed: Dict[int, Tuple[float, float]] = {}
        for condition in conditions:
            for dof in condition.dofs():
                if dof >= self.n_dofs:
                    raise ValueError(f"nodes: dof {dof} is outside the mesh")
                data = (float(condition.value), float(condition.drive))
                if prescribed.setdefault(dof, data) != data:
                    raise ValueError(f"conditions: dof {dof} receives two different prescribed values")

        self.constrained = np.array(sorted(prescribed), dtype=int)
        self.fixed = np.array([prescribed[d][0] for d in self.constrained], dtype=float)
        self.drive = np.array([prescribed[d][1] for d in self.constrained], dtype=float)
        mask = np.ones(self.n_dofs, dtype=bool)
        mask[self.constrained] = False
        self.free = np.flatnonzero(mask)

#------------------------------------------------------------------

    @classmethod
    def from_values(cls, n_nodes: int, dofs: Sequence[int], values: Sequence[float]) -> "DofMap":
        """Builds a map whose prescribed values are given per dof (no drive)."""
        conditions = [
            DirichletCondition((dof // 2,), ("x" if dof % 2 == 0 else "y",), float(value))
            for dof, value in zip(dofs, values)
        ]
        return cls(n_nodes, conditions)

    def prescribed(self, control: float = 0.0) -> np.ndarray:
        """Prescribed values of the constrained dofs at the given control value."""
        return self.fixed + control * self.drive

    @property
    def driven(self) -> np.ndarray:
        """Mask over `constrained` selecting dofs with a non-zero drive factor."""
        return self.drive != 0.0

    @property
    def driven_dofs(self) -> np.ndarray:
        return self.constrained[self.driven]

    def reaction(self, residual: np.ndarray) -> float:
        """Drive-weighted sum of the residual on driven dofs."""
        return float(np.dot(residual[self.constrained[self.driven]], self.drive[self.driven]))
