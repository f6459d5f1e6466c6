"""
This module defines the state objects of a nonlocal damage simulation.

Classes:
- StepRecord: One committed load step (control, reaction, iterations).
- SimState: Displacements, per-point history and cached point fields.
- Snapshot: Field copy taken at a committed step for output.
"""

from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np



@dataclass(frozen=True)
class StepRecord:
    """
    Attributes:
        step (int): 1-based committed step index.
        control (float): Control displacement after the step.
        reaction (float): Drive-weighted reaction on driven dofs.
        iterations (int): Newton iterations spent (all substeps).
        max_omega (float): Largest damage over all integration points.
        monitors (Dict[str, float]): Monitored relative displacements.
    """

    step: int
    control: float
    reaction: float
    iterations: int
    max_omega: float
    monitors: Dict[str, float] = field(default_factory=dict)


@dataclass
class SimState:
    """
    Solution state: committed, or a Newton trial built from a committed one.

    Attributes:
        d (np.ndarray): Nodal displacements, dof 2i -> u_x, 2i + 1 -> u_y.
        kappa (np.ndarray): History threshold per integration point.
        loading (np.ndarray): Loading flag per integration point.
        eps_eq (np.ndarray): Local equivalent strain per point.
        eps_nl (np.ndarray): Nonlocal equivalent strain per point.
        omega (np.ndarray): Damage per point, consistent with kappa.
        step (int): Number of committed steps.
        control (float): Current control value.
        records (List[StepRecord]): Committed step records.
    """

    d: np.ndarray
    kappa: np.ndarray
    loading: np.ndarray
    eps_eq: np.ndarray
    eps_nl: np.ndarray
    omega: np.ndarray
    step: int = 0
    control: float = 0.0
    records: List[StepRecord] = field(default_factory=list)

    @property
    def n_points(self) -> int:
        return len(self.kappa)


@dataclass(frozen=True)
class Snapshot:
    """
    Fields of a committed step.

    Attributes:
        step (int): Committed step index.
        control (float): Control value.
        d (np.ndarray): Nodal displacements.
        omega (np.ndarray): Damage per integration point.
        eps_nl (np.ndarray): Nonlocal equivalent strain per integration point.
        gp_element (np.ndarray): Owning element of each integration point.
    """

    step: int
    control: float
    d: np.ndarray
    omega: np.ndarray
    eps_nl: np.ndarray
    gp_element: np.ndarray

    def cell_max(self, values: np.ndarray, n_elements: int) -> np.ndarray:
        out = np.full(n_elements, -np.inf)
        np.maximum.at(out, self.gp_element, values)
        return out

    def cell_mean(self, values: np.ndarray, n_elements: int) -> np.ndarray:
        counts = np.bincount(self.gp_element, minlength=n_elements)
        return np.bincount(self.gp_element, weights=values, minlength=n_elements) / np.maximum(counts, 1)
