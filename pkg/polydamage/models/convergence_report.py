"""
This module defines the ConvergenceReport class produced by the plate-with-hole study.

Classes:
- ConvergenceRow: Errors of one mesh.
- ConvergenceReport: Rows sorted by mesh size and the fitted log-log slopes.
"""

from dataclasses import dataclass
from typing import List, Tuple


@dataclass(frozen=True)
class ConvergenceRow:
    mesh_id: int
    n_elem: int
    h: float
    l2_rel: float
    h1_rel: float


@dataclass(frozen=True)
class ConvergenceReport:
    """
    Attributes:
        rows (Tuple[ConvergenceRow, ...]): One row per mesh, coarse first.
        l2_slope (float): Fitted slope of log(l2_rel) against log(h).
        h1_slope (float): Fitted slope of log(h1_rel) against log(h).

    Raises:
        ValueError: If an error is not positive.
    """

    rows: Tuple[ConvergenceRow, ...]
    l2_slope: float
    h1_slope: float

    def __post_init__(self) -> None:
        if any(row.l2_rel <= 0 or row.h1_rel <= 0 for row in self.rows):
            raise ValueError("errors: relative errors must be positive")

    def decreasing(self) -> bool:
        """True when both errors fall strictly from each mesh to the next finer one."""
        pairs: List[Tuple[ConvergenceRow, ConvergenceRow]] = list(zip(self.rows, self.rows[1:]))
        return all(b.l2_rel < a.l2_rel and b.h1_rel < a.h1_rel for a, b in pairs)
