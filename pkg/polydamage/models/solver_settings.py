"""
This module defines the SolverSettings class holding Newton controls.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class SolverSettings:
    """
    Controls of the incremental Newton solver.

    Attributes:
        tol_rel (float): Residual reduction relative to the first iteration.
        tol_abs (float): Floor relative to the internal/external force scale.
        max_iter (int): Newton iterations allowed per increment.
        bisection (int): Maximum depth of automatic increment halving.
        deterministic (bool): Single-worker neighbour search and fixed ordering.
    """

    tol_rel: float = 1e-4
    tol_abs: float = 1e-10
    max_iter: int = 25
    bisection: int = 4
    deterministic: bool = True

    def __post_init__(self) -> None:
        if not 0 < self.tol_rel < 1:
            raise ValueError("tol_rel: must lie in (0, 1)")
        if not 0 <= self.tol_abs < 1:
            raise ValueError("tol_abs: must lie in [0, 1)")
        if self.max_iter < 1:
            raise ValueError("max_iter: must be at least 1")
        if self.bisection < 0:
            raise ValueError("bisection: depth must be non-negative")

    @property
    def workers(self) -> int:
        """Worker count handed to the neighbour search."""
        return 1 if self.deterministic else -1
