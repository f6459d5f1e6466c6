"""
This module defines the PointHistory class, the irreversible state of one
integration point.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class PointHistory:
    """
    History threshold and loading flag of a material point.

    Attributes:
        kappa (float): Largest nonlocal equivalent strain reached so far.
        loading (bool): True when the current iterate is on the loading branch.
    """

    kappa: float
    loading: bool = False

    def __post_init__(self) -> None:
        if not self.kappa >= 0:
            raise ValueError("kappa: history threshold must be non-negative")
