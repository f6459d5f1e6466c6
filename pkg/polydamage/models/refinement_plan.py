"""
This module defines the RefinementPlan class, the input of polytree refinement.

Classes:
- RefinementPlan: Target elements, the number of levels each target is split,
  and whether the 2:1 level balance between edge neighbours is enforced.
"""

from dataclasses import dataclass
from typing import Iterable, Tuple, Union


@dataclass(frozen=True)
class RefinementPlan:
    """
    Which elements to split and how many times.

    Attributes:
        targets (Tuple[int, ...]): Element indices of the mesh the plan is applied to.
        levels (Tuple[int, ...]): Levels per target (same length as targets).
        balance (bool): Keep edge neighbours within one level of each other.

    Raises:
        ValueError: If a level is below 1, a target is negative, or the
            lengths of targets and levels differ.
    """

    targets: Tuple[int, ...] = ()
    levels: Tuple[int, ...] = ()
    balance: bool = True

    def __post_init__(self) -> None:
        targets = tuple(int(t) for t in self.targets)
        levels = tuple(int(level) for level in self.levels)
        if len(levels) != len(targets):
            raise ValueError("levels: one level per target is required")
        if any(level < 1 for level in levels):
            raise ValueError("levels: every level must be >= 1")
        if any(t < 0 for t in targets):
            raise ValueError("targets: element indices must be non-negative")
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "levels", levels)

    @classmethod
    def uniform(cls, targets: Union[int, Iterable[int]], levels: int = 1, balance: bool = True) -> "RefinementPlan":
        """
        Builds a plan refining every target by the same number of levels.

        Args:
            targets: Either an element count (all elements 0..n-1) or explicit indices.
            levels (int): Levels applied to each target.
            balance (bool): Enforce 2:1 balance.
        """
        indices = tuple(range(targets)) if isinstance(targets, int) else tuple(targets)
        return cls(indices, tuple(levels for _ in indices), balance)

    @property
    def is_empty(self) -> bool:
        return not self.targets

    @property
    def depth(self) -> int:
        """Largest level requested by the plan."""
        return max(self.levels, default=0)
