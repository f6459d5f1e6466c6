"""
This module defines the MeshRecipe class, a generator description that can be
written to a configuration file and rebuilt into the same mesh.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

Box = Tuple[float, float, float, float]


@dataclass(frozen=True)
class MeshRecipe:
    """
    Attributes:
        generator (str): "structured", "plate_hole" or "file".
        domain (Box): Structured grid rectangle (x0, y0, x1, y1).
        nx, ny (int): Structured grid cell counts.
        cutouts (Tuple[Box, ...]): Structured grid cutouts.
        a, L, H (float): Plate-with-hole radius and half sizes.
        n_r, n_t (int): Plate-with-hole cell counts.
        path (Optional[str]): Mesh file for the "file" generator.
        refine (Tuple[Tuple[Box, int], ...]): Boxes refined in order, with levels.
        balance (bool): 2:1 balance during refinement.
    """

    generator: str = "structured"
    domain: Box = (0.0, 0.0, 1.0, 1.0)
    nx: int = 1
    ny: int = 1
    cutouts: Tuple[Box, ...] = ()
    a: float = 0.4
    L: float = 2.0
    H: float = 1.0
    n_r: int = 8
    n_t: int = 8
    path: Optional[str] = None
    refine: Tuple[Tuple[Box, int], ...] = ()
    balance: bool = True

    def __post_init__(self) -> None:
        if self.generator not in ("structured", "plate_hole", "file"):
            raise ValueError(f"generator: expected 'structured', 'plate_hole' or 'file', got {self.generator!r}")
        if self.generator == "file" and not self.path:
            raise ValueError("file: a mesh path is required")

    def describe(self) -> str:
        if self.generator == "file":
            return f"file {self.path}"
        if self.generator == "plate_hole":
            return f"plate_hole a={self.a:g} L={self.L:g} H={self.H:g} n_r={self.n_r} n_t={self.n_t}"
        return f"structured {self.nx}x{self.ny} over {self.domain} with {len(self.cutouts)} cutout(s)"

    def entries(self) -> List[Tuple[str, str]]:
        """`mesh.*` configuration entries reproducing this recipe."""
        def numbers(values) -> str:
            return ", ".join(f"{float(v):g}" for v in values)

        if self.generator == "file":
            items = [("mesh.file", str(self.path))]
        elif self.generator == "plate_hole":
            items = [
                ("mesh.generator", "plate_hole"),
                ("mesh.a", f"{self.a:g}"), ("mesh.L", f"{self.L:g}"), ("mesh.H", f"{self.H:g}"),
                ("mesh.n_r", str(self.n_r)), ("mesh.n_t", str(self.n_t)),
            ]
        else:
            items = [
                ("mesh.generator", "structured"),
                ("mesh.domain", numbers(self.domain)),
                ("mesh.nx", str(self.nx)), ("mesh.ny", str(self.ny)),
            ]
            items += [(f"mesh.cutout.c{k}", numbers(box)) for k, box in enumerate(self.cutouts)]
        items += [(f"mesh.refine.r{k}", numbers(box) + f", {levels}") for k, (box, levels) in enumerate(self.refine)]
        items.append(("mesh.balance", "true" if self.balance else "false"))
        return items
