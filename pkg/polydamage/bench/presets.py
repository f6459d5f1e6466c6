"""
This module holds ready-to-run benchmark configurations.

Presets:
- notched-beam: Three-point bending of a notched beam, Mazars.
- unnotched-beam: The same beam without notch, larger interaction radius.
- l-shape: L-shaped panel, modified von Mises, crack from the re-entrant corner.
- galvez: Notched beam under an offset load (mixed mode), CMOD monitored.
- double-notched: Double-edge-notched tension specimen, 35 mm gauge monitored.
- plate-hole: Plate-with-hole convergence study.
- patch: Linear patch test on a refined 2x2 grid.

Material constants come from the benchmark descriptions; specimen dimensions,
supports and load points are read from figures and listed per preset under
`assumptions`.

Functions:
- preset_benchmarks: All presets by name.
- render_preset: Writes a preset configuration (and its mesh) to a directory.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from polydamage.fem.mesh import build_mesh
from polydamage.fem.mesh_io import save_mesh
from polydamage.models import MeshRecipe
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)

Entry = Tuple[str, str]


@dataclass(frozen=True)
class Preset:
    """
    Attributes:
        name (str): Preset name.
        command (str): Command the configuration is meant for.
        description (str): One line shown in listings.
        recipe (Optional[MeshRecipe]): Mesh generator, None for studies.
        entries (List[Entry]): Configuration keys after the mesh block.
        assumptions (List[str]): Geometry or parameters not given numerically by the source.
    """

    name: str
    command: str
    description: str
    recipe: Optional[MeshRecipe]
    entries: List[Entry] = field(default_factory=list)
    assumptions: List[str] = field(default_factory=list)

    def text(self) -> str:
        lines = [f"# preset {self.name}: {self.description}", f"# command: polydamage {self.command} {self.name}.cfg"]
        lines += [f"# assumption: {note}" for note in self.assumptions]
        entries = (self.recipe.entries() if self.recipe else []) + self.entries
        section = None
        for key, value in entries:
            head = key.split(".", 1)[0]
            if head != section:
                lines.append("")
                section = head
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def _damage(E: float, nu: float, criterion: str, alpha: float, beta: float, kappa0: float,
            R: float, thickness: float, k: Optional[float] = None) -> List[Entry]:
    entries = [
        ("mesh.thickness", f"{thickness:g}"),
        ("material.E", f"{E:g}"),
        ("material.nu", f"{nu:g}"),
        ("material.plane", "stress"),
        ("material.units", "N-mm-MPa"),
        ("damage.law", "exponential"),
        ("damage.criterion", criterion),
    ]
    if k is not None:
        entries.append(("damage.k", f"{k:g}"))
    entries += [
        ("damage.alpha", f"{alpha:g}"),
        ("damage.beta", f"{beta:g}"),
        ("damage.kappa0", f"{kappa0:.10g}"),
        ("nonlocal.kernel", "truncated_quadratic"),
        ("nonlocal.R", f"{R:g}"),
    ]
    return entries


def _run(steps: int, increment: float, name: str, vtk_every: int = 0) -> List[Entry]:
    return [
        ("solver.steps", str(steps)),
        ("solver.increment", f"{increment:g}"),
        ("solver.tol_rel", "1e-4"),
        ("solver.max_iter", "25"),
        ("solver.bisection", "4"),
        ("output.csv", f"{name}.csv"),
        ("output.vtk", f"{name}_vtk"),
        ("output.vtk_every", str(vtk_every)),
    ]


def _three_point_bending(name: str, notched: bool, R: float) -> Preset:
    cutouts = ((250.0, 0.0, 260.0, 50.0),) if notched else ()
    refine = (((220.0, 0.0, 290.0, 100.0), 2),) if notched else (((205.0, 0.0, 305.0, 100.0), 1),)
    recipe = MeshRecipe("structured", (0.0, 0.0, 510.0, 100.0), 51, 10, cutouts, refine=refine)
    entries = _damage(20000.0, 0.2, "mazars", 0.98, 300.0, 9e-5, R, 100.0)
    entries += [
        ("bc.left.point", "30, 0"), ("bc.left.components", "x, y"),
        ("bc.right.point", "480, 0"), ("bc.right.components", "y"),
        ("bc.load.point", "255, 100"), ("bc.load.components", "y"), ("bc.load.drive", "-1"),
    ]
    entries += _run(100, 0.004, name)
    if notched:
        entries.append(("output.monitor.cmod", "250, 0, 260, 0, x"))
    return Preset(
        name=name,
        command="run",
        description=("notched" if notched else "unnotched") + " three-point bending beam, Mazars criterion",
        recipe=recipe,
        entries=entries,
        assumptions=[
            "beam 510 x 100 mm, span 450 mm between supports at x = 30 and x = 480",
            "notch 10 mm wide and 50 mm deep at mid-span" if notched else "no notch; crack initiates at mid-span",
            "minimum element size 2.5 mm (notched) or 5 mm (unnotched) in the refined band",
        ],
    )


def preset_benchmarks() -> Dict[str, Preset]:
    """All presets, keyed by name."""
    presets = [
        _three_point_bending("notched-beam", True, 4.0),
        _three_point_bending("unnotched-beam", False, 8.0),
    ]

    l_shape = _damage(25850.0, 0.18, "von_mises", 0.98, 350.0, 2.7 / 25850.0, 10.0, 100.0, k=10.0)
    l_shape += [
        ("bc.clamp.set", "bottom"), ("bc.clamp.components", "x, y"),
        ("bc.load.point", "475, 250"), ("bc.load.components", "y"), ("bc.load.drive", "1"),
    ]
    l_shape += _run(100, 0.01, "l-shape")
    presets.append(Preset(
        name="l-shape",
        command="run",
        description="L-shaped panel, modified von Mises (k = 10), kappa0 = ft / E",
        recipe=MeshRecipe(
            "structured", (0.0, 0.0, 500.0, 500.0), 20, 20, ((250.0, 0.0, 500.0, 250.0),),
            refine=(((200.0, 200.0, 325.0, 350.0), 2),),
        ),
        entries=l_shape,
        assumptions=[
            "500 x 500 mm panel with the 250 x 250 mm lower-right quarter removed",
            "bottom edge of the vertical leg clamped; upward load at (475, 250), 25 mm from the free end",
            "minimum element size 6.25 mm around the re-entrant corner",
        ],
    ))

    galvez = _damage(38000.0, 0.18, "von_mises", 0.98, 400.0, 9e-5, 5.0, 50.0, k=57.0 / 3.0)
    galvez += [
        ("bc.left.point", "45, 0"), ("bc.left.components", "x, y"),
        ("bc.right.point", "630, 0"), ("bc.right.components", "y"),
        ("bc.load.point", "495, 150"), ("bc.load.components", "y"), ("bc.load.drive", "-1"),
    ]
    galvez += _run(100, 0.003, "galvez")
    galvez.append(("output.monitor.cmod", "335, 0, 340, 0, x"))
    presets.append(Preset(
        name="galvez",
        command="run",
        description="notched beam under an offset load (mixed mode), CMOD monitored",
        recipe=MeshRecipe(
            "structured", (0.0, 0.0, 675.0, 150.0), 135, 30, ((335.0, 0.0, 340.0, 75.0),),
            refine=(((285.0, 45.0, 435.0, 150.0), 1),),
        ),
        entries=galvez,
        assumptions=[
            "beam 675 x 150 mm, notch 5 mm wide and 75 mm deep at x = 335..340 (half the depth)",
            "minimum element size 2.5 mm in the band between notch and load",
            "supports at x = 45 and x = 630, load at x = 495 on the top face",
            "kappa0 = 9e-5: the printed threshold 0.9 is read as 0.9e-4",
            "k = fc / ft = 57 / 3",
        ],
    ))

    double = _damage(18000.0, 0.2, "von_mises", 0.96, 350.0, 1e-4, 3.0, 50.0, k=10.0)
    double += [
        ("bc.base.set", "bottom"), ("bc.base.components", "x, y"),
        ("bc.pull.set", "top"), ("bc.pull.components", "y"), ("bc.pull.drive", "1"),
    ]
    double += _run(100, 0.0005, "double-notched")
    double.append(("output.monitor.gauge", "30, 55, 30, 90, y"))
    presets.append(Preset(
        name="double-notched",
        command="run",
        description="double-edge-notched tension specimen, 35 mm gauge monitored",
        recipe=MeshRecipe(
            "structured", (0.0, 0.0, 60.0, 145.0), 12, 29,
            ((0.0, 70.0, 5.0, 75.0), (55.0, 70.0, 60.0, 75.0)),
            refine=(((0.0, 50.0, 60.0, 95.0), 1),),
        ),
        entries=double,
        assumptions=[
            "specimen 60 x 145 mm with 5 x 5 mm notches on both edges at mid-height",
            "kappa0 = 1e-4 (not stated numerically)",
            "gauge between (30, 55) and (30, 90)",
        ],
    ))

    presets.append(Preset(
        name="plate-hole",
        command="convergence",
        description="plate with a hole under tension, convergence of L2 and energy errors",
        recipe=None,
        entries=[
            ("material.E", "210000"), ("material.nu", "0.33"), ("material.plane", "stress"),
            ("study.sizes", "8, 16, 32"), ("study.a", "0.4"), ("study.L", "2"), ("study.H", "1"),
            ("study.load", "10"), ("study.csv", "plate-hole.csv"),
        ],
        assumptions=["exact tractions on the outer edges instead of a far-field load"],
    ))

    presets.append(Preset(
        name="patch",
        command="patch",
        description="linear patch test on a 2 x 2 grid with one refined cell",
        recipe=None,
        entries=[
            ("material.E", "1"), ("material.nu", "0.25"),
            ("study.nx", "2"), ("study.refine", "0"),
            ("study.field", "0.001, 0.002, -0.001, -0.002, 0.0015, 0.003"),
        ],
    ))
    return {preset.name: preset for preset in presets}


def render_preset(name: str, out_dir) -> List[Path]:
    """
    Writes `<name>.cfg` and, for mesh-based presets, `<name>.mesh` into out_dir.

    Returns:
        List[Path]: Files written.

    Raises:
        KeyError: If the preset does not exist; the message lists the names.
        OSError: If the directory cannot be written.
    """
    presets = preset_benchmarks()
    if name not in presets:
        raise KeyError(f"unknown preset '{name}'; available: {', '.join(sorted(presets))}")
    preset = presets[name]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for note in preset.assumptions:
        logger.warning("%s: %s", name, note)

    config = out / f"{name}.cfg"
    config.write_text(preset.text(), encoding="utf-8")
    written = [config]
    if preset.recipe is not None:
        mesh_path = out / f"{name}.mesh"
        save_mesh(build_mesh(preset.recipe), mesh_path)
        written.append(mesh_path)
    logger.info("preset %s written to %s", name, out)
    return written
