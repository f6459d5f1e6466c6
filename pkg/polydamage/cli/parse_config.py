"""
This module parses run configuration files.

A configuration is a line-oriented text file of `section.key = value` entries.
`#` starts a comment, blank lines are ignored. Keys are strict: unknown and
duplicate keys are errors. Every problem found is collected and reported
together in one ConfigError.

Sections:
- mesh: `file` or `generator` (structured | plate_hole) with `domain`, `nx`,
  `ny`, `cutout.<name>`, or `a`, `L`, `H`, `n_r`, `n_t`; `refine.<name> =
  x0, y0, x1, y1, levels`; `balance`, `rule`, `thickness`.
- material: `E`, `nu`, `plane`, `units`.
- damage: `law`, `criterion`, `k`, `alpha`, `beta`, `kappa0`.
- nonlocal: `kernel`, `R`, `lc`, `ratio` (a number or `sqrt(n)`).
- solver: `steps`, `increment`, `tol_rel`, `tol_abs`, `max_iter`, `bisection`,
  `deterministic`.
- bc.<label>: `set` or `point`, `components`, `value`, `drive`.
- traction.<label>: `set` (an edge set), `value`, `drive`.
- output: `csv`, `vtk`, `vtk_every`, `table`, `mesh`,
  `monitor.<name> = x1, y1, x2, y2, component`.
- study: `sizes`, `a`, `L`, `H`, `load`, `csv`, `workers`, `nx`, `refine`, `field`.

Relative paths (mesh file and outputs) are resolved against the directory of
the configuration file.

Functions:
- read_entries: Splits a file into ordered (key, value) entries.
- parse_config: Validates a file for a command and returns a RunConfig.
"""

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from polydamage.errors import ConfigError, MeshError
from polydamage.fem.mesh import build_mesh
from polydamage.models import (
    BoundaryBlock,
    KernelSpec,
    MaterialModel,
    MeshRecipe,
    MonitorSpec,
    OutputBlock,
    PolyMesh,
    RunConfig,
    SolverSettings,
    StudyBlock,
    TractionBlock,
)
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

COMMANDS = ("run", "elastic", "convergence", "patch")

KEYS = {
    "mesh.file", "mesh.generator", "mesh.domain", "mesh.nx", "mesh.ny",
    "mesh.a", "mesh.L", "mesh.H", "mesh.n_r", "mesh.n_t",
    "mesh.rule", "mesh.thickness", "mesh.balance",
    "material.E", "material.nu", "material.plane", "material.units",
    "damage.law", "damage.criterion", "damage.k", "damage.alpha", "damage.beta", "damage.kappa0",
    "nonlocal.kernel", "nonlocal.R", "nonlocal.lc", "nonlocal.ratio",
    "solver.steps", "solver.increment", "solver.tol_rel", "solver.tol_abs",
    "solver.max_iter", "solver.bisection", "solver.deterministic",
    "output.csv", "output.vtk", "output.vtk_every", "output.table", "output.mesh",
    "study.sizes", "study.a", "study.L", "study.H", "study.load", "study.csv",
    "study.workers", "study.nx", "study.refine", "study.field",
}

LABEL = r"[A-Za-z0-9_-]+"
PATTERNS = [
    re.compile(rf"mesh\.cutout\.{LABEL}$"),
    re.compile(rf"mesh\.refine\.{LABEL}$"),
    re.compile(rf"bc\.({LABEL})\.(set|point|components|value|drive)$"),
    re.compile(rf"traction\.({LABEL})\.(set|value|drive)$"),
    re.compile(rf"output\.monitor\.{LABEL}$"),
]

SQRT = re.compile(r"sqrt\(\s*([^)]+?)\s*\)$")

# Section of each MaterialModel field, used to name fields in diagnostics.
MATERIAL_SECTIONS = {
    "E": "material", "nu": "material", "plane": "material",
    "criterion": "damage", "k": "damage", "alpha": "damage", "beta": "damage", "kappa0": "damage",
}


def _known(key: str) -> bool:
    return key in KEYS or any(pattern.match(key) for pattern in PATTERNS)


def read_entries(path: PathLike) -> Tuple[Dict[str, Tuple[int, str]], List[str]]:
    """
    Reads the entries of a configuration file.

    Returns:
        Tuple: Ordered mapping key -> (line number, raw value) and the list of
        syntax problems (malformed lines, duplicate and unknown keys).

    Raises:
        OSError: If the file cannot be read.
    """
    entries: Dict[str, Tuple[int, str]] = {}
    problems: List[str] = []
    with open(path, "r", encoding="utf-8") as file:
        for number, line in enumerate(file, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                problems.append(f"line {number}: expected 'section.key = value', got {text!r}")
                continue
            key, value = (part.strip() for part in text.split("=", 1))
            if not _known(key):
                problems.append(f"line {number}: unknown key '{key}'")
            elif key in entries:
                problems.append(f"line {number}: duplicate key '{key}' (first set on line {entries[key][0]})")
            elif not value:
                problems.append(f"line {number}: '{key}' has no value")
            else:
                entries[key] = (number, value)
    return entries, problems


@dataclass
class _Entries:
    """Typed access to raw entries; conversion failures become problems."""

    values: Dict[str, Tuple[int, str]]
    problems: List[str] = field(default_factory=list)

    def has(self, key: str) -> bool:
        return key in self.values

    def raw(self, key: str) -> Optional[str]:
        return self.values[key][1] if key in self.values else None

    def keys(self, prefix: str) -> List[str]:
        return [key for key in self.values if key.startswith(prefix)]

    def labels(self, section: str) -> List[str]:
        """Distinct `<section>.<label>.*` labels in file order."""
        labels: List[str] = []
        for key in self.keys(section + "."):
            label = key.split(".")[1]
            if label not in labels:
                labels.append(label)
        return labels

    def problem(self, message: str) -> None:
        self.problems.append(message)

    def _missing(self, key: str, required: bool):
        if required:
            self.problem(f"{key}: required")
        return None

    def text(self, key: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
        if key not in self.values:
            return self._missing(key, required) or default
        return self.raw(key)

    def number(self, key: str, default: Optional[float] = None, required: bool = False) -> Optional[float]:
        if key not in self.values:
            return self._missing(key, required) or default
        raw = self.raw(key)
        try:
            value = float(raw)
        except ValueError:
            self.problem(f"{key}: expected a number, got {raw!r}")
            return default
        if not math.isfinite(value):
            self.problem(f"{key}: must be finite, got {raw!r}")
            return default
        return value

    def integer(self, key: str, default: Optional[int] = None, required: bool = False,
                minimum: Optional[int] = None) -> Optional[int]:
        if key not in self.values:
            return self._missing(key, required) or default
        raw = self.raw(key)
        try:
            value = int(raw)
        except ValueError:
            self.problem(f"{key}: expected an integer, got {raw!r}")
            return default
        if minimum is not None and value < minimum:
            self.problem(f"{key}: must be at least {minimum}, got {value}")
            return default
        return value

    def boolean(self, key: str, default: bool) -> bool:
        if key not in self.values:
            return default
        raw = self.raw(key).lower()
        if raw in ("true", "yes", "on", "1"):
            return True
        if raw in ("false", "no", "off", "0"):
            return False
        self.problem(f"{key}: expected true or false, got {raw!r}")
        return default

    def numbers(self, key: str, count: Optional[int] = None, default=None,
                required: bool = False) -> Optional[Tuple[float, ...]]:
        """Comma-separated numbers, optionally of a fixed count."""
        if key not in self.values:
            return self._missing(key, required) or default
        raw = self.raw(key)
        try:
            values = tuple(float(part) for part in raw.split(","))
        except ValueError:
            self.problem(f"{key}: expected comma-separated numbers, got {raw!r}")
            return default
        if count is not None and len(values) != count:
            self.problem(f"{key}: expected {count} numbers, got {len(values)}")
            return default
        if not all(math.isfinite(v) for v in values):
            self.problem(f"{key}: numbers must be finite")
            return default
        return values

    def integers(self, key: str, default=None) -> Optional[Tuple[int, ...]]:
        if key not in self.values:
            return default
        raw = self.raw(key)
        try:
            return tuple(int(part) for part in raw.split(","))
        except ValueError:
            self.problem(f"{key}: expected comma-separated integers, got {raw!r}")
            return default

    def ratio(self, key: str, default: float) -> float:
        """A positive number, or `sqrt(x)`."""
        raw = self.raw(key)
        if raw is None:
            return default
        match = SQRT.match(raw)
        try:
            value = math.sqrt(float(match.group(1))) if match else float(raw)
        except ValueError:
            self.problem(f"{key}: expected a number or sqrt(x), got {raw!r}")
            return default
        return value

    def components(self, key: str) -> Tuple[str, ...]:
        raw = self.text(key, "x, y")
        parts = tuple(part.strip().lower() for part in raw.split(","))
        if not parts or any(part not in ("x", "y") for part in parts) or len(set(parts)) != len(parts):
            self.problem(f"{key}: expected 'x', 'y' or 'x, y', got {raw!r}")
            return ("x", "y")
        return parts


def _resolve(base: Path, value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    path = Path(value)
    return str(path if path.is_absolute() else base / path)


#------------------------------------------------------------------
# Blocks
#------------------------------------------------------------------


def _recipe(entries: _Entries, base: Path) -> Optional[MeshRecipe]:
    has_file, has_generator = entries.has("mesh.file"), entries.has("mesh.generator")
    if has_file and has_generator:
        entries.problem("mesh: give either mesh.file or mesh.generator, not both")
        return None
    if not has_file and not has_generator:
        return None

    refine = []
    for key in entries.keys("mesh.refine."):
        values = entries.numbers(key, count=5)
        if values is None:
            continue
        levels = values[4]
        if levels != int(levels) or levels < 1:
            entries.problem(f"{key}: levels must be a positive integer, got {levels:g}")
            continue
        refine.append((tuple(values[:4]), int(levels)))
    balance = entries.boolean("mesh.balance", True)

    try:
        if has_file:
            return MeshRecipe("file", path=_resolve(base, entries.raw("mesh.file")), refine=tuple(refine), balance=balance)
        generator = entries.raw("mesh.generator")
        if generator == "plate_hole":
            return MeshRecipe(
                "plate_hole",
                a=entries.number("mesh.a", 0.4),
                L=entries.number("mesh.L", 2.0),
                H=entries.number("mesh.H", 1.0),
                n_r=entries.integer("mesh.n_r", 8, minimum=2),
                n_t=entries.integer("mesh.n_t", 8, minimum=2),
                refine=tuple(refine),
                balance=balance,
            )
        if generator == "structured":
            domain = entries.numbers("mesh.domain", count=4, required=True)
            nx = entries.integer("mesh.nx", required=True, minimum=1)
            ny = entries.integer("mesh.ny", required=True, minimum=1)
            cutouts = [entries.numbers(key, count=4) for key in entries.keys("mesh.cutout.")]
            if domain is None or nx is None or ny is None or None in cutouts:
                return None
            return MeshRecipe("structured", domain, nx, ny, tuple(cutouts), refine=tuple(refine), balance=balance)
        entries.problem(f"mesh.generator: expected 'structured' or 'plate_hole', got {generator!r}")
    except ValueError as exc:
        entries.problem(f"mesh.{exc}")
    return None


def _material(entries: _Entries) -> Optional[MaterialModel]:
    E = entries.number("material.E", required=True)
    nu = entries.number("material.nu", required=True)
    law = entries.text("damage.law", "exponential")
    if law != "exponential":
        entries.problem(f"damage.law: only 'exponential' is available, got {law!r}")
    parameters = dict(
        plane=entries.text("material.plane", "stress"),
        criterion=entries.text("damage.criterion", "mazars"),
        k=entries.number("damage.k", 10.0),
        alpha=entries.number("damage.alpha", 0.98),
        beta=entries.number("damage.beta", 300.0),
        kappa0=entries.number("damage.kappa0", 1e-4),
    )
    if E is None or nu is None:
        return None
    try:
        return MaterialModel(E, nu, **parameters)
    except ValueError as exc:
        name = str(exc).split(":", 1)[0]
        entries.problem(f"{MATERIAL_SECTIONS.get(name, 'material')}.{exc}")
        return None


def _kernel(entries: _Entries, required: bool) -> Optional[KernelSpec]:
    R = entries.number("nonlocal.R", required=required)
    if R is None:
        return None
    kind = entries.text("nonlocal.kernel", "truncated_quadratic")
    if entries.has("nonlocal.lc") and entries.has("nonlocal.ratio"):
        entries.problem("nonlocal: give either nonlocal.lc or nonlocal.ratio, not both")
        return None
    try:
        if entries.has("nonlocal.lc"):
            return KernelSpec(kind, R, entries.number("nonlocal.lc"))
        return KernelSpec.from_ratio(kind, R, entries.ratio("nonlocal.ratio", math.sqrt(7.0)))
    except ValueError as exc:
        entries.problem(f"nonlocal.{exc}")
        return None


def _settings(entries: _Entries) -> SolverSettings:
    try:
        return SolverSettings(
            tol_rel=entries.number("solver.tol_rel", 1e-4),
            tol_abs=entries.number("solver.tol_abs", 1e-10),
            max_iter=entries.integer("solver.max_iter", 25),
            bisection=entries.integer("solver.bisection", 4),
            deterministic=entries.boolean("solver.deterministic", True),
        )
    except ValueError as exc:
        entries.problem(f"solver.{exc}")
        return SolverSettings()


def _boundaries(entries: _Entries, mesh: Optional[PolyMesh]) -> List[BoundaryBlock]:
    blocks = []
    for label in entries.labels("bc"):
        prefix = f"bc.{label}"
        if entries.has(f"{prefix}.set") == entries.has(f"{prefix}.point"):
            entries.problem(f"{prefix}: give exactly one of {prefix}.set and {prefix}.point")
            continue
        set_name = entries.text(f"{prefix}.set")
        point = entries.numbers(f"{prefix}.point", count=2)
        if set_name is None and point is None:
            continue
        block = BoundaryBlock(
            label=label,
            set_name=set_name,
            point=point,
            components=entries.components(f"{prefix}.components"),
            value=entries.number(f"{prefix}.value", 0.0),
            drive=entries.number(f"{prefix}.drive", 0.0),
        )
        if mesh is not None:
            try:
                block.nodes(mesh)
            except KeyError as exc:
                entries.problem(f"{prefix}.set: {exc.args[0]}")
                continue
            except ValueError as exc:
                entries.problem(str(exc))
                continue
        blocks.append(block)
    return blocks


def _tractions(entries: _Entries, mesh: Optional[PolyMesh]) -> List[TractionBlock]:
    blocks = []
    for label in entries.labels("traction"):
        prefix = f"traction.{label}"
        set_name = entries.text(f"{prefix}.set", required=True)
        value = entries.numbers(f"{prefix}.value", count=2, default=(0.0, 0.0))
        drive = entries.numbers(f"{prefix}.drive", count=2, default=(0.0, 0.0))
        if set_name is None:
            continue
        if mesh is not None and set_name not in mesh.edge_sets:
            available = ", ".join(sorted(mesh.edge_sets)) or "none"
            entries.problem(f"{prefix}.set: unknown edge set '{set_name}'; available: {available}")
            continue
        blocks.append(TractionBlock(label, set_name, value, drive))
    return blocks


def _output(entries: _Entries, base: Path, mesh: Optional[PolyMesh]) -> OutputBlock:
    monitors = []
    for key in entries.keys("output.monitor."):
        name = key.split(".", 2)[2]
        parts = [part.strip() for part in entries.raw(key).split(",")]
        try:
            if len(parts) != 5 or parts[4].lower() not in ("x", "y"):
                raise ValueError
            x1, y1, x2, y2 = (float(part) for part in parts[:4])
        except ValueError:
            entries.problem(f"{key}: expected 'x1, y1, x2, y2, component' with component x or y")
            continue
        monitor = MonitorSpec(name, (x1, y1), (x2, y2), parts[4].lower())
        if mesh is not None:
            far = [p for p in (monitor.first, monitor.second) if mesh.nearest_node(p)[1] > 1e-6 * mesh.diameter()]
            if far:
                entries.problem(f"{key}: no node at {far[0]}")
                continue
        monitors.append(monitor)
    return OutputBlock(
        csv=_resolve(base, entries.text("output.csv")),
        vtk=_resolve(base, entries.text("output.vtk")),
        vtk_every=entries.integer("output.vtk_every", 0, minimum=0),
        table=_resolve(base, entries.text("output.table")),
        mesh=_resolve(base, entries.text("output.mesh")),
        monitors=tuple(monitors),
    )


def _study(entries: _Entries, base: Path) -> StudyBlock:
    defaults = StudyBlock()
    sizes = entries.integers("study.sizes", defaults.sizes)
    repeated = sorted({n for n in sizes if sizes.count(n) > 1})
    invalid = None
    if len(sizes) < 3:
        invalid = f"at least three sizes are needed, got {len(sizes)}"
    elif min(sizes) < 2:
        invalid = f"every size must be 2 or more, got {min(sizes)}"
    elif repeated:
        invalid = f"sizes must be distinct, {repeated[0]} is repeated"
    if invalid:
        entries.problem(f"study.sizes: {invalid}")
        sizes = defaults.sizes
    a = entries.number("study.a", defaults.a)
    L = entries.number("study.L", defaults.L)
    H = entries.number("study.H", defaults.H)
    if not 0 < a < min(L, H):
        entries.problem("study.a: hole radius must satisfy 0 < a < min(L, H)")
    field_values = entries.numbers("study.field", count=6, default=defaults.field)
    return StudyBlock(
        sizes=tuple(sizes),
        a=a,
        L=L,
        H=H,
        load=entries.number("study.load", defaults.load),
        csv=_resolve(base, entries.text("study.csv")),
        workers=entries.integer("study.workers", defaults.workers, minimum=1),
        nx=entries.integer("study.nx", defaults.nx, minimum=1),
        refine=entries.integers("study.refine", defaults.refine),
        field=field_values,
    )


#------------------------------------------------------------------
# Entry point
#------------------------------------------------------------------


def parse_config(path: PathLike, command: str = "run") -> RunConfig:
    """
    Parses and validates a configuration for one command.

    Args:
        path (PathLike): Configuration file.
        command (str): "run", "elastic", "convergence" or "patch"; decides
            which keys are required.

    Returns:
        RunConfig: The validated configuration with the mesh built.

    Raises:
        ConfigError: Listing every problem found.
        OSError: If the file cannot be read.
    """
    if command not in COMMANDS:
        raise ValueError(f"command: expected one of {', '.join(COMMANDS)}, got {command!r}")
    path = Path(path)
    base = path.parent
    values, problems = read_entries(path)
    entries = _Entries(values, problems)
    needs_mesh = command in ("run", "elastic")

    recipe = _recipe(entries, base)
    mesh = None
    if recipe is None and needs_mesh and not entries.has("mesh.file") and not entries.has("mesh.generator"):
        entries.problem("mesh: mesh.file or mesh.generator is required")
    if recipe is not None and needs_mesh:
        try:
            mesh = build_mesh(recipe)
        except MeshError as exc:
            entries.problem(f"mesh: {exc}")
        except OSError as exc:
            entries.problem(f"mesh.file: cannot read {recipe.path}: {exc.strerror or exc}")

    rule = entries.integer("mesh.rule", 3)
    if rule not in (1, 3):
        entries.problem(f"mesh.rule: expected 1 or 3, got {rule}")
    thickness = entries.number("mesh.thickness", 1.0)
    if not thickness > 0:
        entries.problem("mesh.thickness: must be positive")

    material = _material(entries)
    if command == "run":
        for key in ("damage.kappa0", "damage.beta"):
            if not entries.has(key):
                entries.problem(f"{key}: required")
    kernel = _kernel(entries, required=command == "run")
    settings = _settings(entries)

    steps = entries.integer("solver.steps", 0, required=command == "run", minimum=1)
    increment = entries.number("solver.increment", 0.0, required=command == "run")
    if command == "run" and entries.has("solver.increment") and increment == 0.0:
        entries.problem("solver.increment: must be non-zero")

    boundaries = _boundaries(entries, mesh) if needs_mesh else []
    tractions = _tractions(entries, mesh) if needs_mesh else []
    driven = [block.label for block in boundaries if block.driven]
    if command == "run" and len(driven) != 1:
        entries.problem(f"bc: exactly one block needs a non-zero drive, found {len(driven)}")
    if command == "elastic" and not entries.labels("bc"):
        entries.problem("bc: at least one boundary block is required")

    output = _output(entries, base, mesh)
    study = _study(entries, base) if command in ("convergence", "patch") else StudyBlock()

    if entries.problems:
        raise ConfigError(entries.problems, str(path))

    config = RunConfig(
        source=str(path),
        command=command,
        mesh=mesh,
        mesh_source=recipe.describe() if recipe else "",
        rule=rule,
        thickness=thickness,
        units=entries.text("material.units", "N-mm-MPa"),
        material=material,
        kernel=kernel,
        settings=settings,
        steps=steps,
        increment=increment,
        boundaries=boundaries,
        tractions=tractions,
        output=output,
        study=study,
    )
    if mesh is not None:
        try:
            config.dof_map()
        except ValueError as exc:
            raise ConfigError([f"bc: {exc}"], str(path)) from None
    logger.debug("parsed %s for %s: %d keys", path, command, len(values))
    return config
