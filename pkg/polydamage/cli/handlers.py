"""
This module provides the command handlers of the polydamage CLI.

Functions:
- show_help() -> tuple:
  Returns the command list and the help text.

- run(args: List[str]) -> CommandResult:
  Nonlocal damage simulation of a configuration; writes curve, snapshots and dumps.

- elastic(args: List[str]) -> CommandResult:
  Linear elastic solve of a configuration.

- convergence(args: List[str]) -> CommandResult:
  Plate-with-hole convergence study.

- patch(args: List[str]) -> CommandResult:
  Linear patch test on a polytree-refined grid.

- preset(args: List[str]) -> CommandResult:
  Lists presets, or writes one preset configuration and mesh.

Usage:
Every handler takes the arguments following the command word and returns a
CommandResult; errors are turned into failed results by `input_error`.
"""

from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from polydamage.bench import patch_test, preset_benchmarks, render_preset, report_table, run_convergence, solve_elastic
from polydamage.cli.data_manager import dump_table, emit_curve, emit_report, emit_snapshots, emit_vtk
from polydamage.cli.input_error import CommandResult, input_error
from polydamage.cli.parse_config import parse_config
from polydamage.errors import SimulationFailed
from polydamage.fem import Discretization, NonlocalDamageSolver, generate_structured, refine_polytree, run_simulation, save_mesh
from polydamage.models import RefinementPlan, RunConfig, Snapshot, StepRecord
from polydamage.utils.console import render_table
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)

PATCH_TOLERANCE = 1e-9


def show_help() -> tuple:
    """
    Returns a list of available commands and a formatted string for displaying them.

    Returns:
    tuple: A tuple containing:
        - A list of command strings.
        - A formatted string listing all commands with descriptions.
    """
    commands = [
        "close",
        "exit",
        "run",
        "elastic",
        "convergence",
        "patch",
        "preset",
        "help"
    ]

    commands_str = (
        "Available commands:\n"
        "- 'close' or 'exit':   Exit the program.\n"
        "- 'run':               Nonlocal damage simulation.\n"
        "                       Usage: run <config>\n"
        "- 'elastic':           Linear elastic solve (control value 1).\n"
        "                       Usage: elastic <config>\n"
        "- 'convergence':       Plate-with-hole convergence study.\n"
        "                       Usage: convergence <config>\n"
        "- 'patch':             Linear patch test on a refined grid.\n"
        "                       Usage: patch <config>\n"
        "- 'preset':            List presets, or write one as config and mesh.\n"
        "                       Usage: preset [<name> [--out <dir>]]\n"
        "- 'help':              Display all available commands."
    )

    return commands, commands_str


def _config_path(args: List[str]) -> str:
    if not args:
        raise IndexError("Give me a configuration file, please.")
    return args[0]


def _loads(config: RunConfig, disc: Discretization) -> Tuple[np.ndarray, np.ndarray]:
    """Fixed and per-control nodal loads of the traction blocks."""
    f_fixed = np.zeros(disc.n_dofs)
    f_drive = np.zeros(disc.n_dofs)
    for block in config.tractions:
        edges = config.mesh.edge_sets[block.set_name]
        if any(block.value):
            f_fixed += disc.traction_load(edges, block.value)
        if any(block.drive):
            f_drive += disc.traction_load(edges, block.drive)
    return f_fixed, f_drive


def _steps_table(records: List[StepRecord], units: str, limit: int = 8) -> str:
    rows = [
        [str(r.step), f"{r.control:.6g}", f"{r.reaction:.6g}", str(r.iterations), f"{r.max_omega:.4f}"]
        for r in records[-limit:]
    ]
    return render_table(f"Last steps ({units})", ["step", "control", "reaction", "iterations", "max omega"], rows)


#------------------------------------------------------------------
# Simulation
#------------------------------------------------------------------


@input_error
def run(args: List[str]) -> CommandResult:
    """
    Runs the nonlocal damage simulation described by a configuration.

    Outputs are written even when a step fails; in that case a `.failed`
    file next to the curve holds the diagnostic and the command fails.
    """
    config = parse_config(_config_path(args), "run")
    mesh, output = config.mesh, config.output
    written = []
    if output.mesh:
        save_mesh(mesh, output.mesh)
        written.append(output.mesh)

    disc = Discretization(mesh, config.rule, config.thickness)
    f_fixed, f_drive = _loads(config, disc)
    solver = NonlocalDamageSolver(
        mesh, config.material, config.kernel, config.dof_map(), config.settings,
        f_fixed=f_fixed, f_drive=f_drive, discretization=disc, monitors=config.monitor_dofs(),
    )
    if output.table:
        written.append(dump_table(solver.table, output.table))
    logger.info("run %s: %s, %d steps of %g", config.source, config.mesh_source, config.steps, config.increment)

    failure: Optional[SimulationFailed] = None
    try:
        result = run_simulation(
            mesh, config.material, config.kernel, config.schedule(), solver.dofmap,
            config.settings, snapshot_every=output.vtk_every, solver=solver,
        )
    except SimulationFailed as exc:
        failure, result = exc, exc.result

    if output.csv and result.records:
        written.append(emit_curve(result.records, output.csv))
    if output.vtk:
        written += emit_snapshots(mesh, result.snapshots, output.vtk, config.units)
    if output.csv:
        flag = Path(output.csv).with_suffix(".failed")
        if failure is not None:
            flag.write_text(f"{failure}\ncommitted steps: {len(result.records)}\n", encoding="utf-8")
            written.append(flag)
        else:
            flag.unlink(missing_ok=True)

    lines = []
    if result.records:
        lines.append(_steps_table(result.records, config.units))
        peak = max(result.records, key=lambda r: abs(r.reaction))
        lines.append(f"peak reaction {peak.reaction:.6g} at control {peak.control:.6g} (step {peak.step})")
    lines += [f"written: {path}" for path in written]
    if failure is not None:
        lines.append(f"[red]{failure}; outputs above are partial")
        return CommandResult(False, "\n".join(lines))
    lines.append(f"[green]{len(result.records)} step(s) committed")
    return CommandResult(True, "\n".join(lines))


@input_error
def elastic(args: List[str]) -> CommandResult:
    """
    Solves the undamaged problem at control value 1: prescribed displacements
    are `value + drive`, tractions `value + drive`.
    """
    config = parse_config(_config_path(args), "elastic")
    mesh, output = config.mesh, config.output
    disc = Discretization(mesh, config.rule, config.thickness)
    dofmap = config.dof_map()
    tractions = [(mesh.edge_sets[b.set_name], tuple(np.add(b.value, b.drive))) for b in config.tractions]
    solution = solve_elastic(
        mesh, config.material, dofmap, tractions=tractions,
        rule=config.rule, thickness=config.thickness, control=1.0, discretization=disc,
    )

    written = []
    if output.mesh:
        save_mesh(mesh, output.mesh)
        written.append(output.mesh)
    if output.vtk:
        zeros = np.zeros(disc.n_points)
        snapshot = Snapshot(0, 1.0, solution.d, zeros, zeros, disc.gp_element)
        written.append(emit_vtk(mesh, snapshot, Path(output.vtk) / "elastic.vtk", config.units))

    u = solution.d.reshape(-1, 2)
    stresses = solution.stresses(config.material)
    rows = [
        ["nodes", str(mesh.n_nodes)],
        ["elements", str(mesh.n_elements)],
        ["largest arity", str(max(len(ring) for ring in mesh.elements))],
        ["max |u|", f"{float(np.max(np.hypot(u[:, 0], u[:, 1]))):.6g}"],
        ["max |sigma_xx|", f"{float(np.max(np.abs(stresses[:, 0]))):.6g}"],
        ["max |sigma_yy|", f"{float(np.max(np.abs(stresses[:, 1]))):.6g}"],
        ["reaction", f"{dofmap.reaction(solution.residual):.6g}"],
    ]
    lines = [render_table(f"Elastic solution ({config.units})", ["quantity", "value"], rows)]
    lines += [f"written: {path}" for path in written]
    return CommandResult(True, "\n".join(lines))


#------------------------------------------------------------------
# Studies
#------------------------------------------------------------------


@input_error
def convergence(args: List[str]) -> CommandResult:
    """Runs the plate-with-hole study and writes the report when `study.csv` is set."""
    config = parse_config(_config_path(args), "convergence")
    study = config.study
    report = run_convergence(
        study.sizes, config.material, study.a, study.L, study.H, study.load,
        rule=config.rule, workers=study.workers,
    )
    lines = [report_table(report)]
    if study.csv:
        lines += [f"written: {path}" for path in emit_report(report, study.csv)]
    verdict = "[green]errors decrease monotonically" if report.decreasing() else "[yellow]errors do not decrease monotonically"
    lines.append(verdict)
    return CommandResult(True, "\n".join(lines))


@input_error
def patch(args: List[str]) -> CommandResult:
    """
    Runs the linear patch test on an nx x nx unit-square grid with the cells
    listed in `study.refine` refined one level (hanging nodes on their neighbours).
    """
    config = parse_config(_config_path(args), "patch")
    study = config.study
    mesh = generate_structured((0.0, 0.0, 1.0, 1.0), study.nx, study.nx)
    if study.refine:
        invalid = [e for e in study.refine if e >= mesh.n_elements]
        if invalid:
            raise ValueError(f"study.refine: no element {invalid[0]} in a {study.nx}x{study.nx} grid")
        mesh = refine_polytree(mesh, RefinementPlan.uniform(study.refine, 1))

    result = patch_test(mesh, config.material, study.field, rule=config.rule, tolerance=PATCH_TOLERANCE)
    rows = [
        ["elements", str(result.n_elements)],
        ["largest arity", str(result.max_arity)],
        ["max interior error", f"{result.max_error:.3e}"],
        ["max stress error", f"{result.stress_error:.3e}"],
    ]
    lines = [render_table("Patch test", ["quantity", "value"], rows)]
    if result.passed:
        lines.append(f"[green]passed (tolerance {PATCH_TOLERANCE:g})")
    else:
        lines.append(f"[red]failed (tolerance {PATCH_TOLERANCE:g})")
    return CommandResult(result.passed, "\n".join(lines))


@input_error
def preset(args: List[str]) -> CommandResult:
    """Without arguments lists the presets; otherwise writes `<name>` into `--out` (default: current directory)."""
    presets = preset_benchmarks()
    if not args:
        rows = [[p.name, p.command, p.description] for p in presets.values()]
        return CommandResult(True, render_table("Presets", ["name", "command", "description"], rows))

    name, rest = args[0], args[1:]
    out = "."
    if rest:
        if rest[0] != "--out" or len(rest) != 2:
            raise ValueError("Usage: preset <name> [--out <dir>]")
        out = rest[1]
    written = render_preset(name, out)
    lines = [f"written: {path}" for path in written]
    lines.append(f"run it with: polydamage {presets[name].command} {written[0]}")
    return CommandResult(True, "\n".join(lines))
