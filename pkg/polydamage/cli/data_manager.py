"""
This module writes and reads the result files of the commands.

Functions:
- emit_curve(records, path): Load-displacement curve as CSV, one row per committed step.
- read_curve(path): Parses a curve CSV back into rows of floats.
- emit_vtk(mesh, snapshot, path, units): Legacy ASCII VTK unstructured grid of one snapshot.
- emit_snapshots(mesh, snapshots, directory, units): One VTK file per snapshot.
- emit_report(report, path): Convergence report as CSV, plus the fitted slopes.
- dump_table(table, path): Text dump of a nonlocal interaction table.
- read_table(path): Parses a table dump.

Floats are written with repr() so that reading a file back reproduces the
values exactly.
"""

import csv
import os
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from polydamage.models import ConvergenceReport, NonlocalTable, PolyMesh, Snapshot, StepRecord
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)

PathLike = Union[str, Path]

CURVE_COLUMNS = ["step", "control_disp", "reaction_force", "newton_iters", "max_omega"]
REPORT_COLUMNS = ["mesh_id", "n_elem", "h", "l2_rel", "h1_rel"]
VTK_POLYGON = 7


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    os.makedirs(path.parent, exist_ok=True)
    return path


def emit_curve(records: Sequence[StepRecord], path: PathLike) -> Path:
    """
    Writes the load-displacement curve.

    Columns are `step, control_disp, reaction_force, newton_iters, max_omega`
    followed by one column per monitor, in the order of the first record.

    Args:
    - records (Sequence[StepRecord]): Committed steps, at least one.
    - path (PathLike): Destination file.

    Returns:
    - Path: The written file.

    Raises:
    - ValueError: If records is empty.
    - OSError: If the file cannot be written.
    """
    if not records:
        raise ValueError("records: a curve needs at least one committed step")
    monitors = list(records[0].monitors)
    path = _prepare(path)
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file)
        writer.writerow(CURVE_COLUMNS + monitors)
        for record in records:
            writer.writerow(
                [record.step, repr(float(record.control)), repr(float(record.reaction)),
                 record.iterations, repr(float(record.max_omega))]
                + [repr(float(record.monitors[name])) for name in monitors]
            )
    logger.info("curve written to %s (%d steps)", path, len(records))
    return path


def read_curve(path: PathLike) -> Tuple[List[str], List[List[float]]]:
    """Returns the header and the rows of a curve CSV as floats."""
    with open(path, "r", newline="", encoding="utf-8") as file:
        reader = csv.reader(file)
        header = next(reader)
        rows = [[float(value) for value in row] for row in reader if row]
    return header, rows


def emit_vtk(mesh: PolyMesh, snapshot: Snapshot, path: PathLike, units: str = "N-mm-MPa") -> Path:
    """
    Writes one snapshot as a legacy ASCII VTK unstructured grid.

    Cells are polygons (VTK type 7) with the mesh rings as connectivity.
    Point data holds `ux` and `uy`. Cell data holds `omega_max`, the largest
    damage over the cell's integration points, and `eps_eq_nl`, their mean
    nonlocal equivalent strain. The title line records the step, the units
    and this reduction rule.

    Raises:
        OSError: If the file cannot be written.
    """
    path = _prepare(path)
    n_nodes, n_cells = mesh.n_nodes, mesh.n_elements
    omega = snapshot.cell_max(snapshot.omega, n_cells)
    eps = snapshot.cell_mean(snapshot.eps_nl, n_cells)
    d = snapshot.d.reshape(-1, 2)

    lines = [
        "# vtk DataFile Version 3.0",
        f"polydamage step {snapshot.step} control {float(snapshot.control)!r} units {units}; "
        "omega_max = max over cell integration points, eps_eq_nl = mean over cell integration points",
        "ASCII",
        "DATASET UNSTRUCTURED_GRID",
        f"POINTS {n_nodes} double",
    ]
    lines += [f"{x!r} {y!r} 0.0" for x, y in mesh.nodes.tolist()]
    size = sum(len(ring) + 1 for ring in mesh.elements)
    lines.append(f"CELLS {n_cells} {size}")
    lines += [" ".join(str(v) for v in [len(ring), *ring]) for ring in mesh.elements]
    lines.append(f"CELL_TYPES {n_cells}")
    lines += [str(VTK_POLYGON)] * n_cells

    def scalars(name: str, values: np.ndarray) -> List[str]:
        return [f"SCALARS {name} double 1", "LOOKUP_TABLE default"] + [repr(float(v)) for v in values]

    lines.append(f"POINT_DATA {n_nodes}")
    lines += scalars("ux", d[:, 0]) + scalars("uy", d[:, 1])
    lines.append(f"CELL_DATA {n_cells}")
    lines += scalars("omega_max", omega) + scalars("eps_eq_nl", eps)

    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug("snapshot of step %d written to %s", snapshot.step, path)
    return path


def emit_snapshots(mesh: PolyMesh, snapshots: Sequence[Snapshot], directory: PathLike,
                   units: str = "N-mm-MPa") -> List[Path]:
    """Writes `step_NNNN.vtk` per snapshot into directory."""
    directory = Path(directory)
    written = [emit_vtk(mesh, s, directory / f"step_{s.step:04d}.vtk", units) for s in snapshots]
    if written:
        logger.info("%d snapshot(s) written to %s", len(written), directory)
    return written


def emit_report(report: ConvergenceReport, path: PathLike) -> List[Path]:
    """
    Writes the convergence rows to path and the fitted slopes next to it
    (`<stem>_slopes.csv` with columns `norm, slope`).

    Returns:
    - List[Path]: Report and slope files.
    """
    path = _prepare(path)
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file)
        writer.writerow(REPORT_COLUMNS)
        for row in report.rows:
            writer.writerow([row.mesh_id, row.n_elem, repr(float(row.h)), repr(float(row.l2_rel)), repr(float(row.h1_rel))])

    slopes = path.with_name(f"{path.stem}_slopes.csv")
    with open(slopes, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file)
        writer.writerow(["norm", "slope"])
        writer.writerow(["l2", repr(float(report.l2_slope))])
        writer.writerow(["h1", repr(float(report.h1_slope))])
    logger.info("convergence report written to %s", path)
    return [path, slopes]


def dump_table(table: NonlocalTable, path: PathLike) -> Path:
    """
    Writes a nonlocal table: for each point a line `i a_i n`, followed by its
    n neighbours as lines `j a_ij` in ascending j.
    """
    path = _prepare(path)
    lines = []
    for i in range(table.n_points):
        indices, values = table.neighbors(i)
        lines.append(f"{i} {float(table.sums[i])!r} {len(indices)}")
        lines += [f"{j} {float(a)!r}" for j, a in zip(indices.tolist(), values.tolist())]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("nonlocal table written to %s (%d points, %d pairs)", path, table.n_points, table.n_pairs)
    return path


def read_table(path: PathLike) -> Dict[int, Tuple[float, List[Tuple[int, float]]]]:
    """
    Parses a table dump.

    Returns:
        Dict: point i -> (a_i, [(j, a_ij), ...]).

    Raises:
        ValueError: If the dump is truncated or malformed; the message names the line.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    table: Dict[int, Tuple[float, List[Tuple[int, float]]]] = {}
    position = 0
    while position < len(lines):
        try:
            i, a_i, n = lines[position].split()
            pairs = []
            for offset in range(1, int(n) + 1):
                j, a_ij = lines[position + offset].split()
                pairs.append((int(j), float(a_ij)))
        except (ValueError, IndexError):
            raise ValueError(f"{path}:{position + 1}: malformed table dump") from None
        table[int(i)] = (float(a_i), pairs)
        position += int(n) + 1
    return table
