"""Configuration parsing, result files, command handlers and the entry point."""

import math
from pathlib import Path

import numpy as np
import pytest
from prompt_toolkit.completion import CompleteEvent
from prompt_toolkit.document import Document

from main import main
from polydamage.cli import (
    CommandResult,
    dump_table,
    emit_curve,
    emit_report,
    emit_vtk,
    input_error,
    parse_config,
    parse_input,
    read_curve,
    read_table,
)
from polydamage.cli import handlers
from polydamage.cli.commands_completer import CommandCompleter
from polydamage.errors import ConfigError, MeshError, SolverError
from polydamage.fem import Discretization, build_table, generate_structured, save_mesh
from polydamage.models import (
    ConvergenceReport,
    ConvergenceRow,
    KernelKind,
    KernelSpec,
    Snapshot,
    StepRecord,
)

MESH = """\
mesh.generator = structured
mesh.domain = 0, 0, 2, 1
mesh.nx = 2
mesh.ny = 1
"""

BODY = """\
material.E = 20000
material.nu = 0.2
damage.kappa0 = 1e-4
damage.beta = 300

nonlocal.R = 0.8

solver.steps = 3
solver.increment = 1e-4

bc.fix.set = left
bc.pull.set = right
bc.pull.components = x
bc.pull.drive = 1
"""

PATCH = """\
material.E = 1
material.nu = 0.25
study.nx = 2
study.refine = 0
"""


def _write(directory: Path, text: str, name: str = "case.cfg") -> Path:
    path = directory / name
    path.write_text(text, encoding="utf-8")
    return path


def _problems(path: Path, command: str = "run"):
    with pytest.raises(ConfigError) as info:
        parse_config(path, command)
    return info.value.problems


# =============================================================================
# Configuration
# =============================================================================


def test_minimal_config_defaults(tmp_path):
    config = parse_config(_write(tmp_path, MESH + BODY))
    assert config.mesh.n_elements == 2
    assert config.rule == 3
    assert config.thickness == 1.0
    assert config.units == "N-mm-MPa"
    assert config.material.criterion.value == "mazars"
    assert config.material.alpha == 0.98
    assert config.kernel.kind is KernelKind.TRUNCATED_QUADRATIC
    assert config.kernel.lc == pytest.approx(0.8 / math.sqrt(7.0))
    assert config.settings.tol_rel == 1e-4
    assert config.settings.max_iter == 25
    assert config.schedule() == [1e-4, 1e-4, 1e-4]
    assert config.output.csv is None

    dofmap = config.dof_map()
    assert len(dofmap.constrained) == 6
    assert dofmap.driven_dofs.tolist() == [4, 10]


def test_relative_paths_follow_the_config(tmp_path):
    save_mesh(generate_structured((0.0, 0.0, 2.0, 1.0), 2, 1), tmp_path / "beam.mesh")
    config = parse_config(_write(tmp_path, "mesh.file = beam.mesh\noutput.csv = out/curve.csv\n" + BODY))
    assert config.mesh.n_elements == 2
    assert config.output.csv == str(tmp_path / "out" / "curve.csv")
    assert config.mesh_source == f"file {tmp_path / 'beam.mesh'}"


def test_sqrt_ratio(tmp_path):
    config = parse_config(_write(tmp_path, MESH + BODY + "nonlocal.kernel = gauss\nnonlocal.ratio = sqrt(4)\n"))
    assert config.kernel.kind is KernelKind.GAUSS
    assert config.kernel.lc == pytest.approx(0.4)


def test_non_positive_radius(tmp_path):
    problems = _problems(_write(tmp_path, MESH + BODY.replace("nonlocal.R = 0.8", "nonlocal.R = 0")))
    assert "nonlocal.R: interaction radius must be positive" in problems


def test_unknown_set_lists_alternatives(tmp_path):
    problems = _problems(_write(tmp_path, MESH + BODY.replace("bc.pull.set = right", "bc.pull.set = topp")))
    assert "bc.pull.set: unknown set 'topp'; available: bottom, left, right, top" in problems


def test_unknown_key(tmp_path):
    problems = _problems(_write(tmp_path, MESH + BODY + "solver.tolerance = 1e-6\n"))
    assert any("unknown key 'solver.tolerance'" in p for p in problems)


def test_duplicate_key(tmp_path):
    problems = _problems(_write(tmp_path, MESH + BODY + "material.E = 30000\n"))
    assert any("duplicate key 'material.E' (first set on line 5)" in p for p in problems)


def test_every_problem_is_reported(tmp_path):
    text = MESH + BODY.replace("nonlocal.R = 0.8", "nonlocal.R = -1") + "bogus line\nmaterial.nu = 0.7\n"
    path = _write(tmp_path, text)
    with pytest.raises(ConfigError) as info:
        parse_config(path)
    assert len(info.value.problems) >= 3
    assert str(info.value).startswith(str(path))


def test_material_problem_names_the_field(tmp_path):
    problems = _problems(_write(tmp_path, MESH + BODY.replace("material.nu = 0.2", "material.nu = 0.5")))
    assert any(p.startswith("material.nu:") for p in problems)


def test_missing_mesh(tmp_path):
    assert "mesh: mesh.file or mesh.generator is required" in _problems(_write(tmp_path, BODY))


def test_two_driven_blocks(tmp_path):
    problems = _problems(_write(tmp_path, MESH + BODY + "bc.fix.drive = 2\n"))
    assert "bc: exactly one block needs a non-zero drive, found 2" in problems


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        parse_config(tmp_path / "absent.cfg")


@pytest.mark.parametrize("sizes, message", [
    ("8, 16", "study.sizes: at least three sizes are needed, got 2"),
    ("0, 8, 16", "study.sizes: every size must be 2 or more, got 0"),
    ("-4, 8, 16", "study.sizes: every size must be 2 or more, got -4"),
    ("8, 16, 8", "study.sizes: sizes must be distinct, 8 is repeated"),
])
def test_invalid_study_sizes(tmp_path, sizes, message):
    text = f"material.E = 210000\nmaterial.nu = 0.3\nstudy.sizes = {sizes}\n"
    assert message in _problems(_write(tmp_path, text), "convergence")


def test_study_sizes(tmp_path):
    config = parse_config(_write(tmp_path, "material.E = 210000\nmaterial.nu = 0.3\nstudy.sizes = 4, 8, 16\n"), "convergence")
    assert config.study.sizes == (4, 8, 16)


# =============================================================================
# Result files
# =============================================================================


RECORDS = [
    StepRecord(1, 1e-4, 2.0 / 3.0, 1, 0.0, {"cmod": 1e-5}),
    StepRecord(2, 2e-4, 1.2345678901234567, 3, 0.1, {"cmod": 3e-5}),
]


def test_curve_round_trip(tmp_path):
    path = emit_curve(RECORDS, tmp_path / "curve.csv")
    header, rows = read_curve(path)
    assert header == ["step", "control_disp", "reaction_force", "newton_iters", "max_omega", "cmod"]
    assert rows[1] == [2.0, 2e-4, 1.2345678901234567, 3.0, 0.1, 3e-5]
    assert rows[0][2] == 2.0 / 3.0


def test_single_step_curve(tmp_path):
    path = emit_curve(RECORDS[:1], tmp_path / "one.csv")
    assert len(path.read_text(encoding="utf-8").splitlines()) == 2


def test_empty_curve(tmp_path):
    with pytest.raises(ValueError, match="at least one"):
        emit_curve([], tmp_path / "none.csv")


def test_vtk_polygons(tmp_path):
    mesh = generate_structured((0.0, 0.0, 2.0, 1.0), 2, 1)
    disc = Discretization(mesh, rule=1)
    omega = np.linspace(0.0, 0.7, disc.n_points)
    snapshot = Snapshot(4, 3e-4, np.zeros(disc.n_dofs), omega, omega * 1e-3, disc.gp_element)
    path = emit_vtk(mesh, snapshot, tmp_path / "vtk" / "s.vtk")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# vtk DataFile Version 3.0"
    assert "step 4" in lines[1] and "N-mm-MPa" in lines[1]
    assert "POINTS 6 double" in lines
    assert "CELLS 2 10" in lines
    start = lines.index("CELL_TYPES 2")
    assert lines[start + 1:start + 3] == ["7", "7"]
    omega_at = lines.index("SCALARS omega_max double 1") + 2
    assert float(lines[omega_at + 1]) == pytest.approx(0.7)


def test_table_dump_round_trip(tmp_path, grid2):
    disc = Discretization(grid2, rule=1)
    table = build_table(disc.positions, disc.wj, KernelSpec(R=0.6))
    dumped = read_table(dump_table(table, tmp_path / "table.txt"))
    assert len(dumped) == table.n_points
    for i in range(table.n_points):
        indices, values = table.neighbors(i)
        a_i, pairs = dumped[i]
        assert a_i == table.sums[i]
        assert pairs == list(zip(indices.tolist(), values.tolist()))


def test_malformed_table_dump(tmp_path):
    path = tmp_path / "broken.txt"
    path.write_text("0 1.0 2\n1 0.5\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":1: malformed table dump"):
        read_table(path)


def test_report_files(tmp_path):
    report = ConvergenceReport(
        rows=(ConvergenceRow(0, 64, 0.2, 1e-2, 1e-1), ConvergenceRow(1, 256, 0.1, 2.5e-3, 5e-2),
              ConvergenceRow(2, 1024, 0.05, 6.25e-4, 2.5e-2)),
        l2_slope=2.0,
        h1_slope=1.0,
    )
    report_path, slopes_path = emit_report(report, tmp_path / "plate.csv")
    assert slopes_path == tmp_path / "plate_slopes.csv"
    assert report_path.read_text(encoding="utf-8").splitlines()[0] == "mesh_id,n_elem,h,l2_rel,h1_rel"
    assert slopes_path.read_text(encoding="utf-8").splitlines() == ["norm,slope", "l2,2.0", "h1,1.0"]


# =============================================================================
# Handlers
# =============================================================================


OUTPUTS = "output.csv = out/curve.csv\noutput.vtk = out/vtk\noutput.table = out/table.txt\n"


def test_run_writes_outputs(tmp_path):
    result = handlers.run([str(_write(tmp_path, MESH + BODY + OUTPUTS))])
    assert result.ok, result.message
    header, rows = read_curve(tmp_path / "out" / "curve.csv")
    assert [row[0] for row in rows] == [1.0, 2.0, 3.0]
    assert rows[-1][1] == pytest.approx(3e-4)
    assert (tmp_path / "out" / "vtk" / "step_0003.vtk").exists()
    assert (tmp_path / "out" / "table.txt").exists()
    assert not (tmp_path / "out" / "curve.failed").exists()


def test_run_is_deterministic(tmp_path):
    config = _write(tmp_path, MESH + BODY + "output.csv = curve.csv\n")
    assert handlers.run([str(config)]).ok
    first = (tmp_path / "curve.csv").read_bytes()
    assert handlers.run([str(config)]).ok
    assert (tmp_path / "curve.csv").read_bytes() == first


def test_failed_run_leaves_a_flag(tmp_path):
    text = (MESH + BODY).replace("solver.increment = 1e-4", "solver.increment = 5e-3")
    text += "solver.max_iter = 1\nsolver.tol_rel = 1e-10\nsolver.bisection = 0\noutput.csv = curve.csv\n"
    result = handlers.run([str(_write(tmp_path, text))])
    assert not result.ok
    assert "partial" in result.message
    flag = tmp_path / "curve.failed"
    assert flag.exists()
    assert "committed steps: 0" in flag.read_text(encoding="utf-8")


def test_run_reports_config_problems(tmp_path):
    result = handlers.run([str(_write(tmp_path, BODY))])
    assert not result.ok
    assert "mesh.file or mesh.generator" in result.message


def test_run_without_arguments():
    result = handlers.run([])
    assert result == CommandResult(False, "[red]Give me a configuration file, please.")


def test_elastic_handler(tmp_path):
    result = handlers.elastic([str(_write(tmp_path, MESH + BODY + "output.vtk = vtk\n"))])
    assert result.ok, result.message
    assert "Elastic solution" in result.message
    assert (tmp_path / "vtk" / "elastic.vtk").exists()


def test_patch_handler(tmp_path):
    result = handlers.patch([str(_write(tmp_path, PATCH))])
    assert result.ok
    assert "passed" in result.message


def test_patch_handler_rejects_missing_cell(tmp_path):
    result = handlers.patch([str(_write(tmp_path, PATCH.replace("study.refine = 0", "study.refine = 9")))])
    assert not result.ok
    assert "no element 9" in result.message


def test_convergence_handler(tmp_path):
    text = "material.E = 210000\nmaterial.nu = 0.3\nstudy.sizes = 4, 8, 16\nstudy.csv = plate.csv\n"
    result = handlers.convergence([str(_write(tmp_path, text))])
    assert result.ok, result.message
    assert (tmp_path / "plate.csv").exists()
    assert (tmp_path / "plate_slopes.csv").exists()


def test_preset_listing_and_usage(tmp_path):
    listing = handlers.preset([])
    assert listing.ok
    assert "notched-beam" in listing.message
    assert not handlers.preset(["patch", "--into", str(tmp_path)]).ok
    unknown = handlers.preset(["nope"])
    assert not unknown.ok
    assert unknown.message.startswith("[red]unknown preset 'nope'")


# =============================================================================
# Shell helpers
# =============================================================================


def test_parse_input_keeps_quoted_paths():
    assert parse_input("Run 'my beam.cfg'") == ("run", "my beam.cfg")
    assert parse_input("help") == ("help",)


def test_parse_input_unbalanced_quotes():
    with pytest.raises(ValueError):
        parse_input("run 'beam.cfg")


@pytest.mark.parametrize("error, prefix", [
    (ConfigError(["x: bad"], "a.cfg"), "[red]a.cfg: 1 problem(s)"),
    (MeshError("orientation: element 0"), "[red]mesh error: orientation"),
    (SolverError("singular system"), "[red]solver error: singular"),
    (ValueError("R: bad"), "[red]R: bad"),
    (KeyError("unknown preset 'x'"), "[red]unknown preset 'x'"),
    (IndexError("Give me a configuration file, please."), "[red]Give me"),
    (FileNotFoundError(2, "No such file or directory", "a.cfg"), "[red]cannot access a.cfg"),
])
def test_input_error_messages(error, prefix):
    @input_error
    def failing(args):
        raise error

    result = failing([])
    assert not result.ok
    assert result.message.startswith(prefix)


def test_completer():
    completer = CommandCompleter()
    words = [c.text for c in completer.get_completions(Document("pre"), CompleteEvent())]
    assert words == ["preset"]
    names = [c.text for c in completer.get_completions(Document("preset notched"), CompleteEvent())]
    assert names == ["notched-beam"]
    assert list(completer.get_completions(Document("run a b"), CompleteEvent())) == []


# =============================================================================
# Entry point
# =============================================================================


def test_main_exit_codes(tmp_path):
    assert main(["help"]) == 0
    assert main(["patch", str(_write(tmp_path, PATCH))]) == 0
    assert main(["bogus"]) == 2
    assert main(["run", str(tmp_path / "missing.cfg")]) == 1
    assert main(["run"]) == 1


def test_main_writes_a_preset(tmp_path):
    assert main(["preset", "patch", "--out", str(tmp_path / "presets")]) == 0
    assert (tmp_path / "presets" / "patch.cfg").exists()
