"""Mesh file reader and writer."""

import re

import numpy as np
import pytest

from polydamage.errors import MeshError
from polydamage.fem import generate_quarter_plate_hole, load_mesh, refine_polytree, save_mesh
from polydamage.models import RefinementPlan


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_unit_square_round_trip(unit_square, tmp_path):
    path = tmp_path / "square.mesh"
    save_mesh(unit_square, path)
    loaded = load_mesh(path)
    assert np.array_equal(loaded.nodes, unit_square.nodes)
    assert loaded == unit_square


def test_irrational_coordinates_are_bit_exact(tmp_path):
    mesh = generate_quarter_plate_hole(0.4, 2.0, 1.0, 3, 5)
    path = tmp_path / "plate.mesh"
    save_mesh(mesh, path)
    loaded = load_mesh(path)
    assert loaded.nodes.tobytes() == mesh.nodes.tobytes()
    assert loaded.edge_sets == mesh.edge_sets


def test_levels_and_sets_survive(grid2, tmp_path):
    mesh = refine_polytree(grid2, RefinementPlan.uniform([0], 1))
    path = tmp_path / "nested" / "refined.mesh"
    save_mesh(mesh, path)
    loaded = load_mesh(path)
    assert loaded == mesh
    assert loaded.levels == (1, 1, 1, 1, 0, 0, 0)


def test_comments_and_blank_lines(tmp_path):
    path = _write(tmp_path / "commented.mesh", (
        "# a single cell\n"
        "polymesh 1\n"
        "\n"
        "nodes 4\n"
        "0 0\n1 0   # lower right\n1 1\n0 1\n"
        "elements 1\n"
        "4 0 1 2 3\n"
        "nodeset base 2\n0\n1\n"
    ))
    mesh = load_mesh(path)
    assert mesh.n_elements == 1
    assert mesh.node_sets == {"base": (0, 1)}


def test_clockwise_ring(tmp_path):
    path = _write(tmp_path / "cw.mesh", "polymesh 1\nnodes 4\n0 0\n1 0\n1 1\n0 1\nelements 1\n4 0 3 2 1\n")
    with pytest.raises(MeshError, match="orientation"):
        load_mesh(path)


def test_index_out_of_range(tmp_path):
    path = _write(tmp_path / "range.mesh", "polymesh 1\nnodes 4\n0 0\n1 0\n1 1\n0 1\nelements 1\n4 0 1 2 7\n")
    with pytest.raises(MeshError, match="range"):
        load_mesh(path)


def test_malformed_line_reports_line_number(tmp_path):
    path = _write(tmp_path / "bad.mesh", "polymesh 1\nnodes 4\n0 0\n1\n1 1\n0 1\n")
    with pytest.raises(MeshError, match=re.escape(f"{path}:4:")):
        load_mesh(path)


def test_arity_mismatch_reports_line_number(tmp_path):
    path = _write(tmp_path / "arity.mesh", "polymesh 1\nnodes 4\n0 0\n1 0\n1 1\n0 1\nelements 1\n5 0 1 2 3\n")
    with pytest.raises(MeshError, match=re.escape(f"{path}:8:") + ".*arity"):
        load_mesh(path)


def test_truncated_file(tmp_path):
    path = _write(tmp_path / "short.mesh", "polymesh 1\nnodes 4\n0 0\n1 0\n")
    with pytest.raises(MeshError, match="unexpected end of file"):
        load_mesh(path)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_mesh(tmp_path / "absent.mesh")
