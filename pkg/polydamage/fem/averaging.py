"""
This module builds the nonlocal interaction table and averages point values.

Functions:
- kernel_eval: Gauss or truncated-quadratic weight alpha0(r).
- build_table: Table from a k-d tree radius search.
- build_table_brute_force: Same table from an all-pairs scan.
- nonlocal_eq_strain: eps_nl_i = sum_j a_ij eps_eq_j / a_i.

Both builders keep pairs with r <= R and a positive weight, list neighbours
in ascending index order and sum a_i in that order, so their tables are
identical entry for entry.
"""

from typing import List

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

from polydamage.models import KernelKind, KernelSpec, NonlocalTable
from polydamage.utils.logger import get_logger

logger = get_logger(__name__)


def kernel_eval(spec: KernelSpec, r) -> np.ndarray:
    """
    Kernel value at distance r.

    Gauss: exp(-r^2 / (2 l_c^2)), cut to zero beyond R.
    Truncated quadratic: <1 - r^2 / R^2>^2.

    Raises:
        ValueError: If r is negative.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("r: distances must be non-negative")
    if spec.kind is KernelKind.GAUSS:
        return np.where(r <= spec.R, np.exp(-r * r / (2.0 * spec.lc * spec.lc)), 0.0)
    return np.maximum(1.0 - r * r / (spec.R * spec.R), 0.0) ** 2


def _assemble(positions: np.ndarray, wj: np.ndarray, spec: KernelSpec, candidates) -> NonlocalTable:
    n = len(positions)
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices: List[np.ndarray] = []
    data: List[np.ndarray] = []
    for i in range(n):
        j = np.asarray(candidates(i), dtype=np.int64)
        r = np.hypot(positions[j, 0] - positions[i, 0], positions[j, 1] - positions[i, 1])
        a = kernel_eval(spec, r) * wj[j]
        keep = (r <= spec.R) & (a > 0.0)
        indices.append(j[keep])
        data.append(a[keep])
        indptr[i + 1] = indptr[i] + int(np.count_nonzero(keep))

    columns = np.concatenate(indices) if indices else np.zeros(0, dtype=np.int64)
    values = np.concatenate(data) if data else np.zeros(0)
    matrix = sparse.csr_matrix((values, columns, indptr), shape=(n, n))
    rows = np.repeat(np.arange(n), np.diff(indptr))
    sums = np.bincount(rows, weights=values, minlength=n)
    return NonlocalTable(matrix, sums, spec.R)


def build_table(positions: np.ndarray, wj: np.ndarray, spec: KernelSpec, workers: int = 1) -> NonlocalTable:
    """
    Builds the interaction table of an integration-point cloud.

    Args:
        positions (np.ndarray): (N, 2) point coordinates.
        wj (np.ndarray): (N,) integration weights w|J| (thickness excluded).
        spec (KernelSpec): Kernel and radius.
        workers (int): Threads for the radius query; -1 uses every core.

    Returns:
        NonlocalTable: Coefficients a_ij = alpha0(|x_i - x_j|) w_j|J_j| and sums a_i.
    """
    positions = np.asarray(positions, dtype=float)
    wj = np.asarray(wj, dtype=float)
    tree = cKDTree(positions)
    found = tree.query_ball_point(positions, r=spec.R * (1.0 + 1e-9), return_sorted=True, workers=workers)
    table = _assemble(positions, wj, spec, lambda i: found[i])
    logger.info(
        "nonlocal table: %d points, %d pairs (%.1f per point), R=%g",
        table.n_points, table.n_pairs, table.n_pairs / max(table.n_points, 1), spec.R,
    )
    return table


def build_table_brute_force(positions: np.ndarray, wj: np.ndarray, spec: KernelSpec) -> NonlocalTable:
    """All-pairs reference builder; quadratic in the number of points."""
    positions = np.asarray(positions, dtype=float)
    everyone = np.arange(len(positions))
    return _assemble(positions, np.asarray(wj, dtype=float), spec, lambda i: everyone)


def nonlocal_eq_strain(table: NonlocalTable, values: np.ndarray) -> np.ndarray:
    """
    Nonlocal average of local equivalent strains.

    Raises:
        ValueError: If the number of values differs from the table size.
    """
    values = np.asarray(values, dtype=float)
    if values.shape != (table.n_points,):
        raise ValueError(f"values: expected {table.n_points} point values, got {values.shape}")
    return table.average(values)
