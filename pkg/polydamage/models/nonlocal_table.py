"""
This module defines the NonlocalTable class, the stored interaction data of
the nonlocal average.

Classes:
- NonlocalTable: Sparse matrix of coefficients a_ij = alpha0(|x_i - x_j|) w_j |J_j|
  over integration-point pairs, with the row sums a_i.

Usage:
- Built once per mesh by `polydamage.fem.averaging.build_table` and shared
  read-only by every Newton iteration of every load step.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy import sparse


@dataclass(frozen=True, eq=False)
class NonlocalTable:
    """
    Interaction coefficients between integration points.

    Row i of `matrix` lists the neighbours j of point i (column indices sorted
    ascending) with their coefficients a_ij; `sums[i]` is a_i.

    Attributes:
        matrix (sparse.csr_matrix): (N, N) coefficients a_ij.
        sums (np.ndarray): (N,) row sums a_i, all positive.
        radius (float): Search radius used to build the table.
    """

    matrix: sparse.csr_matrix
    sums: np.ndarray
    radius: float = field(default=0.0)

    def __post_init__(self) -> None:
        if self.matrix.shape[0] != self.matrix.shape[1] or self.matrix.shape[0] != len(self.sums):
            raise ValueError("table: coefficient matrix and sums must cover the same points")
        assert np.all(self.sums > 0), "every integration point must weigh itself"

    @property
    def n_points(self) -> int:
        return len(self.sums)

    @property
    def n_pairs(self) -> int:
        return int(self.matrix.nnz)

    def neighbors(self, i: int) -> Tuple[np.ndarray, np.ndarray]:
        """Returns (indices j, coefficients a_ij) for point i."""
        start, stop = self.matrix.indptr[i], self.matrix.indptr[i + 1]
        return self.matrix.indices[start:stop], self.matrix.data[start:stop]

    @cached_property
    def weights(self) -> sparse.csr_matrix:
        """Normalised weights a_ij / a_i; every row sums to one."""
        return sparse.diags(1.0 / self.sums).dot(self.matrix).tocsr()

    @cached_property
    def reverse(self) -> sparse.csr_matrix:
        """Reverse adjacency: row j lists the points i whose average uses j, with a_ij."""
        return self.matrix.transpose().tocsr()

    def average(self, values: np.ndarray) -> np.ndarray:
        """Returns sum_j a_ij v_j / a_i for every point i."""
        return self.matrix.dot(values) / self.sums

    def same_as(self, other: "NonlocalTable") -> bool:
        """Exact equality of structure and stored values."""
        a, b = self.matrix.tocsr(), other.matrix.tocsr()
        return (
            a.shape == b.shape
            and np.array_equal(a.indptr, b.indptr)
            and np.array_equal(a.indices, b.indices)
            and np.array_equal(a.data, b.data)
            and np.array_equal(self.sums, other.sums)
        )
