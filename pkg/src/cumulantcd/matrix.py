"""Hankel-structured joint cumulant matrices, their rank and determinant.

The k x k matrix for orientation (X, Y) holds, at 1-based position (i, j),
the joint cumulant with indices a = 2k + 1 - i - j and b = i + j - 2, so
every entry has total order 2k - 1 and entries are constant along
anti-diagonals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cumulants import CumulantTable

XY = "xy"
YX = "yx"


@dataclass(frozen=True)
class CumulantMatrix:
    k: int
    orientation: str  # XY or YX
    values: np.ndarray  # (k, k), symmetric Hankel

    @property
    def source_order(self) -> int:
        """Total cumulant order consumed by every entry."""
        return 2 * self.k - 1


@dataclass(frozen=True)
class RankReport:
    rank: int
    singular_values: np.ndarray  # descending
    tolerance_used: float

    @property
    def deficient(self) -> bool:
        return self.rank < self.singular_values.size


def build_cumulant_matrix(cumulants: CumulantTable, k: int, orientation: str = XY) -> CumulantMatrix:
    """Assemble the k x k cumulant matrix for the requested orientation.

    Orientation YX reads the table with the variable roles swapped
    (kappa[a, b] -> kappa[b, a]).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if orientation not in (XY, YX):
        raise ValueError(f"unknown orientation {orientation!r}")
    if cumulants.order < 2 * k - 1:
        raise ValueError(
            f"cumulant table order {cumulants.order} insufficient for k={k} "
            f"(needs {2 * k - 1})"
        )
    table = cumulants.kappa if orientation == XY else cumulants.kappa.T
    values = np.empty((k, k))
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            a = 2 * k + 1 - i - j
            b = i + j - 2
            values[i - 1, j - 1] = table[a, b]
    return CumulantMatrix(k=k, orientation=orientation, values=values)


def matrix_rank(matrix: CumulantMatrix, rel_tol: float) -> RankReport:
    """Numerical rank: count of singular values above rel_tol * sigma_max."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1)")
    sv = np.linalg.svd(matrix.values, compute_uv=False)
    smax = sv[0] if sv.size else 0.0
    rank = 0 if smax == 0.0 else int(np.sum(sv > rel_tol * smax))
    return RankReport(rank=rank, singular_values=sv, tolerance_used=rel_tol)


def matrix_abs_determinant(matrix: CumulantMatrix) -> float:
    """Absolute determinant via pivoted LU (numpy slogdet / det)."""
    return abs(float(np.linalg.det(matrix.values)))
