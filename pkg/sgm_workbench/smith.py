"""
Exact integer matrices and Smith normal form.

Matrices are numpy object arrays so every entry stays a Python int. The
reduction picks the entry of minimal absolute value as pivot and tracks the
unimodular transforms when asked to, giving L @ A @ R = D.
"""

import dataclasses
import logging
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from sgm_workbench.graded_algebra import Coefficients, Scalar

logger = logging.getLogger("sgm_workbench")


@dataclasses.dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(
            len(row) != self.cols for row in self.entries
        ):
            raise ValueError(
                f"Entry grid does not match declared shape {self.rows}x{self.cols}"
            )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(
            n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        )

    @classmethod
    def from_rows(
        cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None
    ) -> "IntegerMatrix":
        grid = tuple(tuple(int(x) for x in row) for row in rows)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        return cls(len(grid), cols, grid)

    @classmethod
    def from_array(cls, array: np.ndarray) -> "IntegerMatrix":
        rows, cols = array.shape
        return cls(
            rows, cols, tuple(tuple(int(x) for x in array[i]) for i in range(rows))
        )

    def array(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=object)
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                out[i, j] = x
        return out

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_json(self) -> List[List[int]]:
        return [list(row) for row in self.entries]


def as_array(m: Any) -> np.ndarray:
    if isinstance(m, IntegerMatrix):
        return m.array()
    array = np.array(m, dtype=object)
    if array.ndim != 2:
        raise ValueError(f"Expected a 2-d matrix, got shape {array.shape}")
    return array


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of object arrays, safe for empty inner dimensions."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=object)
    return np.dot(a, b)


@dataclasses.dataclass(frozen=True)
class SmithDecomposition:
    """D = left @ A @ right with ``diagonal`` the nonzero diagonal of D."""

    diagonal: Tuple[int, ...]
    shape: Tuple[int, int]
    left: Optional[np.ndarray] = dataclasses.field(default=None, compare=False)
    left_inverse: Optional[np.ndarray] = dataclasses.field(default=None, compare=False)
    right: Optional[np.ndarray] = dataclasses.field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def rank_over(self, coefficients: Coefficients) -> int:
        return sum(1 for d in self.diagonal if not coefficients.is_zero(d))


class _SmithReducer:
    """Pivoting by minimal absolute value, after pymatgen's SNF helper."""

    def __init__(self, a: np.ndarray, transforms: bool) -> None:
        self.a = a.copy()
        self.rows, self.cols = self.a.shape
        self.transforms = transforms
        if transforms:
            self.left = _identity(self.rows)
            self.left_inverse = _identity(self.rows)
            self.right = _identity(self.cols)

    def _swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        self.a[[i, j]] = self.a[[j, i]]
        if self.transforms:
            self.left[[i, j]] = self.left[[j, i]]
            self.left_inverse[:, [i, j]] = self.left_inverse[:, [j, i]]

    def _swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        self.a[:, [i, j]] = self.a[:, [j, i]]
        if self.transforms:
            self.right[:, [i, j]] = self.right[:, [j, i]]

    def _negate_row(self, i: int) -> None:
        self.a[i] = -self.a[i]
        if self.transforms:
            self.left[i] = -self.left[i]
            self.left_inverse[:, i] = -self.left_inverse[:, i]

    def _add_row(self, target: int, source: int) -> None:
        self.a[target] = self.a[target] + self.a[source]
        if self.transforms:
            self.left[target] = self.left[target] + self.left[source]
            self.left_inverse[:, source] = (
                self.left_inverse[:, source] - self.left_inverse[:, target]
            )

    def _clear_column(self, s: int) -> bool:
        """Reduce entries below the pivot; True when they all vanished."""
        pivot = self.a[s, s]
        q = self.a[s + 1 :, s] // pivot
        if not np.any(q != 0):
            return not np.any(self.a[s + 1 :, s] != 0)
        self.a[s + 1 :] = self.a[s + 1 :] - np.outer(q, self.a[s])
        if self.transforms:
            self.left[s + 1 :] = self.left[s + 1 :] - np.outer(q, self.left[s])
            self.left_inverse[:, s] = self.left_inverse[:, s] + matmul(
                self.left_inverse[:, s + 1 :], q.reshape(-1, 1)
            ).reshape(-1)
        return not np.any(self.a[s + 1 :, s] != 0)

    def _clear_row(self, s: int) -> bool:
        pivot = self.a[s, s]
        q = self.a[s, s + 1 :] // pivot
        if not np.any(q != 0):
            return not np.any(self.a[s, s + 1 :] != 0)
        self.a[:, s + 1 :] = self.a[:, s + 1 :] - np.outer(self.a[:, s], q)
        if self.transforms:
            self.right[:, s + 1 :] = self.right[:, s + 1 :] - np.outer(
                self.right[:, s], q
            )
        return not np.any(self.a[s, s + 1 :] != 0)

    def _min_abs_position(self, block: np.ndarray) -> Optional[Tuple[int, int]]:
        mask = block != 0
        if not mask.any():
            return None
        positions = np.argwhere(mask)
        magnitudes = np.abs(block[mask])
        best = int(np.argmin(magnitudes))
        return int(positions[best][0]), int(positions[best][1])

    def _bring_pivot(self, s: int, block_origin: Tuple[int, int], pos: Tuple[int, int]) -> None:
        self._swap_rows(s, block_origin[0] + pos[0])
        self._swap_cols(s, block_origin[1] + pos[1])

    def reduce(self) -> List[int]:
        diagonal: List[int] = []
        for s in range(min(self.rows, self.cols)):
            pos = self._min_abs_position(self.a[s:, s:])
            if pos is None:
                break
            self._bring_pivot(s, (s, s), pos)
            while True:
                column_clean = self._clear_column(s)
                row_clean = self._clear_row(s)
                if not (column_clean and row_clean):
                    # A smaller remainder sits in row or column s; pivot on it.
                    line = np.concatenate((self.a[s:, s], self.a[s, s + 1 :]))
                    nonzero = [k for k in range(len(line)) if line[k] != 0]
                    k = min(nonzero, key=lambda idx: abs(line[idx]))
                    if k < self.rows - s:
                        self._swap_rows(s, s + k)
                    else:
                        self._swap_cols(s, s + 1 + k - (self.rows - s))
                    continue
                pivot = self.a[s, s]
                rest = self.a[s + 1 :, s + 1 :]
                bad = np.argwhere(rest % pivot != 0) if rest.size else []
                if len(bad):
                    self._add_row(s, s + 1 + int(bad[0][0]))
                    continue
                break
            if self.a[s, s] < 0:
                self._negate_row(s)
            diagonal.append(int(self.a[s, s]))
        return diagonal


def _identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def smith_decomposition(m: Any, transforms: bool = True) -> SmithDecomposition:
    a = as_array(m)
    reducer = _SmithReducer(a, transforms)
    diagonal = reducer.reduce()
    logger.debug(f"Smith form of {a.shape[0]}x{a.shape[1]} matrix: rank {len(diagonal)}")
    if not transforms:
        return SmithDecomposition(tuple(diagonal), a.shape)
    return SmithDecomposition(
        tuple(diagonal),
        a.shape,
        reducer.left,
        reducer.left_inverse,
        reducer.right,
    )


def smith_diagonal(m: Any) -> Tuple[int, ...]:
    return smith_decomposition(m, transforms=False).diagonal


def smith_normal_form(m: Any) -> Tuple[List[int], int]:
    """Non-unit invariant factors and the rank of an integer matrix."""
    diagonal = smith_diagonal(m)
    return [d for d in diagonal if d != 1], len(diagonal)


def rank_over(m: Any, coefficients: Coefficients) -> int:
    return smith_decomposition(m, transforms=False).rank_over(coefficients)


def kernel_basis(m: Any, coefficients: Coefficients) -> List[np.ndarray]:
    """Basis of the kernel of ``m`` over the coefficient ring, as column vectors."""
    a = as_array(m)
    decomposition = smith_decomposition(a)
    assert decomposition.right is not None
    basis = []
    for j in range(a.shape[1]):
        if j < decomposition.rank and not coefficients.is_zero(decomposition.diagonal[j]):
            continue
        basis.append(reduce_vector(decomposition.right[:, j], coefficients))
    return basis


def reduce_vector(v: np.ndarray, coefficients: Coefficients) -> np.ndarray:
    out = np.zeros(len(v), dtype=object)
    for i, x in enumerate(v):
        out[i] = coefficients.reduce(x)
    return out


class LinearSolver:
    """
    Solves m @ x = b over a coefficient ring for many right-hand sides.

    The Smith form diagonalises the system: with L m R = D, solve D y = L b
    coordinatewise and return x = R y.
    """

    def __init__(self, m: Any, coefficients: Coefficients) -> None:
        self.matrix = as_array(m)
        self.coefficients = coefficients
        self.decomposition = smith_decomposition(self.matrix)

    def solve(self, b: Sequence[Scalar]) -> Optional[np.ndarray]:
        """One solution x, or None when the system has none."""
        rows, cols = self.matrix.shape
        coefficients = self.coefficients
        decomposition = self.decomposition
        assert decomposition.left is not None and decomposition.right is not None
        target = np.array(list(b), dtype=object).reshape(-1)
        if len(target) != rows:
            raise ValueError(f"Right-hand side has length {len(target)}, expected {rows}")
        c = matmul(decomposition.left, target.reshape(-1, 1)).reshape(-1) if rows else target
        y = np.zeros(cols, dtype=object)
        for i in range(rows):
            value = c[i]
            d = decomposition.diagonal[i] if i < decomposition.rank else 0
            if coefficients.is_zero(d):
                if not coefficients.is_zero(value):
                    return None
                continue
            try:
                y[i] = coefficients.divide(value, d)
            except ValueError:
                return None
        x = matmul(decomposition.right, y.reshape(-1, 1)).reshape(-1) if cols else y
        return reduce_vector(x, coefficients)


def solve_linear(m: Any, b: Sequence[Scalar], coefficients: Coefficients) -> Optional[np.ndarray]:
    """One solution x of m @ x = b over the coefficient ring, or None."""
    return LinearSolver(m, coefficients).solve(b)
