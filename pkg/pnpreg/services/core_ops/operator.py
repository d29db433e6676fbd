import logging
from typing import Iterable, Tuple, Union

import numpy as np
import scipy.sparse as sp

from pnpreg.models.imaging import Image
from pnpreg.utils.errors import RejectedInputError

logger = logging.getLogger(__name__)

VectorLike = Union[np.ndarray, Image]


def as_vector(value: VectorLike) -> np.ndarray:
    """Flat float64 view of an Image or array."""
    if isinstance(value, Image):
        return value.data
    return np.asarray(value, dtype=np.float64).reshape(-1)


class SparseOperator:
    """A real sparse matrix A kept in row-compressed form, with a column-compressed
    copy of Aᵀ so both apply and apply_adjoint are row traversals."""

    def __init__(self, matrix):
        matrix = sp.csr_matrix(matrix, dtype=np.float64)
        matrix.sum_duplicates()
        matrix.eliminate_zeros()
        self._matrix = matrix
        self._adjoint = matrix.T.tocsr()

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[Tuple[int, int, float]]) -> "SparseOperator":
        entries = list(entries)
        if not entries:
            return cls(sp.csr_matrix((rows, cols), dtype=np.float64))
        r, c, w = (np.asarray(v) for v in zip(*entries))
        r = r.astype(np.int64)
        c = c.astype(np.int64)
        if r.min() < 0 or r.max() >= rows or c.min() < 0 or c.max() >= cols:
            raise RejectedInputError(f"entry index outside a {rows}x{cols} operator")
        keys = r * cols + c
        if np.unique(keys).size != keys.size:
            raise RejectedInputError("duplicate (row, col) entries")
        return cls(sp.csr_matrix((w.astype(np.float64), (r, c)), shape=(rows, cols)))

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "SparseOperator":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        return cls(sp.csr_matrix(matrix))

    @classmethod
    def identity(cls, n: int) -> "SparseOperator":
        return cls(sp.identity(n, dtype=np.float64, format="csr"))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseOperator":
        return cls(sp.csr_matrix((rows, cols), dtype=np.float64))

    @property
    def rows(self) -> int:
        return self._matrix.shape[0]

    @property
    def cols(self) -> int:
        return self._matrix.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._matrix.shape

    @property
    def nnz(self) -> int:
        return self._matrix.nnz

    @property
    def matrix(self) -> sp.csr_matrix:
        return self._matrix

    @property
    def adjoint_matrix(self) -> sp.csr_matrix:
        return self._adjoint

    def to_dense(self) -> np.ndarray:
        return self._matrix.toarray()

    def take_rows(self, indices) -> "SparseOperator":
        """Restriction to a subset of measurements (A_D or A_S)."""
        indices = np.asarray(indices, dtype=np.int64).reshape(-1)
        return SparseOperator(self._matrix[indices])

    def transpose(self) -> "SparseOperator":
        return SparseOperator(self._adjoint)

    def row_sums(self) -> np.ndarray:
        return np.asarray(self._matrix.sum(axis=1)).reshape(-1)

    def __repr__(self) -> str:
        return f"SparseOperator({self.rows}x{self.cols}, nnz={self.nnz})"


def apply(A: SparseOperator, x: VectorLike) -> np.ndarray:
    x = as_vector(x)
    if x.size != A.cols:
        raise RejectedInputError(f"apply: vector of length {x.size} for operator with {A.cols} columns")
    return A.matrix @ x


def apply_adjoint(A: SparseOperator, y: VectorLike) -> np.ndarray:
    y = as_vector(y)
    if y.size != A.rows:
        raise RejectedInputError(f"apply_adjoint: vector of length {y.size} for operator with {A.rows} rows")
    return A.adjoint_matrix @ y


def residual(A: SparseOperator, x: VectorLike, b: VectorLike) -> np.ndarray:
    b = as_vector(b)
    if b.size != A.rows:
        raise RejectedInputError(f"data of length {b.size} for operator with {A.rows} rows")
    return apply(A, x) - b


def grad_ls(A: SparseOperator, x: VectorLike, b: VectorLike) -> np.ndarray:
    """Gradient 2Aᵀ(Ax - b) of D(x) = ||Ax - b||²."""
    return 2.0 * apply_adjoint(A, residual(A, x, b))


def discrepancy(A: SparseOperator, x: VectorLike, b: VectorLike) -> float:
    r = residual(A, x, b)
    return float(r @ r)
