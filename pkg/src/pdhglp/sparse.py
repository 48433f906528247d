"""Sparse matrix container holding both compressed-row and compressed-column layouts."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

# Below this many stored entries a dense copy is kept for matvecs; numpy's
# dense kernels beat scipy's sparse dispatch overhead on tiny operands.
_DENSE_CUTOFF = 4096


class SparseMatrix:
    """Immutable real matrix stored in CSR and CSC form.

    Construction canonicalizes the input: duplicate entries are summed,
    explicit zeros are dropped and indices are sorted within each slice.
    """

    __slots__ = ("csr", "csc", "_dense")

    def __init__(self, matrix, shape: tuple[int, int] | None = None):
        if isinstance(matrix, SparseMatrix):
            csr = matrix.csr.copy()
        elif sp.issparse(matrix):
            csr = sp.csr_matrix(matrix, dtype=np.float64, copy=True)
        else:
            dense = np.asarray(matrix, dtype=np.float64)
            if dense.size == 0 and shape is not None:
                dense = dense.reshape(shape)
            if dense.ndim != 2:
                raise ValueError(f"expected a 2-D matrix, got shape {dense.shape}")
            csr = sp.csr_matrix(dense)
        if shape is not None and csr.shape != tuple(shape):
            raise ValueError(f"shape mismatch: {csr.shape} != {tuple(shape)}")
        csr.sum_duplicates()
        csr.eliminate_zeros()
        csr.sort_indices()
        if not np.all(np.isfinite(csr.data)):
            raise ValueError("matrix entries must be finite")
        csc = csr.tocsc()
        csc.sort_indices()
        for m in (csr, csc):
            m.data.setflags(write=False)
            m.indices.setflags(write=False)
            m.indptr.setflags(write=False)
        self.csr = csr
        self.csc = csc
        self._dense = csr.toarray() if csr.nnz <= _DENSE_CUTOFF else None

    @classmethod
    def from_triplets(cls, rows, cols, vals, shape: tuple[int, int]) -> "SparseMatrix":
        coo = sp.coo_matrix(
            (np.asarray(vals, dtype=np.float64), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
            shape=shape,
        )
        return cls(coo.tocsr())

    @classmethod
    def empty(cls, n_rows: int, n_cols: int) -> "SparseMatrix":
        return cls(sp.csr_matrix((n_rows, n_cols), dtype=np.float64))

    @property
    def n_rows(self) -> int:
        return self.csr.shape[0]

    @property
    def n_cols(self) -> int:
        return self.csr.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.csr.shape

    @property
    def nnz(self) -> int:
        return self.csr.nnz

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Return ``K @ x``."""
        if self._dense is not None:
            return self._dense @ x
        return self.csr @ x

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        """Return ``K.T @ y``."""
        if self._dense is not None:
            return y @ self._dense
        # csc.T is a CSR view of the transpose: row-wise kernel, fixed summation order
        return self.csc.T @ y

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def scaled(self, row_scale: np.ndarray, col_scale: np.ndarray) -> "SparseMatrix":
        """Return ``diag(row_scale) @ K @ diag(col_scale)`` with the same pattern."""
        csr = self.csr.copy()
        csr.data = csr.data * np.repeat(row_scale, np.diff(csr.indptr)) * col_scale[csr.indices]
        return SparseMatrix(csr)

    def row_abs_max(self) -> np.ndarray:
        return _slice_reduce(self.csr, np.abs(self.csr.data), np.maximum)

    def col_abs_max(self) -> np.ndarray:
        return _slice_reduce(self.csc, np.abs(self.csc.data), np.maximum)

    def row_abs_pow_sum(self, power: float) -> np.ndarray:
        return _slice_reduce(self.csr, _abs_pow(self.csr.data, power), np.add)

    def col_abs_pow_sum(self, power: float) -> np.ndarray:
        return _slice_reduce(self.csc, _abs_pow(self.csc.data, power), np.add)

    def vstack(self, other: "SparseMatrix") -> "SparseMatrix":
        return SparseMatrix(sp.vstack([self.csr, other.csr], format="csr"))

    def row_block(self, start: int, stop: int) -> "SparseMatrix":
        return SparseMatrix(self.csr[start:stop])

    def same_pattern(self, other: "SparseMatrix") -> bool:
        return (
            self.shape == other.shape
            and np.array_equal(self.csr.indptr, other.csr.indptr)
            and np.array_equal(self.csr.indices, other.csr.indices)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.same_pattern(other) and np.array_equal(self.csr.data, other.csr.data)

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz})"


def _abs_pow(data: np.ndarray, power: float) -> np.ndarray:
    # stored entries are nonzero, so |v|**0 == 1 without the 0**0 ambiguity
    return np.abs(data) ** power


def _slice_reduce(m: sp.csr_matrix | sp.csc_matrix, data: np.ndarray, ufunc) -> np.ndarray:
    n_slices = len(m.indptr) - 1
    out = np.zeros(n_slices)
    nonempty = np.diff(m.indptr) > 0
    if m.nnz:
        starts = m.indptr[:-1][nonempty]
        out[nonempty] = ufunc.reduceat(data, starts)
    return out
