import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pdhglp import SparseMatrix


def triplets(m):
    coo = m.tocoo()
    return sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))


def test_drops_explicit_zeros_and_sums_duplicates():
    k = SparseMatrix.from_triplets([0, 0, 1, 1], [1, 1, 0, 2], [2.0, 3.0, 0.0, -1.0], shape=(2, 3))
    assert k.nnz == 2
    assert np.array_equal(k.toarray(), [[0, 5, 0], [0, 0, -1]])
    assert k.csc.nnz == 2


def test_layouts_agree_and_indices_sorted(rng):
    dense = rng.standard_normal((7, 5)) * (rng.uniform(size=(7, 5)) < 0.4)
    k = SparseMatrix(dense)
    assert triplets(k.csr) == triplets(k.csc)
    for m in (k.csr, k.csc):
        for s in range(len(m.indptr) - 1):
            idx = m.indices[m.indptr[s]:m.indptr[s + 1]]
            assert np.all(np.diff(idx) > 0)


def test_immutable_buffers():
    k = SparseMatrix([[1.0, 2.0]])
    with pytest.raises(ValueError):
        k.csr.data[0] = 5.0


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        SparseMatrix([[np.inf]])


def test_empty_shapes():
    k = SparseMatrix(np.zeros((0, 4)), shape=(0, 4))
    assert k.shape == (0, 4)
    assert k.matvec(np.ones(4)).shape == (0,)
    assert np.array_equal(k.rmatvec(np.zeros(0)), np.zeros(4))


def test_sparse_path_matches_dense(rng):
    # large enough to bypass the dense fast path
    m = sp.random(300, 200, density=0.1, random_state=1, format="csr")
    k = SparseMatrix(m)
    assert k._dense is None
    x = rng.standard_normal(200)
    y = rng.standard_normal(300)
    dense = m.toarray()
    assert np.allclose(k.matvec(x), dense @ x, rtol=0, atol=1e-12)
    assert np.allclose(k.rmatvec(y), dense.T @ y, rtol=0, atol=1e-12)


def test_slice_reductions():
    k = SparseMatrix([[1.0, -4.0, 0.0], [0.0, 0.0, 0.0], [2.0, 0.0, 3.0]])
    assert np.array_equal(k.row_abs_max(), [4, 0, 3])
    assert np.array_equal(k.col_abs_max(), [2, 4, 3])
    assert np.array_equal(k.row_abs_pow_sum(1.0), [5, 0, 5])
    assert np.array_equal(k.col_abs_pow_sum(0.0), [2, 1, 1])


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)),
              elements=st.sampled_from([0.0, 0.0, 1.0, -2.5, 3.0])))
def test_matvec_property(dense):
    k = SparseMatrix(dense)
    x = np.arange(dense.shape[1], dtype=float) - 1.5
    y = np.arange(dense.shape[0], dtype=float) * 0.5
    assert np.allclose(k.matvec(x), dense @ x)
    assert np.allclose(k.rmatvec(y), dense.T @ y)
    assert np.count_nonzero(k.csr.data == 0) == 0
