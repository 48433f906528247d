import numpy as np
import pytest

from pdhglp import BoundClass, LpProblem, SparseMatrix, classify_bounds, stack_k
from conftest import make_lp

inf = np.inf


def test_stack_k_blocks():
    p = make_lp(a=[[1, 0]], g=[[0, 1]], c=[0, 0], b=[2], h=[3])
    k, q = stack_k(p)
    assert np.array_equal(k.toarray(), [[1, 0], [0, 1]])
    assert np.array_equal(q, [2, 3])


def test_stack_k_without_equalities():
    p = make_lp(g=[[1, 2], [3, 4]], c=[1, 1], h=[5, 6])
    k, q = stack_k(p)
    assert k == p.g
    assert np.array_equal(q, p.h)


def test_stack_k_transpose_product(rng):
    a = rng.standard_normal((4, 8))
    g = rng.standard_normal((6, 8))
    p = make_lp(a=a, g=g, c=np.zeros(8), b=np.zeros(4), h=np.zeros(6))
    k, _ = stack_k(p)
    y = rng.standard_normal(10)
    expected = y[:4] @ a + y[4:] @ g
    assert np.allclose(k.rmatvec(y), expected, rtol=0, atol=1e-12)


def test_stack_then_split_recovers_blocks(rng):
    a = rng.standard_normal((3, 5)) * (rng.uniform(size=(3, 5)) < 0.5)
    g = rng.standard_normal((4, 5)) * (rng.uniform(size=(4, 5)) < 0.5)
    p = make_lp(a=a, g=g, c=np.zeros(5), b=np.zeros(3), h=np.zeros(4))
    k, _ = stack_k(p)
    assert k.row_block(0, 3) == p.a
    assert k.row_block(3, 7) == p.g


def test_k_does_not_alias_inputs():
    p = make_lp(g=[[1.0]], c=[1], h=[1])
    k, q = stack_k(p)
    assert k.csr.data is not p.g.csr.data
    q[0] = 99.0
    assert p.h[0] == 1.0


@pytest.mark.parametrize(
    "l, u, expected",
    [
        (-inf, inf, BoundClass.FREE),
        (-inf, 5.0, BoundClass.UPPER_ONLY),
        (0.0, inf, BoundClass.LOWER_ONLY),
        (0.0, 1.0, BoundClass.BOXED),
    ],
)
def test_classify_bounds(l, u, expected):
    p = make_lp(c=[1.0], l=[l], u=[u])
    assert classify_bounds(p)[0] == expected


def test_classify_is_total_and_deterministic(rng):
    n = 50
    l = np.where(rng.uniform(size=n) < 0.5, -inf, rng.standard_normal(n) - 2)
    u = np.where(rng.uniform(size=n) < 0.5, inf, rng.standard_normal(n) + 2)
    p = make_lp(c=np.zeros(n), l=l, u=u)
    first = classify_bounds(p)
    assert np.array_equal(first, classify_bounds(p))
    assert set(np.unique(first)) <= set(BoundClass)


@pytest.mark.parametrize(
    "kwargs, match",
    [
        (dict(l=[2.0], u=[1.0]), "l > u"),
        (dict(l=[np.nan]), "NaN"),
        (dict(l=[inf]), "lower bounds"),
    ],
)
def test_invalid_problems(kwargs, match):
    with pytest.raises(ValueError, match=match):
        make_lp(c=[1.0], **kwargs)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        LpProblem(SparseMatrix.empty(0, 2), SparseMatrix([[1.0, 1.0]]), np.ones(2),
                  np.zeros(0), np.zeros(2), np.zeros(2), np.ones(2))


def test_q_length():
    p = make_lp(a=[[1, 1]], g=[[1, 0], [0, 1]], c=[1, 1], b=[1], h=[0, 0])
    assert p.q.shape == (p.m1 + p.m2,)
