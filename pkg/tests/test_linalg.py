import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _strategies import point, sparse_exact
from dnreflect.linalg import (
    DimensionError,
    SparseMatrix,
    first_difference,
    identity,
    kron,
    mat_approx_equal,
    mat_equal,
    mat_eval,
    mat_mul,
    nullspace,
    trace,
    transpose,
)
from dnreflect.rep import vector_rep
from dnreflect.ring import ONE, LaurentPoly, X

E = SparseMatrix.unit


def test_identity_product():
    a = SparseMatrix(3, 3, {(1, 2): X, (3, 1): ONE * 2})
    assert identity(3) @ a == a
    assert a @ identity(3) == a


def test_unit_calculus():
    assert E(4, 1, 2) @ E(4, 2, 3) == E(4, 1, 3)
    assert not (E(4, 1, 2) @ E(4, 3, 4)).rows


def test_rep_product_n4():
    rep = vector_rep(4)
    expected = E(8, 1, 1) + E(8, 7, 7)
    assert rep.xp[1] @ rep.xm[1] == expected


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        SparseMatrix(2, 3) @ SparseMatrix(2, 3)
    with pytest.raises(DimensionError):
        SparseMatrix(2, 3) + SparseMatrix(3, 2)
    with pytest.raises(IndexError):
        SparseMatrix(2, 2, {(3, 1): ONE})


def test_kron_examples():
    assert kron(identity(2), identity(3)) == identity(6)
    assert kron(E(4, 1, 1), E(4, 2, 2)) == E(16, 2, 2)
    # row (i, i') -> (i-1)*b.nrows + i'
    assert kron(E(4, 2, 3), E(4, 1, 4)) == E(16, 5, 12)


def test_no_stored_zeros():
    a = SparseMatrix(2, 2, {(1, 1): X, (2, 2): ONE})
    b = a - a
    assert b.nnz() == 0 and not b.rows


def test_first_difference_witness():
    a = SparseMatrix(2, 2, {(1, 2): X})
    b = SparseMatrix(2, 2, {(1, 2): X, (2, 1): ONE})
    assert first_difference(a, b) == (2, 1, 0, ONE)
    assert first_difference(a, a) is None


def test_trace_and_eval():
    a = SparseMatrix(2, 2, {(1, 1): X, (2, 2): ONE})
    assert trace(a) == X + 1
    assert mat_eval(a, x=2.0)[1, 1] == pytest.approx(2.0)


def test_nullspace_examples():
    z = nullspace(np.zeros((4, 4)))
    assert z.rank == 0 and z.dim == 4
    i = nullspace(np.eye(4))
    assert i.rank == 4 and i.dim == 0
    with pytest.raises(ValueError):
        nullspace(np.eye(2), tol=0)
    with pytest.raises(DimensionError):
        nullspace(np.zeros((0, 3)))


def test_nullspace_wide_matrix():
    m = np.array([[1.0, 2.0, 3.0]])
    res = nullspace(m)
    assert res.dim == 2
    assert len(res.singular_values) == 3


# -- properties -------------------------------------------------------------------


@st.composite
def kron_quad(draw):
    m, n, p = (draw(st.integers(1, 3)) for _ in range(3))
    r, s, t = (draw(st.integers(1, 3)) for _ in range(3))
    return (draw(sparse_exact(m, n)), draw(sparse_exact(r, s)), draw(sparse_exact(n, p)), draw(sparse_exact(s, t)))


@given(kron_quad())
def test_kron_mixed_product(quad):
    a, b, c, d = quad
    assert mat_equal(kron(a, b) @ kron(c, d), kron(a @ c, b @ d))


@given(sparse_exact(max_dim=8))
def test_transpose_involution(a):
    assert transpose(transpose(a)) == a


@given(st.data(), point, point)
def test_eval_commutes_with_product(data, s, x):
    n, k, m = (data.draw(st.integers(1, 4)) for _ in range(3))
    a, b = data.draw(sparse_exact(n, k)), data.draw(sparse_exact(k, m))
    lhs = mat_eval(mat_mul(a, b), s, x)
    rhs = mat_mul(mat_eval(a, s, x), mat_eval(b, s, x))
    assert mat_approx_equal(lhs, rhs, 1e-10)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 5), st.integers(0, 10_000))
def test_nullspace_residual_bound(rows, cols, rank, seed):
    rng = np.random.default_rng(seed)
    rank = min(rank, rows, cols)
    m = rng.normal(size=(rows, rank)) @ rng.normal(size=(rank, cols)) if rank else np.zeros((rows, cols))
    tol = 1e-9
    res = nullspace(m, tol)
    assert res.rank == rank  # generic Gaussian factors have full rank
    assert res.dim == cols - res.rank
    norm = np.linalg.norm(m, 2)
    for v in res.basis:
        assert abs(np.linalg.norm(v) - 1) < 1e-12
        assert np.linalg.norm(m @ v) <= 10 * tol * max(norm, 1e-300) or norm == 0
    assert list(res.singular_values) == sorted(res.singular_values, reverse=True)
