import numpy as np
import pytest

from dnreflect.linalg import SparseMatrix
from dnreflect.rep import UnsupportedRankError, bar, random_sigma, report_passed
from dnreflect.ring import ONE, X, q_pow, s_pow
from dnreflect.rmatrix import (
    b_coefficient,
    build_R,
    check_R_intertwining,
    check_sigma_invariance,
    check_weight_conservation,
    check_YBE,
    conjugate_by_diagonal,
    xi,
    ybe_sides,
)


@pytest.fixture(scope="module")
def R4():
    return build_R(4)


def test_rank_guard():
    with pytest.raises(UnsupportedRankError):
        build_R(3)
    with pytest.raises(ValueError):
        build_R(4, "nope")


def test_b12_n4():
    # (q^-2 - 1) * xi * q^(b'-a') * (x - 1) with b' - a' = 1
    expected = (s_pow(-4) - 1) * s_pow(-12) * s_pow(2) * (X - 1)
    assert b_coefficient(1, 2, 4) == expected


def test_b_aa_vanishes_at_one():
    for a in range(1, 9):
        assert not b_coefficient(a, a, 4).substitute("x", ONE)


def test_diagonal_family(R4):
    # E_aa (x) E_aa coefficient; a != bar(a) always holds for even dimension
    for a in range(1, 9):
        idx = (a - 1) * 8 + a
        assert R4.mat[idx, idx] == (X - q_pow(-2)) * (X - xi(4))


def test_entry_pattern(R4):
    n, N = 4, 8
    for r, c, _ in R4.mat.entries():
        a, c1 = divmod(r - 1, N)
        b, d1 = divmod(c - 1, N)
        a, c1, b, d1 = a + 1, c1 + 1, b + 1, d1 + 1
        same = a == b and c1 == d1
        swap = a == d1 and c1 == b
        pair = c1 == bar(a, n) and d1 == bar(b, n)
        assert same or swap or pair, (r, c)


def test_degree_bounds(R4):
    for _, _, p in R4.mat.entries():
        lo, hi = p.degree_range("x")
        assert 0 <= lo and hi <= 2
        slo, shi = p.degree_range("s")
        assert -4 * 4 <= slo and shi <= 4 * 4


def test_r_at_one_is_scalar(R4):
    r1 = R4.at(ONE)
    c = (1 - q_pow(-2)) * (1 - xi(4))
    assert r1 == SparseMatrix.identity(64, c)


@pytest.mark.parametrize("n", [4, 5])
def test_intertwining(n):
    report = check_R_intertwining(n)
    assert len(report) == 3 * (n + 1)
    assert report_passed(report)


def test_printed_table_fails_intertwining():
    report = check_R_intertwining(4, build_R(4, "printed"))
    assert not report_passed(report)


def test_mutated_r_fails(R4):
    m = R4.mat.rows
    rows = {i: dict(r) for i, r in m.items()}
    i = next(iter(sorted(rows)))
    j = next(iter(sorted(rows[i])))
    rows[i][j] = rows[i][j] * 2
    bad = type(R4)(4, SparseMatrix._from_rows(64, 64, rows))
    assert not report_passed(check_R_intertwining(4, bad))


@pytest.mark.parametrize("n", [4, 5])
def test_weight_conservation(n):
    assert report_passed(check_weight_conservation(n))


def test_ybe_n4(R4):
    assert report_passed(check_YBE(4, R4))


def test_ybe_numeric_specialization(R4):
    left, right = ybe_sides(4, R4)
    s, x, y = 0.83, 1.0, 1.0
    assert np.allclose(left.to_dense(s=s, x=x, y=y), right.to_dense(s=s, x=x, y=y), rtol=1e-10, atol=1e-10)


def test_printed_table_fails_ybe():
    assert not report_passed(check_YBE(4, build_R(4, "printed")))


def test_sigma_invariance_trivial(R4):
    assert report_passed(check_sigma_invariance(4, [1] * 5, R4))


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_sigma_invariance_random(R4, seed):
    assert report_passed(check_sigma_invariance(4, random_sigma(4, seed), R4))


def test_sigma_invariance_n5():
    assert report_passed(check_sigma_invariance(5, random_sigma(5, 9)))


def test_sigma_negative_control(R4):
    diag = [ONE] * 8
    diag[0] = ONE * 2  # Sigma_1 doubled, not of the rescaling form
    conj = conjugate_by_diagonal(R4.mat, diag)
    assert conj != R4.mat


def test_conjugate_matches_entrywise(R4):
    from dnreflect.rep import sigma_transform
    from dnreflect.rmatrix import sigma_conjugate

    st = sigma_transform(4, random_sigma(4, 5))
    assert sigma_conjugate(R4.mat, st) == conjugate_by_diagonal(R4.mat, st.Sigma.diagonal_values())
