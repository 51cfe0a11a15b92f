from fractions import Fraction

import pytest

from dnreflect.linalg import SparseMatrix, kron, trace
from dnreflect.rep import (
    UnsupportedRankError,
    bar,
    cartan_matrix,
    check_basis_change,
    coproduct_image,
    null_root_marks,
    prime,
    q_power_h,
    random_sigma,
    report_passed,
    sigma_transform,
    spectral_rep,
    underline,
    vector_rep,
    verify_relations,
)
from dnreflect.ring import ONE, ZERO, X, LaurentPoly, parse_monomial, s_pow

E = SparseMatrix.unit


def test_index_helpers():
    assert bar(1, 4) == 8 and bar(4, 4) == 5
    assert all(bar(bar(j, 5), 5) == j for j in range(1, 11))
    assert prime(3, 4) == Fraction(7, 2)
    assert prime(5, 4) == Fraction(9, 2)
    # both sides of the branch boundary sit at n + 1/2
    assert prime(4, 4) == prime(5, 4) == Fraction(9, 2)
    assert prime(4, 4) + prime(5, 4) == 9
    assert underline(2, 4) == 2 and underline(8, 4) == 1
    assert all(1 <= underline(a, 6) <= 6 for a in range(1, 13))


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_cartan_matrix(n):
    a = cartan_matrix(n)
    assert all(a[i, i] == 2 for i in range(n + 1))
    assert all(a[i, j] == a[j, i] and a[i, j] in (0, -1) for i in range(n + 1) for j in range(n + 1) if i != j)
    marks = null_root_marks(n)
    assert all(sum(a[i, j] * marks[j] for j in range(n + 1)) == 0 for i in range(n + 1))


def test_cartan_n4_entries():
    a = cartan_matrix(4)
    assert a[0, 2] == -1 and a[0, 1] == 0 and a[2, 4] == -1 and a[3, 4] == 0


def test_rank_guard():
    for fn in (vector_rep, cartan_matrix):
        with pytest.raises(UnsupportedRankError):
            fn(3)


def test_vector_rep_n4_examples():
    rep = vector_rep(4)
    assert rep.xp[0] == E(8, 7, 1) - E(8, 8, 2)
    assert rep.h_eigenvalues(1) == [1, -1, 0, 0, 0, 0, 1, -1]
    for i in range(5):
        assert trace(rep.h[i]) == ZERO


def test_q_power_h():
    rep = vector_rep(4)
    half = q_power_h(rep, 1, half=True)
    assert half[1, 1] == s_pow(1)
    assert half[3, 3] == ONE
    assert half @ half == q_power_h(rep, 1)


def test_spectral_rep():
    rep = vector_rep(4)
    assert spectral_rep(rep, 1, "+", X) == rep.xp[1]
    assert spectral_rep(rep, 0, "-", X) == rep.xm[0].scale(X.inverse_monomial())
    eta = s_pow(-6)
    arg = eta * X.inverse_monomial()
    assert spectral_rep(rep, 0, "+", arg) == rep.xp[0].scale(LaurentPoly.monomial(1, s=-6, x=-1))


def test_coproduct_images():
    rep = vector_rep(4)
    ident = SparseMatrix.identity(8)
    assert coproduct_image(rep, ("h", 2), X, ONE) == kron(rep.h[2], ident) + kron(ident, rep.h[2])
    got = coproduct_image(rep, ("+", 1), X, ONE)
    x1 = E(8, 1, 2) - E(8, 7, 8)
    want = kron(x1, q_power_h(rep, 1, True, -1)) + kron(q_power_h(rep, 1, True), x1)
    assert got == want


@pytest.mark.parametrize("n", [4, 5, 6])
def test_relations(n):
    report = verify_relations(vector_rep(n))
    assert report_passed(report), [e for e in report if e["status"] != "pass"][:1]
    ids = {e["relation_id"] for e in report}
    assert ids == {"h_h", "h_x+", "h_x-", "xp_xm", "serre+", "serre-"}


def test_relations_detect_a_broken_rep():
    rep = vector_rep(4)
    rep.xp[2] = rep.xp[2].scale(ONE * 2)
    report = verify_relations(rep)
    bad = [e for e in report if e["status"] == "fail"]
    assert bad and bad[0]["witness_entry"] is not None


@pytest.mark.parametrize("n,seed", [(4, 1), (4, 2), (5, 3)])
def test_rescaling_is_automorphism(n, seed):
    rep = vector_rep(n).rescaled(random_sigma(n, seed))
    assert report_passed(verify_relations(rep))


def test_sigma_transform_examples():
    st = sigma_transform(4, [1] * 5)
    assert st.Sigma == SparseMatrix.identity(8) and st.zeta == ONE
    c = parse_monomial("i*s^3")
    st = sigma_transform(4, [1, 1, 1, c, 1])
    assert st.Sigma[4, 4] == c and st.zeta == c
    with pytest.raises(ValueError):
        sigma_transform(4, [1, 1, X + 1, 1, 1])
    with pytest.raises(ValueError):
        sigma_transform(4, [1, 1, 1])


@pytest.mark.parametrize("n,seed", [(4, 11), (4, 12), (5, 13), (5, 14)])
def test_basis_change_identity(n, seed):
    st = sigma_transform(n, random_sigma(n, seed))
    assert report_passed(check_basis_change(vector_rep(n), st))


def test_random_sigma_is_seeded():
    assert random_sigma(5, 7) == random_sigma(5, 7)
    assert all(v.is_monomial() for v in random_sigma(5, 7))

