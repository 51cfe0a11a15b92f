"""Vector representation of the quantum affine algebra of type d_n^(1).

Generators ``x_i^+``, ``x_i^-``, ``h_i`` for ``i = 0..n`` act on a
``2n``-dimensional space with basis ``1..2n``; ``bar(j) = 2n + 1 - j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from dnreflect.linalg import SparseMatrix, first_difference, kron, mat_mul
from dnreflect.ring import (
    GaussianRational,
    ONE,
    ZERO,
    LaurentPoly,
    X,
    q_binomial,
    q_pow,
    s_pow,
)

MIN_RANK = 4


class UnsupportedRankError(ValueError):
    """Raised for ``n < 4``, where the index formulas degenerate."""


def check_rank(n: int) -> None:
    if not isinstance(n, int) or n < MIN_RANK:
        raise UnsupportedRankError(f"d_n^(1) needs n >= {MIN_RANK}, got n={n}")


def bar(j: int, n: int) -> int:
    return 2 * n + 1 - j


def prime(a: int, n: int) -> Fraction:
    """Half-integer shift ``a'``: ``a + 1/2`` for ``a <= n``, else ``a - 1/2``."""
    return Fraction(2 * a + 1, 2) if a <= n else Fraction(2 * a - 1, 2)


def underline(a: int, n: int) -> int:
    return a if a <= n else bar(a, n)


@dataclass(frozen=True)
class CartanMatrix:
    n: int
    a: tuple

    def __getitem__(self, ij):
        i, j = ij
        return self.a[i][j]


def dynkin_edges(n: int) -> list[tuple[int, int]]:
    check_rank(n)
    edges = [(0, 2), (1, 2)]
    edges += [(j, j + 1) for j in range(2, n - 1)]
    edges.append((n - 2, n))
    return edges


def cartan_matrix(n: int) -> CartanMatrix:
    check_rank(n)
    a = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        a[i][i] = 2
    for i, j in dynkin_edges(n):
        a[i][j] = a[j][i] = -1
    return CartanMatrix(n, tuple(tuple(r) for r in a))


def null_root_marks(n: int) -> list[int]:
    """Marks ``(1, 1, 2, ..., 2, 1, 1)`` of the affine d_n diagram."""
    check_rank(n)
    return [1, 1] + [2] * (n - 3) + [1, 1]


@dataclass
class VectorRep:
    n: int
    xp: list
    xm: list
    h: list

    @property
    def dim(self) -> int:
        return 2 * self.n

    def generator(self, label: str, i: int) -> SparseMatrix:
        return {"+": self.xp, "-": self.xm, "h": self.h}[label][i]

    def h_eigenvalues(self, i: int) -> list[int]:
        """Diagonal of ``pi(h_i)`` as integers."""
        out = []
        for v in self.h[i].diagonal_values(ZERO):
            if not v:
                out.append(0)
                continue
            (e, c) = v.monomial_parts()
            out.append(int(c.re))
        return out

    def rescaled(self, sigma) -> "VectorRep":
        """Images of ``x_i^+ -> sigma_i x_i^+``, ``x_i^- -> sigma_i^-1 x_i^-``."""
        sig = [_as_monomial(c) for c in sigma]
        if len(sig) != self.n + 1:
            raise ValueError(f"need {self.n + 1} rescaling factors")
        return VectorRep(
            self.n,
            [m.scale(c) for m, c in zip(self.xp, sig)],
            [m.scale(c.inverse_monomial()) for m, c in zip(self.xm, sig)],
            list(self.h),
        )


def _as_monomial(c) -> LaurentPoly:
    if not isinstance(c, LaurentPoly):
        c = LaurentPoly.constant(c)
    if not c.is_monomial():
        raise ValueError(f"rescaling factor must be an invertible monomial, got {c}")
    return c


def vector_rep(n: int) -> VectorRep:
    check_rank(n)
    N = 2 * n
    b = lambda j: bar(j, n)  # noqa: E731

    def mat(*terms):
        return SparseMatrix(N, N, [((r, c), LaurentPoly.constant(v)) for v, r, c in terms])

    xp, xm, h = [None] * (n + 1), [None] * (n + 1), [None] * (n + 1)
    for j in range(1, n):
        xp[j] = mat((1, j, j + 1), (-1, b(j + 1), b(j)))
        xm[j] = mat((1, j + 1, j), (-1, b(j), b(j + 1)))
        h[j] = mat((1, j, j), (-1, j + 1, j + 1), (-1, b(j), b(j)), (1, b(j + 1), b(j + 1)))
    xp[n] = mat((1, n - 1, b(n)), (-1, n, b(n - 1)))
    xm[n] = mat((1, b(n), n - 1), (-1, b(n - 1), n))
    h[n] = mat((1, n, n), (-1, b(n), b(n)), (-1, b(n - 1), b(n - 1)), (1, n - 1, n - 1))
    xp[0] = mat((1, b(2), 1), (-1, b(1), 2))
    xm[0] = mat((1, 1, b(2)), (-1, 2, b(1)))
    h[0] = mat((1, b(2), b(2)), (-1, 1, 1), (-1, 2, 2), (1, b(1), b(1)))
    return VectorRep(n, xp, xm, h)


def q_power_h(rep: VectorRep, i: int, half: bool = False, power: int = 1) -> SparseMatrix:
    """Diagonal ``q^(power*h_i)`` (or ``q^(power*h_i/2)`` when ``half``)."""
    step = 1 if half else 2
    return SparseMatrix.diagonal(s_pow(step * power * m) for m in rep.h_eigenvalues(i))


def spectral_rep(rep: VectorRep, i: int, sign: str, arg: LaurentPoly = X) -> SparseMatrix:
    """``pi_arg(x_i^sign)``: the affine node picks up ``arg^(+-1)``."""
    m = rep.xp[i] if sign == "+" else rep.xm[i]
    if i != 0:
        return m
    arg = _as_monomial(arg)
    return m.scale(arg if sign == "+" else arg.inverse_monomial())


def coproduct_image(rep: VectorRep, generator: tuple, left_arg=X, right_arg=ONE) -> SparseMatrix:
    """``(pi_left (x) pi_right)(Delta(Q))`` for ``Q = (label, i)``."""
    label, i = generator
    ident = SparseMatrix.identity(rep.dim)
    if label == "h":
        return kron(rep.h[i], ident) + kron(ident, rep.h[i])
    return kron(spectral_rep(rep, i, label, left_arg), q_power_h(rep, i, half=True, power=-1)) + kron(
        q_power_h(rep, i, half=True), spectral_rep(rep, i, label, right_arg)
    )


def generator_labels(n: int) -> list[tuple[str, int]]:
    return [(lab, i) for i in range(n + 1) for lab in ("+", "-", "h")]


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return mat_mul(a, b) - mat_mul(b, a)


def _entry(rid, idx, lhs, rhs):
    diff = first_difference(lhs, rhs)
    return {
        "relation_id": rid,
        "indices": list(idx),
        "status": "pass" if diff is None else "fail",
        "witness_entry": None if diff is None else _witness(diff),
    }


def _witness(diff):
    if diff[0] == "shape":
        return {"shape": [list(diff[1]), list(diff[2])]}
    i, j, a, b = diff
    return {"row": i, "col": j, "lhs": _txt(a), "rhs": _txt(b)}


def _txt(v):
    return v.canonical() if isinstance(v, LaurentPoly) else str(v)


def verify_relations(rep: VectorRep) -> list[dict]:
    """Check every defining relation exactly; returns one report entry per relation."""
    n, N = rep.n, rep.dim
    a = cartan_matrix(n)
    zero = SparseMatrix(N, N)
    report = []
    rng = range(n + 1)
    for i in rng:
        for j in rng:
            report.append(_entry("h_h", (i, j), commutator(rep.h[i], rep.h[j]), zero))
    for i in rng:
        for j in rng:
            for sgn, xs in (("+", rep.xp), ("-", rep.xm)):
                rhs = xs[j].scale(a[i, j] if sgn == "+" else -a[i, j])
                report.append(_entry(f"h_x{sgn}", (i, j), commutator(rep.h[i], xs[j]), rhs))
    q_minus_qinv = q_pow(1) - q_pow(-1)
    for i in rng:
        for j in rng:
            lhs = commutator(rep.xp[i], rep.xm[j]).scale(q_minus_qinv)
            rhs = q_power_h(rep, i) - q_power_h(rep, i, power=-1) if i == j else zero
            report.append(_entry("xp_xm", (i, j), lhs, rhs))
    for i in rng:
        for j in rng:
            if i == j:
                continue
            m = 1 - a[i, j]
            for sgn, xs in (("+", rep.xp), ("-", rep.xm)):
                total = zero
                for k in range(m + 1):
                    term = _power(xs[i], k, N) @ xs[j] @ _power(xs[i], m - k, N)
                    total = total + term.scale(q_binomial(m, k) * (-1) ** k)
                report.append(_entry(f"serre{sgn}", (i, j), total, zero))
    return report


def _power(m: SparseMatrix, k: int, N: int) -> SparseMatrix:
    out = SparseMatrix.identity(N)
    for _ in range(k):
        out = out @ m
    return out


def report_passed(report) -> bool:
    return all(e["status"] == "pass" for e in report)


@dataclass
class SigmaTransform:
    n: int
    sigma: list
    Sigma: SparseMatrix = field(repr=False)
    zeta: LaurentPoly

    @property
    def Sigma_inv(self) -> SparseMatrix:
        return SparseMatrix.diagonal(v.inverse_monomial() for v in self.Sigma.diagonal_values())


def _prod(vals) -> LaurentPoly:
    out = ONE
    for v in vals:
        out = out * v
    return out


def sigma_transform(n: int, sigma) -> SigmaTransform:
    """Basis change ``Sigma`` and spectral factor ``zeta`` of a rescaling automorphism."""
    check_rank(n)
    sig = [_as_monomial(c) for c in sigma]
    if len(sig) != n + 1:
        raise ValueError(f"need {n + 1} rescaling factors, got {len(sig)}")
    diag = [None] * (2 * n + 1)
    for j in range(1, n - 1):
        diag[j] = _prod(sig[j : n - 1]).inverse_monomial()
        diag[bar(j, n)] = _prod(sig[j : n + 1])
    diag[n - 1] = ONE
    diag[n] = sig[n - 1]
    diag[bar(n, n)] = sig[n]
    diag[bar(n - 1, n)] = sig[n - 1] * sig[n]
    mid = _prod(sig[2 : n - 1])
    zeta = sig[0] * sig[1] * mid * mid * sig[n - 1] * sig[n]
    return SigmaTransform(n, sig, SparseMatrix.diagonal(diag[1:]), zeta)


def random_sigma(n: int, seed: int, max_power: int = 3) -> list[LaurentPoly]:
    """Seeded monomials ``i^u s^k`` (numpy PCG64 stream) for ``sigma_0..sigma_n``."""
    rng = np.random.default_rng(seed)
    units = rng.integers(0, 4, size=n + 1)
    powers = rng.integers(-max_power, max_power + 1, size=n + 1)
    return [LaurentPoly.monomial(_UNITS[int(u)], s=int(k)) for u, k in zip(units, powers)]


_UNITS = (1, GaussianRational(0, 1), -1, GaussianRational(0, -1))


def check_basis_change(rep: VectorRep, st: SigmaTransform, x: LaurentPoly = X) -> list[dict]:
    """``pi_x(sigma(Q)) == Sigma^-1 pi_{zeta x}(Q) Sigma`` for every generator."""
    sig_rep = rep.rescaled(st.sigma)
    zx = st.zeta * x
    report = []
    for label, i in generator_labels(rep.n):
        if label == "h":
            lhs, rhs = rep.h[i], st.Sigma_inv @ rep.h[i] @ st.Sigma
        else:
            lhs = spectral_rep(sig_rep, i, label, x)
            rhs = st.Sigma_inv @ spectral_rep(rep, i, label, zx) @ st.Sigma
        report.append(_entry("basis_change", (label, i), lhs, rhs))
    return report


__all__ = [
    "CartanMatrix",
    "SigmaTransform",
    "UnsupportedRankError",
    "VectorRep",
    "bar",
    "cartan_matrix",
    "check_basis_change",
    "coproduct_image",
    "generator_labels",
    "null_root_marks",
    "prime",
    "random_sigma",
    "report_passed",
    "q_power_h",
    "sigma_transform",
    "spectral_rep",
    "underline",
    "vector_rep",
    "verify_relations",
]
