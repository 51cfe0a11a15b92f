"""Coideal generators, the closed-form reflection matrix and its families.

The boundary parameters ``epshat_j`` carry the denominator
``q^(1/2) - q^(-1/2)``; only their numerators are stored, and every product
``epshat_j * (q^m - 1)`` is expanded to a Laurent polynomial before use.
The closed-form K is stored multiplied by ``(q + 1)`` so its entries are
Laurent polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from dnreflect.linalg import SparseMatrix, kron, mat_mul
from dnreflect.rep import (
    SigmaTransform,
    VectorRep,
    _entry,
    bar,
    check_rank,
    prime,
    q_power_h,
    sigma_transform,
    spectral_rep,
    underline,
    vector_rep,
)
from dnreflect.ring import (
    I_UNIT,
    ZERO,
    LaurentPoly,
    X,
    Y,
    i_pow,
    poly_sum,
    q_pow,
    s_pow,
)
from dnreflect.rmatrix import RMatrix, build_R

NORMALIZATION_NOTE = "(q+1)-cleared: every entry is (q+1) times the closed-form K(x)"


@dataclass(frozen=True)
class CoidealParams:
    """Boundary data ``eta`` and ``epshat_j = numer_j / (q^(1/2) - q^(-1/2))``."""

    n: int
    eta: LaurentPoly
    epshat_numer: tuple
    sign: str = "+"
    eps_sign: str = "+"

    def perturbed(self, j: int, factor: LaurentPoly) -> "CoidealParams":
        numer = list(self.epshat_numer)
        numer[j] = numer[j] * factor
        return replace(self, epshat_numer=tuple(numer))


def _pm(sign: str) -> int:
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    return 1 if sign == "+" else -1


def coideal_params(n: int, sign: str = "+", eps_sign: str = "+") -> CoidealParams:
    """Parameters for which an intertwiner exists.

    ``sign`` picks the sign of ``eta`` (flipped by ``x -> -x``), ``eps_sign``
    the common sign of the ``epshat_j`` (flipped by the rescaling with every
    ``sigma_i = -1``).
    """
    check_rank(n)
    eta = LaurentPoly.monomial((-1) ** n * _pm(sign), s=2 - 2 * n)
    eps = I_UNIT * _pm(eps_sign)
    return CoidealParams(n, eta, tuple([eps] * (n + 1)), sign, eps_sign)


def epshat_q_term(numer: LaurentPoly, m: int) -> LaurentPoly:
    """``numer * (q^m - 1) / (s - 1/s)`` as a Laurent polynomial (``s = q^(1/2)``)."""
    if m == 0:
        return ZERO
    # (s^(2m) - 1)/(s - 1/s) = s * (s^(2m) - 1)/(s^2 - 1)
    geo = poly_sum(s_pow(2 * k) for k in range(abs(m)))
    if m > 0:
        return numer * s_pow(1) * geo
    return -numer * s_pow(1 + 2 * m) * geo


def build_Qhat_image(rep: VectorRep, j: int, params: CoidealParams, arg: LaurentPoly) -> SparseMatrix:
    """``pi_arg(Qhat_j) = q^(h_j/2)(x_j^+ + x_j^-) + epshat_j (q^(h_j) - 1)``."""
    kin = mat_mul(q_power_h(rep, j, half=True), spectral_rep(rep, j, "+", arg) + spectral_rep(rep, j, "-", arg))
    eps = SparseMatrix.diagonal(epshat_q_term(params.epshat_numer[j], m) for m in rep.h_eigenvalues(j))
    return kin + eps


def coideal_sides(rep: VectorRep, j: int, params: CoidealParams, left_arg=X, right_arg=Y):
    """Both sides of ``Delta(Qhat_j) = Qhat_j (x) 1 + q^(h_j) (x) Qhat_j`` on ``V_left (x) V_right``.

    The left side is assembled from the coproducts of the constituents
    (``q^(h/2)`` group-like, ``x^+-`` as in the algebra, ``q^h - 1`` expanded
    on the tensor weight), independently of the right side.
    """
    N = rep.dim
    ident = SparseMatrix.identity(N)
    hh = q_power_h(rep, j, half=True)
    hh_inv = q_power_h(rep, j, half=True, power=-1)
    delta_x = SparseMatrix(N * N)
    for sgn in "+-":
        delta_x = delta_x + kron(spectral_rep(rep, j, sgn, left_arg), hh_inv)
        delta_x = delta_x + kron(hh, spectral_rep(rep, j, sgn, right_arg))
    ev = rep.h_eigenvalues(j)
    eps = SparseMatrix.diagonal(
        epshat_q_term(params.epshat_numer[j], ev[a] + ev[b]) for a in range(N) for b in range(N)
    )
    lhs = mat_mul(kron(hh, hh), delta_x) + eps
    rhs = kron(build_Qhat_image(rep, j, params, left_arg), ident) + kron(
        q_power_h(rep, j), build_Qhat_image(rep, j, params, right_arg)
    )
    return lhs, rhs


def check_coideal(n: int, params: CoidealParams | None = None, left_arg=X, right_arg=Y) -> list[dict]:
    params = coideal_params(n) if params is None else params
    rep = vector_rep(n)
    return [_entry("coideal", (j,), *coideal_sides(rep, j, params, left_arg, right_arg)) for j in range(n + 1)]


# -- closed-form K ----------------------------------------------------------------


@dataclass
class KMatrix:
    n: int
    mat: SparseMatrix
    normalization_note: str = NORMALIZATION_NOTE
    label: str = "K"

    def at(self, arg: LaurentPoly) -> SparseMatrix:
        return self.mat.substitute("x", arg)


def _k(n: int, arg: LaurentPoly, tilde: bool = False) -> LaurentPoly:
    """``k(arg) = q^(n/2 - 1)(1 - arg)``; with ``tilde`` the ``q -> 1/q`` version."""
    return s_pow((2 - n) if tilde else (n - 2)) * (1 - arg)


def upper_entry(a: int, b: int, n: int) -> LaurentPoly:
    """Entry ``K_ab(x)`` for ``a + b <= 2n + 1`` times ``(q + 1)``."""
    N = 2 * n
    if a + b > N + 1 or (b == bar(a, n) and a > n):
        raise ValueError(f"entry ({a}, {b}) is fixed by the bar symmetry")
    x = X
    k = _k(n, x)
    sign_n = (-1) ** n
    pref = s_pow(int(2 * (prime(b, n) - n))) * i_pow(-underline(a, n) - underline(b, n))
    qp1 = q_pow(1) + 1
    if b == a:
        const = s_pow(n - 1) * sign_n + s_pow(1 - n)
        return qp1 * (pref * k - s_pow(1) * k * sign_n + const)
    if b == bar(a, n):
        ktilde_inv = _k(n, x.inverse_monomial(), tilde=True)
        return pref * (k + ktilde_inv * sign_n)
    return qp1 * pref * k


def build_K(n: int) -> KMatrix:
    """Closed-form reflection matrix.

    Entries on and above the antidiagonal come from :func:`upper_entry`; the
    rest from ``K_{bar a, bar b}(x) = (-1)^n Ktilde_ab(1/x)``.  Because the
    stored matrix carries the factor ``(q + 1)``, whose tilde is
    ``(q^-1 + 1)``, the completion picks up an extra ``q``.
    """
    check_rank(n)
    N = 2 * n
    entries = {}
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            if a + b <= N or (b == bar(a, n) and a <= n):
                entries[(a, b)] = upper_entry(a, b, n)
    for (a, b), v in list(entries.items()):
        img = (bar(a, n), bar(b, n))
        if img not in entries:
            entries[img] = _mirror(v, n)
    return KMatrix(n, SparseMatrix(N, N, {k: v for k, v in entries.items() if v}))


def _mirror(v: LaurentPoly, n: int) -> LaurentPoly:
    return v.tilde().substitute("x", X.inverse_monomial()) * q_pow(1) * (-1) ** n


def symmetry_image(K: SparseMatrix, n: int) -> SparseMatrix:
    """Apply the bar symmetry to every entry of a ``(q + 1)``-cleared matrix.

    A matrix satisfying the symmetry is a fixed point; the map is an involution.
    """
    return SparseMatrix(K.nrows, K.ncols, {(bar(a, n), bar(b, n)): _mirror(v, n) for a, b, v in K.entries()})


def K_at_one_constant(n: int) -> LaurentPoly:
    """Scalar ``c`` with ``K(1) = c * I`` (including the ``(q + 1)`` factor)."""
    return (q_pow(1) + 1) * (s_pow(1 - n) + s_pow(n - 1) * (-1) ** n)


def family_K(n: int, sigma, sign: str = "+", base: KMatrix | None = None) -> KMatrix:
    """``K^+_sigma = Sigma^-1 K Sigma`` and ``K^-_sigma(x) = K^+_sigma(-x)``."""
    base = build_K(n) if base is None else base
    st = sigma if isinstance(sigma, SigmaTransform) else sigma_transform(n, sigma)
    m = mat_mul(mat_mul(st.Sigma_inv, base.mat), st.Sigma)
    if _pm(sign) < 0:
        m = m.substitute("x", -X)
    return KMatrix(n, m, base.normalization_note, label=f"K{sign}_sigma")


# -- identity checks ----------------------------------------------------------


def check_K_intertwining(n: int, K: KMatrix | SparseMatrix | None = None, params: CoidealParams | None = None) -> list[dict]:
    """``K(x) pi_{eta x}(Qhat_j) == pi_{eta/x}(Qhat_j) K(x)`` for ``j = 0..n``."""
    K = build_K(n) if K is None else K
    Km = K.mat if isinstance(K, KMatrix) else K
    params = coideal_params(n) if params is None else params
    rep = vector_rep(n)
    eta = params.eta
    report = []
    for j in range(n + 1):
        lhs = mat_mul(Km, build_Qhat_image(rep, j, params, eta * X))
        rhs = mat_mul(build_Qhat_image(rep, j, params, eta * X.inverse_monomial()), Km)
        report.append(_entry("K_intertwining", (j,), lhs, rhs))
    return report


def reflection_sides(n: int, K: KMatrix | SparseMatrix | None = None, R: RMatrix | None = None):
    """``(1(x)K(y)) R(xy) (1(x)K(x)) R(x/y)`` and ``R(x/y) (1(x)K(x)) R(xy) (1(x)K(y))``."""
    K = build_K(n) if K is None else K
    Km = K.mat if isinstance(K, KMatrix) else K
    R = build_R(n) if R is None else R
    ident = SparseMatrix.identity(2 * n)
    Kx = kron(ident, Km)
    Ky = kron(ident, Km.substitute("x", Y))
    Rxy = R.at(X * Y)
    Rx_y = R.at(X * Y.inverse_monomial())
    left = mat_mul(mat_mul(mat_mul(Ky, Rxy), Kx), Rx_y)
    right = mat_mul(mat_mul(mat_mul(Rx_y, Kx), Rxy), Ky)
    return left, right


def check_reflection_equation(n: int, K: KMatrix | SparseMatrix | None = None, R: RMatrix | None = None) -> list[dict]:
    left, right = reflection_sides(n, K, R)
    return [_entry("reflection", (n,), left, right)]


def rescaled_K(K: KMatrix, f: LaurentPoly) -> KMatrix:
    """``f(x) K(x)`` for a scalar Laurent polynomial ``f``."""
    return KMatrix(K.n, K.mat.scale(f), K.normalization_note, label=f"{K.label}*f")


__all__ = [
    "CoidealParams",
    "KMatrix",
    "NORMALIZATION_NOTE",
    "build_K",
    "build_Qhat_image",
    "check_K_intertwining",
    "check_coideal",
    "check_reflection_equation",
    "coideal_params",
    "coideal_sides",
    "epshat_q_term",
    "family_K",
    "K_at_one_constant",
    "rescaled_K",
    "symmetry_image",
    "upper_entry",
]
