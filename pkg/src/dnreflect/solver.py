"""Numeric re-derivation of the reflection matrix from the intertwining condition.

The unknown is a Laurent polynomial matrix ``K(x) = sum_d x^d K_d`` over a
fixed degree window.  For each generator ``j`` and sample ``x_k`` the condition
``K(x) A_j(eta x) - B_j(eta/x) K(x) = 0`` becomes, with column-stacking,
``sum_d x_k^d (A^T kron I - I kron B) vec(K_d) = 0``.  The stacked system is
solved by SVD; the closed-form K is only consulted in
:func:`compare_to_closed_form`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace

import numpy as np

from dnreflect.kmatrix import build_K
from dnreflect.linalg import nullspace
from dnreflect.rep import check_rank, vector_rep

DEFAULT_Q = 0.7
DEFAULT_SAMPLES = 5
DEFAULT_TOL = 1e-9
DEFAULT_DEGREES = (-1, 1)


def _dense_int(m, N):
    out = np.zeros((N, N))
    for i, j, v in m.entries():
        out[i - 1, j - 1] = v.evaluate().real
    return out


class NumericRep:
    """Float images of the generators with integer ``h`` eigenvalues."""

    def __init__(self, n: int):
        check_rank(n)
        rep = vector_rep(n)
        self.n = n
        self.N = 2 * n
        self.xp = [_dense_int(m, self.N) for m in rep.xp]
        self.xm = [_dense_int(m, self.N) for m in rep.xm]
        self.hev = [np.array(rep.h_eigenvalues(i), dtype=float) for i in range(n + 1)]

    def qhat(self, j: int, s: complex, eps: complex, arg: complex) -> np.ndarray:
        """``q^(h/2)(x^+ + x^-) + eps (q^h - 1)`` with ``q = s^2`` at spectral argument ``arg``."""
        m = self.hev[j]
        half = s ** m
        if j == 0:
            kin = arg * self.xp[0] + self.xm[0] / arg
        else:
            kin = self.xp[j] + self.xm[j]
        return half[:, None] * kin + np.diag(eps * (s ** (2 * m) - 1))


@dataclass
class SolveConfig:
    n: int
    q_value: complex = DEFAULT_Q
    x_samples: list = field(default_factory=list)
    eta: complex | None = None
    eps: complex | None = None
    tol: float = DEFAULT_TOL
    seed: int = 42
    degrees: tuple = DEFAULT_DEGREES

    def __post_init__(self):
        check_rank(self.n)
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if not self.x_samples:
            self.x_samples = sample_points(DEFAULT_SAMPLES, self.seed)
        xs = [complex(v) for v in self.x_samples]
        if any(v == 0 for v in xs):
            raise ValueError("x samples must be nonzero")
        if len(set(xs)) != len(xs):
            raise ValueError("x samples must be pairwise distinct")
        self.x_samples = xs
        if self.eta is None:
            self.eta = existence_eta(self.n, self.q_value)
        if self.eps is None:
            self.eps = existence_eps(self.q_value)

    @property
    def s_value(self) -> complex:
        return cmath.sqrt(complex(self.q_value))


def sample_points(k: int, seed: int) -> list[complex]:
    """``k`` points ``r e^(i theta)`` with ``r`` in ``[0.5, 2]``, from numpy's PCG64 stream."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.5, 2.0, size=k)
    th = rng.uniform(0.0, 2 * np.pi, size=k)
    return [complex(v) for v in r * np.exp(1j * th)]


def existence_eta(n: int, q: complex, sign: int = 1) -> complex:
    return sign * (-1) ** n * complex(q) ** (1 - n)


def existence_eps(q: complex, t: complex = 1.0) -> complex:
    s = cmath.sqrt(complex(q))
    return 1j * t / (s - 1 / s)


def _degree_list(cfg: SolveConfig):
    lo, hi = cfg.degrees
    return list(range(lo, hi + 1))


def build_constraint_matrix(cfg: SolveConfig, nrep: NumericRep | None = None) -> np.ndarray:
    """Stacked linear system on ``[vec(K_lo), ..., vec(K_hi)]``.

    Shape: ``((n+1) * len(samples) * (2n)^2, len(degrees) * (2n)^2)``.
    """
    nrep = NumericRep(cfg.n) if nrep is None else nrep
    N = nrep.N
    ident = np.eye(N)
    s = cfg.s_value
    degs = _degree_list(cfg)
    blocks = []
    for xk in cfg.x_samples:
        for j in range(cfg.n + 1):
            A = nrep.qhat(j, s, cfg.eps, cfg.eta * xk)
            B = nrep.qhat(j, s, cfg.eps, cfg.eta / xk)
            C = np.kron(A.T, ident) - np.kron(ident, B)
            blocks.append(np.hstack([xk**d * C for d in degs]))
    return np.vstack(blocks)


@dataclass
class SolveResult:
    nullspace_dim: int
    K_coeffs: np.ndarray | None
    degrees: tuple
    singular_values: list
    singular_value_gap: float
    smallest_singular_value: float
    residuals: dict
    config: SolveConfig = field(repr=False)

    def K_at(self, x: complex) -> np.ndarray:
        if self.K_coeffs is None:
            raise ValueError("no unique intertwiner")
        lo = self.degrees[0]
        return sum(complex(x) ** (lo + k) * c for k, c in enumerate(self.K_coeffs))

    @property
    def K_numeric(self) -> list:
        """``K(x_k)`` at every configured sample."""
        return [self.K_at(x) for x in self.config.x_samples]


def gauge_fix(v: np.ndarray) -> np.ndarray:
    """Scale so the largest-magnitude entry is 1 (first index wins ties)."""
    flat = np.ravel(v)
    mags = np.abs(flat)
    k = int(np.flatnonzero(mags >= mags.max() * (1 - 1e-12))[0])
    return v / flat[k]


def intertwining_residuals(nrep: NumericRep, cfg: SolveConfig, Kfun, xs) -> dict:
    """``max|K A_j - B_j K|`` per generator and sample."""
    s = cfg.s_value
    out = {}
    for k, xk in enumerate(xs):
        Kx = Kfun(xk)
        for j in range(cfg.n + 1):
            A = nrep.qhat(j, s, cfg.eps, cfg.eta * xk)
            B = nrep.qhat(j, s, cfg.eps, cfg.eta / xk)
            out[f"j={j},sample={k}"] = float(np.abs(Kx @ A - B @ Kx).max())
    return out


def solve_K(cfg: SolveConfig) -> SolveResult:
    nrep = NumericRep(cfg.n)
    M = build_constraint_matrix(cfg, nrep)
    ns = nullspace(M, cfg.tol)
    sv = ns.singular_values
    N = nrep.N
    ndeg = len(_degree_list(cfg))
    coeffs = None
    residuals = {}
    if ns.dim == 1:
        v = gauge_fix(ns.basis[0])
        coeffs = np.array([v[k * N * N : (k + 1) * N * N].reshape((N, N), order="F") for k in range(ndeg)])
    # gap between the last kept and the first dropped singular value
    if 0 < ns.rank < len(sv):
        gap = sv[ns.rank - 1] / max(sv[ns.rank], 1e-300)
    else:
        gap = float("inf") if ns.rank == len(sv) else 0.0
    res = SolveResult(
        nullspace_dim=ns.dim,
        K_coeffs=coeffs,
        degrees=tuple(cfg.degrees),
        singular_values=sv,
        singular_value_gap=float(gap),
        smallest_singular_value=float(sv[-1]),
        residuals=residuals,
        config=cfg,
    )
    if coeffs is not None:
        res.residuals.update(intertwining_residuals(nrep, cfg, res.K_at, cfg.x_samples))
    return res


def held_out_residual(result: SolveResult, x_new: complex) -> float:
    """Relative intertwining residual of the solved K at a sample not used in the fit."""
    nrep = NumericRep(result.config.n)
    res = intertwining_residuals(nrep, result.config, result.K_at, [x_new])
    return max(res.values()) / float(np.abs(result.K_at(x_new)).max())


def scan_epsilon(n: int, q_value: complex = DEFAULT_Q, t_grid=(0.5, 1.0, 1.5), seed: int = 42,
                 samples: int = DEFAULT_SAMPLES, tol: float = DEFAULT_TOL) -> list[dict]:
    """Nullspace dimension for ``epshat = i t / (q^(1/2) - q^(-1/2))`` over ``t_grid``."""
    grid = list(t_grid)
    if not grid:
        raise ValueError("t_grid must be nonempty")
    base = SolveConfig(n=n, q_value=q_value, x_samples=sample_points(samples, seed), tol=tol, seed=seed)
    nrep = NumericRep(n)
    out = []
    for t in grid:
        cfg = replace(base, eps=existence_eps(q_value, t))
        ns = nullspace(build_constraint_matrix(cfg, nrep), tol)
        out.append({"t": float(t), "nullspace_dim": ns.dim, "smallest_singular_value": ns.singular_values[-1]})
    return out


def scan_gap(profile: list[dict]) -> float:
    """Ratio of the smallest singular value off the solution locus to the largest on it."""
    on = [p["smallest_singular_value"] for p in profile if p["nullspace_dim"] >= 1]
    off = [p["smallest_singular_value"] for p in profile if p["nullspace_dim"] == 0]
    if not on or not off:
        return float("nan")
    return min(off) / max(max(on), 1e-300)


def closed_form_at(n: int, q_value: complex, x: complex) -> np.ndarray:
    return build_K(n).mat.to_dense(s=cmath.sqrt(complex(q_value)), x=x)


def compare_to_closed_form(result: SolveResult, n: int | None = None, q_value: complex | None = None) -> dict:
    """Single complex ratio aligning the numeric K with the closed form over all samples."""
    if result.nullspace_dim != 1:
        raise ValueError("comparison needs a one-dimensional nullspace")
    cfg = result.config
    n = cfg.n if n is None else n
    q_value = cfg.q_value if q_value is None else q_value
    K = build_K(n).mat
    s = cmath.sqrt(complex(q_value))
    closed = np.concatenate([np.ravel(K.to_dense(s=s, x=xk)) for xk in cfg.x_samples])
    numeric = np.concatenate([np.ravel(result.K_at(xk)) for xk in cfg.x_samples])
    ratio = complex(np.vdot(numeric, closed) / np.vdot(numeric, numeric))
    scale = np.abs(closed).max()
    mag = np.abs(closed)
    # relative per entry; entries negligible against the matrix scale compare absolutely
    denom = np.where(mag > 1e-12 * scale, mag, scale)
    dev = float(np.max(np.abs(ratio * numeric - closed) / denom))
    return {"scalar_ratio": ratio, "max_rel_dev": dev}
