"""Sparse matrices over exact or complex scalars, and an SVD nullspace.

Indices are 1-based, matching the unit-matrix notation ``E_{j,k}``.
Vectorization is column-stacking: ``vec(A K B) = (B.T kron A) vec(K)``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from dnreflect import _kernels as K
from dnreflect.ring import LaurentPoly, poly_sum


class DimensionError(ValueError):
    pass


def _is_exact(v) -> bool:
    return isinstance(v, LaurentPoly)


class SparseMatrix:
    """Row-major sparse matrix ``{row: {col: value}}`` with no stored zeros."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int | None = None, entries=None):
        ncols = nrows if ncols is None else ncols
        if nrows <= 0 or ncols <= 0:
            raise DimensionError("matrix dimensions must be positive")
        self.nrows = nrows
        self.ncols = ncols
        self.rows: dict[int, dict[int, object]] = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (i, j), v in items:
                self._accumulate(i, j, v)

    def _accumulate(self, i, j, v):
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise IndexError(f"entry ({i}, {j}) outside {self.nrows}x{self.ncols}")
        row = self.rows.setdefault(i, {})
        if j in row:
            v = row[j] + v
        if v:
            row[j] = v
        else:
            row.pop(j, None)
            if not row:
                del self.rows[i]

    @classmethod
    def _from_rows(cls, nrows, ncols, rows) -> "SparseMatrix":
        m = cls.__new__(cls)
        m.nrows, m.ncols = nrows, ncols
        m.rows = {i: r for i, r in rows.items() if r}
        return m

    @classmethod
    def identity(cls, n: int, one=None) -> "SparseMatrix":
        one = LaurentPoly.constant(1) if one is None else one
        return cls._from_rows(n, n, {i: {i: one} for i in range(1, n + 1)})

    @classmethod
    def unit(cls, n: int, j: int, k: int, value=None) -> "SparseMatrix":
        """``E_{j,k}`` in dimension ``n``."""
        value = LaurentPoly.constant(1) if value is None else value
        return cls(n, n, {(j, k): value})

    @classmethod
    def diagonal(cls, values) -> "SparseMatrix":
        vals = list(values)
        return cls(len(vals), len(vals), {(i, i): v for i, v in enumerate(vals, 1) if v})

    # -- access ------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows.get(i, {}).get(j, 0)

    def entries(self) -> Iterator[tuple[int, int, object]]:
        """Nonzero entries sorted by ``(row, col)``."""
        for i in sorted(self.rows):
            row = self.rows[i]
            for j in sorted(row):
                yield i, j, row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def diagonal_values(self, zero=0) -> list:
        return [self.rows.get(i, {}).get(i, zero) for i in range(1, self.nrows + 1)]

    # -- arithmetic ----------------------------------------------------------
    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def _combine(self, other, sign):
        self._check_same_shape(other)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, orow in other.rows.items():
            row = rows.setdefault(i, {})
            for j, v in orow.items():
                cur = row.get(j)
                new = (v if sign > 0 else -v) if cur is None else (cur + v if sign > 0 else cur - v)
                if new:
                    row[j] = new
                else:
                    row.pop(j, None)
        return SparseMatrix._from_rows(self.nrows, self.ncols, rows)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.map(lambda v: -v)

    def scale(self, c) -> "SparseMatrix":
        return self.map(lambda v: v * c)

    def __matmul__(self, other):
        return mat_mul(self, other)

    def map(self, fn: Callable) -> "SparseMatrix":
        """Apply ``fn`` entrywise to stored entries, dropping zero results."""
        rows = {}
        for i, row in self.rows.items():
            new = {}
            for j, v in row.items():
                w = fn(v)
                if w:
                    new[j] = w
            rows[i] = new
        return SparseMatrix._from_rows(self.nrows, self.ncols, rows)

    def transpose(self) -> "SparseMatrix":
        rows: dict = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                rows.setdefault(j, {})[i] = v
        return SparseMatrix._from_rows(self.ncols, self.nrows, rows)

    @property
    def T(self):
        return self.transpose()

    def substitute(self, var: str, m: LaurentPoly) -> "SparseMatrix":
        return self.map(lambda p: p.substitute(var, m))

    def evaluate(self, s=1.0, x=1.0, y=1.0) -> "SparseMatrix":
        """Entrywise complex evaluation (``mat_eval``)."""
        return self.map(lambda p: p.evaluate(s, x, y))

    def to_dense(self, s=None, x=1.0, y=1.0) -> np.ndarray:
        """Dense complex array; exact entries are evaluated at ``(s, x, y)``."""
        out = np.zeros((self.nrows, self.ncols), dtype=complex)
        for i, row in self.rows.items():
            for j, v in row.items():
                if _is_exact(v):
                    if s is None:
                        raise ValueError("exact matrix needs an evaluation point")
                    v = v.evaluate(s, x, y)
                out[i - 1, j - 1] = v
        return out

    @classmethod
    def from_dense(cls, a, tol: float = 0.0) -> "SparseMatrix":
        a = np.asarray(a)
        m = cls(*a.shape)
        for (i, j), v in np.ndenumerate(a):
            if abs(v) > tol:
                m.rows.setdefault(i + 1, {})[j + 1] = complex(v)
        return m

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


class TimeBudgetExceeded(TimeoutError):
    pass


def mat_mul(a: SparseMatrix, b: SparseMatrix, deadline: float | None = None) -> SparseMatrix:
    """Sparse product; ``deadline`` is a ``time.monotonic()`` value checked per row."""
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    if _first_value_exact(a) or _first_value_exact(b):
        arows = {i: {k: v._t for k, v in r.items()} for i, r in a.rows.items()}
        brows = {k: {j: v._t for j, v in r.items()} for k, r in b.rows.items()}
        try:
            prod = K.matmul_terms(arows, brows, deadline)
        except TimeoutError as exc:
            raise TimeBudgetExceeded(str(exc)) from None
        raw = LaurentPoly._raw
        out_rows = {i: {j: raw(t) for j, t in r.items()} for i, r in prod.items()}
        return SparseMatrix._from_rows(a.nrows, b.ncols, out_rows)
    out_rows: dict = {}
    brows = b.rows
    for i, arow in a.rows.items():
        if deadline is not None and time.monotonic() > deadline:
            raise TimeBudgetExceeded("time budget exhausted during matrix product")
        row = {}
        for k, av in arow.items():
            brow = brows.get(k)
            if not brow:
                continue
            for j, bv in brow.items():
                row[j] = row.get(j, 0) + av * bv
        row = {j: v for j, v in row.items() if v}
        if row:
            out_rows[i] = row
    return SparseMatrix._from_rows(a.nrows, b.ncols, out_rows)


def _first_value_exact(m: SparseMatrix) -> bool:
    for row in m.rows.values():
        for v in row.values():
            return _is_exact(v)
    return False


def mat_add(a, b):
    return a + b


def mat_sub(a, b):
    return a - b


def mat_scale(a, c):
    return a.scale(c)


def transpose(a):
    return a.transpose()


def identity(n, one=None):
    return SparseMatrix.identity(n, one)


def mat_eval(a, s=1.0, x=1.0, y=1.0):
    return a.evaluate(s, x, y)


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Kronecker product; row ``(i, i')`` maps to ``(i-1)*b.nrows + i'``."""
    rows: dict = {}
    for i, arow in a.rows.items():
        for ib, brow in b.rows.items():
            r = (i - 1) * b.nrows + ib
            row = {}
            for j, av in arow.items():
                base = (j - 1) * b.ncols
                for jb, bv in brow.items():
                    v = av * bv
                    if v:
                        row[base + jb] = v
            rows[r] = row
    return SparseMatrix._from_rows(a.nrows * b.nrows, a.ncols * b.ncols, rows)


def first_difference(a: SparseMatrix, b: SparseMatrix):
    """First ``(row, col, a_entry, b_entry)`` where the matrices differ, else None."""
    if a.shape != b.shape:
        return ("shape", a.shape, b.shape)
    for i in sorted(set(a.rows) | set(b.rows)):
        ra, rb = a.rows.get(i, {}), b.rows.get(i, {})
        if ra == rb:
            continue
        for j in sorted(set(ra) | set(rb)):
            va, vb = ra.get(j, 0), rb.get(j, 0)
            if va != vb:
                return (i, j, va, vb)
    return None


def mat_equal(a: SparseMatrix, b: SparseMatrix) -> bool:
    return first_difference(a, b) is None


def mat_approx_equal(a: SparseMatrix, b: SparseMatrix, tol: float = 1e-10) -> bool:
    """Relative closeness of complex matrices: ``max|a-b| <= tol*(1+max|a|)``."""
    if a.shape != b.shape:
        return False
    da, db = a.to_dense(), b.to_dense()
    return float(np.abs(da - db).max()) <= tol * (1.0 + float(np.abs(da).max()))


def scalar_matrix(n: int, c: LaurentPoly) -> SparseMatrix:
    return SparseMatrix.identity(n, c) if c else SparseMatrix(n, n)


def trace(a: SparseMatrix):
    vals = [a.rows.get(i, {}).get(i) for i in range(1, min(a.shape) + 1)]
    vals = [v for v in vals if v is not None]
    if vals and _is_exact(vals[0]):
        return poly_sum(vals)
    return sum(vals)


@dataclass
class NullspaceResult:
    rank: int
    basis: list = field(default_factory=list)
    singular_values: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> np.ndarray:
        if not self.basis:
            return np.zeros((0, 0), dtype=complex)
        return np.array(self.basis).T


def nullspace(m, tol: float = 1e-9) -> NullspaceResult:
    """Nullspace of a dense complex matrix by SVD with a relative threshold.

    The rank counts singular values above ``tol * s_max``.  Basis vectors are
    the corresponding right singular vectors (unit norm).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise DimensionError("nullspace of an empty matrix")
    ncols = a.shape[1]
    # thin SVD already yields a complete right basis when rows >= cols
    _, sv, vh = np.linalg.svd(a, full_matrices=a.shape[0] < ncols)
    smax = float(sv[0]) if sv.size else 0.0
    rank = int(np.sum(sv > tol * smax)) if smax > 0 else 0
    basis = [vh[k].conj() for k in range(rank, ncols)]
    # report one singular value per column; missing ones (wide matrices) are zero
    svals = [float(v) for v in sv] + [0.0] * (ncols - sv.size)
    return NullspaceResult(rank=rank, basis=basis, singular_values=svals[:ncols])
