import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dnreflect import _kernels, _pykernels as py

try:
    from dnreflect import _ckernels as cy
except ImportError:  # extension not built
    cy = None

needs_ext = pytest.mark.skipif(cy is None, reason="compiled kernels not built")

exps = st.tuples(*(st.integers(-30, 30) for _ in range(3))).map(lambda e: py.pack(*e))
small = st.integers(-50, 50)
coeff = st.one_of(small, st.integers(-(2**40), 2**40), st.builds(Fraction, small, st.integers(1, 5)))
pair = st.tuples(coeff, coeff).map(lambda p: tuple(v.numerator if isinstance(v, Fraction) and v.denominator == 1 else v for v in p))
terms_small = st.dictionaries(exps, st.tuples(small, small), max_size=6).map(py.prune)
terms_any = st.dictionaries(exps, pair, max_size=6).map(py.prune)


def test_pack_roundtrip():
    for e in [(0, 0, 0), (-5, 3, 7), (py.EXP_LIMIT - 1, -py.EXP_LIMIT + 1, 0)]:
        assert py.unpack(py.pack(*e)) == e
    assert py.pack(1, 2, 3) + py.pack(-1, 0, 4) - py.OFFSET == py.pack(0, 2, 7)


def test_backend_selected():
    assert _kernels.BACKEND in ("python", "cython")
    if cy is not None and os.environ.get("DNREFLECT_PURE_PYTHON", "") not in ("1", "true", "yes"):
        assert _kernels.BACKEND == "cython"


def test_env_forces_pure_python():
    code = "import dnreflect._kernels as K; print(K.BACKEND)"
    env = dict(os.environ, DNREFLECT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_ext
@given(terms_any, terms_any)
def test_mul_matches(a, b):
    assert cy.mul(a, b) == py.mul(a, b)


@needs_ext
@given(terms_any, terms_any, terms_any)
def test_muladd_matches(acc, a, b):
    x = py.prune(cy.muladd_into(dict(acc), a, b))
    y = py.prune(py.muladd_into(dict(acc), a, b))
    assert x == y


@st.composite
def term_matrix(draw, nrows, ncols, terms):
    cells = draw(st.dictionaries(st.tuples(st.integers(1, nrows), st.integers(1, ncols)), terms, max_size=nrows * ncols))
    rows = {}
    for (i, j), t in cells.items():
        if t:
            rows.setdefault(i, {})[j] = t
    return rows


@needs_ext
@given(st.data(), st.sampled_from([terms_small, terms_any]))
def test_matmul_terms_matches(data, terms):
    n, k, m = (data.draw(st.integers(1, 5)) for _ in range(3))
    a = data.draw(term_matrix(n, k, terms))
    b = data.draw(term_matrix(k, m, terms))
    assert cy.matmul_terms(a, b) == py.matmul_terms(a, b)


@needs_ext
def test_overflow_falls_back_exactly():
    big = 2**29 + 7
    a = {py.pack(0, 0, 0): (big, big), py.pack(1, 0, 0): (-big, big)}
    b = {py.pack(0, 0, 0): (big, -big), py.pack(-1, 0, 0): (big, big)}
    for _ in range(3):
        a = py.mul(a, a)  # coefficients far beyond 64 bits
    assert cy.mul(a, b) == py.mul(a, b)
    rows_a = {1: {1: a, 2: a}}
    rows_b = {1: {1: b}, 2: {1: b}}
    assert cy.matmul_terms(rows_a, rows_b) == py.matmul_terms(rows_a, rows_b)


@needs_ext
def test_accumulation_overflow_detected():
    # each product fits in int64 but the running sum does not
    c = 2**29 + 1
    t = {py.pack(0, 0, 0): (c, 0)}
    rows_a = {1: {k: t for k in range(1, 41)}}
    rows_b = {k: {1: {py.pack(0, 0, 0): (c, 0)}} for k in range(1, 41)}
    want = py.matmul_terms(rows_a, rows_b)
    assert want[1][1][py.pack(0, 0, 0)][0] == 40 * c * c
    assert cy.matmul_terms(rows_a, rows_b) == want


@needs_ext
def test_exact_results_identical_across_backends():
    code = (
        "from dnreflect.kmatrix import reflection_sides; import hashlib;"
        "l, r = reflection_sides(4);"
        "print(hashlib.sha256(repr([(i, j, p.canonical()) for i, j, p in l.entries()]).encode()).hexdigest())"
    )
    digests = set()
    for flag in ("0", "1"):
        env = dict(os.environ, DNREFLECT_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        digests.add(out.stdout.strip())
    assert len(digests) == 1


def test_deadline():
    rows = {1: {1: {py.pack(0, 0, 0): (1, 0)}}}
    with pytest.raises(TimeoutError):
        _kernels.matmul_terms(rows, rows, deadline=0.0)
