# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled term-map kernels.

Same contract as ``_pykernels``. Products run on 64-bit integers when every
coefficient is a small ``int``; anything else (fractions, large integers)
goes through the pure-Python path so results are always exact.
"""

from cython.operator cimport dereference as deref
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

import time

from dnreflect import _pykernels as _py
from dnreflect._pykernels import OFFSET, add_into, prune, scale

cdef extern from *:
    """
    static inline int dn_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static inline int dn_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    """
    bint dn_add(long long a, long long b, long long* r) nogil
    bint dn_mul(long long a, long long b, long long* r) nogil

ctypedef long long i64
ctypedef unsigned long long u64

cdef i64 COEFF_LIMIT = 1 << 30
cdef i64 ACC_LIMIT = 1LL << 61


cdef bint _load(dict d, vector[i64]& keys, vector[i64]& re, vector[i64]& im, i64* cmax):
    cdef object k, v, r, i
    cdef i64 rr, ii, m = 0
    keys.reserve(len(d))
    re.reserve(len(d))
    im.reserve(len(d))
    for k, v in d.items():
        r, i = v
        if type(r) is not int or type(i) is not int:
            return False
        if not (-COEFF_LIMIT < r < COEFF_LIMIT and -COEFF_LIMIT < i < COEFF_LIMIT):
            return False
        rr = r
        ii = i
        keys.push_back(k)
        re.push_back(rr)
        im.push_back(ii)
        if rr < 0:
            rr = -rr
        if ii < 0:
            ii = -ii
        if rr > m:
            m = rr
        if ii > m:
            m = ii
    cmax[0] = m
    return True


cdef bint _product(dict a, dict b, vector[i64]& ok, vector[i64]& ore, vector[i64]& oim):
    """Fill the output vectors with the unreduced product; False if not representable."""
    cdef vector[i64] ak, ar, ai, bk, br, bi
    cdef i64 amax = 0, bmax = 0
    if not _load(a, ak, ar, ai, &amax) or not _load(b, bk, br, bi, &bmax):
        return False
    cdef Py_ssize_t na = ak.size(), nb = bk.size()
    cdef Py_ssize_t nmin = na if na < nb else nb
    # each output coefficient sums at most nmin products of magnitude <= 2*amax*bmax
    if amax and bmax and (2 * amax * bmax) > ACC_LIMIT // (nmin if nmin else 1):
        return False
    cdef unordered_map[i64, Py_ssize_t] pos
    pos.reserve(na * nb)
    cdef Py_ssize_t p, q, slot
    cdef i64 key, off = OFFSET, r, im, xr, xi
    cdef unordered_map[i64, Py_ssize_t].iterator it
    for p in range(na):
        xr = ar[p]
        xi = ai[p]
        for q in range(nb):
            # packed keys approach 2^62; add in unsigned arithmetic to avoid signed overflow
            key = <i64>(<u64>ak[p] + <u64>bk[q] - <u64>off)
            r = xr * br[q] - xi * bi[q]
            im = xr * bi[q] + xi * br[q]
            it = pos.find(key)
            if it == pos.end():
                pos[key] = ok.size()
                ok.push_back(key)
                ore.push_back(r)
                oim.push_back(im)
            else:
                slot = deref(it).second
                ore[slot] += r
                oim[slot] += im
    return True


def mul(dict a, dict b):
    cdef vector[i64] ok, ore, oim
    if not _product(a, b, ok, ore, oim):
        return _py.mul(a, b)
    cdef dict out = {}
    cdef Py_ssize_t t
    for t in range(<Py_ssize_t>ok.size()):
        if ore[t] != 0 or oim[t] != 0:
            out[ok[t]] = (ore[t], oim[t])
    return out


def muladd_into(dict acc, dict a, dict b):
    cdef vector[i64] ok, ore, oim
    if not _product(a, b, ok, ore, oim):
        return _py.muladd_into(acc, a, b)
    cdef Py_ssize_t t
    cdef object k, c
    for t in range(<Py_ssize_t>ok.size()):
        if ore[t] == 0 and oim[t] == 0:
            continue
        k = ok[t]
        c = acc.get(k)
        if c is None:
            acc[k] = (ore[t], oim[t])
        else:
            acc[k] = (c[0] + ore[t], c[1] + oim[t])
    return acc


cdef bint _append(dict d, vector[i64]& keys, vector[i64]& re, vector[i64]& im):
    """Append a term map to flat vectors; False if a coefficient is not a small int."""
    cdef object k, r, i
    for k, (r, i) in d.items():
        if type(r) is not int or type(i) is not int:
            return False
        if not (-COEFF_LIMIT < r < COEFF_LIMIT and -COEFF_LIMIT < i < COEFF_LIMIT):
            return False
        keys.push_back(k)
        re.push_back(r)
        im.push_back(i)
    return True


cdef class _PackedRows:
    """Right-hand matrix flattened once: per row a run of ``(col, term span)`` records."""

    cdef vector[i64] tkey, tre, tim
    cdef vector[i64] ecol
    cdef vector[Py_ssize_t] estart, eend
    cdef unordered_map[i64, Py_ssize_t] rstart, rend
    cdef bint ok

    def __init__(self, dict brows):
        cdef object k, j
        cdef dict brow, bt
        self.ok = True
        for k, brow in brows.items():
            self.rstart[k] = self.ecol.size()
            for j, bt in brow.items():
                self.ecol.push_back(j)
                self.estart.push_back(self.tkey.size())
                if not _append(bt, self.tkey, self.tre, self.tim):
                    self.ok = False
                    return
                self.eend.push_back(self.tkey.size())
            self.rend[k] = self.ecol.size()


cdef object _row(dict arow, _PackedRows B, Py_ssize_t ncols):
    """Row product on int64 with overflow checks; None when not representable."""
    cdef vector[i64] ak, ar, ai
    cdef vector[unordered_map[i64, Py_ssize_t]] slots
    cdef vector[i64] ok, ore, oim, ocol
    cdef vector[i64] touched
    cdef Py_ssize_t e, p, q, slot, a0, a1
    cdef i64 kk, col, key, r, im, t1, t2, off = OFFSET
    cdef object k
    cdef dict at
    cdef unordered_map[i64, Py_ssize_t].iterator it
    slots.resize(ncols + 1)
    for k, at in arow.items():
        kk = k
        if B.rstart.find(kk) == B.rstart.end():
            continue
        ak.clear(); ar.clear(); ai.clear()
        if not _append(at, ak, ar, ai):
            return None
        for e in range(B.rstart[kk], B.rend[kk]):
            col = B.ecol[e]
            if slots[col].empty():
                touched.push_back(col)
            for p in range(<Py_ssize_t>ak.size()):
                for q in range(B.estart[e], B.eend[e]):
                    key = <i64>(<u64>ak[p] + <u64>B.tkey[q] - <u64>off)
                    if dn_mul(ar[p], B.tre[q], &t1) or dn_mul(ai[p], B.tim[q], &t2) or dn_add(t1, -t2, &r):
                        return None
                    if dn_mul(ar[p], B.tim[q], &t1) or dn_mul(ai[p], B.tre[q], &t2) or dn_add(t1, t2, &im):
                        return None
                    it = slots[col].find(key)
                    if it == slots[col].end():
                        slots[col][key] = ok.size()
                        ok.push_back(key)
                        ore.push_back(r)
                        oim.push_back(im)
                        ocol.push_back(col)
                    else:
                        slot = deref(it).second
                        if dn_add(ore[slot], r, &ore[slot]) or dn_add(oim[slot], im, &oim[slot]):
                            return None
    cdef dict out = {}
    cdef dict d
    for p in range(<Py_ssize_t>ok.size()):
        if ore[p] == 0 and oim[p] == 0:
            continue
        col = ocol[p]
        d = out.get(col)
        if d is None:
            d = {}
            out[col] = d
        d[ok[p]] = (ore[p], oim[p])
    return out


def matmul_terms(dict arows, dict brows, deadline=None):
    """Same contract as ``_pykernels.matmul_terms``."""
    cdef _PackedRows B = _PackedRows(brows)
    if not B.ok:
        return _py.matmul_terms(arows, brows, deadline)
    cdef Py_ssize_t ncols = 0
    cdef object j
    for brow in brows.values():
        for j in brow:
            if j > ncols:
                ncols = j
    cdef dict out = {}
    for i, arow in arows.items():
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("time budget exhausted during matrix product")
        row = _row(arow, B, ncols)
        if row is None:
            row = _py.row_product(arow, brows)
        if row:
            out[i] = row
    return out
