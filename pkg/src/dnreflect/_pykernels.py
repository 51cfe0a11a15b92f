"""Pure-Python term-map kernels.

A term map is a ``dict`` from a packed exponent key to a coefficient pair
``(re, im)``; each component is an ``int`` or a ``fractions.Fraction``.
Keys pack the exponents of ``(s, x, y)`` into one integer, so the key of a
product is ``k1 + k2 - OFFSET``.
"""

import time
from fractions import Fraction

FIELD_BITS = 21
BIAS = 1 << (FIELD_BITS - 1)
MASK = (1 << FIELD_BITS) - 1
OFFSET = (BIAS << (2 * FIELD_BITS)) | (BIAS << FIELD_BITS) | BIAS
#: exponents must stay strictly inside this bound after any product
EXP_LIMIT = BIAS // 2


def pack(es, ex, ey):
    return ((es + BIAS) << (2 * FIELD_BITS)) | ((ex + BIAS) << FIELD_BITS) | (ey + BIAS)


def unpack(key):
    return (
        ((key >> (2 * FIELD_BITS)) & MASK) - BIAS,
        ((key >> FIELD_BITS) & MASK) - BIAS,
        (key & MASK) - BIAS,
    )


def _norm(v):
    if type(v) is Fraction and v.denominator == 1:
        return v.numerator
    return v


def mul(a, b):
    """Product of two term maps."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    get = out.get
    off = OFFSET
    bitems = list(b.items())
    for ka, (ar, ai) in a.items():
        ka -= off
        if ai == 0:
            for kb, (br, bi) in bitems:
                k = ka + kb
                c = get(k)
                if c is None:
                    out[k] = (ar * br, ar * bi)
                else:
                    out[k] = (c[0] + ar * br, c[1] + ar * bi)
        else:
            for kb, (br, bi) in bitems:
                k = ka + kb
                re = ar * br - ai * bi
                im = ar * bi + ai * br
                c = get(k)
                if c is None:
                    out[k] = (re, im)
                else:
                    out[k] = (c[0] + re, c[1] + im)
    return prune(out)


def muladd_into(acc, a, b):
    """``acc += a * b`` in place; zero coefficients are left for :func:`prune`."""
    if len(a) > len(b):
        a, b = b, a
    get = acc.get
    off = OFFSET
    bitems = list(b.items())
    for ka, (ar, ai) in a.items():
        ka -= off
        for kb, (br, bi) in bitems:
            k = ka + kb
            re = ar * br - ai * bi
            im = ar * bi + ai * br
            c = get(k)
            if c is None:
                acc[k] = (re, im)
            else:
                acc[k] = (c[0] + re, c[1] + im)
    return acc


def add_into(acc, a, sign=1):
    """``acc += sign * a`` in place, with zero terms removed."""
    get = acc.get
    for k, (ar, ai) in a.items():
        c = get(k)
        if c is None:
            acc[k] = (ar, ai) if sign == 1 else (-ar, -ai)
            continue
        if sign == 1:
            re, im = c[0] + ar, c[1] + ai
        else:
            re, im = c[0] - ar, c[1] - ai
        if re == 0 and im == 0:
            del acc[k]
        else:
            acc[k] = (re, im)
    return acc


def scale(a, cr, ci):
    out = {}
    for k, (ar, ai) in a.items():
        re = _norm(ar * cr - ai * ci)
        im = _norm(ar * ci + ai * cr)
        if re != 0 or im != 0:
            out[k] = (re, im)
    return out


def prune(acc):
    """Drop zero coefficients and demote integral fractions to ``int``."""
    dead = []
    for k, (re, im) in acc.items():
        if re == 0 and im == 0:
            dead.append(k)
        elif type(re) is Fraction or type(im) is Fraction:
            acc[k] = (_norm(re), _norm(im))
    for k in dead:
        del acc[k]
    return acc


def row_product(arow, brows):
    """One row of a matrix product: ``{k: terms}`` against ``{k: {j: terms}}``."""
    acc = {}
    for k, at in arow.items():
        brow = brows.get(k)
        if not brow:
            continue
        for j, bt in brow.items():
            d = acc.get(j)
            if d is None:
                acc[j] = muladd_into({}, at, bt)
            else:
                muladd_into(d, at, bt)
    out = {}
    for j, d in acc.items():
        prune(d)
        if d:
            out[j] = d
    return out


def matmul_terms(arows, brows, deadline=None):
    """Product of matrices stored as ``{row: {col: terms}}``; empty rows are omitted."""
    out = {}
    for i, arow in arows.items():
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError("time budget exhausted during matrix product")
        row = row_product(arow, brows)
        if row:
            out[i] = row
    return out
