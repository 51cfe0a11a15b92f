"""Exact scalars: Gaussian rationals and Laurent polynomials in ``(s, x, y)``.

The variable ``s`` stands for ``q**(1/2)``, so every half-integer power of
``q`` is an integer power of ``s``.  ``x`` and ``y`` are spectral parameters.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from dnreflect import _kernels as K

VARIABLES = ("s", "x", "y")

Rational = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """Evaluation at zero of a variable that appears with a negative exponent."""


def _rat(v) -> Rational:
    if isinstance(v, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    raise TypeError(f"not an exact rational: {v!r}")


class GaussianRational:
    """Complex number ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            re_, im_ = Fraction(v.real), Fraction(v.imag)
            if re_ != v.real or im_ != v.imag:
                raise TypeError(f"inexact complex coefficient {v!r}")
            return cls(re_, im_)
        if isinstance(v, tuple):
            return cls(_rat(v[0]), _rat(v[1]))
        return cls(_rat(v), 0)

    def pair(self) -> tuple:
        return _rat(self.re), _rat(self.im)

    def __add__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.coerce(other))

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        o = GaussianRational.coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def inverse(self):
        d = self.re * self.re + self.im * self.im
        if d == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / d, -self.im / d)

    def __truediv__(self, other):
        return self * GaussianRational.coerce(other).inverse()

    def __pow__(self, k: int):
        base, out = (self, GaussianRational(1)) if k >= 0 else (self.inverse(), GaussianRational(1))
        for _ in range(abs(k)):
            out = out * base
        return out

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def canonical(self) -> str:
        den = _lcm(self.re.denominator, self.im.denominator)
        return (
            f"({self.re.numerator * (den // self.re.denominator)}/{den})"
            f"+({self.im.numerator * (den // self.im.denominator)}/{den})i"
        )


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _check_exponents(es: int, ex: int, ey: int) -> None:
    lim = K.EXP_LIMIT
    if not (-lim < es < lim and -lim < ex < lim and -lim < ey < lim):
        raise OverflowError(f"exponent out of range: {(es, ex, ey)}")


class LaurentPoly:
    """Immutable Laurent polynomial in ``s, x, y`` over the Gaussian rationals.

    Build from a mapping ``{(e_s, e_x, e_y): coefficient}``; coefficients may
    be ``int``, ``Fraction``, exact ``complex`` or :class:`GaussianRational`.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Mapping | None = None):
        t: dict = {}
        if terms:
            for exps, c in terms.items():
                es, ex, ey = (tuple(exps) + (0, 0, 0))[:3]
                _check_exponents(es, ex, ey)
                pr = GaussianRational.coerce(c).pair()
                if pr[0] == 0 and pr[1] == 0:
                    continue
                key = K.pack(es, ex, ey)
                if key in t:
                    K.add_into(t, {key: pr})
                else:
                    t[key] = pr
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: dict) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._t = t
        p._hash = None
        return p

    @classmethod
    def monomial(cls, coeff=1, s: int = 0, x: int = 0, y: int = 0) -> "LaurentPoly":
        return cls({(s, x, y): coeff})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({(0, 0, 0): c})

    # -- inspection ------------------------------------------------------
    @property
    def terms(self) -> dict:
        return {K.unpack(k): GaussianRational(*v) for k, v in self._t.items()}

    def items(self):
        """``((e_s, e_x, e_y), (re, im))`` pairs in canonical order."""
        return sorted((K.unpack(k), v) for k, v in self._t.items())

    def __len__(self):
        return len(self._t)

    def __bool__(self):
        return bool(self._t)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def monomial_parts(self):
        """Return ``((e_s, e_x, e_y), GaussianRational)`` for a monomial."""
        if len(self._t) != 1:
            raise ValueError(f"not a monomial: {self}")
        (k, v), = self._t.items()
        return K.unpack(k), GaussianRational(*v)

    def degree_range(self, var: str) -> tuple[int, int]:
        idx = VARIABLES.index(var)
        es = [K.unpack(k)[idx] for k in self._t]
        if not es:
            return (0, 0)
        return min(es), max(es)

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _lift(v) -> "LaurentPoly":
        if isinstance(v, LaurentPoly):
            return v
        return LaurentPoly.constant(v)

    def __add__(self, other):
        o = self._lift(other)
        return LaurentPoly._raw(K.add_into(dict(self._t), o._t))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return LaurentPoly._raw(K.add_into(dict(self._t), o._t, -1))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return LaurentPoly._raw({k: (-r, -i) for k, (r, i) in self._t.items()})

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            return LaurentPoly._raw(K.mul(self._t, other._t))
        c = GaussianRational.coerce(other)
        return LaurentPoly._raw(K.scale(self._t, *c.pair()))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            return self.inverse_monomial() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse_monomial(self) -> "LaurentPoly":
        (es, ex, ey), c = self.monomial_parts()
        return LaurentPoly({(-es, -ex, -ey): c.inverse()})

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        try:
            return self._t == LaurentPoly.constant(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- substitution / evaluation ----------------------------------------
    def substitute(self, var: str, m: "LaurentPoly") -> "LaurentPoly":
        """Replace ``var`` by the Laurent monomial ``m``."""
        if not isinstance(m, LaurentPoly) or not m.is_monomial():
            raise ValueError("substitution target must be a single Laurent monomial")
        idx = VARIABLES.index(var)
        (ms, mx, my), mc = m.monomial_parts()
        mexp = (ms, mx, my)
        out: dict = {}
        powers: dict = {}
        for k, v in self._t.items():
            e = list(K.unpack(k))
            d = e[idx]
            e[idx] = 0
            ne = [e[j] + d * mexp[j] for j in range(3)]
            _check_exponents(*ne)
            if d not in powers:
                powers[d] = (mc**d).pair()
            cr, ci = powers[d]
            K.add_into(out, K.scale({K.pack(*ne): v}, cr, ci))
        return LaurentPoly._raw(out)

    def tilde(self) -> "LaurentPoly":
        """``q -> 1/q``: flips the sign of every ``s`` exponent."""
        return self.substitute("s", S_INV)

    def evaluate(self, s: complex = 1.0, x: complex = 1.0, y: complex = 1.0) -> complex:
        vals = (complex(s), complex(x), complex(y))
        total = 0j
        cache: dict = {}
        for k, (re_, im_) in self._t.items():
            e = K.unpack(k)
            term = complex(float(re_), float(im_))
            for j in range(3):
                if e[j] == 0:
                    continue
                key = (j, e[j])
                p = cache.get(key)
                if p is None:
                    if vals[j] == 0 and e[j] < 0:
                        raise PoleError(f"{VARIABLES[j]} = 0 with negative exponent")
                    p = vals[j] ** e[j]
                    cache[key] = p
                term *= p
            total += term
        return total

    # -- text --------------------------------------------------------------
    def canonical(self) -> str:
        """Canonical text form, terms sorted by ``(e_s, e_x, e_y)``."""
        if not self._t:
            return "0"
        parts = []
        for (es, ex, ey), (re_, im_) in self.items():
            c = GaussianRational(re_, im_)
            parts.append(f"{c.canonical()} * s^{es} x^{ex} y^{ey}")
        return " + ".join(parts)

    def __repr__(self):
        if not self._t:
            return "LaurentPoly(0)"
        return f"LaurentPoly({self.canonical()})"

    def __str__(self):
        return self.pretty()

    def pretty(self) -> str:
        if not self._t:
            return "0"
        out = []
        for (es, ex, ey), (re_, im_) in self.items():
            if im_ == 0:
                c = str(re_)
            elif re_ == 0:
                c = f"{im_}i"
            else:
                c = f"({re_}+{im_}i)"
            mon = "".join(
                f"*{v}" + (f"^{e}" if e != 1 else "")
                for v, e in zip(VARIABLES, (es, ex, ey))
                if e
            )
            out.append(c + mon)
        return " + ".join(out).replace("+ -", "- ")


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
I_UNIT = LaurentPoly.constant(GaussianRational(0, 1))
S = LaurentPoly.monomial(1, s=1)
S_INV = LaurentPoly.monomial(1, s=-1)
X = LaurentPoly.monomial(1, x=1)
Y = LaurentPoly.monomial(1, y=1)


def s_pow(k: int) -> LaurentPoly:
    return LaurentPoly.monomial(1, s=k)


def q_pow(k: int) -> LaurentPoly:
    """``q**k`` for integer ``k``."""
    return LaurentPoly.monomial(1, s=2 * k)


def i_pow(k: int) -> GaussianRational:
    return [GaussianRational(1), GaussianRational(0, 1), GaussianRational(-1), GaussianRational(0, -1)][k % 4]


def poly_sum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    acc: dict = {}
    for p in items:
        K.add_into(acc, p._t)
    return LaurentPoly._raw(acc)


def q_integer(m: int) -> LaurentPoly:
    """Symmetric q-integer ``(q**m - q**-m)/(q - q**-1)``."""
    if m == 0:
        return ZERO
    sign = 1 if m > 0 else -1
    m = abs(m)
    return poly_sum(q_pow(m - 1 - 2 * k) for k in range(m)) * sign


def q_factorial(m: int) -> LaurentPoly:
    out = ONE
    for k in range(1, m + 1):
        out = out * q_integer(k)
    return out


def q_binomial(a: int, b: int) -> LaurentPoly:
    """Bar-invariant Gaussian binomial ``[a choose b]_q``.

    Built by the q-Pascal rule ``[a,b] = q**(a-b) [a-1,b-1] + q**-b [a-1,b]``
    so no division is needed.
    """
    if a < 0 or b < 0:
        raise ValueError("q_binomial needs nonnegative arguments")
    if b > a:
        raise ValueError(f"q_binomial({a}, {b}): b > a")
    row = [ONE]
    for m in range(1, a + 1):
        nxt = [ONE]
        for k in range(1, m):
            nxt.append(q_pow(m - k) * row[k - 1] + q_pow(-k) * row[k])
        nxt.append(ONE)
        row = nxt
    return row[b]


_MONO_RE = re.compile(r"([sxy])(?:\^\(?(-?\d+)\)?)?")


def parse_monomial(text: str) -> LaurentPoly:
    """Parse a Laurent monomial such as ``"s"``, ``"-i*s^-2*x"`` or ``"1/x"``.

    The coefficient may be an integer, a fraction ``p/q``, ``i`` or a signed
    product of those.
    """
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty monomial")
    coeff = GaussianRational(1)
    exps = [0, 0, 0]
    if t.startswith("1/") and t[2:3] in VARIABLES:
        inv = parse_monomial(t[2:])
        return inv.inverse_monomial()
    while t and t[0] in "+-":
        if t[0] == "-":
            coeff = -coeff
        t = t[1:]
    for factor in filter(None, t.split("*")):
        m = _MONO_RE.fullmatch(factor)
        if m:
            exps[VARIABLES.index(m.group(1))] += int(m.group(2) or 1)
        elif factor == "i":
            coeff = coeff * GaussianRational(0, 1)
        elif re.fullmatch(r"\d+(/\d+)?", factor):
            coeff = coeff * GaussianRational(Fraction(factor))
        else:
            raise ValueError(f"cannot parse monomial factor {factor!r} in {text!r}")
    return LaurentPoly({tuple(exps): coeff})
