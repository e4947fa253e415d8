"""Truncated power and Laurent series over Q(i).

A :class:`Series` is known for exponents ``0..order``; every operation
returns the order it can actually guarantee, never more.  A
:class:`LaurentSeries` is ``x**val * unit`` with ``unit(0) != 0``; it knows
exponents strictly below ``prec = val + unit.order + 1``.

Kernels work on parallel lists of gmpy2 rationals (real and imaginary
parts) and skip zero coefficients, since almost every series in the
Hénon pipeline is sparse.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import lcm, mpq, mpz

from .gaussian import GaussianRational, as_gaussian

__all__ = [
    "Series",
    "LaurentSeries",
    "arith",
    "reciprocal",
    "pow_rational",
    "pow_int",
    "compose",
    "substitute_power",
    "comp_inverse",
    "x_laurent",
]

_Z = mpq(0)
_ONE = mpq(1)


def _rational(alpha) -> mpq:
    if isinstance(alpha, Fraction):
        return mpq(alpha.numerator, alpha.denominator)
    if isinstance(alpha, str):
        return mpq(Fraction(alpha).numerator, Fraction(alpha).denominator)
    return mpq(alpha)


# ---------------------------------------------------------------------------
# raw kernels: (re, im) lists of mpq
# ---------------------------------------------------------------------------


def _nonzero(re, im, upto):
    return [k for k in range(min(upto + 1, len(re))) if re[k] or im[k]]


# dense products above this many term pairs go through Kronecker substitution
_KRONECKER_PAIRS = 400


def _common_denominator(values):
    den = mpz(1)
    for v in values:
        if v:
            d = v.denominator
            if d != 1:
                den = lcm(den, d)
    return den


def _pack(ints, bits):
    """Signed coefficients -> one integer sum c_k 2^(bits k)."""
    pos = gmpy2.pack([c if c > 0 else 0 for c in ints], bits)
    neg = gmpy2.pack([-c if c < 0 else 0 for c in ints], bits)
    return pos - neg


def _unpack(acc, count, bits):
    """Inverse of _pack for the lowest ``count`` digits, each |c| < 2^(bits-1)."""
    half = mpz(1) << (bits - 1)
    offset = gmpy2.pack([half] * count, bits)
    low = (acc + offset) % (mpz(1) << (bits * count))
    digits = gmpy2.unpack(low, bits)[:count]
    digits += [mpz(0)] * (count - len(digits))
    return [d - half for d in digits]


def _kronecker(ar, ai, br, bi, n):
    """Dense complex product via one-big-integer multiplication (Gauss 3-mult)."""
    la = min(n + 1, len(ar))
    lb = min(n + 1, len(br))
    da = _common_denominator(ar[:la] + ai[:la])
    db = _common_denominator(br[:lb] + bi[:lb])
    xr = [mpz(c * da) for c in ar[:la]]
    xi = [mpz(c * da) for c in ai[:la]]
    yr = [mpz(c * db) for c in br[:lb]]
    yi = [mpz(c * db) for c in bi[:lb]]
    ma = max(max(abs(c) for c in xr), max(abs(c) for c in xi), 1)
    mb = max(max(abs(c) for c in yr), max(abs(c) for c in yi), 1)
    bits = int(ma.bit_length() + mb.bit_length() + mpz(min(la, lb)).bit_length() + 4)
    pr = _pack(xr, bits) * _pack(yr, bits)
    pi = _pack(xi, bits) * _pack(yi, bits)
    ps = _pack([u + v for u, v in zip(xr, xi)], bits) * _pack([u + v for u, v in zip(yr, yi)], bits)
    den = da * db
    re = _unpack(pr - pi, n + 1, bits)
    im = _unpack(ps - pr - pi, n + 1, bits)
    return [mpq(c, den) for c in re], [mpq(c, den) for c in im]


def _mul_raw(ar, ai, br, bi, n):
    na = _nonzero(ar, ai, n)
    nb = _nonzero(br, bi, n)
    if len(na) * len(nb) > _KRONECKER_PAIRS:
        return _kronecker(ar, ai, br, bi, n)
    return _mul_sparse(ar, ai, br, bi, n, na, nb)


def _mul_sparse(ar, ai, br, bi, n, na, nb):
    cr = [_Z] * (n + 1)
    ci = [_Z] * (n + 1)
    real = not any(ai[j] for j in na) and not any(bi[j] for j in nb)
    if real:
        for j in na:
            x = ar[j]
            for k in nb:
                t = j + k
                if t > n:
                    break
                cr[t] += x * br[k]
        return cr, ci
    for j in na:
        xr, xi = ar[j], ai[j]
        for k in nb:
            t = j + k
            if t > n:
                break
            yr, yi = br[k], bi[k]
            cr[t] += xr * yr - xi * yi
            ci[t] += xr * yi + xi * yr
    return cr, ci


def _pow_raw(fr, fi, alpha, n):
    """(f)**alpha with f(0) == 1, coefficients 0..n (J.C.P. Miller recurrence)."""
    cr = [_Z] * (n + 1)
    ci = [_Z] * (n + 1)
    cr[0] = _ONE
    nz = [k for k in _nonzero(fr, fi, n) if k > 0]
    real = not any(fi[k] for k in nz)
    a1 = alpha + 1
    for m in range(1, n + 1):
        sr = _Z
        si = _Z
        for k in nz:
            if k > m:
                break
            s = a1 * k - m
            if not s:
                continue
            pr, pi = cr[m - k], ci[m - k]
            if real:
                sr += s * fr[k] * pr
            else:
                xr, xi = fr[k], fi[k]
                sr += s * (xr * pr - xi * pi)
                si += s * (xr * pi + xi * pr)
        cr[m] = sr / m
        ci[m] = si / m
    return cr, ci


def _inv_raw(fr, fi, n):
    """Multiplicative inverse, f(0) arbitrary nonzero."""
    c0 = GaussianRational._raw(fr[0], fi[0]).inverse()
    ir, ii = c0.re, c0.im
    cr = [_Z] * (n + 1)
    ci = [_Z] * (n + 1)
    cr[0], ci[0] = ir, ii
    nz = [k for k in _nonzero(fr, fi, n) if k > 0]
    for m in range(1, n + 1):
        sr = _Z
        si = _Z
        for k in nz:
            if k > m:
                break
            xr, xi = fr[k], fi[k]
            pr, pi = cr[m - k], ci[m - k]
            sr += xr * pr - xi * pi
            si += xr * pi + xi * pr
        cr[m] = -(sr * ir - si * ii)
        ci[m] = -(sr * ii + si * ir)
    return cr, ci


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------


class Series:
    """Power series truncated after ``x**order``; immutable."""

    __slots__ = ("_re", "_im", "order")

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        cs = [as_gaussian(c) for c in coeffs]
        if order is None:
            order = max(len(cs) - 1, 0)
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = cs[: order + 1]
        self._re = [c.re for c in cs] + [_Z] * (order + 1 - len(cs))
        self._im = [c.im for c in cs] + [_Z] * (order + 1 - len(cs))
        self.order = order

    @classmethod
    def _from_raw(cls, re: list, im: list, order: int) -> Series:
        obj = object.__new__(cls)
        obj._re = list(re[: order + 1]) + [_Z] * (order + 1 - len(re))
        obj._im = list(im[: order + 1]) + [_Z] * (order + 1 - len(im))
        obj.order = order
        return obj

    @classmethod
    def one(cls, order: int) -> Series:
        return cls._from_raw([_ONE], [_Z], order)

    @classmethod
    def monomial(cls, k: int, order: int, c=1) -> Series:
        c = as_gaussian(c)
        re = [_Z] * (order + 1)
        im = [_Z] * (order + 1)
        if k <= order:
            re[k], im[k] = c.re, c.im
        return cls._from_raw(re, im, order)

    @property
    def coeffs(self) -> tuple:
        return tuple(GaussianRational._raw(r, i) for r, i in zip(self._re, self._im))

    def __getitem__(self, k: int) -> GaussianRational:
        if k < 0 or k > self.order:
            raise IndexError(f"coefficient {k} outside known range 0..{self.order}")
        return GaussianRational._raw(self._re[k], self._im[k])

    def __len__(self):
        return self.order + 1

    def support(self) -> list[int]:
        return _nonzero(self._re, self._im, self.order)

    def valuation(self) -> int | None:
        s = self.support()
        return s[0] if s else None

    def truncate(self, order: int) -> Series:
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return Series._from_raw(self._re, self._im, order)

    def scale(self, c) -> Series:
        c = as_gaussian(c)
        re = [r * c.re - i * c.im for r, i in zip(self._re, self._im)]
        im = [r * c.im + i * c.re for r, i in zip(self._re, self._im)]
        return Series._from_raw(re, im, self.order)

    def __add__(self, other: Series) -> Series:
        n = min(self.order, other.order)
        re = [self._re[k] + other._re[k] for k in range(n + 1)]
        im = [self._im[k] + other._im[k] for k in range(n + 1)]
        return Series._from_raw(re, im, n)

    def __sub__(self, other: Series) -> Series:
        n = min(self.order, other.order)
        re = [self._re[k] - other._re[k] for k in range(n + 1)]
        im = [self._im[k] - other._im[k] for k in range(n + 1)]
        return Series._from_raw(re, im, n)

    def __neg__(self) -> Series:
        return Series._from_raw([-r for r in self._re], [-i for i in self._im], self.order)

    def __mul__(self, other) -> Series:
        if not isinstance(other, Series):
            return self.scale(other)
        n = min(self.order, other.order)
        re, im = _mul_raw(self._re, self._im, other._re, other._im, n)
        return Series._from_raw(re, im, n)

    def __rmul__(self, other) -> Series:
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.order == other.order and self._re == other._re
                and self._im == other._im)

    def agrees_with(self, other: Series, upto: int | None = None) -> bool:
        """Coefficientwise equality on the common known range (or ``0..upto``)."""
        n = min(self.order, other.order) if upto is None else upto
        if n > self.order or n > other.order:
            raise ValueError("comparison range exceeds known coefficients")
        return self._re[: n + 1] == other._re[: n + 1] and self._im[: n + 1] == other._im[: n + 1]

    def __hash__(self):
        return hash((self.order, tuple(self.coeffs)))

    def __repr__(self):
        terms = [f"({c})*x^{k}" for k, c in enumerate(self.coeffs) if c]
        return f"Series({' + '.join(terms) or '0'} + O(x^{self.order + 1}))"


# ---------------------------------------------------------------------------
# LaurentSeries
# ---------------------------------------------------------------------------


class LaurentSeries:
    """``x**val * unit``, or a flagged zero known below ``prec``."""

    __slots__ = ("val", "unit", "_prec")

    def __init__(self, val: int, unit: Series):
        if not (unit._re[0] or unit._im[0]):
            raise ValueError("unit part must have a nonzero constant term")
        self.val = val
        self.unit = unit
        self._prec = val + unit.order + 1

    @classmethod
    def zero(cls, prec: int) -> LaurentSeries:
        obj = object.__new__(cls)
        obj.val = None
        obj.unit = None
        obj._prec = prec
        return obj

    @classmethod
    def from_dense(cls, start: int, re: Sequence, im: Sequence) -> LaurentSeries:
        """Canonicalize coefficients of x**start, x**(start+1), ... (all known)."""
        nz = _nonzero(re, im, len(re) - 1)
        prec = start + len(re)
        if not nz:
            return cls.zero(prec)
        k0 = nz[0]
        return cls(start + k0, Series._from_raw(re[k0:], im[k0:], len(re) - k0 - 1))

    @classmethod
    def from_series(cls, s: Series) -> LaurentSeries:
        return cls.from_dense(0, s._re, s._im)

    @property
    def is_zero(self) -> bool:
        return self.unit is None

    @property
    def prec(self) -> int:
        """Exponents strictly below this are known."""
        return self._prec

    def coeff(self, n: int) -> GaussianRational:
        if n >= self._prec:
            raise IndexError(f"coefficient of x^{n} unknown (precision {self._prec})")
        if self.is_zero or n < self.val:
            return GaussianRational._raw(_Z, _Z)
        return self.unit[n - self.val]

    def dense(self, start: int, stop: int) -> tuple[list, list]:
        """Raw coefficient lists for exponents ``start..stop-1``."""
        if stop > self._prec:
            raise IndexError(f"x^{stop - 1} beyond precision {self._prec}")
        re = [_Z] * (stop - start)
        im = [_Z] * (stop - start)
        if self.is_zero:
            return re, im
        if start > self.val:
            raise IndexError("dense window starts above the valuation")
        for k in range(max(self.val, start), stop):
            re[k - start] = self.unit._re[k - self.val]
            im[k - start] = self.unit._im[k - self.val]
        return re, im

    def to_series(self) -> Series:
        """Power series view (val must be >= 0)."""
        if self._prec < 1:
            raise ValueError("no coefficient is known")
        if not self.is_zero and self.val < 0:
            raise ValueError("negative valuation has no power-series view")
        re, im = self.dense(0, self._prec) if not self.is_zero else ([_Z] * self._prec, [_Z] * self._prec)
        return Series._from_raw(re, im, self._prec - 1)

    def shift(self, k: int) -> LaurentSeries:
        """Multiply by x**k."""
        if self.is_zero:
            return LaurentSeries.zero(self._prec + k)
        return LaurentSeries(self.val + k, self.unit)

    def scale(self, c) -> LaurentSeries:
        c = as_gaussian(c)
        if self.is_zero:
            return self
        if not c:
            return LaurentSeries.zero(self._prec)
        return LaurentSeries(self.val, self.unit.scale(c))

    def truncate_prec(self, prec: int) -> LaurentSeries:
        if prec > self._prec:
            raise ValueError("cannot extend precision")
        if self.is_zero or prec <= self.val:
            return LaurentSeries.zero(prec)
        return LaurentSeries(self.val, self.unit.truncate(prec - self.val - 1))

    def __add__(self, other):
        return arith(self, other, "add")

    def __sub__(self, other):
        return arith(self, other, "sub")

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return arith(self, other, "mul")
        return self.scale(other)

    __rmul__ = scale

    def __neg__(self):
        return self.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero and self._prec == other._prec
        return self.val == other.val and self.unit == other.unit

    def agrees_with(self, other: LaurentSeries, prec: int | None = None) -> bool:
        """Coefficientwise equality for exponents below ``prec`` (default: common precision)."""
        p = min(self._prec, other._prec) if prec is None else prec
        if p > self._prec or p > other._prec:
            raise ValueError("comparison range exceeds known coefficients")
        lo = min(v for v in (self.val, other.val, p) if v is not None)
        return self.dense(lo, p) == other.dense(lo, p)

    def __hash__(self):
        return hash((self.val, self.unit, self._prec))

    def __repr__(self):
        if self.is_zero:
            return f"LaurentSeries(0 + O(x^{self._prec}))"
        terms = [f"({c})*x^{k + self.val}" for k, c in enumerate(self.unit.coeffs) if c]
        return f"LaurentSeries({' + '.join(terms)} + O(x^{self._prec}))"


def x_laurent(order: int) -> LaurentSeries:
    """The identity map x, with unit known to ``order``."""
    return LaurentSeries(1, Series.one(order))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def arith(f: LaurentSeries, g: LaurentSeries, kind: str) -> LaurentSeries:
    """add / sub / mul of Laurent series on their common known range."""
    if kind == "mul":
        if f.is_zero or g.is_zero:
            lo_f = f.val if not f.is_zero else None
            lo_g = g.val if not g.is_zero else None
            # zero * h is known below zero.prec + val(h)
            if f.is_zero and g.is_zero:
                return LaurentSeries.zero(f._prec + g._prec)
            if f.is_zero:
                return LaurentSeries.zero(f._prec + lo_g)
            return LaurentSeries.zero(g._prec + lo_f)
        n = min(f.unit.order, g.unit.order)
        re, im = _mul_raw(f.unit._re, f.unit._im, g.unit._re, g.unit._im, n)
        return LaurentSeries(f.val + g.val, Series._from_raw(re, im, n))
    if kind not in ("add", "sub"):
        raise ValueError(f"unknown arithmetic kind {kind!r}")
    prec = min(f._prec, g._prec)
    vals = [s.val for s in (f, g) if not s.is_zero]
    lo = min(vals) if vals else prec
    if lo >= prec:
        return LaurentSeries.zero(prec)
    fr, fi = f.dense(lo, prec)
    gr, gi = g.dense(lo, prec)
    if kind == "add":
        re = [a + b for a, b in zip(fr, gr)]
        im = [a + b for a, b in zip(fi, gi)]
    else:
        re = [a - b for a, b in zip(fr, gr)]
        im = [a - b for a, b in zip(fi, gi)]
    return LaurentSeries.from_dense(lo, re, im)


def reciprocal(f: LaurentSeries) -> LaurentSeries:
    if f.is_zero:
        raise ZeroDivisionError("reciprocal of a zero series")
    re, im = _inv_raw(f.unit._re, f.unit._im, f.unit.order)
    return LaurentSeries(-f.val, Series._from_raw(re, im, f.unit.order))


def pow_rational(f: Series, alpha) -> Series:
    """Principal branch of ``f**alpha`` for ``f(0) == 1``: the binomial series of (1+u)**alpha."""
    if f._re[0] != 1 or f._im[0] != 0:
        raise ValueError("pow_rational needs constant term exactly 1")
    re, im = _pow_raw(f._re, f._im, _rational(alpha), f.order)
    return Series._from_raw(re, im, f.order)


def pow_int(f: LaurentSeries, k: int) -> LaurentSeries:
    """Integer power of a Laurent series (any nonzero leading coefficient)."""
    if f.is_zero:
        if k <= 0:
            raise ZeroDivisionError("non-positive power of a zero series")
        return LaurentSeries.zero(f._prec * k)
    c0 = f.unit[0]
    u = f.unit if c0 == 1 else f.unit.scale(c0.inverse())
    p = pow_rational(u, k)
    if c0 != 1:
        p = p.scale(c0 ** k)
    return LaurentSeries(f.val * k, p)


def compose(f, g: LaurentSeries):
    """``f(g(x))`` for ``val(g) >= 1``.

    ``f`` may be a :class:`Series` (result is a Series) or a Laurent series
    of non-negative valuation (result is Laurent).
    """
    if isinstance(f, LaurentSeries):
        if f.is_zero:
            raise ValueError("composing a zero Laurent series is not supported")
        if f.val < 0:
            raise ValueError("outer series must have non-negative valuation")
        inner = LaurentSeries.from_series(compose(f.unit, g))
        return arith(pow_int(g, f.val), inner, "mul") if f.val else inner
    if g.is_zero:
        v = g._prec
        if v < 1:
            raise ValueError("inner series must have valuation >= 1")
        return Series._from_raw([f._re[0]], [f._im[0]], v - 1)
    v = g.val
    if v < 1:
        raise ValueError("inner series must have valuation >= 1")
    stop = min((f.order + 1) * v, g._prec)
    n = stop - 1
    gr, gi = g.dense(0, stop)
    # Horner: (((f_M) g + f_{M-1}) g + ...) g + f_0
    top = min(f.order, n // v)
    accr = [_Z] * (n + 1)
    acci = [_Z] * (n + 1)
    accr[0], acci[0] = f._re[top], f._im[top]
    for k in range(top - 1, -1, -1):
        accr, acci = _mul_raw(accr, acci, gr, gi, n)
        accr[0] += f._re[k]
        acci[0] += f._im[k]
    return Series._from_raw(accr, acci, n)


def substitute_power(f: Series, k: int, order: int | None = None) -> Series:
    """``f(x**k)``; ``order`` defaults to everything ``f`` determines."""
    if k < 1:
        raise ValueError("substitution exponent must be >= 1")
    known = (f.order + 1) * k - 1
    if order is None:
        order = known
    elif order > known:
        raise ValueError(f"f(x^{k}) is only known to order {known}")
    re = [_Z] * (order + 1)
    im = [_Z] * (order + 1)
    for j in range(0, order // k + 1):
        re[j * k], im[j * k] = f._re[j], f._im[j]
    return Series._from_raw(re, im, order)


def comp_inverse(f: LaurentSeries) -> LaurentSeries:
    """Compositional inverse of a map tangent to the identity.

    Lagrange inversion: if f = x*u then the inverse is x*v with
    v_m = [x^m] u**-(m+1) / (m+1); the powers of 1/u are built by repeated
    multiplication.
    """
    if f.is_zero or f.val != 1 or f.unit._re[0] != 1 or f.unit._im[0] != 0:
        raise ValueError("comp_inverse needs a series x*(1 + O(x))")
    u = f.unit
    n = u.order
    rr, ri = _inv_raw(u._re, u._im, n)
    vr = [_Z] * (n + 1)
    vi = [_Z] * (n + 1)
    pr, pi = rr, ri
    vr[0] = _ONE
    for m in range(1, n + 1):
        # p = u^-(m+1); only coefficients up to n are ever read
        pr, pi = _mul_raw(pr, pi, rr, ri, n)
        vr[m] = pr[m] / (m + 1)
        vi[m] = pi[m] / (m + 1)
    return LaurentSeries(1, Series._from_raw(vr, vi, n))
