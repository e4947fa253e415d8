"""Normal form of the germ of a Hénon map at infinity.

Only the w = 0 slice is ever computed: the psi-chain of transition maps
between partial Böttcher coordinates, then

    h_hat(x) = x**D_N * (psi_N^{-1}(x))**(-D_{N-1})   mod x**(2 D_N),

which is all the normal form's polynomial part depends on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .gaussian import ZERO, GaussianRational
from .henon import HenonMap, degrees, require_valid, u_series, v_series
from .series import (
    LaurentSeries,
    Series,
    arith,
    comp_inverse,
    compose,
    pow_int,
    pow_rational,
    substitute_power,
    x_laurent,
)

__all__ = [
    "PsiChain",
    "NormalForm",
    "working_order",
    "psi_chain",
    "phi_direct",
    "psi_via_phi",
    "h_hat",
    "normal_form",
]


def working_order(m: HenonMap) -> int:
    return 2 * degrees(m)[1][-1]


def _minimal_order(Ds) -> int:
    # h_hat / x^(D_N - D_{N-1}) must be known through x^(D_N + D_{N-1} - 1)
    return Ds[-1] + Ds[-2] - 1


@dataclass(frozen=True)
class PsiChain:
    psis: tuple  # LaurentSeries psi_1..psi_N, each x*(1 + ...)
    order: int

    def __getitem__(self, i: int) -> LaurentSeries:
        """1-based, matching psi_i."""
        return self.psis[i - 1]

    def __len__(self):
        return len(self.psis)


@dataclass(frozen=True)
class NormalForm:
    """(x, y) -> (x^p, lam * y * x^(2p-2) + g(x) [+ c x^(2p)]).

    ``g[n]`` is the coefficient of x**n for n = 0..2p-2 (``g[0]`` is always 0);
    the slot n = p carries (p/A) * b_(2p-1).
    """

    p: int
    lam: GaussianRational
    g: tuple
    c_undetermined: bool

    def __post_init__(self):
        if len(self.g) != 2 * self.p - 1:
            raise ValidationError(f"g must list exponents 0..{2 * self.p - 2}")

    def support(self) -> list[int]:
        return [n for n, c in enumerate(self.g) if c]

    def sparse_g(self) -> dict[int, GaussianRational]:
        return {n: c for n, c in enumerate(self.g) if c}

    def same_form(self, other: NormalForm) -> bool:
        """Equality ignoring the c flag."""
        return self.p == other.p and self.lam == other.lam and self.g == other.g


def psi_chain(m: HenonMap, order: int | None = None) -> PsiChain:
    """psi_1 = x U_1^(-1/d_1); psi_i = x E_i^(-1/D_i) with
    E_i = U_i(x^D_{i-1}) - a_i x^D_i (psi_{i-1}^{-1})^(-D_{i-2})."""
    require_valid(m)
    ds, Ds, _ = degrees(m)
    M = working_order(m) if order is None else order
    psis = []
    u1 = u_series(m, 1, M)
    psis.append(LaurentSeries(1, pow_rational(u1, Fraction(-1, ds[0]))))
    for i in range(2, m.n + 1):
        inv = comp_inverse(psis[-1])
        tail = pow_int(inv, -Ds[i - 2]).shift(Ds[i]).scale(m.factors[i - 1].a)
        ui = substitute_power(u_series(m, i, M), Ds[i - 1], M)
        e = arith(LaurentSeries.from_series(ui), tail, "sub")
        # tail has valuation D_i - D_{i-2} >= 1, so E_i(0) = 1 and val 0
        psis.append(LaurentSeries(1, pow_rational(e.to_series().truncate(M), Fraction(-1, Ds[i]))))
    return PsiChain(tuple(psis), M)


def phi_direct(m: HenonMap, i: int, order: int | None = None) -> LaurentSeries:
    """phi_{0,i}(x) = x V_i(x, 0)^(-1/D_i), straight from the polynomial q_i."""
    require_valid(m)
    _, Ds, _ = degrees(m)
    M = working_order(m) if order is None else order
    if i == 0:
        return x_laurent(M)
    if not 1 <= i <= m.n:
        raise IndexError(f"index {i} outside 0..{m.n}")
    v = v_series(m, i, M)
    return LaurentSeries(1, pow_rational(v, Fraction(-1, Ds[i])))


def psi_via_phi(m: HenonMap, i: int, order: int | None = None) -> LaurentSeries:
    """phi_{0,i} o phi_{0,i-1}^{-1}: the definition of psi_i, used as a cross-check."""
    phi_i = phi_direct(m, i, order)
    if i == 1:
        return phi_i
    return compose(phi_i, comp_inverse(phi_direct(m, i - 1, order)))


def h_hat(m: HenonMap, order: int | None = None, chain: PsiChain | None = None) -> Series:
    """x^D_N (psi_N^{-1})^(-D_{N-1}) as a Series with coefficients of x^0..x^(2 D_N - 1)."""
    _, Ds, _ = degrees(m)
    if chain is None:
        chain = psi_chain(m, order)
    if chain.order < _minimal_order(Ds):
        raise ValidationError(
            f"working order {chain.order} too small; need at least {_minimal_order(Ds)}")
    inv = comp_inverse(chain[m.n])
    h = pow_int(inv, -Ds[-2]).shift(Ds[-1])
    return h.to_series().truncate(2 * Ds[-1] - 1)


def normal_form(m: HenonMap, order: int | None = None) -> NormalForm:
    """p = D_N, lam = A/D_N, g_n = b_n (n <= 2p-2, n != p), g_p = (p/A) b_(2p-1)."""
    require_valid(m)
    _, Ds, A = degrees(m)
    p = Ds[-1]
    b = h_hat(m, order)
    if b[p]:
        raise ArithmeticError(f"b_{p} = {b[p]} should vanish")
    g = list(b.coeffs[: 2 * p - 1])
    g[p] = b[2 * p - 1] * GaussianRational(p) / A
    g[0] = ZERO
    lam = A / GaussianRational(p)
    return NormalForm(p, lam, tuple(g), lam == 1)
