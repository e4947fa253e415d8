"""Going back from a normal form to a Hénon map.

Two inverse problems:

* ``henon_from_normal_form`` peels the psi-chain off h_hat one factor at a
  time, reading U_i and a_i directly from the coefficients;
* ``solve_surjectivity`` hits prescribed h_hat coefficients on the lattice
  n(i, l) by solving for one Hénon coefficient at a time.  Each target
  coefficient is affine in its own unknown once the earlier unknowns are
  fixed, so two forward evaluations pin it down exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    InconsistentNormalFormError,
    NotHenonTypeError,
    SolverContradiction,
    UnrealizableTargetError,
    ValidationError,
)
from .gaussian import ONE, ZERO, GaussianRational, as_gaussian
from .germ import NormalForm, h_hat, normal_form, _minimal_order
from .henon import HenonFactor, HenonMap, degrees
from .kato import type_from_support
from .series import LaurentSeries, Series, comp_inverse, pow_rational, substitute_power

__all__ = [
    "TargetParameters",
    "lattice_exponent",
    "hhat_from_normal_form",
    "degrees_from_normal_form",
    "henon_from_normal_form",
    "solve_surjectivity",
    "convert_parametrization",
    "target_from_normal_form",
]


def _partial_products(ds) -> list[int]:
    Ds = [1]
    for d in ds:
        Ds.append(Ds[-1] * d)
    return Ds


def lattice_exponent(Ds, i: int, l: int) -> int:
    """n(i, l) = 2 D_N - D_i - D_{i-1} + l D_{i-1}."""
    return 2 * Ds[-1] - Ds[i] - Ds[i - 1] + l * Ds[i - 1]


def _slots(ds):
    """(i, l) pairs in solve order: i = N..1, then l = 0, 2, ..., d_i."""
    out = []
    for i in range(len(ds), 0, -1):
        out.append((i, 0))
        out.extend((i, l) for l in range(2, ds[i - 1] + 1))
    return out


@dataclass(frozen=True)
class TargetParameters:
    """lambda, degrees and the alpha-tilde coefficients; missing (i, l >= 2) entries are 0."""

    lam: GaussianRational
    degrees: tuple
    alpha_tilde: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "lam", as_gaussian(self.lam))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        ds = self.degrees
        if not ds or any(d < 2 for d in ds):
            raise ValidationError(f"degrees must be a nonempty list of integers >= 2, got {list(ds)}")
        if not self.lam:
            raise ValidationError("lambda must be nonzero")
        N = len(ds)
        allowed = set(_slots(ds))
        alpha = {}
        for key, value in dict(self.alpha_tilde).items():
            i, l = key
            if (i, l) not in allowed:
                raise ValidationError(f"alpha_tilde index {(i, l)} outside the lattice for degrees {list(ds)}")
            alpha[(i, l)] = as_gaussian(value)
        for i, l in allowed:
            alpha.setdefault((i, l), ONE if (i, l) == (N, 0) else ZERO)
        if alpha[(N, 0)] != ONE:
            raise ValidationError(f"alpha_tilde({N}, 0) must be 1")
        zero_heads = [i for i in range(1, N) if not alpha[(i, 0)]]
        if zero_heads:
            raise ValidationError(f"alpha_tilde(i, 0) must be nonzero, fails for i = {zero_heads}")
        Ds = _partial_products(ds)
        seen = {}
        for i, l in _slots(ds):
            n = lattice_exponent(Ds, i, l)
            if n in seen:
                raise ValidationError(f"exponent {n} hit by both {seen[n]} and {(i, l)}")
            seen[n] = (i, l)
        object.__setattr__(self, "alpha_tilde", alpha)

    @property
    def D(self) -> list[int]:
        return _partial_products(self.degrees)

    def exponent(self, i: int, l: int) -> int:
        return lattice_exponent(self.D, i, l)

    def slots(self) -> list[tuple]:
        return _slots(self.degrees)


# -- normal form -> h_hat -> degrees ------------------------------------------


def hhat_from_normal_form(nf: NormalForm) -> Series:
    """Undo the slot packing: b_p = 0, b_(2p-1) = lam * g_p, b_n = g_n otherwise."""
    p = nf.p
    if p < 2:
        raise ValidationError("normal form needs p >= 2")
    support = nf.support()
    if not support or nf.g[support[0]] != ONE:
        raise NotHenonTypeError("not a Hénon-type normal form: lowest coefficient of g must be 1")
    b = list(nf.g) + [ZERO]
    b[2 * p - 1] = nf.lam * nf.g[p]
    b[p] = ZERO
    return Series(b, 2 * p - 1)


def degrees_from_normal_form(nf: NormalForm) -> tuple:
    """d_1..d_N from the type of g via D_{N-i} = 2 D_N - m_i - D_{N-i+1}."""
    support = nf.support()
    if not support:
        raise NotHenonTypeError("normal form not of Hénon type: g = 0")
    ms = type_from_support(nf.p, support)
    Ds = [nf.p]
    for m in ms:
        Ds.append(2 * nf.p - m - Ds[-1])
    Ds.reverse()
    if Ds[0] != 1:
        raise NotHenonTypeError(f"normal form not of Hénon type: recovered D_0 = {Ds[0]}")
    ds = []
    for lo, hi in zip(Ds, Ds[1:]):
        if lo <= 0 or hi % lo or hi // lo < 2:
            raise NotHenonTypeError(f"normal form not of Hénon type: D = {Ds}")
        ds.append(hi // lo)
    return tuple(ds)


# -- peeling -----------------------------------------------------------------


def henon_from_normal_form(nf: NormalForm, check: bool = True) -> HenonMap:
    """The unique monic centered map with this normal form.

    Runs the psi recursion backwards: h_hat gives psi_N^{-1}; from
    W = (psi_i / x)^(-D_i) = U_i(x^D_{i-1}) - a_i x^(D_i - D_{i-2}) w^(-D_{i-2})
    we read U_i on the multiples of D_{i-1}, a_i at D_i - D_{i-2}, and what is
    left is w = psi_{i-1}^{-1} / x.
    """
    ds = degrees_from_normal_form(nf)
    Ds = _partial_products(ds)
    N = len(ds)
    b = hhat_from_normal_form(nf)
    j = Ds[N] - Ds[N - 1]
    lead = b.support()
    if not lead or lead[0] != j:
        raise InconsistentNormalFormError(f"h_hat valuation should be {j}", stage=N)
    # w_N = psi_N^{-1}/x, known through x^(D_N + D_{N-1} - 1)
    rel = Ds[N] + Ds[N - 1] - 1
    shifted = Series(b.coeffs[j:], rel)
    w = pow_rational(shifted, Fraction(-1, Ds[N - 1]))
    polys = [None] * (N + 1)
    avals = [None] * (N + 1)
    for i in range(N, 1, -1):
        D_i, D_im1, D_im2 = Ds[i], Ds[i - 1], Ds[i - 2]
        rel = D_i + D_im1 - 1
        if w.order < rel:
            raise InconsistentNormalFormError("ran out of precision", stage=i)
        psi = comp_inverse(LaurentSeries(1, w.truncate(rel)))
        W = pow_rational(psi.unit, -D_i)
        beta = [W[l * D_im1] for l in range(ds[i - 1] + 1)]
        if beta[0] != ONE or beta[1] != ZERO:
            raise InconsistentNormalFormError("U_i must start 1 + 0*x", stage=i)
        k = D_i - D_im2
        if k % D_im1 == 0:
            raise InconsistentNormalFormError("D_i - D_{i-2} collides with the U_i lattice", stage=i)
        u_sub = substitute_power(Series(beta, ds[i - 1]), D_im1, rel)
        tail = u_sub - W  # = a_i x^k w^(-D_{i-2})
        a = tail[k]
        if not a:
            raise InconsistentNormalFormError("a_i = 0", stage=i)
        low = tail.support()
        if low and low[0] < k:
            raise InconsistentNormalFormError(f"unexpected term x^{low[0]} below x^{k}", stage=i)
        polys[i] = beta
        avals[i] = a
        rest = Series(tail.coeffs[k:], rel - k).scale(a.inverse())
        w = pow_rational(rest, Fraction(-1, D_im2))
    d1 = ds[0]
    if w.order < d1:
        raise InconsistentNormalFormError("ran out of precision", stage=1)
    psi1 = comp_inverse(LaurentSeries(1, w.truncate(d1)))
    U1 = pow_rational(psi1.unit, -d1)
    beta = list(U1.coeffs)
    if beta[0] != ONE or beta[1] != ZERO:
        raise InconsistentNormalFormError("U_1 must start 1 + 0*x", stage=1)
    polys[1] = beta
    prod_rest = ONE
    for i in range(2, N + 1):
        prod_rest = prod_rest * avals[i]
    avals[1] = nf.lam * GaussianRational(Ds[N]) / prod_rest
    factors = tuple(HenonFactor(tuple(reversed(polys[i])), avals[i]) for i in range(1, N + 1))
    m = HenonMap(factors)
    if check and not normal_form(m).same_form(nf):
        raise InconsistentNormalFormError("roundtrip normal form differs", stage=0)
    return m


# -- surjectivity --------------------------------------------------------------


class _Unknowns:
    """The beta^(i)_l as a mutable table that materializes to a HenonMap."""

    def __init__(self, ds, A):
        self.ds = ds
        self.A = A
        self.N = len(ds)
        self.u = {i: [ONE, ZERO] + [ZERO] * (ds[i - 1] - 1) for i in range(1, self.N + 1)}
        self.a = {i: ONE for i in range(2, self.N + 1)}

    def get(self, i, l):
        if l == 0:
            return ONE if i == self.N else self.a[i + 1]
        return self.u[i][l]

    def set(self, i, l, value):
        if l == 0:
            self.a[i + 1] = value
        else:
            self.u[i][l] = value

    def to_map(self) -> HenonMap:
        prod_rest = ONE
        for a in self.a.values():
            prod_rest = prod_rest * a
        a1 = self.A / prod_rest
        factors = []
        for i in range(1, self.N + 1):
            factors.append(HenonFactor(tuple(reversed(self.u[i])), a1 if i == 1 else self.a[i]))
        return HenonMap(tuple(factors))


def _hhat_fast(m: HenonMap) -> Series:
    _, Ds, _ = degrees(m)
    return h_hat(m, order=_minimal_order(Ds))


def solve_surjectivity(t: TargetParameters) -> HenonMap:
    """A Hénon map with Jacobian lam * D_N whose h_hat equals the target on the lattice."""
    ds = t.degrees
    Ds = t.D
    A = t.lam * GaussianRational(Ds[-1])
    unknowns = _Unknowns(ds, A)
    slots = t.slots()
    fixed = []  # (exponent, value) already matched
    b = _hhat_fast(unknowns.to_map())
    for i, l in slots:
        n = t.exponent(i, l)
        target = t.alpha_tilde[(i, l)]
        if (i, l) == (len(ds), 0):
            if b[n] != ONE:
                raise SolverContradiction(f"leading coefficient at x^{n} is {b[n]}, expected 1")
            fixed.append((n, target))
            continue
        # current value is the placeholder: 1 for a-slots, 0 otherwise
        v0 = unknowns.get(i, l)
        v1 = v0 + ONE
        f0 = b[n]
        unknowns.set(i, l, v1)
        f1 = _hhat_fast(unknowns.to_map())[n]
        slope = f1 - f0
        if not slope:
            raise SolverContradiction(f"zero slope for unknown {(i, l)} at x^{n}")
        value = v0 + (target - f0) / slope
        if l == 0 and not value:
            raise UnrealizableTargetError(
                f"target not realizable: a_{i + 1} would be 0", path=f"alpha_tilde[{i},{l}]")
        unknowns.set(i, l, value)
        b = _hhat_fast(unknowns.to_map())
        fixed.append((n, target))
        drift = [(k, v) for k, v in fixed if b[k] != v]
        if drift:
            raise SolverContradiction(
                f"after solving {(i, l)} coefficients drifted at exponents {[k for k, _ in drift]}")
    m = unknowns.to_map()
    lattice = {t.exponent(i, l) for i, l in slots}
    stray = [n for n in b.support() if n not in lattice]
    if stray:
        raise SolverContradiction(f"h_hat has terms off the lattice at {stray}")
    return m


def target_from_normal_form(nf: NormalForm) -> TargetParameters:
    """Read alpha-tilde straight off h_hat at the lattice exponents."""
    ds = degrees_from_normal_form(nf)
    b = hhat_from_normal_form(nf)
    Ds = _partial_products(ds)
    alpha = {(i, l): b[lattice_exponent(Ds, i, l)] for i, l in _slots(ds)}
    return TargetParameters(nf.lam, ds, alpha)


def convert_parametrization(p: int, lam, alpha: dict, degrees_: tuple) -> TargetParameters:
    """Reindex the coefficients alpha^(i)_l of P (l = 0..d_{N-i+1} - 1) to alpha-tilde.

    alpha^(i)_l sits at x^n(N-i+1, l); the l = 1 terms fall on the top slot of
    the next factor up, except alpha^(1)_1 at x^p which is scaled by lam.
    """
    lam = as_gaussian(lam)
    ds = tuple(int(d) for d in degrees_)
    N = len(ds)
    Ds = _partial_products(ds)
    if Ds[-1] != p:
        raise ValidationError(f"degrees {list(ds)} have product {Ds[-1]}, not p = {p}")
    alpha = {k: as_gaussian(v) for k, v in alpha.items()}
    for (i, l) in alpha:
        if not 1 <= i <= N or not 0 <= l < ds[N - i]:
            raise ValidationError(f"alpha index {(i, l)} out of range for degrees {list(ds)}")
    missing = [i for i in range(1, N + 1) if not alpha.get((i, 0), ZERO)]
    if missing:
        raise ValidationError(f"alpha^(i)_0 must be nonzero, fails for i = {missing}")
    if alpha[(1, 0)] != ONE:
        raise ValidationError("alpha^(1)_0 must be 1")
    out = {}
    for (i, l), v in alpha.items():
        k = N - i + 1
        if l != 1:
            out[(k, l)] = v
        elif i >= 2:
            out[(k + 1, ds[k])] = v
        else:
            out[(1, ds[0])] = lam * v
    return TargetParameters(lam, ds, out)
