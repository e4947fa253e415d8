"""Generalized Hénon maps F = F_N o ... o F_1 with F_i(z, w) = (P_i(z) - a_i w, z)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .gaussian import ONE, ZERO, GaussianRational, I, as_gaussian
from .series import Series

__all__ = [
    "HenonFactor",
    "HenonMap",
    "validate",
    "require_valid",
    "degrees",
    "q_restriction",
    "u_series",
    "v_series",
    "rotate",
    "theta_conjugate",
    "apply_map",
    "UNIT_ROOTS",
]

# the only roots of unity in Q(i)
UNIT_ROOTS = (ONE, -ONE, I, -I)


@dataclass(frozen=True)
class HenonFactor:
    """(z, w) -> (P(z) - a*w, z); ``p_coeffs[k]`` is the coefficient of z**k."""

    p_coeffs: tuple
    a: GaussianRational

    def __post_init__(self):
        object.__setattr__(self, "p_coeffs", tuple(as_gaussian(c) for c in self.p_coeffs))
        object.__setattr__(self, "a", as_gaussian(self.a))

    @property
    def d(self) -> int:
        return len(self.p_coeffs) - 1

    def coeff_from_top(self, l: int) -> GaussianRational:
        """Coefficient of z**(d - l), i.e. of x**l in U(x) = x**d P(1/x)."""
        return self.p_coeffs[self.d - l]

    @classmethod
    def monic(cls, lower: Sequence, a) -> HenonFactor:
        """Monic centered factor from the coefficients of z**0 .. z**(d-2)."""
        return cls(tuple(lower) + (ZERO, ONE), a)


@dataclass(frozen=True)
class HenonMap:
    factors: tuple

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def degree_list(self) -> tuple:
        return tuple(f.d for f in self.factors)

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)


def validate(m: HenonMap) -> list[str]:
    """Every violated standing assumption (monic, centered, a != 0), with 1-based factor index."""
    problems = []
    if not m.factors:
        return ["map has no factors"]
    for idx, f in enumerate(m.factors, start=1):
        if f.d < 2:
            problems.append(f"degree < 2, factor {idx}")
            continue
        if f.p_coeffs[f.d] != ONE:
            problems.append(f"not monic, factor {idx}")
        if f.p_coeffs[f.d - 1] != ZERO:
            problems.append(f"not centered, factor {idx}")
        if f.a == ZERO:
            problems.append(f"a = 0, factor {idx}")
    return problems


def require_valid(m: HenonMap) -> HenonMap:
    problems = validate(m)
    if problems:
        raise ValidationError("invalid Hénon map: " + "; ".join(problems), problems)
    return m


def degrees(m: HenonMap) -> tuple[tuple, tuple, GaussianRational]:
    """(d_1..d_N, D_0..D_N, A) with D_i = d_1...d_i and A the product of the a_i."""
    ds = m.degree_list
    Ds = [1]
    for d in ds:
        Ds.append(Ds[-1] * d)
    A = ONE
    for f in m.factors:
        A = A * f.a
    return ds, tuple(Ds), A


# -- one-variable polynomials (dense ascending lists) ------------------------


def _poly_mul(p, q):
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if not x:
            continue
        for j, y in enumerate(q):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _poly_compose(p, q):
    """p(q(z))."""
    out = [p[-1]]
    for c in reversed(p[:-1]):
        out = _poly_mul(out, q)
        out[0] = out[0] + c
    return out


def _poly_sub(p, q):
    n = max(len(p), len(q))
    p = list(p) + [ZERO] * (n - len(p))
    q = list(q) + [ZERO] * (n - len(q))
    return [x - y for x, y in zip(p, q)]


def _poly_eval(p, z):
    acc = ZERO
    for c in reversed(p):
        acc = acc * z + c
    return acc


def q_restriction(m: HenonMap, i: int) -> list[GaussianRational]:
    """q_i(z) = Q_i(z, 0): q_0 = z, q_1 = P_1, q_i = P_i(q_{i-1}) - a_i q_{i-2}."""
    if not 0 <= i <= m.n:
        raise IndexError(f"index {i} outside 0..{m.n}")
    prev2, prev = None, [ZERO, ONE]
    for k in range(1, i + 1):
        f = m.factors[k - 1]
        nxt = _poly_compose(list(f.p_coeffs), prev)
        if k >= 2:
            nxt = _poly_sub(nxt, [f.a * c for c in prev2])
        prev2, prev = prev, nxt
    return prev


def u_series(m: HenonMap, i: int, order: int) -> Series:
    """U_i(x) = x**d_i P_i(1/x) (1-based factor index), truncated to ``order``."""
    f = m.factors[i - 1]
    return Series(reversed(f.p_coeffs), order)


def v_series(m: HenonMap, i: int, order: int) -> Series:
    """V_i(x, 0) = x**D_i q_i(1/x), the reversal of q_i."""
    return Series(reversed(q_restriction(m, i)), order)


def rotate(m: HenonMap, k: int) -> HenonMap:
    """[F_{k+1}, ..., F_N, F_1, ..., F_k]: composition F_k o ... o F_1 o F_N o ... o F_{k+1}."""
    if not 1 <= k <= m.n:
        raise ValidationError(f"rotation index {k} outside 1..{m.n}")
    return HenonMap(m.factors[k:] + m.factors[:k])


def _root_order(zeta: GaussianRational) -> int:
    for order, powers in ((1, (ONE,)), (2, (-ONE,)), (4, (I, -I))):
        if zeta in powers:
            return order
    raise ValidationError(f"{zeta} is not a root of unity in Q(i)")


def theta_conjugate(m: HenonMap, zeta) -> HenonMap:
    """theta o F o theta^-1 for theta(z, w) = (zeta z, zeta^{D_{N-1}} w), zeta^{D_N - 1} = 1.

    Factorwise: the coefficient of z^{d_i - l} picks up zeta^{l D_{i-1}} and a_i picks
    up zeta^{D_i - D_{i-2}}, with D_{-1} read as D_{N-1}.
    """
    zeta = as_gaussian(zeta)
    require_valid(m)
    ds, Ds, _ = degrees(m)
    M = Ds[-1] - 1
    if M % _root_order(zeta):
        raise ValidationError(f"{zeta} is not a {M}-th root of unity")
    N = m.n
    out = []
    for idx, f in enumerate(m.factors, start=1):
        d = f.d
        new = list(f.p_coeffs)
        for l in range(d + 1):
            new[d - l] = f.p_coeffs[d - l] * zeta ** (l * Ds[idx - 1])
        d_im2 = Ds[idx - 2] if idx >= 2 else Ds[N - 1]
        out.append(HenonFactor(tuple(new), f.a * zeta ** (Ds[idx] - d_im2)))
    return HenonMap(tuple(out))


def apply_map(m: HenonMap, z, w) -> tuple:
    """Evaluate F_N o ... o F_1 at a point of Q(i)^2."""
    z, w = as_gaussian(z), as_gaussian(w)
    for f in m.factors:
        z, w = _poly_eval(f.p_coeffs, z) - f.a * w, z
    return z, w


def poly_eval(p, z) -> GaussianRational:
    return _poly_eval(p, as_gaussian(z))
