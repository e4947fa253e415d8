"""Deciding conjugacy near infinity and biholomorphism of the Kato surfaces.

Two maps with the same degrees are conjugate near infinity iff
G = theta o F o theta^-1 for theta(z, w) = (zeta z, zeta^{D_{N-1}} w) with
zeta^(D_N - 1) = 1.  Writing zeta = omega^e for a fixed primitive M-th root
omega (M = D_N - 1), every coefficient ratio gives a linear congruence in e.
Ratios live in Q(i), whose only roots of unity are +-1, +-i, so no
cyclotomic arithmetic is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import ValidationError
from .gaussian import ONE, ZERO, GaussianRational, I, as_gaussian
from .germ import h_hat
from .henon import HenonMap, degrees, require_valid, rotate
from .kato import cyclic_equal

__all__ = [
    "CongruenceSystem",
    "Progression",
    "Decision",
    "ratio_to_residue",
    "solve_congruences",
    "conjugacy_constraints",
    "normal_form_constraints",
    "conjugate_near_infinity",
    "conjugate_via_normal_forms",
    "kato_biholomorphic",
    "zeta_from_exponent",
]


@dataclass(frozen=True)
class Progression:
    """e = residue (mod step), read inside Z/M; step divides M."""

    residue: int
    step: int
    M: int

    def members(self) -> list[int]:
        return list(range(self.residue, self.M, self.step))

    def __contains__(self, e: int) -> bool:
        return (e - self.residue) % self.step == 0


@dataclass(frozen=True)
class CongruenceSystem:
    """Constraints (m, t) meaning m * e = t (mod M)."""

    M: int
    constraints: tuple = ()

    def __post_init__(self):
        if self.M < 1:
            raise ValidationError("modulus must be positive")
        object.__setattr__(self, "constraints",
                           tuple((int(m), int(t) % self.M) for m, t in self.constraints))

    def holds(self, e: int) -> bool:
        return all((m * e - t) % self.M == 0 for m, t in self.constraints)


def ratio_to_residue(r, M: int) -> int | None:
    """t with r = omega^t for omega = exp(2 pi i / M), or None if r is not an M-th root of unity."""
    r = as_gaussian(r)
    if not r:
        raise ValidationError("ratio must be nonzero")
    if r == ONE:
        return 0
    if r == -ONE:
        return M // 2 if M % 2 == 0 else None
    if r == I:
        return M // 4 if M % 4 == 0 else None
    if r == -I:
        return 3 * M // 4 if M % 4 == 0 else None
    return None


def solve_congruences(sys: CongruenceSystem) -> Progression | None:
    M = sys.M
    residue, step = 0, 1  # everything
    for m, t in sys.constraints:
        g = gcd(m, M)
        if t % g:
            return None
        n = M // g
        r = (t // g) * pow(m // g, -1, n) % n if n > 1 else 0
        # intersect e = residue (mod step) with e = r (mod n)
        h = gcd(step, n)
        if (r - residue) % h:
            return None
        lcm = step // h * n
        if h == n:
            continue
        k = ((r - residue) // h) * pow(step // h, -1, n // h) % (n // h)
        residue = (residue + step * k) % lcm
        step = lcm
    return Progression(residue % step, step, M)


@dataclass(frozen=True)
class Decision:
    """Outcome of a conjugacy or biholomorphism test; ``e`` is the least solving exponent."""

    verdict: bool
    M: int
    e: int | None = None
    k: int | None = None
    solutions: Progression | None = None
    reason: str = field(default="", compare=False)

    def __bool__(self):
        return self.verdict

    def zeta(self) -> GaussianRational | None:
        return None if self.e is None else zeta_from_exponent(self.e, self.M)

    def to_dict(self) -> dict:
        out = {"verdict": "yes" if self.verdict else "no"}
        if self.k is not None:
            out["k"] = self.k
        if self.e is not None:
            out["e"] = self.e
        out["M"] = self.M
        return out


def zeta_from_exponent(e: int, M: int) -> GaussianRational | None:
    """omega^e when it lies in Q(i), else None."""
    if (4 * e) % M:
        return None
    return (ONE, I, -ONE, -I)[(4 * e // M) % 4]


def _no(M, reason) -> Decision:
    return Decision(False, M, reason=reason)


def _from_system(sys: CongruenceSystem) -> Decision:
    prog = solve_congruences(sys)
    if prog is None:
        return _no(sys.M, "congruences have no common solution")
    return Decision(True, sys.M, e=prog.residue, solutions=prog)


def conjugacy_constraints(F: HenonMap, G: HenonMap) -> CongruenceSystem | str:
    """The congruence system on e from factor coefficients, or a reason why none exists."""
    _, Ds, _ = degrees(F)
    N = F.n
    M = Ds[N] - 1
    cons = []
    for i, (f, g) in enumerate(zip(F.factors, G.factors), start=1):
        for l in range(2, f.d + 1):
            pf, pg = f.coeff_from_top(l), g.coeff_from_top(l)
            if not pf and not pg:
                continue
            if not pf or not pg:
                return f"coefficient of z^{f.d - l} in factor {i} vanishes for only one map"
            t = ratio_to_residue(pg / pf, M)
            if t is None:
                return f"coefficient ratio {pg / pf} in factor {i} is not a root of unity of order dividing {M}"
            cons.append((l * Ds[i - 1], t))
        d_im2 = Ds[i - 2] if i >= 2 else Ds[N - 1]
        t = ratio_to_residue(g.a / f.a, M)
        if t is None:
            return f"ratio of a_{i} is {g.a / f.a}, not a root of unity of order dividing {M}"
        cons.append((Ds[i] - d_im2, t))
    return CongruenceSystem(M, tuple(cons))


def normal_form_constraints(F: HenonMap, G: HenonMap) -> CongruenceSystem | str:
    """Constraints b^G_n = zeta^(n + D_{N-1} - 1) b^F_n on the h_hat coefficients."""
    _, Ds, AF = degrees(F)
    _, _, AG = degrees(G)
    M = Ds[-1] - 1
    if AF != AG:
        return "lambda differs"
    bF, bG = h_hat(F), h_hat(G)
    cons = []
    for n in range(bF.order + 1):
        x, y = bF[n], bG[n]
        if not x and not y:
            continue
        if not x or not y:
            return f"h_hat supports differ at x^{n}"
        t = ratio_to_residue(y / x, M)
        if t is None:
            return f"h_hat ratio at x^{n} is not a root of unity of order dividing {M}"
        cons.append((n + Ds[-2] - 1, t))
    return CongruenceSystem(M, tuple(cons))


def _prepare(F, G):
    require_valid(F)
    require_valid(G)
    if F.degree_list != G.degree_list:
        return f"degree lists differ: {list(F.degree_list)} vs {list(G.degree_list)}"
    return None


def conjugate_near_infinity(F: HenonMap, G: HenonMap) -> Decision:
    reason = _prepare(F, G)
    M = degrees(F)[1][-1] - 1
    if reason:
        return _no(M, reason)
    if M == 1:
        return Decision(True, 1, e=0, solutions=Progression(0, 1, 1)) if F == G \
            else _no(1, "maps differ and only zeta = 1 is allowed")
    sys = conjugacy_constraints(F, G)
    if isinstance(sys, str):
        return _no(M, sys)
    return _from_system(sys)


def conjugate_via_normal_forms(F: HenonMap, G: HenonMap) -> Decision:
    reason = _prepare(F, G)
    M = degrees(F)[1][-1] - 1
    if reason:
        return _no(M, reason)
    sys = normal_form_constraints(F, G)
    if isinstance(sys, str):
        return _no(M, sys)
    return _from_system(sys)


def kato_biholomorphic(F: HenonMap, G: HenonMap) -> Decision:
    """First k in 1..N with rotate(F, k) conjugate near infinity to G."""
    require_valid(F)
    require_valid(G)
    N = F.n
    offsets = cyclic_equal(F.degree_list, G.degree_list)
    M = degrees(G)[1][-1] - 1
    if not offsets:
        return _no(M, "degree sequences are not cyclically equal")
    for k in range(1, N + 1):
        if k % N not in offsets:
            continue
        d = conjugate_near_infinity(rotate(F, k), G)
        if d.verdict:
            return Decision(True, d.M, e=d.e, k=k, solutions=d.solutions)
    return _no(M, "no rotation of F is conjugate to G")
