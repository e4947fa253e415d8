"""Combinatorics of the Kato surface attached to a Hénon map.

Everything here is integer bookkeeping: b_2, the self-intersection profile
(closed form and a blow-up simulator), the invariants (p, q, j) and the type
obtained by gcd descent on a normal-form support.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import TypeUndefinedError, ValidationError

__all__ = [
    "TowerStep",
    "TowerDescription",
    "KatoInvariants",
    "b2",
    "dloussky_closed",
    "build_henon_tower",
    "simulate_tower",
    "invariants_closed",
    "type_from_support",
    "cyclic_equal",
    "rotate_sequence",
    "henon_degrees_from_profile",
]


def _check_degrees(ds) -> tuple:
    ds = tuple(ds)
    if not ds:
        raise ValidationError("degree list is empty")
    bad = [d for d in ds if not isinstance(d, int) or isinstance(d, bool) or d < 2]
    if bad:
        raise ValidationError(f"degrees must be integers >= 2, got {list(ds)}")
    return ds


def _partial_products(ds) -> list[int]:
    Ds = [1]
    for d in ds:
        Ds.append(Ds[-1] * d)
    return Ds


def b2(ds: Sequence[int]) -> int:
    return sum(2 * d - 1 for d in _check_degrees(ds))


def dloussky_closed(ds: Sequence[int]) -> tuple:
    """Blocks (d, 2 repeated 2d-3 times, 3), one per factor."""
    out = []
    for d in _check_degrees(ds):
        out.extend([d] + [2] * (2 * d - 3) + [3])
    return tuple(out)


# -- blow-up towers ------------------------------------------------------------


@dataclass(frozen=True)
class TowerStep:
    """Blow up a point lying on the divisors ``on`` (0-based global indices).

    ``glued`` marks a point that also lies on the image of the last
    divisor under the gluing map.
    """

    on: frozenset = frozenset()
    glued: bool = False

    def __post_init__(self):
        object.__setattr__(self, "on", frozenset(self.on))


@dataclass(frozen=True)
class TowerDescription:
    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)

    def violations(self) -> list[str]:
        problems = []
        for k, step in enumerate(self.steps):
            if len(step.on) + step.glued > 2:
                problems.append(f"step {k + 1}: center on more than two divisors")
            late = [j for j in step.on if j < 0 or j >= k]
            if late:
                problems.append(f"step {k + 1}: references divisors {sorted(late)} not yet created")
        return problems


def build_henon_tower(ds: Sequence[int]) -> TowerDescription:
    """Blow-up centers for F_N o ... o F_1, factor by factor.

    Within a factor of degree d (local divisors E_1..E_{2d-1}):
    E_1 on the previous factor's last divisor, E_2 on E_1 and that divisor,
    E_3..E_d on E_1 and their predecessor, E_{d+1} on E_d only, then a
    free chain.  For the first factor "previous last divisor" means the
    glued image of the tower's final divisor.
    """
    ds = _check_degrees(ds)
    steps = []
    last = None  # global index of the previous factor's final divisor
    for d in ds:
        base = len(steps)
        first = base  # E_1
        if last is None:
            steps.append(TowerStep(frozenset(), glued=True))
            steps.append(TowerStep({first}, glued=True))
        else:
            steps.append(TowerStep({last}))
            steps.append(TowerStep({first, last}))
        for k in range(3, d + 1):
            steps.append(TowerStep({first, base + k - 2}))
        steps.append(TowerStep({base + d - 1}))
        for k in range(d + 2, 2 * d):
            steps.append(TowerStep({base + k - 2}))
        last = len(steps) - 1
    return TowerDescription(tuple(steps))


def simulate_tower(t: TowerDescription) -> tuple:
    """Each blow-up makes a (-1)-curve and lowers every curve through its center by 1."""
    problems = t.violations()
    if problems:
        raise ValidationError("not a normal-crossings tower: " + "; ".join(problems), problems)
    if not t.steps:
        return ()
    selfint = []
    glued = 0
    for step in t.steps:
        for j in step.on:
            selfint[j] -= 1
        glued += step.glued
        selfint.append(-1)
    selfint[-1] -= glued
    return tuple(-s for s in selfint)


# -- invariants and type ---------------------------------------------------------


@dataclass(frozen=True)
class KatoInvariants:
    p: int
    q: int
    j: int
    type: tuple

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "j": self.j, "type": list(self.type)}


def invariants_closed(ds: Sequence[int]) -> KatoInvariants:
    """(D_N, 2 D_N - 2, D_N - D_{N-1}) and m_i = 2 D_N - D_{N-i+1} - D_{N-i}."""
    ds = _check_degrees(ds)
    Ds = _partial_products(ds)
    N = len(ds)
    p = Ds[N]
    ms = tuple(2 * p - Ds[N - i + 1] - Ds[N - i] for i in range(1, N + 1))
    return KatoInvariants(p, 2 * p - 2, p - Ds[N - 1], ms)


def type_from_support(p: int, support: Iterable[int]) -> tuple:
    """gcd descent: m_1 = j = min(support), then the next exponent that lowers the gcd."""
    exps = sorted(set(int(n) for n in support))
    if not exps:
        raise ValidationError("support is empty")
    ms = [exps[0]]
    g = gcd(exps[0], p)
    for m in exps[1:]:
        if g == 1:
            break
        if gcd(m, g) < g:
            ms.append(m)
            g = gcd(m, g)
    if g != 1:
        raise TypeUndefinedError(
            f"type undefined (not a Dloussky-germ support): gcd stalls at {g} for p = {p}")
    return tuple(ms)


# -- cyclic profiles -------------------------------------------------------------


def rotate_sequence(s: Sequence, k: int) -> tuple:
    s = tuple(s)
    if not s:
        return s
    k %= len(s)
    return s[k:] + s[:k]


def cyclic_equal(s1: Sequence, s2: Sequence) -> set:
    """All k with s2 == s1[k:] + s1[:k]."""
    s1, s2 = tuple(s1), tuple(s2)
    if len(s1) != len(s2):
        return set()
    if not s1:
        return {0}
    return {k for k in range(len(s1)) if s1[k:] + s1[:k] == s2}


def henon_degrees_from_profile(profile: Sequence[int]) -> tuple | None:
    """Degrees d_1..d_N if ``profile`` is a rotation of a Hénon profile, else None.

    Each factor block ends in the only 3 that is cyclically preceded by a 2;
    the returned degrees start with the block after the first such marker,
    so they are defined up to rotation.
    """
    s = tuple(profile)
    n = len(s)
    ends = [k for k in range(n) if s[k] == 3 and s[k - 1] == 2]
    if not ends:
        return None
    start = (ends[0] + 1) % n
    s = s[start:] + s[:start]
    ends = [(k - start) % n for k in ends]
    ends.sort()
    ds = []
    lo = 0
    for hi in ends:
        block = s[lo:hi + 1]
        d = block[0]
        if d < 2 or block != (d,) + (2,) * (2 * d - 3) + (3,):
            return None
        ds.append(d)
        lo = hi + 1
    if lo != n:
        return None
    return tuple(ds)
