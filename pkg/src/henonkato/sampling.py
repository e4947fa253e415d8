"""Random maps, targets and map pairs for property tests and ``selftest``."""

from __future__ import annotations

import random

from .errors import ValidationError
from .gaussian import ONE, ZERO, GaussianRational
from .henon import UNIT_ROOTS, HenonFactor, HenonMap, rotate, theta_conjugate
from .reconstruct import TargetParameters

__all__ = [
    "random_rational",
    "random_gaussian",
    "random_map",
    "random_target",
    "valid_roots",
    "perturb",
    "random_pair",
]


def random_rational(rng: random.Random, bound: int = 10) -> str:
    return f"{rng.randint(-bound, bound)}/{rng.randint(1, bound)}"


def random_gaussian(rng: random.Random, bound: int = 10, nonzero: bool = False) -> GaussianRational:
    while True:
        c = GaussianRational(random_rational(rng, bound), random_rational(rng, bound))
        if c or not nonzero:
            return c


def random_map(rng: random.Random, max_factors: int = 3, max_degree: int = 4,
               bound: int = 10, density: float = 0.7) -> HenonMap:
    """Monic centered factors; each lower coefficient is nonzero with probability ``density``."""
    factors = []
    for _ in range(rng.randint(1, max_factors)):
        d = rng.randint(2, max_degree)
        lower = [random_gaussian(rng, bound) if rng.random() < density else ZERO
                 for _ in range(d - 1)]
        factors.append(HenonFactor.monic(lower, random_gaussian(rng, bound, nonzero=True)))
    return HenonMap(tuple(factors))


def random_target(rng: random.Random, max_factors: int = 3, max_degree: int = 3,
                  bound: int = 10) -> TargetParameters:
    ds = tuple(rng.randint(2, max_degree) for _ in range(rng.randint(1, max_factors)))
    N = len(ds)
    alpha = {}
    for i in range(1, N + 1):
        alpha[(i, 0)] = ONE if i == N else random_gaussian(rng, bound, nonzero=True)
        for l in range(2, ds[i - 1] + 1):
            alpha[(i, l)] = random_gaussian(rng, bound)
    return TargetParameters(random_gaussian(rng, bound, nonzero=True), ds, alpha)


def valid_roots(m: HenonMap) -> list[GaussianRational]:
    """The zeta in {1, -1, i, -i} with zeta^(D_N - 1) = 1."""
    out = []
    for z in UNIT_ROOTS:
        try:
            theta_conjugate(m, z)
        except ValidationError:
            continue
        out.append(z)
    return out


def perturb(rng: random.Random, m: HenonMap) -> tuple[HenonMap, tuple]:
    """Add 1 to one coefficient (a lower P coefficient or a); returns (map, (factor, slot))."""
    factors = list(m.factors)
    i = rng.randrange(len(factors))
    f = factors[i]
    slot = rng.randrange(f.d)  # 0..d-2 polynomial, d-1 means a
    if slot == f.d - 1:
        factors[i] = HenonFactor(f.p_coeffs, f.a + ONE)
        if not factors[i].a:
            factors[i] = HenonFactor(f.p_coeffs, f.a + ONE + ONE)
        return HenonMap(tuple(factors)), (i + 1, "a")
    pc = list(f.p_coeffs)
    pc[slot] = pc[slot] + ONE
    factors[i] = HenonFactor(tuple(pc), f.a)
    return HenonMap(tuple(factors)), (i + 1, slot)


def random_pair(rng: random.Random, max_factors: int = 3, max_degree: int = 4) -> tuple[HenonMap, HenonMap]:
    """A pair of maps of the same degrees: theta-conjugate, perturbed, or unrelated."""
    F = random_map(rng, max_factors, max_degree)
    kind = rng.random()
    if kind < 0.4:
        return F, theta_conjugate(F, rng.choice(valid_roots(F)))
    if kind < 0.8:
        G = theta_conjugate(F, rng.choice(valid_roots(F)))
        return F, perturb(rng, G)[0]
    if kind < 0.9:
        return F, rotate(F, rng.randint(1, F.n))
    factors = []
    for f in F.factors:
        lower = [random_gaussian(rng) for _ in range(f.d - 1)]
        factors.append(HenonFactor.monic(lower, random_gaussian(rng, nonzero=True)))
    return F, HenonMap(tuple(factors))
