import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import gq, hmap
from henonkato.errors import ValidationError
from henonkato.gaussian import ONE
from henonkato.henon import (
    apply_map,
    degrees,
    poly_eval,
    q_restriction,
    require_valid,
    rotate,
    theta_conjugate,
    u_series,
    v_series,
    validate,
)
from henonkato.sampling import random_gaussian, random_map, valid_roots


def test_validate_accepts_plain_square():
    assert validate(hmap(([0, 0, 1], 1))) == []


def test_validate_reports_uncentered():
    assert validate(hmap(([0, 1, 1], 1))) == ["not centered, factor 1"]


def test_validate_reports_zero_jacobian():
    assert validate(hmap(([1, 0, 0, 1], 0))) == ["a = 0, factor 1"]


def test_validate_lists_every_violation_with_index():
    m = hmap(([0, 0, 1], 1), ([0, 0, 2], 0))
    assert validate(m) == ["not monic, factor 2", "a = 0, factor 2"]
    with pytest.raises(ValidationError) as exc:
        require_valid(m)
    assert exc.value.violations == ["not monic, factor 2", "a = 0, factor 2"]


def test_degrees_products():
    m = hmap(([0, 0, 1], 2), ([0, 0, 0, 1], gq(0, 3)))
    ds, Ds, A = degrees(m)
    assert ds == (2, 3) and Ds == (1, 2, 6) and A == gq(0, 6)
    assert degrees(hmap(([0, 0, 1], 1)))[1] == (1, 2)


def test_q_restriction_examples():
    m = hmap(([0, 0, 1], 1), ([0, 0, 1], 1))
    assert q_restriction(m, 0) == [gq(0), ONE]
    assert q_restriction(m, 1) == [gq(0), gq(0), ONE]
    assert q_restriction(m, 2) == [gq(c) for c in (0, -1, 0, 0, 1)]  # z^4 - z
    with pytest.raises(IndexError):
        q_restriction(m, 3)


def test_u_series_is_reversal():
    c = gq(2, 1)
    assert u_series(hmap(([c, 0, 1], 1)), 1, 4).coeffs == (ONE, gq(0), c, gq(0), gq(0))
    b = gq("1/3")
    assert u_series(hmap(([c, b, 0, 1], 1)), 1, 3).coeffs == (ONE, gq(0), b, c)


def test_v_series_two_squares():
    m = hmap(([0, 0, 1], 1), ([0, 0, 1], 1))
    assert v_series(m, 2, 4).coeffs == tuple(gq(c) for c in (1, 0, 0, -1, 0))


def test_rotate_examples():
    m = hmap(([0, 0, 1], 1), ([1, 0, 1], 2), ([0, 0, 0, 1], 3))
    F1, F2, F3 = m.factors
    assert rotate(m, 2).factors == (F3, F1, F2)
    assert rotate(m, 3) == m
    two = hmap(([0, 0, 1], 1), ([1, 0, 1], 2))
    assert rotate(two, 1).factors == tuple(reversed(two.factors))
    one = hmap(([0, 0, 1], 1))
    assert rotate(one, 1) == one


def test_theta_identity():
    m = hmap(([gq(1, 1), 0, 0, 1], 2))
    assert theta_conjugate(m, 1) == m


def test_theta_cubic_sign_flip():
    c, a = gq(2, -3), gq(5)
    got = theta_conjugate(hmap(([c, 0, 0, 1], a)), -1)
    assert got == hmap(([-c, 0, 0, 1], a))


def test_theta_cubic_pointwise():
    # theta(z, w) = (-z, -w) for D = (1, 3), zeta = -1
    c, a = gq(2, -3), gq(5)
    F = hmap(([c, 0, 0, 1], a))
    G = theta_conjugate(F, -1)
    for z, w in [(gq(1), gq(2)), (gq(0, 1), gq(-3, 2)), (gq("1/2"), gq(7))]:
        fz, fw = apply_map(F, -z, -w)  # F o theta^-1
        assert apply_map(G, z, w) == (-fz, -fw)


def test_theta_rejects_nonroot_for_quadratic():
    with pytest.raises(ValidationError):
        theta_conjugate(hmap(([0, 0, 1], 1)), -1)
    with pytest.raises(ValidationError):
        theta_conjugate(hmap(([0, 0, 0, 1], 1)), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_theta_conjugate_pointwise_random(seed):
    """theta o F o theta^-1 evaluated directly against the coefficient law."""
    rng = random.Random(seed)
    m = random_map(rng, 3, 4)
    _, Ds, A = degrees(m)
    for zeta in valid_roots(m):
        G = theta_conjugate(m, zeta)
        assert validate(G) == [] and degrees(G)[2] == A
        inv = zeta.inverse()
        z, w = random_gaussian(rng, 5), random_gaussian(rng, 5)
        fz, fw = apply_map(m, inv * z, inv ** Ds[-2] * w)
        assert apply_map(G, z, w) == (zeta * fz, zeta ** Ds[-2] * fw)
        assert theta_conjugate(G, zeta.conjugate()) == m


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_q_restriction_degree_and_pointwise(seed):
    rng = random.Random(seed)
    m = random_map(rng, 3, 4)
    _, Ds, _ = degrees(m)
    z = random_gaussian(rng, 5)
    for i in range(m.n + 1):
        assert len(q_restriction(m, i)) - 1 == Ds[i]
    # (q_N(z), q_{N-1}(z)) is the image of (z, 0)
    assert apply_map(m, z, 0) == (poly_eval(q_restriction(m, m.n), z),
                                  poly_eval(q_restriction(m, m.n - 1), z))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_rotation_full_cycle(seed):
    rng = random.Random(seed)
    m = random_map(rng, 4, 3)
    k = rng.randint(1, m.n)
    assert rotate(rotate(m, k), m.n - k if k < m.n else m.n) == m
