"""Slow, independent reference arithmetic for the tests.

Coefficients are (Fraction, Fraction) pairs and series are plain lists;
nothing here touches the package, so agreement with it is real evidence.
Algorithms are deliberately different from the library's: binomial sums
of powers instead of a recurrence, fixed-point iteration instead of
Lagrange inversion.
"""

from fractions import Fraction as Q

ZERO = (Q(0), Q(0))
ONE = (Q(1), Q(0))


def c(re, im=0):
    return (Q(re), Q(im))


def add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def inv(x):
    n = x[0] ** 2 + x[1] ** 2
    return (x[0] / n, -x[1] / n)


def scale(q, x):
    return (q * x[0], q * x[1])


def smul(f, g, n):
    out = [ZERO] * (n + 1)
    for i, a in enumerate(f[: n + 1]):
        for j, b in enumerate(g[: n + 1 - i]):
            out[i + j] = add(out[i + j], mul(a, b))
    return out


def sadd(f, g, n):
    f = f + [ZERO] * (n + 1 - len(f))
    g = g + [ZERO] * (n + 1 - len(g))
    return [add(a, b) for a, b in zip(f[: n + 1], g[: n + 1])]


def binom(alpha, k):
    out = Q(1)
    for j in range(k):
        out = out * (alpha - j) / (j + 1)
    return out


def binomial_power(f, alpha, n):
    """(1 + u)^alpha = sum_k C(alpha, k) u^k with u = f - 1, f[0] == 1."""
    assert f[0] == ONE
    u = [ZERO] + list(f[1: n + 1])
    out = [ZERO] * (n + 1)
    power = [ONE] + [ZERO] * n
    for k in range(n + 1):
        out = sadd(out, [scale(binom(Q(alpha), k), t) for t in power], n)
        power = smul(power, u, n)
    return out


def geometric_inverse(f, n):
    """1/f for f[0] == 1 as sum (1 - f)^k."""
    return binomial_power(f, -1, n)


def compose(f, g, n):
    """f(g) for g[0] == 0, by summing f_k g^k."""
    assert g[0] == ZERO
    out = [ZERO] * (n + 1)
    power = [ONE] + [ZERO] * n
    for k in range(n + 1):
        if k < len(f):
            out = sadd(out, [mul(f[k], t) for t in power], n)
        power = smul(power, g, n)
    return out


def reversion(f, n):
    """Compositional inverse of f = x + ... (list with f[0] = 0, f[1] = 1) by fixed point.

    g <- g - (f(g) - x); each pass fixes one more coefficient.
    """
    assert f[0] == ZERO and f[1] == ONE
    x = [ZERO, ONE] + [ZERO] * (n - 1)
    g = list(x)
    for _ in range(n + 1):
        fg = compose(f, g, n)
        g = [sub(a, sub(b, t)) for a, b, t in zip(g, fg, x)]
    return g


def to_pair(gr):
    """GaussianRational -> oracle pair (via its text parts)."""
    return (Q(str(gr.re)), Q(str(gr.im)))


def quadratic_normal_form(cc, a):
    """(lambda, g_1, g_2) for (z, w) -> (z^2 + c - a w, z) straight from the definitions.

    psi_1 = x (1 + c x^2)^(-1/2); h_hat = x^2 / psi_1^{-1}; g_1 = b_1, g_2 = (2/a) b_3.
    """
    n = 4
    unit = binomial_power([ONE, ZERO, cc, ZERO, ZERO], Q(-1, 2), n - 1)
    psi = [ZERO] + unit  # x * unit, coefficients 0..n
    psi_inv = reversion(psi, n)
    w = psi_inv[1:]  # psi_inv / x
    h = [ZERO] + geometric_inverse(w, n - 1)  # x^2 / (x w) = x / w
    lam = scale(Q(1, 2), a)
    g1 = h[1]
    g2 = mul(scale(Q(2), inv(a)), h[3])
    return lam, g1, g2, h
