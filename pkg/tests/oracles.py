"""High-precision reference evaluations used only by the test suite.

Everything here is built on mpmath directly from defining series and
quadratures, independent of the evaluation paths in the package.
"""

import mpmath as mp

mp.mp.dps = 40


def besselj_series(a, x):
    """Defining ascending series of J_a(x), summed in working precision."""
    a = mp.mpf(a)
    x = mp.mpf(x)
    s = mp.mpf(0)
    t = (x / 2) ** a / mp.gamma(a + 1)
    k = 0
    while True:
        s += t
        k += 1
        t *= -((x / 2) ** 2) / (k * (k + a))
        if abs(t) < mp.mpf(10) ** (-mp.mp.dps - 5) * (1 + abs(s)):
            return s


def besseli_scaled(a, x):
    return mp.besseli(mp.mpf(a), mp.mpf(x)) * mp.e ** (-mp.mpf(x))


def laguerre_norm(m, a, rho):
    """Orthonormal Laguerre function via an exact mpmath recurrence."""
    a = mp.mpf(a)
    rho = mp.mpf(rho)
    lm1, l = mp.mpf(0), mp.mpf(1)
    for k in range(m):
        lp = ((2 * k + a + 1 - rho) * l - (k + a) * lm1) / (k + 1)
        lm1, l = l, lp
    return mp.sqrt(mp.gamma(m + 1) / mp.gamma(m + a + 1)) * mp.e ** (-rho / 2) * rho ** (a / 2) * l


def q_minus_ladder(alpha, u, v, terms=600):
    """Ladder-sum definition of Q^- through mpmath Bessel functions."""
    alpha = mp.mpf(alpha)
    u = mp.mpf(u)
    v = mp.mpf(v)
    s = mp.mpf(0)
    for l in range(1, terms):
        b = alpha + l
        s += (v / u) ** b * mp.besseli(b, 2 * u * v)
    return s


def q_lattice(alpha, u, v, include_l0=True, lmax=200, mmax=200):
    """Raw double sum over the quantum-number lattice."""
    alpha = mp.mpf(alpha)
    u = mp.mpf(u)
    v = mp.mpf(v)
    s = mp.mpf(0)
    for l in range(0 if include_l0 else 1, lmax):
        b = alpha + l
        for m in range(mmax):
            s += u ** (2 * m) * v ** (2 * (m + b)) / (mp.gamma(m + 1) * mp.gamma(m + b + 1))
    return s
