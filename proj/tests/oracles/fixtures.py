"""High-precision reference values pinned in the C++ tests.

Run with mpmath installed: python3 tests/oracles/fixtures.py
Formulas are written out here independently of the C++ sources.
"""
from mpmath import mp, mpf, log, exp, pi, gamma, besseli, log10, e as E, betainc

mp.dps = 50


def lam_bound(s, L=1, CH=1, CR=1, m=8):
    s = mpf(s)
    a = s**2 / (8 * L * CH * CR + 2 * s * CH)
    ex = s / (4 * L * CR + s)
    return (8 * L * CR + (m + 1) * s) * (1 - a) ** ex / (s * (1 - (1 - a) ** (2 * ex)))


def area(m):
    return 2 * pi ** (mpf(m + 1) / 2) / gamma(mpf(m + 1) / 2)


def normalizer(m, lam):
    nu = mpf(m + 1) / 2 - 1
    lam = mpf(lam)
    return area(m) * lam**nu / ((2 * pi) ** (mpf(m + 1) / 2) * besseli(nu, lam))


def phi(m):
    n = mpf(m + 1)
    return E * (n * log(n) + n * log(log(n)) + 5 * n)


def log10_prefix(lam, eps, m=8, L=1, f=1, inner=1):
    return log10(phi(m)) + 2 * (m + 1) * log10(3 * pi * (L + lam * f) * inner * normalizer(m, lam) * exp(lam) / eps)


def show(name, v):
    print(f"{name:28s} {mp.nstr(v, 20)}")


show("Lambda(0.1), m=8", lam_bound(mpf("0.1")))
show("log10N(10, 0.1), m=8", log10_prefix(10, mpf("0.1")))
sigma = mpf(1) / 3
lam = lam_bound(sigma)
show("normalized: lambda", lam)
show("normalized: log10N", log10_prefix(lam, mpf("0.5"), inner=3))
d = mpf("0.1")
s2 = d * (2 - d)
show("covering lower m=8 d=0.1", 2 / betainc(4, mpf(1) / 2, 0, s2, regularized=True))
show("covering upper m=8 d=0.1", phi(8) / s2 ** (mpf(9) / 2))
for nu, x in [(0.5, 1000), (3.5, 1000), (10, 1e4), (0, 1e5), (2.5, 50), (0, 30)]:
    nu, x = mpf(nu), mpf(x)
    show(f"ratio nu={nu} x={x}", besseli(nu + 1, x) / besseli(nu, x))
    show(f"logI nu={nu} x={x}", log(besseli(nu, x)))
