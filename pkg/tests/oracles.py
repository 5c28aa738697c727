"""Independent reference implementations used only by the tests.

Elliptic functions here are computed at 40-digit precision with mpmath's
own arithmetic, through a separately written AGM / descending Landen
recursion, so that they share no code with the package.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath as mp

DIGITS = 40


def agm_K_E(m: float) -> tuple[float, float]:
    """K(m), E(m) from the AGM with the Gauss-Legendre sum for E."""
    with mp.workdps(DIGITS):
        m = mp.mpf(m)
        a, b = mp.mpf(1), mp.sqrt(1 - m)
        c = mp.sqrt(m)
        total = c * c / 2
        power = mp.mpf(1) / 2
        while abs(c) > mp.mpf(10) ** (-DIGITS + 2):
            a, b, c = (a + b) / 2, mp.sqrt(a * b), (a - b) / 2
            power *= 2
            total += power * c * c
        K = mp.pi / (2 * a)
        E = K * (1 - total)
        return float(K), float(E)


def landen_cn_sn_dn(u: float, m: float) -> tuple[float, float, float]:
    """Jacobi functions from the descending Landen / AGM recursion (40 digits)."""
    with mp.workdps(DIGITS):
        u, m = mp.mpf(u), mp.mpf(m)
        if m == 0:
            return float(mp.cos(u)), float(mp.sin(u)), 1.0
        a = [mp.mpf(1)]
        c = [mp.sqrt(m)]
        b = mp.sqrt(1 - m)
        while abs(c[-1]) > mp.mpf(10) ** (-DIGITS + 2):
            an, bn = (a[-1] + b) / 2, mp.sqrt(a[-1] * b)
            c.append((a[-1] - b) / 2)
            a.append(an)
            b = bn
        n = len(a) - 1
        phi = 2 ** n * a[n] * u
        for k in range(n, 0, -1):
            phi = (phi + mp.asin(c[k] / a[k] * mp.sin(phi))) / 2
        sn, cn = mp.sin(phi), mp.cos(phi)
        dn = mp.sqrt(1 - m * sn * sn)
        return float(cn), float(sn), float(dn)


def frac_roots_quadratic(a: Fraction, b: Fraction, c: Fraction) -> tuple[float, float]:
    with mp.workdps(DIGITS):
        a, b, c = mp.mpf(a.numerator) / a.denominator, mp.mpf(b.numerator) / b.denominator, \
            mp.mpf(c.numerator) / c.denominator
        d = mp.sqrt(b * b - 4 * a * c)
        r = sorted([(-b - d) / (2 * a), (-b + d) / (2 * a)])
        return float(r[0]), float(r[1])
