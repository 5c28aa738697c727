"""Exact univariate/bivariate polynomial tools over the rationals.

Univariate polynomials are lists of ``Fraction`` coefficients, lowest degree
first.  Bivariate polynomials ``f(x, z)`` are dicts ``{(i, k): c}`` for
``c * x**i * z**k``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

UPoly = list  # list[Fraction], low -> high


def trim(p: Sequence[Fraction]) -> UPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[Fraction]) -> int:
    return len(trim(p)) - 1


def peval(p: Sequence[Fraction], x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pdivmod(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[UPoly, UPoly]:
    a = trim([Fraction(c) for c in a])
    b = trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = trim(r)
    return trim(q), r


def monic(p: Sequence[Fraction]) -> UPoly:
    p = trim(p)
    if not p:
        return p
    lead = p[-1]
    return [c / lead for c in p]


def pgcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    a, b = trim(a), trim(b)
    while b:
        _, r = pdivmod(a, b)
        a, b = b, r
    return monic(a)


def strip_zero_roots(p: Sequence[Fraction]) -> tuple[UPoly, int]:
    """Remove the factor x**k; returns (quotient, k)."""
    p = trim(p)
    k = 0
    while p and p[0] == 0:
        p = p[1:]
        k += 1
    return p, k


def real_roots(p: Sequence[Fraction], imag_tol: float = 1e-9) -> list[float]:
    """Real roots (numeric) of an exact polynomial, ascending."""
    p = trim(p)
    if len(p) <= 1:
        return []
    coeffs = np.array([float(c) for c in reversed(monic(p))])
    roots = np.roots(coeffs)
    scale = max(1.0, float(np.max(np.abs(roots)))) if roots.size else 1.0
    out = sorted(float(r.real) for r in roots if abs(r.imag) <= imag_tol * scale)
    return out


def determinant(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    a = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / a[col][col]
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def sylvester_resultant(f: Sequence[Fraction], g: Sequence[Fraction], df: int, dg: int) -> Fraction:
    """Resultant with *formal* degrees df, dg (leading entries may vanish)."""
    f = list(f) + [Fraction(0)] * (df + 1 - len(f))
    g = list(g) + [Fraction(0)] * (dg + 1 - len(g))
    n = df + dg
    if n == 0:
        return Fraction(1)
    rows = []
    for i in range(dg):
        row = [Fraction(0)] * n
        for j in range(df + 1):
            row[i + j] = f[df - j]
        rows.append(row)
    for i in range(df):
        row = [Fraction(0)] * n
        for j in range(dg + 1):
            row[i + j] = g[dg - j]
        rows.append(row)
    return determinant(rows)


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> UPoly:
    """Exact Newton-form interpolation, returned in the monomial basis."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly: UPoly = [Fraction(0)]
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly
        for k, c in enumerate(poly):
            shifted[k] -= xs[i] * c
        shifted[0] += coef[i]
        poly = shifted
    return trim(poly)


def bivariate_degrees(f: dict) -> tuple[int, int]:
    if not f:
        return 0, 0
    return max(i for i, _ in f), max(k for _, k in f)


def coeffs_in_x(f: dict, z: Fraction, dx: int) -> UPoly:
    out = [Fraction(0)] * (dx + 1)
    for (i, k), c in f.items():
        out[i] += c * z ** k
    return out


def resultant_x(f: dict, g: dict) -> UPoly:
    """Res_x(f, g) as an exact polynomial in z."""
    dfx, dfz = bivariate_degrees(f)
    dgx, dgz = bivariate_degrees(g)
    bound = dfx * dgz + dgx * dfz
    xs = [Fraction(k) for k in range(bound + 1)]
    ys = [sylvester_resultant(coeffs_in_x(f, z, dfx), coeffs_in_x(g, z, dgx), dfx, dgx) for z in xs]
    return interpolate(xs, ys)


def strip_x_power(f: dict) -> dict:
    if not f:
        return f
    low = min(i for i, _ in f)
    return {(i - low, k): c for (i, k), c in f.items()}
