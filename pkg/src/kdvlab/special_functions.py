"""Complete elliptic integrals and Jacobi elliptic functions.

Everything is built on the arithmetic-geometric mean: K and E from the AGM
of (1, sqrt(1-m)), and cn/sn/dn from the descending Landen sequence of the
same AGM.  Functions accept scalars or numpy arrays for the argument ``u``;
the parameter ``m`` is always a scalar in [0, 1].
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "EllipticDomainError",
    "check_param",
    "complete_K",
    "complete_E",
    "e_over_k",
    "jacobi_cn_sn_dn",
    "sech",
]

_AGM_TOL = 1e-15
_MAX_AGM_STEPS = 64


class EllipticDomainError(ValueError):
    """Raised when an elliptic parameter or argument is outside the supported domain."""


def check_param(m: float, *, allow_one: bool = True) -> float:
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0:
        raise EllipticDomainError(f"elliptic parameter m={m!r} outside [0, 1]")
    if m == 1.0 and not allow_one:
        raise EllipticDomainError("K(m) diverges at m=1")
    return m


def _agm_sequence(m: float) -> tuple[list[float], list[float]]:
    """AGM of (1, sqrt(1-m)); returns the a_n and c_n sequences (c_0 = sqrt(m))."""
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    for _ in range(_MAX_AGM_STEPS):
        if abs(c[-1]) <= _AGM_TOL * a[-1]:
            break
        an = 0.5 * (a[-1] + b)
        c.append(0.5 * (a[-1] - b))
        b = math.sqrt(a[-1] * b)
        a.append(an)
    else:  # pragma: no cover - quadratic convergence makes this unreachable for m < 1
        raise RuntimeError(f"AGM failed to converge for m={m}")
    return a, c


def complete_K(m: float) -> float:
    """Complete elliptic integral of the first kind, 0 <= m < 1."""
    m = check_param(m, allow_one=False)
    a, _ = _agm_sequence(m)
    return math.pi / (2.0 * a[-1])


def complete_E(m: float) -> float:
    """Complete elliptic integral of the second kind, 0 <= m <= 1."""
    m = check_param(m)
    if m == 1.0:
        return 1.0
    a, c = _agm_sequence(m)
    # E = K * (1 - sum_n 2^(n-1) c_n^2)
    s = 0.5 * c[0] ** 2
    for n in range(1, len(c)):
        s += 2.0 ** (n - 1) * c[n] ** 2
    return math.pi / (2.0 * a[-1]) * (1.0 - s)


def e_over_k(m: float) -> float:
    """E(m)/K(m); tends to 0 as m -> 1 and is defined as 0 at m = 1."""
    m = check_param(m)
    if m == 1.0:
        return 0.0
    return complete_E(m) / complete_K(m)


def sech(x):
    return 1.0 / np.cosh(x)


def jacobi_cn_sn_dn(u, m: float):
    """Return (cn, sn, dn) at argument ``u`` (scalar or array) and parameter ``m``.

    The three values come from one Landen descent, so sn**2 + cn**2 = 1 holds
    to rounding; dn is formed as sqrt((1-m) + m*cn**2), which keeps
    dn**2 = (1-m) + m*cn**2 to rounding as well.
    """
    m = check_param(m)
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise EllipticDomainError("jacobi_cn_sn_dn requires a finite argument")

    if m == 1.0:
        # degenerate hyperbolic limit: no real period
        sn = np.tanh(u)
        cn = sech(u)
        dn = cn.copy()
    else:
        m1 = 1.0 - m
        a, c = _agm_sequence(m)
        # reduce into [-2K, 2K) so the doubling below does not amplify rounding
        quarter = math.pi / (2.0 * a[-1])
        period = 4.0 * quarter
        u = u - period * np.floor((u + 2.0 * quarter) / period)
        n = len(a) - 1
        phi = (2.0 ** n) * a[n] * u
        for k in range(n, 0, -1):
            phi = 0.5 * (phi + np.arcsin(c[k] / a[k] * np.sin(phi)))
        sn = np.sin(phi)
        cn = np.cos(phi)
        dn = np.sqrt(m1 + m * cn * cn)
    if scalar:
        return float(cn), float(sn), float(dn)
    return cn, sn, dn

