"""Pointwise residuals and period means of ansatz solutions on grids."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .ansatz import AnsatzFamily, make_ansatz, term_expressions
from .equations import get_equation
from .solver import SolutionParams
from .special_functions import complete_K

__all__ = ["WaveField", "GridSpec", "VerifierUsageError", "eval_field", "residual", "residual_profile",
           "volume_mean", "default_grid"]


class VerifierUsageError(ValueError):
    pass


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GridSpec:
    n: int
    length: float
    x0: float | None = None

    def __post_init__(self):
        if self.n < 16 or not _is_pow2(self.n):
            raise VerifierUsageError(f"grid size must be a power of two >= 16, got {self.n}")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise VerifierUsageError("domain length must be positive")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def left(self) -> float:
        return -0.5 * self.length if self.x0 is None else self.x0

    def points(self) -> np.ndarray:
        return self.left + self.dx * np.arange(self.n)


@dataclass
class WaveField:
    """Samples of eta on a uniform periodic grid x_i = x0 + i*dx, i < N."""

    samples: np.ndarray
    x0: float
    dx: float

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        n = self.samples.size
        if n < 16 or not _is_pow2(n):
            raise VerifierUsageError(f"WaveField needs a power-of-two size >= 16, got {n}")
        if not np.all(np.isfinite(self.samples)):
            raise VerifierUsageError("WaveField samples must be finite")

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "eta"])
        for xi, ei in zip(self.x, self.samples):
            w.writerow([format(float(xi), ".17g"), format(float(ei), ".17g")])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "WaveField":
        rows = list(csv.reader(io.StringIO(text)))
        if rows[0] != ["x", "eta"]:
            raise VerifierUsageError("expected header x,eta")
        data = np.array([[float(a), float(b)] for a, b in rows[1:]])
        return cls(data[:, 1], float(data[0, 0]), float(data[1, 0] - data[0, 0]))


def _check_params(params: SolutionParams, family: AnsatzFamily):
    if not params.B > 0:
        raise VerifierUsageError("B must be positive (B^2 > 0)")
    if family.is_elliptic and params.m is None:
        raise VerifierUsageError(f"{family.value} fields need the elliptic parameter m")


def default_grid(params: SolutionParams, n: int = 1024) -> GridSpec:
    """Soliton: L = 32/B.  Periodic families: four periods of the profile."""
    family = params.ansatz
    if family is AnsatzFamily.SOLITON:
        return GridSpec(n, 32.0 / params.B)
    return GridSpec(n, 4.0 * _period(params))


def _period(params: SolutionParams) -> float:
    """Spatial period of eta: 2K/B for cn^2, 4K/B for the superposition profile."""
    K = complete_K(params.m)
    factor = 2.0 if params.ansatz is AnsatzFamily.CNOIDAL else 4.0
    return factor * K / params.B


def eval_field(params: SolutionParams, family: AnsatzFamily | str | None = None,
               grid: GridSpec | None = None, t: float = 0.0) -> WaveField:
    family = params.ansatz if family is None else AnsatzFamily.parse(family)
    _check_params(params, family)
    grid = grid or default_grid(params)
    y = grid.points() - params.v * t
    if family is AnsatzFamily.SOLITON:
        # the grid is periodic: keep the pulse on it
        y = (y + 0.5 * grid.length) % grid.length - 0.5 * grid.length
    eta = make_ansatz(family).evaluate(params.values(), y)
    return WaveField(np.asarray(eta, dtype=float), grid.left, grid.dx)


def residual_profile(params: SolutionParams, family: AnsatzFamily | str | None, order: int,
                     grid: GridSpec | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise (|sum of terms|, max |term|) on the grid at t = 0."""
    family = params.ansatz if family is None else AnsatzFamily.parse(family)
    _check_params(params, family)
    grid = grid or default_grid(params)
    y = grid.points()
    exprs = term_expressions(get_equation(order), family)
    vals = params.values()
    funcs = exprs[0].basis_values(vals, y)
    terms = np.array([e.evaluate(vals, funcs=funcs) for e in exprs])
    return np.abs(terms.sum(axis=0)), np.abs(terms).max(axis=0)


def residual(params: SolutionParams, family: AnsatzFamily | str | None = None, order: int | None = None,
             grid: GridSpec | None = None) -> float:
    """max over the grid of |sum of equation terms| / max |term| (exact derivatives)."""
    order = params.order if order is None else order
    total, scale = residual_profile(params, family, order, grid)
    live = scale > 0
    if not np.any(live):
        return 0.0
    return float(np.max(total[live] / scale[live]))


def volume_mean(params: SolutionParams, family: AnsatzFamily | str | None = None, nodes: int = 64) -> float:
    """Period average of eta via Gauss-Legendre on each quarter period."""
    family = params.ansatz if family is None else AnsatzFamily.parse(family)
    if not family.is_elliptic:
        raise VerifierUsageError("volume_mean applies to periodic families only")
    _check_params(params, family)
    K = complete_K(params.m)
    quarter = K / params.B
    xg, wg = np.polynomial.legendre.leggauss(nodes)
    eta = make_ansatz(family)
    vals = params.values()
    total = 0.0
    for j in range(4):
        a = j * quarter
        y = a + 0.5 * quarter * (xg + 1.0)
        total += 0.5 * quarter * float(np.dot(wg, eta.evaluate(vals, y)))
    return total / (4.0 * quarter)
