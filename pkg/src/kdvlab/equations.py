"""Term tables for KdV (order 1), KdV2 (order 2) and KdV3 (order 3).

Each equation is a sum of terms ``c * alpha^p * beta^q * prod(d^n eta / dx^n)``
in the fixed reference frame.  The time derivative is a term with
``time=True`` and a single first-order factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Term", "EquationSpec", "UnsupportedOrderError", "get_equation", "SUPPORTED_ORDERS"]

SUPPORTED_ORDERS = (1, 2, 3)


class UnsupportedOrderError(ValueError):
    pass


@dataclass(frozen=True)
class Term:
    coefficient: Fraction
    alpha_power: int
    beta_power: int
    factors: tuple[int, ...]  # sorted derivative orders; (0, 1) is eta*eta_x
    time: bool = False

    @property
    def perturbation_order(self) -> int:
        return self.alpha_power + self.beta_power

    @property
    def is_linear(self) -> bool:
        return len(self.factors) == 1

    def label(self) -> str:
        if self.time:
            return "eta_t"
        names = []
        for n in self.factors:
            names.append("eta" if n == 0 else ("eta_x" if n == 1 else f"eta_{n}x"))
        return "*".join(names)

    def to_json(self) -> dict:
        c = self.coefficient
        return {
            "term": self.label(),
            "coefficient": f"{c.numerator}/{c.denominator}",
            "alpha_power": self.alpha_power,
            "beta_power": self.beta_power,
            "factors": list(self.factors),
            "time": self.time,
        }


@dataclass(frozen=True)
class EquationSpec:
    order: int
    terms: tuple[Term, ...]

    @property
    def name(self) -> str:
        return {1: "KdV", 2: "KdV2", 3: "KdV3"}.get(self.order, f"KdV{self.order}")

    def linear_terms(self) -> tuple[Term, ...]:
        return tuple(t for t in self.terms if t.is_linear and not t.time)

    def nonlinear_terms(self) -> tuple[Term, ...]:
        return tuple(t for t in self.terms if not t.is_linear)

    def to_json(self) -> dict:
        return {"equation": self.name, "order": self.order, "terms": [t.to_json() for t in self.terms]}


def _t(c: str, p: int, q: int, *factors: int, time: bool = False) -> Term:
    return Term(Fraction(c), p, q, tuple(sorted(factors)), time)


_ORDER1 = (
    _t("1", 0, 0, 1, time=True),
    _t("1", 0, 0, 1),
    _t("3/2", 1, 0, 0, 1),
    _t("1/6", 0, 1, 3),
)

_ORDER2 = (
    _t("-3/8", 2, 0, 0, 0, 1),
    _t("23/24", 1, 1, 1, 2),
    _t("5/12", 1, 1, 0, 3),
    _t("19/360", 0, 2, 5),
)

_ORDER3 = (
    _t("3/16", 3, 0, 0, 0, 0, 1),
    _t("19/32", 2, 1, 1, 1, 1),
    _t("23/16", 2, 1, 0, 1, 2),
    _t("5/16", 2, 1, 0, 0, 3),
    _t("317/288", 1, 2, 2, 3),
    _t("1079/1440", 1, 2, 1, 4),
    _t("19/80", 1, 2, 0, 5),
    _t("55/3024", 0, 3, 7),
)

_TABLES = {1: _ORDER1, 2: _ORDER1 + _ORDER2, 3: _ORDER1 + _ORDER2 + _ORDER3}


def get_equation(order: int) -> EquationSpec:
    if order not in _TABLES:
        raise UnsupportedOrderError(f"unsupported order {order!r}; available: {SUPPORTED_ORDERS}")
    return EquationSpec(order, _TABLES[order])
