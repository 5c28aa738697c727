"""Traveling-wave ansatz substitution and coefficient-condition extraction."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .equations import EquationSpec, get_equation
from .special_functions import check_param, e_over_k
from .symbolic import (
    ELLIPTIC,
    HYPERBOLIC,
    SYMBOLS,
    BasisExpression,
    BasisMonomial,
    ConditionPolynomial,
)

__all__ = [
    "AnsatzFamily",
    "ConditionSystem",
    "VolumeConstraint",
    "make_ansatz",
    "substitute",
    "derive_conditions",
    "volume_constraint",
    "independent_subset",
]

P = ConditionPolynomial


class AnsatzFamily(str, Enum):
    SOLITON = "soliton"
    CNOIDAL = "cnoidal"
    SUPERPOSITION_PLUS = "superposition-plus"
    SUPERPOSITION_MINUS = "superposition-minus"

    @classmethod
    def parse(cls, value: "AnsatzFamily | str") -> "AnsatzFamily":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        aliases = {"superposition+": "superposition-plus", "superposition-": "superposition-minus"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown ansatz family {value!r}") from None

    @property
    def basis(self) -> str:
        return HYPERBOLIC if self is AnsatzFamily.SOLITON else ELLIPTIC

    @property
    def is_elliptic(self) -> bool:
        return self is not AnsatzFamily.SOLITON

    @property
    def is_superposition(self) -> bool:
        return self in (AnsatzFamily.SUPERPOSITION_PLUS, AnsatzFamily.SUPERPOSITION_MINUS)

    @property
    def sign(self) -> int:
        return -1 if self is AnsatzFamily.SUPERPOSITION_MINUS else 1


def make_ansatz(family: AnsatzFamily | str) -> BasisExpression:
    """Symbolic eta(y) for the family, as a function of B*y."""
    family = AnsatzFamily.parse(family)
    A = P.var("A")
    D = P.var("D")
    if family is AnsatzFamily.SOLITON:
        return BasisExpression.monomial(HYPERBOLIC, (2, 0), A)
    if family is AnsatzFamily.CNOIDAL:
        return BasisExpression(ELLIPTIC, {(2, 0, 0): A, (0, 0, 0): D})
    half_a = A * Fraction(1, 2)
    return BasisExpression(ELLIPTIC, {
        (0, 0, 2): half_a,
        (1, 0, 1): half_a * P.var("s") * family.sign,
        (0, 0, 0): D,
    })


@lru_cache(maxsize=None)
def _derivatives(family: AnsatzFamily, count: int) -> tuple[BasisExpression, ...]:
    eta = make_ansatz(family)
    out = [eta]
    for _ in range(count):
        out.append(out[-1].differentiate())
    return tuple(out)


def term_expressions(equation: EquationSpec, family: AnsatzFamily | str) -> list[BasisExpression]:
    """Each equation term evaluated on the ansatz (eta_t -> -v eta_y)."""
    family = AnsatzFamily.parse(family)
    top = max(max(t.factors) for t in equation.terms)
    derivs = _derivatives(family, top)
    alpha, beta, v = P.var("alpha"), P.var("beta"), P.var("v")
    out = []
    for term in equation.terms:
        coeff = P.const(term.coefficient) * alpha ** term.alpha_power * beta ** term.beta_power
        if term.time:
            expr = derivs[1].scale(-v)
        else:
            expr = BasisExpression.constant(family.basis, 1)
            for n in term.factors:
                expr = expr * derivs[n]
        out.append(expr.scale(coeff))
    return out


@lru_cache(maxsize=None)
def substitute(family: AnsatzFamily | str, order: int) -> BasisExpression:
    """Full residual of the order-``order`` equation on the ansatz, in canonical form."""
    family = AnsatzFamily.parse(family)
    terms = term_expressions(get_equation(order), family)
    total = BasisExpression(family.basis)
    for t in terms:
        total = total + t
    return total


def _strip_common_factor(family: AnsatzFamily, residual: BasisExpression) -> BasisExpression:
    """Divide out the factor shared by every residual term.

    soliton: tanh*sech^2; cnoidal: cn*sn*dn; superposition: sn*(dn +/- s*cn)^2.
    For the superposition family (dn + s cn)(dn - s cn) = 1 - m, so the square
    of the conjugate factor is multiplied in and (1 - m)^2 divided out.
    """
    terms = residual.terms
    if family is AnsatzFamily.SOLITON:
        shift = (2, 1)
    elif family is AnsatzFamily.CNOIDAL:
        shift = (1, 1, 1)
    else:
        s = P.var("s")
        conj = BasisExpression(ELLIPTIC, {(0, 0, 1): 1, (1, 0, 0): s * (-family.sign)})
        prod = residual * conj * conj
        terms = {e: c.divide_by_one_minus_m().divide_by_one_minus_m() for e, c in prod.terms.items()}
        shift = (0, 1, 0)
    out = {}
    for e, c in terms.items():
        q = tuple(a - b for a, b in zip(e, shift))
        if min(q) < 0:
            raise ArithmeticError(f"residual term {e} lacks the common factor {shift}")
        out[q] = c
    return BasisExpression(family.basis, out)


def _generic_points(seed: int = 20240607, count: int = 2):
    rng = random.Random(seed)
    pts = []
    for _ in range(count):
        s = Fraction(rng.randint(3, 97), 101)
        pts.append({"alpha": Fraction(rng.randint(2, 89), 97), "beta": Fraction(rng.randint(2, 89), 89),
                    "s": s, "m": s * s})
    return pts


def _coefficient_vector(poly: ConditionPolynomial, point: dict) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of ``poly`` as a polynomial in the unknowns, at a parameter point."""
    vec: dict[tuple[int, ...], Fraction] = {}
    for e, c in poly.items():
        val = Fraction(c)
        key = []
        for i, name in enumerate(SYMBOLS):
            if name in point:
                if e[i]:
                    val *= point[name] ** e[i]
            else:
                key.append(e[i])
        key = tuple(key)
        vec[key] = vec.get(key, 0) + val
    return {k: v for k, v in vec.items() if v}


def _rank(rows: list[dict]) -> int:
    cols = sorted({k for r in rows for k in r})
    mat = [[r.get(c, Fraction(0)) for c in cols] for r in rows]
    rank = 0
    for col in range(len(cols)):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pr = mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col] / pr[col]
                mat[i] = [a - f * b for a, b in zip(mat[i], pr)]
        rank += 1
    return rank


def independent_subset(conditions: list[ConditionPolynomial]) -> list[int]:
    """Indices of a maximal linearly independent subset (greedy, in order).

    Independence is over the field of rational functions in the parameters
    (alpha, beta, m, s), tested exactly at fixed random rational points.
    """
    keep: list[int] = []
    points = _generic_points()
    for i, cond in enumerate(conditions):
        trial = keep + [i]
        if any(_rank([_coefficient_vector(conditions[j], p) for j in trial]) == len(trial) for p in points):
            keep.append(i)
    return keep


@dataclass(frozen=True)
class VolumeConstraint:
    """Zero period-mean rule for the offset D (not polynomial: uses E(m)/K(m))."""

    family: AnsatzFamily
    formula: str

    def offset(self, A: float, m: float) -> float:
        m = check_param(m)
        ratio = e_over_k(m)
        if self.family is AnsatzFamily.CNOIDAL:
            return -(A / m) * (ratio + m - 1.0)
        return -0.5 * A * ratio

    def offset_ratio(self, m: float) -> float:
        """D / A at parameter m."""
        return self.offset(1.0, m)

    def to_json(self) -> dict:
        return {"family": self.family.value, "formula": self.formula}


def volume_constraint(family: AnsatzFamily | str) -> VolumeConstraint:
    family = AnsatzFamily.parse(family)
    if family is AnsatzFamily.SOLITON:
        raise ValueError("the soliton ansatz has no offset D; volume constraint applies to periodic families")
    if family is AnsatzFamily.CNOIDAL:
        return VolumeConstraint(family, "D = -(A/m)*(E(m)/K(m) + m - 1)")
    return VolumeConstraint(family, "D = -(A/2)*E(m)/K(m)")


@dataclass(frozen=True)
class ConditionSystem:
    family: AnsatzFamily
    order: int
    conditions: tuple[ConditionPolynomial, ...]
    monomials: tuple[BasisMonomial, ...]  # basis monomial each condition multiplies
    unknowns: tuple[str, ...]
    raw_count: int = 0
    merged: tuple[tuple[BasisMonomial, BasisMonomial], ...] = ()
    volume: VolumeConstraint | None = field(default=None)

    @property
    def v_conditions(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.conditions) if "v" in c.symbols())

    def to_json(self) -> dict:
        return {
            "family": self.family.value,
            "order": self.order,
            "unknowns": list(self.unknowns),
            "conditions": [
                {"basis": str(mono), "terms": cond.to_json()}
                for mono, cond in zip(self.monomials, self.conditions)
            ],
            "raw_coefficient_count": self.raw_count,
            "merged_duplicates": [[str(a), str(b)] for a, b in self.merged],
            "volume_constraint": self.volume.to_json() if self.volume else None,
        }


@lru_cache(maxsize=None)
def derive_conditions(family: AnsatzFamily | str, order: int) -> ConditionSystem:
    """Coefficient conditions for the ansatz in the order-``order`` equation.

    Conditions are normalized (content of nonzero symbols removed, integer
    coefficients with gcd 1, positive leading term), exact duplicates are
    merged, and only a linearly independent subset is kept.
    """
    family = AnsatzFamily.parse(family)
    residual = _strip_common_factor(family, substitute(family, order))
    collected = residual.collect()
    monos: list[BasisMonomial] = []
    conds: list[ConditionPolynomial] = []
    merged: list[tuple[BasisMonomial, BasisMonomial]] = []
    for mono, coeff in collected:
        norm = coeff.normalized()
        if norm in conds:
            merged.append((mono, monos[conds.index(norm)]))
            continue
        monos.append(mono)
        conds.append(norm)
    # prefer short conditions when choosing the independent subset
    order_idx = sorted(range(len(conds)), key=lambda i: (len(conds[i]), monos[i]))
    picked = independent_subset([conds[i] for i in order_idx])
    keep = sorted(order_idx[i] for i in picked)
    unknowns = ("A", "B", "v") if family is AnsatzFamily.SOLITON else ("A", "B", "v", "D")
    return ConditionSystem(
        family=family,
        order=order,
        conditions=tuple(conds[i] for i in keep),
        monomials=tuple(monos[i] for i in keep),
        unknowns=unknowns,
        raw_count=len(collected),
        merged=tuple(merged),
        volume=None if family is AnsatzFamily.SOLITON else volume_constraint(family),
    )
