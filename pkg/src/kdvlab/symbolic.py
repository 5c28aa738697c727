"""Exact rational algebra over the sech/tanh and cn/sn/dn differential rings.

Two layers:

* :class:`ConditionPolynomial` - a multivariate polynomial with ``Fraction``
  coefficients in the symbols ``alpha, beta, A, B, v, D, m, s``.  ``s`` is a
  formal square root of ``m``; the relation ``s**2 = m`` is applied on
  construction so every polynomial has ``deg_s <= 1``.
* :class:`BasisExpression` - a finite sum ``sum_k c_k * phi_k(B y)`` where the
  ``phi_k`` are canonical monomials ``sech^a tanh^b`` (hyperbolic family) or
  ``cn^a sn^b dn^c`` (elliptic family) with ``b, c <= 1`` and the ``c_k`` are
  condition polynomials.

No floating point is used except in the explicit ``evaluate`` methods.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Iterable, Iterator, Mapping

import numpy as np

from .special_functions import jacobi_cn_sn_dn, sech

SYMBOLS = ("alpha", "beta", "A", "B", "v", "D", "m", "s")
_INDEX = {name: i for i, name in enumerate(SYMBOLS)}
_NVARS = len(SYMBOLS)
_M = _INDEX["m"]
_S = _INDEX["s"]
_ZERO_EXP = (0,) * _NVARS

HYPERBOLIC = "hyperbolic"
ELLIPTIC = "elliptic"
FAMILIES = (HYPERBOLIC, ELLIPTIC)


class FamilyMismatchError(TypeError):
    """Raised when expressions from different basis families are combined."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact arithmetic only; got {type(x).__name__}")


def _reduce_s(exps: tuple[int, ...]) -> tuple[int, ...]:
    if exps[_S] < 2:
        return exps
    e = list(exps)
    q, r = divmod(e[_S], 2)
    e[_S] = r
    e[_M] += q
    return tuple(e)


class ConditionPolynomial:
    """Immutable polynomial with exact rational coefficients.

    Terms are kept as a dict ``exponent tuple -> Fraction`` with zero
    coefficients dropped, so equality is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != _NVARS:
                    raise ValueError(f"exponent vector must have {_NVARS} entries")
                exps = _reduce_s(tuple(int(e) for e in exps))
                if min(exps) < 0:
                    raise ValueError("negative exponent")
                c = _as_fraction(c)
                if c:
                    total = clean.get(exps, 0) + c
                    if total:
                        clean[exps] = total
                    else:
                        clean.pop(exps, None)
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "ConditionPolynomial":
        return cls({_ZERO_EXP: c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "ConditionPolynomial":
        e = [0] * _NVARS
        e[_INDEX[name]] = power
        return cls({tuple(e): 1})

    @classmethod
    def monomial(cls, coeff=1, **powers: int) -> "ConditionPolynomial":
        e = [0] * _NVARS
        for name, p in powers.items():
            e[_INDEX[name]] = p
        return cls({tuple(e): coeff})

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return iter(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree(self, name: str) -> int:
        i = _INDEX[name]
        return max((e[i] for e in self._terms), default=0)

    def symbols(self) -> set[str]:
        used = set()
        for e in self._terms:
            used.update(SYMBOLS[i] for i, p in enumerate(e) if p)
        return used

    def is_constant(self) -> bool:
        return all(e == _ZERO_EXP for e in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(_ZERO_EXP, Fraction(0))

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "ConditionPolynomial":
        if isinstance(other, ConditionPolynomial):
            return other
        return ConditionPolynomial.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return ConditionPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return ConditionPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ConditionPolynomial):
            c = _as_fraction(other)
            return ConditionPolynomial({e: c * v for e, v in self._terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = _reduce_s(tuple(a + b for a, b in zip(e1, e2)))
                out[e] = out.get(e, 0) + c1 * c2
        return ConditionPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = ConditionPolynomial.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, ConditionPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == ConditionPolynomial.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"ConditionPolynomial({self.to_str()})"

    # transformations ----------------------------------------------------
    def divide_by_one_minus_m(self) -> "ConditionPolynomial":
        """Exact quotient by (1 - m); raises ValueError if (1 - m) does not divide."""
        # group by exponents of every variable except m, then synthetic-divide in m
        groups: dict[tuple[int, ...], dict[int, Fraction]] = {}
        for e, c in self._terms.items():
            key = e[:_M] + (0,) + e[_M + 1:]
            groups.setdefault(key, {})[e[_M]] = c
        out: dict[tuple[int, ...], Fraction] = {}
        for key, coeffs in groups.items():
            # p(m) = (1 - m) q(m)  <=>  q_k = sum_{j<=k} p_j
            top = max(coeffs)
            running = Fraction(0)
            for k in range(top):
                running += coeffs.get(k, 0)
                if running:
                    e = list(key)
                    e[_M] = k
                    out[tuple(e)] = running
            if running + coeffs.get(top, 0) != 0:
                raise ValueError("polynomial is not divisible by (1 - m)")
        return ConditionPolynomial(out)

    def diff(self, name: str) -> "ConditionPolynomial":
        """Partial derivative with respect to one symbol (``s`` excluded)."""
        if name == "s":
            raise ValueError("s = sqrt(m) is not an independent variable")
        i = _INDEX[name]
        if name == "m" and any(e[_INDEX["s"]] for e in self._terms):
            raise ValueError("d/dm of a polynomial in s = sqrt(m) is not polynomial")
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return ConditionPolynomial(out)

    def monomial_content(self, names: Iterable[str]) -> tuple[int, ...]:
        """Largest power of each of ``names`` dividing every term."""
        content = [0] * _NVARS
        if not self._terms:
            return tuple(content)
        for name in names:
            i = _INDEX[name]
            content[i] = min(e[i] for e in self._terms)
        return tuple(content)

    def divide_monomial(self, exps: tuple[int, ...]) -> "ConditionPolynomial":
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if min(q) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[q] = c
        return ConditionPolynomial(out)

    def normalized(self, nonzero_symbols: Iterable[str] = ("alpha", "beta", "A", "B", "m", "s")):
        """Canonical representative up to a nonzero factor.

        Removes the content of symbols known to be nonzero, divides by the gcd
        of the numerators (times the lcm of denominators) and makes the
        leading coefficient positive.
        """
        if not self._terms:
            return self
        p = self.divide_monomial(self.monomial_content(nonzero_symbols))
        nums = [c.numerator for c in p._terms.values()]
        dens = [c.denominator for c in p._terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        lcm = 1
        for d in dens:
            lcm = lcm * d // gcd(lcm, d)
        scale = Fraction(lcm, g)
        lead = next(reversed(p._terms.values()))
        if lead < 0:
            scale = -scale
        return p * scale

    def substitute(self, values: Mapping[str, "ConditionPolynomial | Fraction | int"]) -> "ConditionPolynomial":
        """Exact substitution of polynomials (or rationals) for symbols."""
        subs = {_INDEX[k]: (v if isinstance(v, ConditionPolynomial) else ConditionPolynomial.const(v))
                for k, v in values.items()}
        result = ConditionPolynomial()
        for e, c in self._terms.items():
            term = ConditionPolynomial.const(c)
            rest = list(e)
            for i, sub in subs.items():
                if e[i]:
                    term = term * sub ** e[i]
                    rest[i] = 0
            term = term * ConditionPolynomial({tuple(rest): 1})
            result = result + term
        return result

    def evaluate(self, values: Mapping[str, object]):
        """Numeric value; ``values`` maps symbol names to floats or arrays."""
        total = 0.0
        for e, c in self._terms.items():
            t = float(c)
            for i, p in enumerate(e):
                if p:
                    t = t * values[SYMBOLS[i]] ** p
            total = total + t
        return total

    def term_values(self, values: Mapping[str, object]) -> list:
        """Numeric value of each term separately (for scale-free normalization)."""
        out = []
        for e, c in self._terms.items():
            t = float(c)
            for i, p in enumerate(e):
                if p:
                    t = t * values[SYMBOLS[i]] ** p
            out.append(t)
        return out

    # I/O ----------------------------------------------------------------
    def to_str(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            factors = [f"{SYMBOLS[i]}^{p}" if p > 1 else SYMBOLS[i] for i, p in enumerate(e) if p]
            parts.append("*".join([str(c)] + factors) if factors else str(c))
        return " + ".join(parts)

    def to_json(self) -> list[dict]:
        return [
            {"exponents": {SYMBOLS[i]: p for i, p in enumerate(e) if p},
             "coefficient": f"{c.numerator}/{c.denominator}"}
            for e, c in self._terms.items()
        ]

    @classmethod
    def from_json(cls, data: list[dict]) -> "ConditionPolynomial":
        terms = {}
        for item in data:
            e = [0] * _NVARS
            for name, p in item["exponents"].items():
                e[_INDEX[name]] = int(p)
            terms[tuple(e)] = Fraction(item["coefficient"])
        return cls(terms)


Poly = ConditionPolynomial
_ONE = ConditionPolynomial.const(1)
_M_POLY = ConditionPolynomial.var("m")
_B_POLY = ConditionPolynomial.var("B")


@dataclass(frozen=True, order=True)
class BasisMonomial:
    """``sech^a tanh^b`` (exps=(a, b)) or ``cn^a sn^b dn^c`` (exps=(a, b, c))."""

    family: str
    exps: tuple[int, ...]

    def __str__(self):
        names = ("sech", "tanh") if self.family == HYPERBOLIC else ("cn", "sn", "dn")
        parts = [f"{n}^{p}" if p > 1 else n for n, p in zip(names, self.exps) if p]
        return "*".join(parts) or "1"

    def evaluate(self, funcs: tuple) -> object:
        out = 1.0
        for f, p in zip(funcs, self.exps):
            if p:
                out = out * f ** p
        return out


@lru_cache(maxsize=None)
def _reduce_monomial(family: str, exps: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], ConditionPolynomial], ...]:
    """Rewrite a raw monomial in canonical form (tanh, sn, dn powers <= 1)."""
    if family == HYPERBOLIC:
        a, b = exps
        if b < 2:
            return (((a, b), _ONE),)
        # tanh^2 = 1 - sech^2
        out: dict[tuple[int, ...], ConditionPolynomial] = {}
        for e, c in _reduce_monomial(family, (a, b - 2)):
            out[e] = out.get(e, ConditionPolynomial()) + c
        for e, c in _reduce_monomial(family, (a + 2, b - 2)):
            out[e] = out.get(e, ConditionPolynomial()) - c
        return tuple((e, c) for e, c in sorted(out.items()) if c)
    a, b, c = exps
    out = {}
    if b >= 2:
        # sn^2 = 1 - cn^2
        for e, k in _reduce_monomial(family, (a, b - 2, c)):
            out[e] = out.get(e, ConditionPolynomial()) + k
        for e, k in _reduce_monomial(family, (a + 2, b - 2, c)):
            out[e] = out.get(e, ConditionPolynomial()) - k
    elif c >= 2:
        # dn^2 = (1 - m) + m cn^2
        for e, k in _reduce_monomial(family, (a, b, c - 2)):
            out[e] = out.get(e, ConditionPolynomial()) + k * (_ONE - _M_POLY)
        for e, k in _reduce_monomial(family, (a + 2, b, c - 2)):
            out[e] = out.get(e, ConditionPolynomial()) + k * _M_POLY
    else:
        return (((a, b, c), _ONE),)
    return tuple((e, k) for e, k in sorted(out.items()) if k)


class BasisExpression:
    """Linear combination of canonical basis monomials with polynomial coefficients."""

    __slots__ = ("family", "_terms")

    def __init__(self, family: str, terms: Mapping[tuple[int, ...], ConditionPolynomial] | None = None):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        self.family = family
        width = 2 if family == HYPERBOLIC else 3
        acc: dict[tuple[int, ...], ConditionPolynomial] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != width:
                raise ValueError(f"{family} monomials need {width} exponents")
            if not isinstance(coeff, ConditionPolynomial):
                coeff = ConditionPolynomial.const(coeff)
            if not coeff:
                continue
            for e, k in _reduce_monomial(family, exps):
                acc[e] = acc.get(e, ConditionPolynomial()) + k * coeff
        self._terms = {e: c for e, c in sorted(acc.items()) if c}

    @classmethod
    def constant(cls, family: str, value) -> "BasisExpression":
        zero = (0, 0) if family == HYPERBOLIC else (0, 0, 0)
        return cls(family, {zero: value})

    @classmethod
    def monomial(cls, family: str, exps: tuple[int, ...], coeff=1) -> "BasisExpression":
        return cls(family, {tuple(exps): coeff})

    @property
    def terms(self) -> dict[tuple[int, ...], ConditionPolynomial]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def normalize(self) -> "BasisExpression":
        return BasisExpression(self.family, self._terms)

    def _check(self, other: "BasisExpression"):
        if not isinstance(other, BasisExpression):
            raise TypeError("expected a BasisExpression")
        if other.family != self.family:
            raise FamilyMismatchError(f"cannot combine {self.family} and {other.family} expressions")

    def __add__(self, other):
        if not isinstance(other, BasisExpression):
            other = BasisExpression.constant(self.family, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, ConditionPolynomial()) + c
        return BasisExpression(self.family, out)

    __radd__ = __add__

    def __neg__(self):
        return BasisExpression(self.family, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BasisExpression):
            return self.scale(other)
        self._check(other)
        out: dict[tuple[int, ...], ConditionPolynomial] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                prod = c1 * c2
                for e, k in _reduce_monomial(self.family, tuple(a + b for a, b in zip(e1, e2))):
                    out[e] = out.get(e, ConditionPolynomial()) + k * prod
        return BasisExpression(self.family, out)

    def scale(self, factor) -> "BasisExpression":
        if not isinstance(factor, ConditionPolynomial):
            factor = ConditionPolynomial.const(factor)
        return BasisExpression(self.family, {e: c * factor for e, c in self._terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = BasisExpression.constant(self.family, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, BasisExpression):
            return NotImplemented
        return self.family == other.family and self._terms == other._terms

    def __hash__(self):
        return hash((self.family, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return f"BasisExpression({self.family}, 0)"
        parts = [f"({c.to_str()})*{BasisMonomial(self.family, e)}" for e, c in self._terms.items()]
        return f"BasisExpression({self.family}, " + " + ".join(parts) + ")"

    def differentiate(self) -> "BasisExpression":
        """d/dy of the expression, with the chain factor B (functions of B*y)."""
        out: dict[tuple[int, ...], ConditionPolynomial] = {}

        def put(e, c):
            out[e] = out.get(e, ConditionPolynomial()) + c

        for e, coeff in self._terms.items():
            c = coeff * _B_POLY
            if self.family == HYPERBOLIC:
                a, b = e
                # sech' = -sech tanh, tanh' = sech^2
                if a:
                    put((a, b + 1), c * (-a))
                if b:
                    put((a + 2, b - 1), c * b)
            else:
                a, b, d = e
                # cn' = -sn dn, sn' = cn dn, dn' = -m sn cn
                if a:
                    put((a - 1, b + 1, d + 1), c * (-a))
                if b:
                    put((a + 1, b - 1, d + 1), c * b)
                if d:
                    put((a + 1, b + 1, d - 1), c * _M_POLY * (-d))
        return BasisExpression(self.family, out)

    def derivative(self, n: int) -> "BasisExpression":
        e = self
        for _ in range(n):
            e = e.differentiate()
        return e

    def collect(self) -> list[tuple[BasisMonomial, ConditionPolynomial]]:
        return [(BasisMonomial(self.family, e), c) for e, c in self._terms.items()]

    @classmethod
    def from_collected(cls, family: str, items: Iterable[tuple[BasisMonomial, ConditionPolynomial]]):
        return cls(family, {mono.exps: c for mono, c in items})

    # numerics -----------------------------------------------------------
    def basis_values(self, values: Mapping[str, float], y) -> tuple:
        arg = values["B"] * np.asarray(y, dtype=float)
        if self.family == HYPERBOLIC:
            return sech(arg), np.tanh(arg)
        return jacobi_cn_sn_dn(arg, values["m"])

    def evaluate(self, values: Mapping[str, float], y=None, *, funcs: tuple | None = None):
        """Numeric value at points ``y`` (functions of ``B*y``).

        ``values`` must include every symbol appearing in the coefficients;
        for elliptic expressions ``s`` should equal ``sqrt(m)``.
        """
        if funcs is None:
            funcs = self.basis_values(values, y)
        total = 0.0 * funcs[0]
        for e, c in self._terms.items():
            total = total + c.evaluate(values) * BasisMonomial(self.family, e).evaluate(funcs)
        return total
