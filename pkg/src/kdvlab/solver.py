"""Solving and classifying traveling-wave condition systems.

Every system produced by :func:`kdvlab.ansatz.derive_conditions` has the same
shape: one condition linear in ``v`` (the coefficient of the lowest basis
monomial), and the remaining conditions free of ``v``.  One of the ``v``-free
conditions is homogeneous in ``(alpha*A, beta*B**2)``; writing
``beta*B**2*mu = z*alpha*A`` (``mu = m`` for the cnoidal family, ``1``
otherwise) turns it into a polynomial in ``z`` alone.  The solver

1. finds the real roots of that ``z`` polynomial,
2. for each root, solves the other ``v``-free conditions for ``A``,
3. recovers ``v`` from the linear condition, and
4. polishes with damped Newton on the full system.

Overdetermined systems (more independent conditions than free unknowns) are
refuted by exact elimination over the rationals plus a numeric scan of the
scale-free sum of squared conditions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from . import elimination as el
from .ansatz import AnsatzFamily, ConditionSystem, derive_conditions, volume_constraint
from .special_functions import EllipticDomainError
from .symbolic import ConditionPolynomial

log = logging.getLogger(__name__)

__all__ = [
    "SolutionParams",
    "ConsistencyVerdict",
    "SolverUsageError",
    "z_polynomial",
    "solve_soliton",
    "solve_cnoidal",
    "solve_superposition",
    "solve",
    "consistency_analysis",
    "normalized_condition_values",
    "INCONSISTENT_SSQ_THRESHOLD",
]

INCONSISTENT_SSQ_THRESHOLD = 1e-8
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100
M_CLAMP = 1e-12
SCAN_AMPLITUDE = 5.0  # |alpha*A| <= 5
SCAN_WIDTH = 5.0  # beta*B**2 <= 5
SCAN_VELOCITY = (0.5, 2.0)


class SolverUsageError(ValueError):
    """Invalid request to the solver (missing free parameter, empty system, ...)."""


@dataclass
class SolutionParams:
    A: float
    B: float
    v: float
    D: float = 0.0
    m: float | None = None
    branch: str = "kdv_family"
    family: str = AnsatzFamily.SOLITON.value
    order: int = 1
    alpha: float = 0.1
    beta: float = 0.1
    z: float | None = None
    max_condition_residual: float | None = None

    @property
    def ansatz(self) -> AnsatzFamily:
        return AnsatzFamily.parse(self.family)

    def values(self) -> dict[str, float]:
        m = 1.0 if self.m is None else self.m
        return {"alpha": self.alpha, "beta": self.beta, "A": self.A, "B": self.B,
                "v": self.v, "D": self.D, "m": m, "s": math.sqrt(m)}

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "SolutionParams":
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)


@dataclass
class ConsistencyVerdict:
    kind: str  # "family" | "discrete" | "inconsistent"
    family: str
    order: int
    alpha: float
    beta: float
    m: float | None = None
    dimension: int = 0
    free_parameters: list[str] = field(default_factory=list)
    solutions: list[SolutionParams] = field(default_factory=list)
    z_roots: list[dict] = field(default_factory=list)
    certificate: dict | None = None
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "family": self.family,
            "order": self.order,
            "alpha": self.alpha,
            "beta": self.beta,
            "m": self.m,
            "dimension": self.dimension,
            "free_parameters": list(self.free_parameters),
            "z_roots": self.z_roots,
            "solutions": [s.to_json() for s in self.solutions],
            "certificate": self.certificate,
            "warnings": list(self.warnings),
        }


# ---------------------------------------------------------------------------
# z reduction


def _mu_power(family: AnsatzFamily) -> int:
    return 1 if family is AnsatzFamily.CNOIDAL else 0


def z_polynomial(system: ConditionSystem) -> tuple[list[Fraction], int]:
    """Exact z polynomial of the homogeneous condition (coefficients low -> high).

    Returns the coefficients and the index of the condition they came from.
    ``z = beta*B**2/(alpha*A)`` (times ``m`` for the cnoidal family).
    """
    mu = _mu_power(system.family)
    from .symbolic import SYMBOLS

    idx = {n: i for i, n in enumerate(SYMBOLS)}
    for ci, cond in enumerate(system.conditions):
        if {"v", "D"} & cond.symbols():
            continue
        coeffs: dict[int, Fraction] = {}
        total = None
        ok = True
        for e, c in cond.items():
            k, rem = divmod(e[idx["B"]], 2)
            if (rem or e[idx["beta"]] != k or e[idx["m"]] != mu * k or e[idx["s"]]
                    or e[idx["alpha"]] != e[idx["A"]]):
                ok = False
                break
            deg = e[idx["A"]] + k
            if total is None:
                total = deg
            if deg != total:
                ok = False
                break
            coeffs[k] = coeffs.get(k, 0) + c
        if ok and coeffs and len(coeffs) > 1:
            top = max(coeffs)
            return [coeffs.get(k, Fraction(0)) for k in range(top + 1)], ci
    raise ArithmeticError("no condition reduces to a polynomial in z")


# ---------------------------------------------------------------------------
# specialization to numeric parameters


@dataclass
class _Specialized:
    system: ConditionSystem
    alpha: float
    beta: float
    m: float | None
    ratio: float  # D / A
    conditions: list[ConditionPolynomial]  # in A, B, v only (exact rationals)
    kappa: Fraction  # B**2 = z * kappa * A

    def offset(self, A: float) -> float:
        return self.ratio * A


def _specialize(system: ConditionSystem, alpha: float, beta: float, m: float | None,
                volume: bool = True) -> _Specialized:
    fam = system.family
    subs: dict[str, object] = {"alpha": Fraction(alpha), "beta": Fraction(beta)}
    ratio = 0.0
    mu = Fraction(1)
    if fam.is_elliptic:
        if m is None:
            raise SolverUsageError(f"{fam.value} systems need an elliptic parameter m")
        ratio = system.volume.offset_ratio(m) if volume else 0.0
        subs["m"] = Fraction(m)
        # s = sqrt(m) is irrational in general; the conditions used here are s-free
        subs["s"] = Fraction(math.sqrt(m))
        subs["D"] = ConditionPolynomial.var("A") * Fraction(ratio)
        if fam is AnsatzFamily.CNOIDAL:
            mu = Fraction(m)
    conds = [c.substitute(subs) for c in system.conditions]
    kappa = Fraction(alpha) / (Fraction(beta) * mu)
    return _Specialized(system, alpha, beta, m, ratio, conds, kappa)


def _bivariate(cond: ConditionPolynomial, kappa: Fraction) -> dict:
    """cond(A, B) with B**2 = z*kappa*A, as {(power of A, power of z): c}."""
    from .symbolic import SYMBOLS

    ia, ib = SYMBOLS.index("A"), SYMBOLS.index("B")
    out: dict[tuple[int, int], Fraction] = {}
    for e, c in cond.items():
        k, rem = divmod(e[ib], 2)
        if rem:
            raise ArithmeticError("odd power of B in a condition")
        if any(p for i, p in enumerate(e) if i not in (ia, ib)):
            raise ArithmeticError("condition still depends on symbols other than A, B")
        key = (e[ia] + k, k)
        out[key] = out.get(key, 0) + c * kappa ** k
    return el.strip_x_power({k: v for k, v in out.items() if v})


def _split(spec: _Specialized) -> tuple[int, list[int]]:
    v_idx = [i for i, c in enumerate(spec.conditions) if "v" in c.symbols()]
    if len(v_idx) != 1 or spec.conditions[v_idx[0]].degree("v") != 1:
        raise ArithmeticError("expected exactly one condition, linear in v")
    return v_idx[0], [i for i in range(len(spec.conditions)) if i != v_idx[0]]


def _velocity(spec: _Specialized, v_index: int, A: float, B: float) -> float:
    cond = spec.conditions[v_index]
    vals = {"A": A, "B": B, "v": 0.0}
    c0 = cond.evaluate(vals)
    c1 = cond.diff("v").evaluate(vals)
    return -c0 / c1


def normalized_condition_values(system: ConditionSystem, params: SolutionParams) -> list[float]:
    """Each condition at ``params`` divided by its largest term magnitude."""
    vals = params.values()
    out = []
    for cond in system.conditions:
        terms = cond.term_values(vals)
        scale = max(abs(t) for t in terms) if terms else 1.0
        out.append(abs(sum(terms)) / scale if scale else 0.0)
    return out


def _newton(spec: _Specialized, x0: np.ndarray, free: tuple[bool, bool, bool] = (True, True, True)):
    """Damped Newton on (A, B, v); returns (x, normalized residual, iterations, converged)."""
    names = ("A", "B", "v")
    conds = spec.conditions
    jac_polys = [[c.diff(n) for n in names] for c in conds]

    def vals(x):
        return {"A": x[0], "B": x[1], "v": x[2]}

    def weights(x):
        return np.array([max(max(abs(t) for t in c.term_values(vals(x))), 1e-300) for c in conds])

    w = weights(x0)

    def resid(x):
        return np.array([c.evaluate(vals(x)) for c in conds]) / w

    x = np.array(x0, dtype=float)
    mask = np.array(free)
    r = resid(x)
    it = 0
    for it in range(1, NEWTON_MAX_ITER + 1):
        if np.max(np.abs(r)) <= NEWTON_TOL:
            break
        J = np.array([[p.evaluate(vals(x)) for p in row] for row in jac_polys]) / w[:, None]
        step = np.zeros(3)
        step[mask] = np.linalg.lstsq(J[:, mask], -r, rcond=None)[0]
        lam = 1.0
        norm0 = np.linalg.norm(r)
        while lam > 1e-6:
            trial = x + lam * step
            rt = resid(trial)
            if np.linalg.norm(rt) < norm0 or lam <= 1e-6:
                break
            lam *= 0.5
        x, r = trial, rt
    final = max(abs(sum(t)) / max(max(abs(u) for u in t), 1e-300)
                for t in (c.term_values(vals(x)) for c in conds))
    return x, float(final), it, bool(np.max(np.abs(r)) <= NEWTON_TOL or final <= NEWTON_TOL)


# ---------------------------------------------------------------------------
# structured solve


def _clamp_m(m: float, warnings: list[str]) -> float:
    if not (0.0 < m < 1.0):
        raise EllipticDomainError(f"elliptic parameter m={m!r} must lie in (0, 1)")
    if m < M_CLAMP:
        warnings.append(f"m={m!r} clamped to {M_CLAMP}")
        return M_CLAMP
    if m > 1.0 - M_CLAMP:
        warnings.append(f"m={m!r} clamped to {1.0 - M_CLAMP}")
        return 1.0 - M_CLAMP
    return m


def _effective_unknowns(system: ConditionSystem) -> int:
    # D is tied to A by volume conservation, so every family has (A, B, v) free
    return 3


def _free_parameters(system: ConditionSystem, dim: int) -> list[str]:
    names = ["A"] if dim else []
    if system.family.is_elliptic:
        names.append("m")
    return names


def _branch_solutions(spec: _Specialized, A_given: float | None, polish: bool):
    """Run the z-root procedure; returns (solutions, z_root records)."""
    fam = spec.system.family
    v_index, rest_idx = _split(spec)
    bivs = {i: _bivariate(spec.conditions[i], spec.kappa) for i in rest_idx}
    top_i = next((i for i, f in bivs.items() if f and all(a == 0 for a, _ in f)), None)
    if top_i is None:
        raise ArithmeticError("no homogeneous condition found")
    top = [Fraction(0)] * (max(k for _, k in bivs[top_i]) + 1)
    for (_, k), c in bivs[top_i].items():
        top[k] += c
    others = [bivs[i] for i in rest_idx if i != top_i]
    roots = el.real_roots(top)
    solutions: list[SolutionParams] = []
    records: list[dict] = []
    for n, z in enumerate(roots, start=1):
        tag = f"z{n}"
        rec = {"branch": tag, "z": z, "admissible": False, "reason": ""}
        records.append(rec)
        if others:
            candidates = _common_amplitudes(others, z)
        else:
            if A_given is None:
                rec["reason"] = "free amplitude not supplied"
                continue
            candidates = [float(A_given)]
        if not candidates:
            rec["reason"] = "no common nonzero amplitude"
            continue
        for A in candidates:
            q = z * float(spec.kappa) * A
            if q <= 0:
                rec["reason"] = f"B^2={q:.6g} not positive (A={A:.6g})"
                continue
            if fam is AnsatzFamily.SOLITON and A <= 0:
                rec["reason"] = "soliton amplitude must be positive"
                continue
            B = math.sqrt(q)
            v = _velocity(spec, v_index, A, B)
            resid = None
            if polish:
                x, resid, _, ok = _newton(spec, np.array([A, B, v]),
                                          free=(A_given is None or bool(others), True, True))
                if not ok:
                    rec["reason"] = f"Newton did not converge (residual {resid:.3g})"
                    continue
                A, B, v = (float(t) for t in x)
            rec["admissible"] = True
            rec["reason"] = ""
            solutions.append(SolutionParams(
                A=A, B=B, v=v, D=spec.offset(A), m=spec.m, branch=tag if others else "kdv_family",
                family=fam.value, order=spec.system.order, alpha=spec.alpha, beta=spec.beta, z=z,
                max_condition_residual=resid,
            ))
    return solutions, records


def _common_amplitudes(others: list[dict], z: float, rel_tol: float = 1e-8) -> list[float]:
    """Nonzero real A solving every remaining condition at a given z."""
    polys = []
    for f in others:
        dx, _ = el.bivariate_degrees(f)
        coeffs = [0.0] * (dx + 1)
        for (i, k), c in f.items():
            coeffs[i] += float(c) * z ** k
        polys.append(coeffs)
    first = next((p for p in polys if any(abs(c) > 0 for c in p[1:])), None)
    if first is None:
        return []
    roots = np.roots(list(reversed(first)))
    out = []
    for r in roots:
        if abs(r.imag) > 1e-9 * max(1.0, abs(r)) or abs(r.real) < 1e-300:
            continue
        A = float(r.real)
        good = True
        for p in polys:
            val = sum(c * A ** i for i, c in enumerate(p))
            scale = sum(abs(c * A ** i) for i, c in enumerate(p)) or 1.0
            if abs(val) > rel_tol * scale:
                good = False
        if good:
            out.append(A)
    return sorted(out)


# ---------------------------------------------------------------------------
# inconsistency certificates


def exact_elimination(spec: _Specialized) -> dict:
    """Eliminate v, then A, over the rationals; report any admissible common root.

    With ``B**2 = z*kappa*A`` the homogeneous condition is a polynomial T(z).
    Every remaining v-free condition becomes a polynomial in A with
    coefficients in Q[z]; a common solution with A != 0 forces
    ``gcd(T, Res_A(C_i, C_j)) (z) = 0`` for all pairs.
    """
    fam = spec.system.family
    v_index, rest_idx = _split(spec)
    bivs = {i: _bivariate(spec.conditions[i], spec.kappa) for i in rest_idx}
    top_i = next((i for i, f in bivs.items() if f and all(a == 0 for a, _ in f)), None)
    if top_i is None:
        return {"completed": False, "reason": "no homogeneous condition"}
    top = [Fraction(0)] * (max(k for _, k in bivs[top_i]) + 1)
    for (_, k), c in bivs[top_i].items():
        top[k] += c
    others = [bivs[i] for i in rest_idx if i != top_i]
    g = el.monic(top)
    if len(others) == 1:
        # a single remaining condition never over-determines A
        return {"completed": False, "reason": "system is not overdetermined after v elimination"}
    for a in range(len(others)):
        for b in range(a + 1, len(others)):
            res = el.resultant_x(others[a], others[b])
            g = el.pgcd(g, res) if res else g
            if el.degree(g) <= 0:
                break
        if el.degree(g) <= 0:
            break
    g, zero_mult = el.strip_zero_roots(g)
    out = {
        "completed": True,
        "eliminated_polynomial_degree": max(el.degree(g), 0),
        "eliminated_polynomial": [f"{c.numerator}/{c.denominator}" for c in g],
        "z_polynomial": [f"{c.numerator}/{c.denominator}" for c in el.monic(top)],
        "admissible_roots": [],
    }
    if el.degree(g) <= 0:
        out["no_admissible_root"] = True
        out["reason"] = "gcd of the z polynomial and all pairwise resultants is constant"
        return out
    admissible = []
    for z in el.real_roots(g):
        for A in _common_amplitudes(others, z, rel_tol=1e-7):
            q = z * float(spec.kappa) * A
            if q > 0 and (fam is not AnsatzFamily.SOLITON or A > 0):
                admissible.append({"z": z, "A": A})
    out["admissible_roots"] = admissible
    out["no_admissible_root"] = not admissible
    out["reason"] = ("real roots of the eliminated polynomial admit no common amplitude with B^2 > 0"
                     if not admissible else "candidate common roots found")
    return out


def _ssq_terms(spec: _Specialized, A, q, v):
    B = np.sqrt(q)
    vals = {"A": A, "B": B, "v": v}
    total = 0.0
    for cond in spec.conditions:
        terms = cond.term_values(vals)
        s = sum(terms)
        mag = sum(np.abs(t) for t in terms)
        total = total + (s / np.where(mag > 0, mag, 1.0)) ** 2
    return total


def numeric_certificate(spec: _Specialized, resolution: int = 40, refine: int = 6) -> dict:
    """Scan + bounded refinement of the scale-free sum of squared conditions.

    Region: 0 < alpha*A <= 5 (also -5 <= alpha*A < 0 for periodic families),
    0 < beta*B**2 <= 5, 0.5 <= v <= 2.
    """
    fam = spec.system.family
    alpha, beta = spec.alpha, spec.beta
    amax = SCAN_AMPLITUDE / alpha
    qmax = SCAN_WIDTH / beta
    a_lo = amax / (4 * resolution)
    a_grid = np.linspace(a_lo, amax, resolution)
    if fam.is_elliptic:
        a_grid = np.concatenate([-a_grid[::-1], a_grid])
    q_grid = np.linspace(qmax / (4 * resolution), qmax, resolution)
    v_grid = np.linspace(*SCAN_VELOCITY, max(resolution // 2, 4))
    AA, QQ, VV = np.meshgrid(a_grid, q_grid, v_grid, indexing="ij")
    ssq = _ssq_terms(spec, AA, QQ, VV)
    flat = np.argsort(ssq, axis=None)[: refine * 8]
    starts = []
    for idx in flat:
        i, j, k = np.unravel_index(idx, ssq.shape)
        pt = (AA[i, j, k], QQ[i, j, k], VV[i, j, k])
        if all(abs(pt[0] - s[0]) > 1e-12 or abs(pt[1] - s[1]) > 1e-12 for s in starts):
            starts.append(pt)
        if len(starts) >= refine:
            break

    def objective(x):
        return float(_ssq_terms(spec, x[0], x[1], x[2]))

    best = (float(ssq.min()), starts[0])
    for s in starts:
        a_bounds = (a_lo * 1e-3, amax) if s[0] > 0 else (-amax, -a_lo * 1e-3)
        bounds = [a_bounds, (qmax * 1e-6, qmax), SCAN_VELOCITY]
        res = minimize(objective, np.array(s), method="L-BFGS-B", bounds=bounds,
                       options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 500})
        if res.fun < best[0]:
            best = (float(res.fun), tuple(float(t) for t in res.x))
    A, q, v = best[1]
    return {
        "min_normalized_ssq": best[0],
        "argmin": {"A": A, "B": math.sqrt(q), "v": v, "D": spec.offset(A)},
        "region": {
            "alpha_A": [-SCAN_AMPLITUDE if fam.is_elliptic else 0.0, SCAN_AMPLITUDE],
            "beta_B2": [0.0, SCAN_WIDTH],
            "v": list(SCAN_VELOCITY),
        },
        "grid": {"A": len(a_grid), "B2": len(q_grid), "v": len(v_grid)},
        "refinement": {"method": "L-BFGS-B", "starts": len(starts)},
        "threshold": INCONSISTENT_SSQ_THRESHOLD,
    }


# ---------------------------------------------------------------------------
# public entry points


def consistency_analysis(system: ConditionSystem, alpha: float, beta: float, m: float | None = None,
                         *, A: float | None = None, resolution: int = 40,
                         volume_conservation: bool = True) -> ConsistencyVerdict:
    """Classify a condition system at the given parameters.

    With ``volume_conservation=False`` the periodic offset D is pinned to 0
    instead of the zero period-mean value (diagnostic use only).
    """
    if not system.conditions:
        raise SolverUsageError("empty condition system")
    if alpha <= 0 or beta <= 0:
        raise SolverUsageError("alpha and beta must be positive")
    warnings: list[str] = []
    if system.family.is_elliptic:
        if m is None:
            raise SolverUsageError(f"{system.family.value} analysis needs m")
        m = _clamp_m(m, warnings)
    spec = _specialize(system, alpha, beta, m, volume_conservation)
    if not volume_conservation and system.family.is_elliptic:
        warnings.append("volume conservation disabled: D = 0")
    n_eq = len(system.conditions)
    n_unknown = _effective_unknowns(system)
    verdict = ConsistencyVerdict(kind="", family=system.family.value, order=system.order,
                                 alpha=alpha, beta=beta, m=m, warnings=warnings)
    if n_eq < n_unknown:
        verdict.kind = "family"
        verdict.dimension = n_unknown - n_eq + (1 if system.family.is_elliptic else 0)
        verdict.free_parameters = _free_parameters(system, n_unknown - n_eq)
        sols, recs = _branch_solutions(spec, A, polish=False)
        verdict.solutions, verdict.z_roots = sols, recs
        for s in sols:
            s.max_condition_residual = max(normalized_condition_values(system, s))
        return verdict
    if n_eq == n_unknown:
        verdict.kind = "discrete"
        sols, recs = _branch_solutions(spec, None, polish=True)
        verdict.solutions, verdict.z_roots = sols, recs
        if A is not None:
            warnings.append("amplitude is fixed by the equation; supplied value ignored")
        return verdict
    exact = exact_elimination(spec)
    numeric = numeric_certificate(spec, resolution=resolution)
    verdict.certificate = {"equations": n_eq + (1 if system.family.is_elliptic else 0),
                           "unknowns": len(system.unknowns), "exact": exact, "numeric": numeric}
    exact_says_none = exact.get("completed") and exact.get("no_admissible_root")
    if exact_says_none or numeric["min_normalized_ssq"] > INCONSISTENT_SSQ_THRESHOLD:
        verdict.kind = "inconsistent"
    else:
        verdict.kind = "discrete"
        warnings.append("overdetermined system was not refuted")
    return verdict


def solve_soliton(order: int, alpha: float, beta: float, A: float | None = None,
                  *, resolution: int = 40) -> ConsistencyVerdict:
    system = derive_conditions(AnsatzFamily.SOLITON, order)
    if order == 1 and A is None:
        raise SolverUsageError("order 1 soliton solutions form a family; supply the amplitude A")
    if A is not None and A <= 0 and order == 1:
        raise SolverUsageError("soliton amplitude must be positive")
    return consistency_analysis(system, alpha, beta, A=A, resolution=resolution)


def _solve_periodic(family: AnsatzFamily, order: int, alpha: float, beta: float, m: float,
                    A: float | None, resolution: int, volume_conservation: bool = True) -> ConsistencyVerdict:
    if not (0.0 < m < 1.0):
        raise EllipticDomainError(f"elliptic parameter m={m!r} must lie in (0, 1)")
    system = derive_conditions(family, order)
    if order == 1 and A is None:
        raise SolverUsageError("order 1 periodic solutions form a family; supply the amplitude A")
    return consistency_analysis(system, alpha, beta, m, A=A, resolution=resolution,
                                volume_conservation=volume_conservation)


def solve_cnoidal(order: int, alpha: float, beta: float, m: float, A: float | None = None,
                  *, resolution: int = 40, volume_conservation: bool = True) -> ConsistencyVerdict:
    return _solve_periodic(AnsatzFamily.CNOIDAL, order, alpha, beta, m, A, resolution, volume_conservation)


def solve_superposition(order: int, sign: str | int, alpha: float, beta: float, m: float,
                        A: float | None = None, *, resolution: int = 40,
                        volume_conservation: bool = True) -> ConsistencyVerdict:
    plus = sign in ("+", 1, "plus")
    if sign not in ("+", "-", 1, -1, "plus", "minus"):
        raise SolverUsageError(f"sign must be '+' or '-', got {sign!r}")
    family = AnsatzFamily.SUPERPOSITION_PLUS if plus else AnsatzFamily.SUPERPOSITION_MINUS
    return _solve_periodic(family, order, alpha, beta, m, A, resolution, volume_conservation)


def solve(family: AnsatzFamily | str, order: int, alpha: float, beta: float, m: float | None = None,
          A: float | None = None, *, resolution: int = 40, volume_conservation: bool = True) -> ConsistencyVerdict:
    family = AnsatzFamily.parse(family)
    if family is AnsatzFamily.SOLITON:
        return solve_soliton(order, alpha, beta, A, resolution=resolution)
    if m is None:
        raise SolverUsageError(f"{family.value} solutions need --m")
    if family is AnsatzFamily.CNOIDAL:
        return solve_cnoidal(order, alpha, beta, m, A, resolution=resolution,
                             volume_conservation=volume_conservation)
    return solve_superposition(order, "+" if family.sign > 0 else "-", alpha, beta, m, A,
                               resolution=resolution, volume_conservation=volume_conservation)


def volume_offset(family: AnsatzFamily | str, A: float, m: float) -> float:
    return volume_constraint(family).offset(A, m)
