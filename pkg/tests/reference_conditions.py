"""Hand-typed coefficient conditions for the first- and second-order equations."""

from fractions import Fraction as Fr

from kdvlab.symbolic import SYMBOLS, ConditionPolynomial as P

al, be, A, B, v, D, m, s = (P.var(n) for n in SYMBOLS)
one = P.const(1)

SOLITON_1 = {
    "G0": one * 3 - v * 3 + al * A * 9 - be * B ** 2 * 10,
    "G2": one * 3 - v * 3 + be * B ** 2 * 2,
}

SOLITON_2 = {
    "C0": (one - v) + be * B ** 2 * Fr(2, 3) + be ** 2 * B ** 4 * Fr(38, 45),
    "C2": al * A * Fr(3, 4) - be * B ** 2 + al * A * be * B ** 2 * Fr(11, 4) - be ** 2 * B ** 4 * Fr(19, 3),
    "C4": -(al * A) ** 2 * Fr(1, 8) - al * A * be * B ** 2 * Fr(43, 12) + be ** 2 * B ** 4 * Fr(19, 3),
}

CNOIDAL_1 = {
    "G0": be * B ** 2 * 4 - be * B ** 2 * m * 8 - al * D * 9 + v * 6 - 6,
    "G2": be * B ** 2 * m * 12 - al * A * 9,
}

SUPERPOSITION_1 = {
    "F0": al * A * 9 - al * A * m * 9 - be * B ** 2 * 2 + be * B ** 2 * m * 10 + al * D * 18 - v * 12 + 12,
    "F2": al * A * m * 9 - be * B ** 2 * m * 12,
    "F11": al * A * s * 9 - be * B ** 2 * s * 12,
}

NONZERO = ("alpha", "beta", "m", "s")


def proportional(p: P, q: P, nonzero=NONZERO) -> bool:
    """p = c * mono * q for a rational c != 0 and a monomial in nonzero parameters."""
    if not p or not q:
        return False
    idx = [SYMBOLS.index(n) for n in nonzero]
    pe, qe = sorted(p.terms), sorted(q.terms)
    if len(pe) != len(qe):
        return False
    # align by the exponent pattern after removing the content in nonzero symbols
    def strip(terms):
        low = [min(e[i] for e in terms) for i in idx]
        out = {}
        for e, c in terms.items():
            e = list(e)
            for k, i in enumerate(idx):
                e[i] -= low[k]
            out[tuple(e)] = c
        return out
    ps, qs = strip(p.terms), strip(q.terms)
    if set(ps) != set(qs):
        return False
    ratios = {ps[e] / qs[e] for e in ps}
    return len(ratios) == 1


def in_span(target: P, basis: list[P]) -> bool:
    """Exact test: target is a rational linear combination of basis polynomials."""
    cols = sorted({e for p in basis + [target] for e in p.terms})
    rows = [[p.terms.get(e, Fr(0)) for e in cols] for p in basis]

    def rank(mat):
        mat = [r[:] for r in mat]
        rk = 0
        for c in range(len(cols)):
            piv = next((i for i in range(rk, len(mat)) if mat[i][c] != 0), None)
            if piv is None:
                continue
            mat[rk], mat[piv] = mat[piv], mat[rk]
            for i in range(len(mat)):
                if i != rk and mat[i][c] != 0:
                    f = mat[i][c] / mat[rk][c]
                    mat[i] = [a - f * b for a, b in zip(mat[i], mat[rk])]
            rk += 1
        return rk

    t = [target.terms.get(e, Fr(0)) for e in cols]
    return rank(rows + [t]) == rank(rows)
