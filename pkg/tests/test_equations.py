import json
from collections import Counter
from fractions import Fraction
from pathlib import Path

import pytest

from kdvlab.equations import UnsupportedOrderError, get_equation

GOLDEN = json.loads((Path(__file__).parent / "golden" / "equations.json").read_text())


def _key(coef, p, q, factors, time):
    return (Fraction(coef), p, q, tuple(sorted(factors)), bool(time))


@pytest.mark.parametrize("order", [1, 2, 3])
def test_term_tables_match_golden(order):
    eq = get_equation(order)
    got = Counter(_key(t.coefficient, t.alpha_power, t.beta_power, t.factors, t.time) for t in eq.terms)
    want = Counter(_key(*row) for row in GOLDEN[str(order)])
    assert got == want


def test_term_counts_and_orders():
    assert [len(get_equation(n).terms) for n in (1, 2, 3)] == [4, 8, 16]
    for n in (1, 2, 3):
        assert max(t.perturbation_order for t in get_equation(n).terms) == n


def test_hierarchy_is_nested():
    for lo, hi in ((1, 2), (2, 3)):
        assert get_equation(hi).terms[: len(get_equation(lo).terms)] == get_equation(lo).terms


def test_linear_terms_are_odd_derivatives():
    lin = get_equation(3).linear_terms()
    assert sorted(t.factors[0] for t in lin) == [1, 3, 5, 7]


def test_each_nonlinear_group_has_matching_derivative_count():
    # a term of order alpha^p beta^q carries p+1 factors and 2q+1 derivatives
    for t in get_equation(3).terms:
        if t.time:
            continue
        assert len(t.factors) == t.alpha_power + 1
        assert sum(t.factors) == 2 * t.beta_power + 1


@pytest.mark.parametrize("bad", [0, 4, -1])
def test_unsupported_order(bad):
    with pytest.raises(UnsupportedOrderError, match="unsupported order"):
        get_equation(bad)


def test_json_shape():
    doc = get_equation(2).to_json()
    assert doc["equation"] == "KdV2"
    assert doc["terms"][2] == {"term": "eta*eta_x", "coefficient": "3/2", "alpha_power": 1,
                               "beta_power": 0, "factors": [0, 1], "time": False}
