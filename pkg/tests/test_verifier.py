import dataclasses
import math

import numpy as np
import pytest

from kdvlab.solver import SolutionParams, solve
from kdvlab.special_functions import complete_K
from kdvlab.verifier import (
    GridSpec,
    VerifierUsageError,
    WaveField,
    default_grid,
    eval_field,
    residual,
    volume_mean,
)


@pytest.fixture(scope="module")
def kdv2_soliton():
    return solve("soliton", 2, 0.1, 0.1).solutions[0]


def test_soliton_field_values(kdv2_soliton):
    s = kdv2_soliton
    f = eval_field(s, grid=GridSpec(256, 40.0))
    assert f.samples.max() == pytest.approx(s.A, rel=1e-12)
    assert np.allclose(f.samples, s.A / np.cosh(s.B * f.x) ** 2, atol=1e-15)


def test_translation_in_time(kdv2_soliton):
    g = GridSpec(512, 40.0)
    f0 = eval_field(kdv2_soliton, grid=g)
    f1 = eval_field(kdv2_soliton, grid=g, t=20 * g.dx / kdv2_soliton.v)
    assert np.allclose(np.roll(f0.samples, 20), f1.samples, atol=1e-12)


def test_cnoidal_period():
    s = solve("cnoidal", 1, 0.1, 0.1, m=0.9, A=1.0).solutions[0]
    period = 2 * complete_K(0.9) / s.B
    g = GridSpec(4096, 3 * period, x0=0.0)
    f = eval_field(s, grid=g)
    peaks = [i for i in range(1, g.n - 1) if f.samples[i] >= f.samples[i - 1] and f.samples[i] > f.samples[i + 1]]
    spacing = np.diff(f.x[peaks])
    assert np.all(np.abs(spacing - period) <= g.dx)


def test_residual_of_exact_solution(kdv2_soliton):
    assert residual(kdv2_soliton, grid=default_grid(kdv2_soliton, 2048)) <= 1e-9


def test_tampered_velocity_is_caught(kdv2_soliton):
    bad = dataclasses.replace(kdv2_soliton, v=kdv2_soliton.v + 0.01)
    assert residual(bad, grid=default_grid(bad, 2048)) >= 1e-3


def test_solution_fails_next_order(kdv2_soliton):
    assert residual(kdv2_soliton, order=3) > 1e-3


@pytest.mark.parametrize("family", ["cnoidal", "superposition-plus", "superposition-minus"])
@pytest.mark.parametrize("m", [0.1, 0.5, 0.9])
def test_periodic_volume_mean(family, m):
    for s in solve(family, 2, 0.1, 0.1, m=m).solutions:
        assert abs(volume_mean(s)) <= 1e-10
    s = solve(family, 1, 0.1, 0.1, m=m, A=0.7).solutions[0]
    assert abs(volume_mean(s)) <= 1e-10


def test_volume_mean_matches_trapezoid():
    s = solve("cnoidal", 1, 0.1, 0.1, m=0.5, A=1.0).solutions[0]
    period = 2 * complete_K(0.5) / s.B
    g = GridSpec(1024, period, x0=0.0)
    # the trapezoid rule is spectrally accurate for periodic integrands
    assert float(np.mean(eval_field(s, grid=g).samples)) == pytest.approx(volume_mean(s), abs=1e-13)


def test_csv_roundtrip(tmp_path, kdv2_soliton):
    f = eval_field(kdv2_soliton, grid=GridSpec(64, 30.0))
    text = f.to_csv()
    assert text.splitlines()[0] == "x,eta"
    back = WaveField.from_csv(text)
    assert np.array_equal(back.samples, f.samples)
    assert back.x0 == f.x0 and back.dx == pytest.approx(f.dx, rel=1e-15)


def test_grid_validation():
    with pytest.raises(VerifierUsageError):
        GridSpec(100, 10.0)
    with pytest.raises(VerifierUsageError):
        GridSpec(8, 10.0)
    with pytest.raises(VerifierUsageError):
        WaveField(np.zeros(12), 0.0, 1.0)
    with pytest.raises(VerifierUsageError):
        WaveField(np.full(16, np.nan), 0.0, 1.0)


def test_invalid_params():
    bad = SolutionParams(A=1.0, B=0.0, v=1.0)
    with pytest.raises(VerifierUsageError):
        eval_field(bad, grid=GridSpec(64, 10.0))
    with pytest.raises(VerifierUsageError):
        volume_mean(SolutionParams(A=1.0, B=1.0, v=1.0))
    with pytest.raises(VerifierUsageError):
        eval_field(SolutionParams(A=1.0, B=1.0, v=1.0, family="cnoidal"), grid=GridSpec(64, 10.0))
