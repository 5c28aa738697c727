import math

import numpy as np
import pytest

from kdvlab.evolver import (
    EvolutionRun,
    EvolverUsageError,
    MeasurementError,
    StabilityError,
    collision_experiment,
    evolve,
    measure_velocity,
    stable_dt,
)
from kdvlab.solver import solve
from kdvlab.verifier import GridSpec, WaveField, eval_field


@pytest.fixture(scope="module")
def kdv_soliton():
    return solve("soliton", 1, 0.1, 0.1, A=1.0).solutions[0]


def _grid(sol, n=1024, widths=80.0):
    return GridSpec(n, widths / sol.B)


def test_zero_field_stays_zero():
    f = WaveField(np.zeros(64), -10.0, 20.0 / 64)
    run = evolve(f, 2, 0.1, 0.1, 5.0, 0.1)
    assert all(np.all(w.samples == 0.0) for _, w in run.snapshots)


def test_linear_wave_exact():
    # small-amplitude Fourier mode under the linear part only: eta = eps cos(k(x - c t))
    n, L = 64, 2 * math.pi * 4
    x = -L / 2 + L / n * np.arange(n)
    k = 2 * math.pi / L * 3
    eps = 1e-12
    f = WaveField(eps * np.cos(k * x), x[0], L / n)
    run = evolve(f, 1, 0.1, 0.1, 3.0, 0.05)
    c = 1 - 0.1 / 6 * k ** 2
    assert np.allclose(run.final.samples, eps * np.cos(k * (x - c * 3.0)), atol=1e-20)


def test_kdv_soliton_matches_translation(kdv_soliton):
    g = _grid(kdv_soliton)
    f0 = eval_field(kdv_soliton, grid=g)
    run = evolve(f0, 1, 0.1, 0.1, 10.0, 0.05)
    err = np.max(np.abs(run.final.samples - eval_field(kdv_soliton, grid=g, t=10.0).samples))
    assert err <= 1e-4
    assert measure_velocity(run) == pytest.approx(1.05, rel=5e-3)
    assert run.mass_drift() <= 1e-10


def test_time_self_convergence(kdv_soliton):
    g = _grid(kdv_soliton, n=256)
    f0 = eval_field(kdv_soliton, grid=g)
    finals = [evolve(f0, 1, 0.1, 0.1, 10.0, dt).final.samples for dt in (0.4, 0.2, 0.1)]
    d1 = np.max(np.abs(finals[0] - finals[1]))
    d2 = np.max(np.abs(finals[1] - finals[2]))
    assert d1 / d2 >= 4.0


def test_mass_conserved_for_order2():
    n, L = 256, 60.0
    x = -L / 2 + L / n * np.arange(n)
    f = WaveField(0.8 * np.exp(-x ** 2 / 4) + 0.3 * np.cos(2 * math.pi * x / L), x[0], L / n)
    dt = 0.5 * stable_dt(f, 2, 0.1, 0.1)
    run = evolve(f, 2, 0.1, 0.1, 10.0, dt)
    assert run.mass_drift() <= 1e-10


def test_measure_velocity_synthetic(kdv_soliton):
    g = _grid(kdv_soliton, n=512)
    run = EvolutionRun(1, 0.1, 0.1, g.length, g.n, 0.1)
    for t in np.linspace(0, 200, 11):  # long enough to wrap around the domain
        run.snapshots.append((float(t), eval_field(kdv_soliton, grid=g, t=float(t))))
    assert measure_velocity(run) == pytest.approx(1.05, abs=1e-6)


def test_measure_velocity_errors():
    flat = WaveField(np.ones(32), 0.0, 1.0)
    run = EvolutionRun(1, 0.1, 0.1, 32.0, 32, 0.1, snapshots=[(t, flat) for t in (0.0, 1.0, 2.0)])
    with pytest.raises(MeasurementError):
        measure_velocity(run)
    with pytest.raises(MeasurementError):
        measure_velocity(EvolutionRun(1, 0.1, 0.1, 32.0, 32, 0.1, snapshots=[(0.0, flat)]))


def test_stability_error_suggests_dt(kdv_soliton):
    f0 = eval_field(kdv_soliton, grid=_grid(kdv_soliton))
    bound = stable_dt(f0, 2, 0.1, 0.1)
    with pytest.raises(StabilityError) as info:
        evolve(f0, 2, 0.1, 0.1, 1.0, 10 * bound)
    assert 0 < info.value.suggested_dt < bound
    evolve(f0, 2, 0.1, 0.1, 1.0, info.value.suggested_dt)


def test_bad_inputs(kdv_soliton):
    f0 = eval_field(kdv_soliton, grid=GridSpec(64, 40.0))
    with pytest.raises(EvolverUsageError):
        evolve(f0, 1, 0.1, 0.1, 1.0, -0.1)
    with pytest.raises(EvolverUsageError):
        collision_experiment(1, 0.1, 0.1, 0.5, 0.5, 25.0, 10.0)
    with pytest.raises(EvolverUsageError):
        collision_experiment(3, 0.1, 0.1, 1.0, 0.4, 25.0, 10.0)


def test_collision_inconclusive_when_too_short():
    rep = collision_experiment(1, 0.1, 0.1, 1.0, 0.4, 25.0, 50.0, n=256)
    assert rep.inconclusive and not rep.separated and rep.radiation_norm is None


def test_manifest_fields(kdv_soliton):
    f0 = eval_field(kdv_soliton, grid=GridSpec(128, 60.0))
    run = evolve(f0, 1, 0.1, 0.1, 1.0, 0.1, snapshot_every=0.5)
    man = run.manifest()
    assert man["snapshot_times"] == pytest.approx([0.0, 0.5, 1.0])
    assert len(man["mass"]) == 3 and man["grid_n"] == 128
