import math

import numpy as np
import pytest

from pdmwell import PhysicalParams, hermitian_energy, propagate
from pdmwell.analytic_well import hermitian_eigenfunction
from pdmwell.evolution import NormDivergence
from pdmwell.grid import Coordinate, WaveFunction, make_grid
from pdmwell.operators import build_hamiltonian, build_hamiltonian_nonhermitian


def _setup(p, N=101, states=(1,)):
    g = make_grid(p, N)
    psi = WaveFunction(sum(hermitian_eigenfunction(n, g.points, p) for n in states), g)
    H = build_hamiltonian(g, p)
    dt = 0.1 * p.hbar / float(np.max(np.sum(np.abs(H.toarray()), axis=1)))
    return g, psi, H, dt


def test_hermitian_propagation_is_unitary(swept):
    g, psi, H, dt = _setup(swept)
    run = propagate(psi, H, dt, 1000)
    assert run.max_norm_drift <= 1e-10
    assert np.ptp(run.energy_history) <= 1e-10 * run.energy_history[0]
    assert run.times[-1] == pytest.approx(1000 * dt)


def test_nonhermitian_propagation_drifts(swept):
    g, psi, H, dt = _setup(swept)
    run = propagate(psi, build_hamiltonian_nonhermitian(g, swept), dt, 1000)
    assert run.max_norm_drift > 1e-6
    drift = np.abs(run.norm_history - 1)
    assert drift[-1] >= drift[100] >= drift[10]


def test_no_drift_without_deformation():
    p = PhysicalParams()
    g, psi, H, dt = _setup(p)
    run = propagate(psi, build_hamiltonian_nonhermitian(g, p), dt, 200)
    assert run.max_norm_drift <= 1e-10


def test_superposition_beats_at_level_spacing(unit):
    g, psi, H, _ = _setup(unit, N=401, states=(1, 2))
    period = 2 * math.pi / (hermitian_energy(2, unit) - hermitian_energy(1, unit))
    steps = 2000
    run = propagate(psi, H, 2 * period / steps, steps)
    xs = run.x_history - run.x_history.mean()
    amp = np.ptp(xs) / 2
    # the two-level beat returns after one period and inverts after half of one
    assert abs(xs[steps // 2] - xs[0]) <= 0.01 * amp
    assert abs(xs[steps // 4] + xs[0]) <= 0.01 * amp
    assert amp > 1e-2


def test_deformed_grid_propagation(unit):
    g = make_grid(unit, 101, Coordinate.deformed_s)
    psi = WaveFunction(hermitian_eigenfunction(1, g.x, unit), g)
    run = propagate(psi, build_hamiltonian(g, unit), 1e-4, 200)
    assert run.max_norm_drift <= 1e-10


def test_guards(unit):
    g, psi, H, dt = _setup(unit)
    with pytest.raises(ValueError):
        propagate(psi, H, 0.0, 10)
    with pytest.raises(ValueError):
        propagate(psi, H, dt, -1)
    with pytest.raises(ValueError):
        propagate(WaveFunction(np.zeros(51), make_grid(unit, 51)), H, dt, 1)

def test_norm_guard_trips(monkeypatch):
    p = PhysicalParams(gamma=-0.5)
    g, psi, _, _ = _setup(p)
    # the non-Hermitian norm grows by about 1 % here, so a tight guard trips
    monkeypatch.setattr("pdmwell.evolution.NORM_GUARD", 1.001)
    with pytest.raises(NormDivergence):
        propagate(psi, build_hamiltonian_nonhermitian(g, p), 1e-3, 1000)
