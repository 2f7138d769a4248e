"""Acceptance criteria, one test per criterion.

Each test prints a single ``CRITERION k: PASS|FAIL`` line (collected again in
the terminal summary) and then asserts it.  Tolerances are pinned here.
"""

import math
import time

import numpy as np
import pytest

from pdmwell import (
    PhysicalParams,
    build_hamiltonian,
    build_hamiltonian_nonhermitian,
    build_momentum_hermitian,
    build_momentum_nonhermitian,
    build_vonroos_kinetic,
    density_2d,
    eigenfunction,
    energy,
    energy_bound,
    expectation_p_gamma,
    expectation_x,
    expectation_x_quadrature,
    hermitian_eigenfunction,
    hermiticity_defect,
    make_grid,
    propagate,
    reference_energy_ref3,
    solve_well_refined,
)
from pdmwell.grid import WaveFunction
from pdmwell.observables import integrate

SWEEP = (-0.5, 0.5, 1.0, 5.0)
LEVELS = range(1, 11)

TOL_SPECTRUM = 1e-6
RUNTIME_PER_GAMMA = 5.0
TOL_LIMIT_ENERGY = 1e-6
TOL_LIMIT_X = 1e-8
TOL_HERMITIAN = 1e-13
TOL_OFFSET = 1e-12
TOL_NORM = 1e-10
TOL_OVERLAP = 1e-8
TOL_X = 1e-8
TOL_P = 1e-8
TOL_SPREAD = 0.02
ORDER_RANGE = (1.8, 2.2)
TOL_UNITARY = 1e-10
MIN_NONUNITARY = 1e-6

N_SPECTRUM = 8001
N_QUADRATURE = 16001


@pytest.fixture(scope="module")
def refined():
    """Refined numeric spectra and wall-clock time per gamma_tilde."""
    out = {}
    for gt in SWEEP:
        p = PhysicalParams.from_gamma_tilde(gt)
        t0 = time.perf_counter()
        sol = solve_well_refined(p, N_SPECTRUM, len(LEVELS))
        out[gt] = (p, sol, time.perf_counter() - t0)
    return out


def test_criterion_1_spectrum_oracle(refined, acceptance_report):
    worst, worst_exact, slowest = 0.0, 0.0, 0.0
    for gt, (p, sol, elapsed) in refined.items():
        est = sol.richardson_estimate
        published = np.array([energy(n, p) for n in LEVELS])
        exact = np.array([reference_energy_ref3(n, p) for n in LEVELS])
        worst = max(worst, float(np.max(np.abs(est - published) / published)))
        worst_exact = max(worst_exact, float(np.max(np.abs(est - exact) / exact)))
        slowest = max(slowest, elapsed)
    ok = worst <= TOL_SPECTRUM and slowest <= RUNTIME_PER_GAMMA
    acceptance_report(
        "CRITERION 1 spectrum oracle",
        ok,
        f"max rel err vs shifted closed form {worst:.3e} (tol {TOL_SPECTRUM:g}); "
        f"vs unshifted spectrum {worst_exact:.3e}; slowest gamma {slowest:.2f} s",
    )
    assert ok


def test_criterion_2_classical_limit(acceptance_report):
    p = PhysicalParams.from_gamma_tilde(1e-8)
    e0 = math.pi**2 * p.hbar**2 / (2 * p.mass * p.L**2)
    sol = solve_well_refined(p, N_SPECTRUM, len(LEVELS))
    ratios_a = np.array([energy(n, p) / e0 for n in LEVELS])
    ratios_n = sol.richardson_estimate / e0
    n2 = np.array([n * n for n in LEVELS])
    err_e = float(max(np.max(np.abs(ratios_a / n2 - 1)), np.max(np.abs(ratios_n / n2 - 1))))
    err_x = max(abs(expectation_x(n, p) / p.L - 0.5) for n in (1, 2, 3, 20))
    ok = err_e <= TOL_LIMIT_ENERGY and err_x <= TOL_LIMIT_X
    acceptance_report(
        "CRITERION 2 classical limit",
        ok,
        f"max |E_n/(n^2 E0) - 1| {err_e:.3e} (tol {TOL_LIMIT_ENERGY:g}); "
        f"max |<x>/L - 1/2| {err_x:.3e} (tol {TOL_LIMIT_X:g})",
    )
    assert ok


def test_criterion_3_energy_shift(acceptance_report):
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(20):
        L = float(rng.uniform(0.2, 5.0))
        gamma = float(rng.uniform(-0.9, 5.0)) / L
        n = int(rng.integers(1, 30))
        p = PhysicalParams(L=L, gamma=gamma)
        shift = 3 * p.hbar**2 * p.gamma**2 / (8 * p.mass)
        diff = energy(n, p) - reference_energy_ref3(n, p)
        # in units of the rounding of the larger operand
        worst = max(worst, abs(diff - shift) / (np.spacing(energy(n, p))))
    ok = worst <= 2.0
    acceptance_report("CRITERION 3 energy shift", ok, f"max deviation {worst:.1f} ulp (tol 2 ulp)")
    assert ok


def test_criterion_4_hermiticity(acceptance_report):
    worst, worst_offset = 0.0, 0.0
    for gt in SWEEP:
        p = PhysicalParams.from_gamma_tilde(gt)
        for N in (101, 1001, 8001):
            g = make_grid(p, N)
            for M in (build_momentum_hermitian(g, p), build_hamiltonian(g, p)):
                worst = max(worst, hermiticity_defect(M) / M.norm())
            nh = hermiticity_defect(build_momentum_nonhermitian(g, p))
            worst_offset = max(worst_offset, abs(nh - p.hbar * abs(p.gamma)))
    ok = worst <= TOL_HERMITIAN and worst_offset <= TOL_OFFSET
    acceptance_report(
        "CRITERION 4 hermiticity",
        ok,
        f"max defect/||M|| {worst:.3e} (tol {TOL_HERMITIAN:g}); "
        f"max |defect - hbar|gamma|| of the offset builder {worst_offset:.3e} (tol {TOL_OFFSET:g})",
    )
    assert ok


def _gram(p, family):
    g = make_grid(p, N_QUADRATURE)
    phis = [family(n, g.points, p) for n in LEVELS]
    return np.array([[integrate(a * b, g) for b in phis] for a in phis])


def test_criterion_5_normalization_orthogonality(acceptance_report):
    norm_err, overlap, overlap_exact = 0.0, 0.0, 0.0
    for gt in SWEEP:
        p = PhysicalParams.from_gamma_tilde(gt)
        gram = _gram(p, eigenfunction)
        off = gram - np.diag(np.diag(gram))
        norm_err = max(norm_err, float(np.max(np.abs(np.diag(gram) - 1))))
        overlap = max(overlap, float(np.max(np.abs(off))))
        ge = _gram(p, hermitian_eigenfunction)
        overlap_exact = max(overlap_exact, float(np.max(np.abs(ge - np.eye(len(LEVELS))))))
    ok = norm_err <= TOL_NORM and overlap <= TOL_OVERLAP
    acceptance_report(
        "CRITERION 5 normalization/orthogonality",
        ok,
        f"max |<phi_n|phi_n> - 1| {norm_err:.3e} (tol {TOL_NORM:g}); "
        f"max |<phi_m|phi_n>| {overlap:.3e} (tol {TOL_OVERLAP:g}); "
        f"exact Dirichlet family max Gram error {overlap_exact:.3e}",
    )
    assert ok


def test_criterion_6_expectation_values(acceptance_report):
    err_x, err_p = 0.0, 0.0
    for gt in SWEEP:
        p = PhysicalParams.from_gamma_tilde(gt)
        for n in (1, 2, 3, 20):
            closed = expectation_x(n, p)
            err_x = max(err_x, abs(expectation_x_quadrature(n, p, N_QUADRATURE) / closed - 1))
        for n in range(1, 21):
            err_p = max(err_p, abs(expectation_p_gamma(n, p)) / (p.hbar / p.L))
    spread = max(
        abs(expectation_x(1, PhysicalParams(gamma=g)) - expectation_x(20, PhysicalParams(gamma=g)))
        for g in np.linspace(0.0, 1.0, 101)
    )
    ok = err_x <= TOL_X and err_p <= TOL_P and spread <= TOL_SPREAD
    acceptance_report(
        "CRITERION 6 expectation values",
        ok,
        f"<x> closed vs quadrature {err_x:.3e} (tol {TOL_X:g}); |<p>| L/hbar {err_p:.3e} (tol {TOL_P:g}); "
        f"n=1 vs n=20 spread {spread:.5f} L (tol {TOL_SPREAD:g})",
    )
    assert ok


def test_criterion_7_integrability_bound(refined, acceptance_report):
    margin = math.inf
    for gt, (p, sol, _) in refined.items():
        bound = energy_bound(p)
        lowest = min(min(energy(n, p) for n in LEVELS), float(sol.energies.min()), float(sol.richardson_estimate.min()))
        margin = min(margin, (lowest - bound) / (p.hbar**2 / (p.mass * p.L**2)))
    ok = margin > 0
    acceptance_report("CRITERION 7 integrability bound", ok, f"min (E - 3 hbar^2 gamma^2/8m) {margin:.4f} hbar^2/mL^2 (must be > 0)")
    assert ok


def test_criterion_8_vonroos_consistency(acceptance_report):
    orders = []
    for gt in SWEEP:
        p = PhysicalParams.from_gamma_tilde(gt)
        res = []
        for N in (201, 401, 801, 1601):
            g = make_grid(p, N)
            H = build_hamiltonian(g, p)
            T = build_vonroos_kinetic(g, p, -0.25, -0.5, -0.25)
            worst = 0.0
            for k in range(1, 6):
                # smooth Dirichlet test functions of increasing oscillation
                v = np.sin(k * math.pi * g.interior / p.L) * (1 + g.interior / p.L)
                worst = max(worst, math.sqrt(g.spacing * np.sum(np.abs(H @ v - T @ v) ** 2)))
            res.append(worst)
        orders.extend(math.log2(res[i] / res[i + 1]) for i in range(len(res) - 1))
    lo, hi = ORDER_RANGE
    ok = all(lo <= o <= hi for o in orders)
    acceptance_report(
        "CRITERION 8 von Roos consistency",
        ok,
        f"observed orders in [{min(orders):.3f}, {max(orders):.3f}] (required [{lo}, {hi}])",
    )
    assert ok


def test_criterion_9_unitarity(acceptance_report):
    herm, nonh = 0.0, math.inf
    for gt in SWEEP:
        p = PhysicalParams.from_gamma_tilde(gt)
        g = make_grid(p, 101)
        psi = WaveFunction(hermitian_eigenfunction(1, g.points, p), g)
        H = build_hamiltonian(g, p)
        dt = 0.1 * p.hbar / float(np.max(np.sum(np.abs(H.toarray()), axis=1)))
        herm = max(herm, propagate(psi, H, dt, 1000, p.hbar).max_norm_drift)
        Hn = build_hamiltonian_nonhermitian(g, p)
        nonh = min(nonh, propagate(psi, Hn, dt, 1000, p.hbar).max_norm_drift)
    ok = herm <= TOL_UNITARY and nonh > MIN_NONUNITARY
    acceptance_report(
        "CRITERION 9 unitarity discriminator",
        ok,
        f"Hermitian max drift {herm:.3e} (tol {TOL_UNITARY:g}); non-Hermitian min drift {nonh:.3e} (must exceed {MIN_NONUNITARY:g})",
    )
    assert ok


def test_criterion_10_density_argmax(acceptance_report):
    p = PhysicalParams.from_gamma_tilde(1.0)
    x, y = density_2d(1, 1, p, 1025).argmax()
    ok = x < p.L / 2 and y < p.L / 2
    acceptance_report("CRITERION 10 2-D density argmax", ok, f"argmax at ({x:.4f}, {y:.4f}) L (must be < 0.5 on both axes)")
    assert ok
