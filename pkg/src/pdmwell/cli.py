"""Command-line data emitter and verification runner.

Every command writes a table (CSV with a header row, or JSON
``{"config": ..., "rows": [...]}``) to ``--out`` or stdout.  Exit status is
0 on success, 1 on invalid input and 2 when a verification check fails.
"""

from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from pdmwell import analytic_well as aw
from pdmwell.evolution import propagate
from pdmwell.grid import PhysicalParams, WaveFunction, make_grid
from pdmwell.numeric_solver import solve_well, solve_well_refined
from pdmwell.observables import (
    density_2d,
    expectation_p_gamma,
    expectation_x,
    expectation_x_quadrature,
    integrate,
)
from pdmwell.operators import (
    build_hamiltonian,
    build_hamiltonian_nonhermitian,
    build_momentum_hermitian,
    build_momentum_nonhermitian,
    build_vonroos_kinetic,
    hermiticity_defect,
)

COMMANDS = ("spectrum", "wavefunction", "density2d", "expectation", "evolve", "verify", "convergence")
CHECKS = (
    "hermiticity",
    "orthonormality",
    "orthonormality_exact",
    "oracle",
    "oracle_exact",
    "bound",
    "vonroos",
    "unitarity",
)

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    gamma_tilde: list
    L: float = 1.0
    hbar: float = 1.0
    mass: float = 1.0
    n: list = field(default_factory=lambda: [1, 2, 3])
    grid_points: int = 4001
    format: str = "csv"
    out: str | None = None
    gamma: float | None = None
    checks: list = field(default_factory=list)
    ordering: tuple = (-0.25, -0.5, -0.25)
    operator: str = "hermitian"
    steps: int = 1000
    dt: float = 1e-3

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.grid_points < 65 or self.grid_points % 2 == 0:
            raise ConfigError(f"--grid-points must be odd and >= 65, got {self.grid_points}")
        if self.gamma is not None:
            self.gamma_tilde = [self.gamma * self.L]
        for gt in self.gamma_tilde:
            if not (math.isfinite(gt) and gt > -1.0):
                raise ConfigError(f"gamma_tilde must be > -1, got {gt!r}")
        for v in self.n:
            if v < 1:
                raise ConfigError(f"quantum numbers must be >= 1, got {v}")
        if not self.n:
            raise ConfigError("at least one --n is required")
        for name in self.checks:
            if name not in CHECKS:
                raise ConfigError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        if self.dt <= 0 or self.steps < 0:
            raise ConfigError("--dt must be positive and --steps non-negative")
        if self.operator not in ("hermitian", "nonhermitian"):
            raise ConfigError(f"unknown operator {self.operator!r}")
        for gt in self.gamma_tilde:
            self.params(gt)  # PhysicalParams performs the remaining checks

    def params(self, gamma_tilde: float) -> PhysicalParams:
        try:
            return PhysicalParams.from_gamma_tilde(gamma_tilde, hbar=self.hbar, mass=self.mass, L=self.L)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def render(cfg: RunConfig, columns, rows, extra=None) -> str:
    """Serialize a table; ``rows`` are sequences aligned with ``columns``."""
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()
    conf = {k: _jsonable(v) for k, v in asdict(cfg).items() if k != "out"}
    doc = {"config": conf}
    if extra:
        doc.update({k: _jsonable(v) for k, v in extra.items()})
    doc["rows"] = [dict(zip(columns, (_jsonable(v) for v in r))) for r in rows] if columns else _jsonable(rows)
    return json.dumps(doc, indent=1) + "\n"


def energy_over_e0(n: int, p: PhysicalParams) -> float:
    """``E_n / E_0`` with ``E_0 = pi^2 hbar^2 / 2 m L^2``, exactly ``n^2`` at gamma = 0."""
    g = p.gamma * p.L
    ratio = 1.0 if g == 0.0 else g / math.log1p(g)
    return n * n * ratio * ratio + 3.0 * g * g / (4.0 * math.pi**2)


def cmd_spectrum(cfg: RunConfig):
    cols = ["gamma_tilde", "n", "E_analytic", "E_ref3", "E_numeric", "rel_err", "rel_err_ref3", "E_over_E0"]
    rows = []
    K = max(cfg.n)
    N = max(cfg.grid_points, 4 * K + 1)
    if (N - 1) % 2:
        N += 1
    for gt in cfg.gamma_tilde:
        p = cfg.params(gt)
        sol = solve_well_refined(p, N, K)
        for n in cfg.n:
            ea = aw.energy(n, p)
            er = aw.reference_energy_ref3(n, p)
            en = float(sol.richardson_estimate[n - 1])
            rows.append([gt, n, ea, er, en, abs(en - ea) / ea, abs(en - er) / er, energy_over_e0(n, p)])
    return cols, rows, None


def cmd_wavefunction(cfg: RunConfig):
    cols = ["gamma_tilde", "n", "x", "phi", "phi_exact", "density"]
    rows = []
    for gt in cfg.gamma_tilde:
        p = cfg.params(gt)
        x = make_grid(p, cfg.grid_points).points
        for n in cfg.n:
            phi = aw.eigenfunction(n, x, p)
            ex = aw.hermitian_eigenfunction(n, x, p)
            rows.extend([gt, n, xi, a, b, a * a] for xi, a, b in zip(x, phi, ex))
    return cols, rows, None


def cmd_density2d(cfg: RunConfig):
    n1 = cfg.n[0]
    n2 = cfg.n[1] if len(cfg.n) > 1 else n1
    p = cfg.params(cfg.gamma_tilde[0])
    dens = density_2d(n1, n2, p, cfg.grid_points)
    if cfg.format == "csv":
        rows = [
            [xi, yj, dens.values[i, j]]
            for i, xi in enumerate(dens.x)
            for j, yj in enumerate(dens.y)
        ]
        return ["x", "y", "density"], rows, None
    return None, dens.values, {"n1": n1, "n2": n2, "x": dens.x, "y": dens.y}


def cmd_expectation(cfg: RunConfig):
    cols = ["gamma_tilde", "n", "x_expect_over_L", "x_quadrature_over_L", "p_gamma_expect"]
    rows = []
    for gt in cfg.gamma_tilde:
        p = cfg.params(gt)
        for n in cfg.n:
            xe = expectation_x(n, p) / p.L
            xq = expectation_x_quadrature(n, p, cfg.grid_points) / p.L
            pe = expectation_p_gamma(n, p, cfg.grid_points).real
            rows.append([gt, n, xe, xq, pe])
    return cols, rows, None


def cmd_evolve(cfg: RunConfig):
    p = cfg.params(cfg.gamma_tilde[0])
    grid = make_grid(p, cfg.grid_points)
    psi = sum(aw.hermitian_eigenfunction(n, grid.points, p) for n in cfg.n)
    builder = build_hamiltonian if cfg.operator == "hermitian" else build_hamiltonian_nonhermitian
    run = propagate(WaveFunction(psi, grid), builder(grid, p), cfg.dt, cfg.steps, hbar=p.hbar)
    cols = ["step", "t", "norm", "energy", "x_expect"]
    rows = [
        [k, t, nn, e, xx]
        for k, (t, nn, e, xx) in enumerate(zip(run.times, run.norm_history, run.energy_history, run.x_history))
    ]
    return cols, rows, None


def cmd_convergence(cfg: RunConfig):
    p = cfg.params(cfg.gamma_tilde[0])
    K = max(cfg.n)
    sizes = []
    N = cfg.grid_points
    # halve the spacing while the grid stays odd and admissible
    while N >= max(65, 4 * K) and N % 2 == 1:
        sizes.append(N)
        N = (N - 1) // 2 + 1
    sizes = sizes[::-1]
    exact = np.array([aw.hermitian_energy(n, p) for n in range(1, K + 1)])
    prev = None
    rows = []
    for N in sizes:
        sol = solve_well(p, N, K)
        err = sol.energies - exact
        for n in cfg.n:
            order = math.nan
            if prev is not None:
                order = math.log2(prev[n - 1] / err[n - 1]) if err[n - 1] != 0 else math.nan
            rows.append([N, n, sol.energies[n - 1], exact[n - 1], abs(err[n - 1]) / exact[n - 1], order])
        prev = err
    return ["grid_points", "n", "E_numeric", "E_exact", "rel_err", "observed_order"], rows, None


# verification checks: each returns (passed, value, threshold, detail)


def _check_hermiticity(cfg, p):
    worst = 0.0
    for N in (101, 1001):
        g = make_grid(p, N)
        for M in (build_momentum_hermitian(g, p), build_hamiltonian(g, p)):
            worst = max(worst, hermiticity_defect(M) / M.norm())
    nh = hermiticity_defect(build_momentum_nonhermitian(make_grid(p, 101), p))
    ok = worst <= 1e-13 and abs(nh - p.hbar * abs(p.gamma)) <= 1e-12
    return ok, worst, 1e-13, f"non-Hermitian defect {nh:.6g} vs hbar|gamma| {p.hbar * abs(p.gamma):.6g}"


def _orthonormality(p, func, N):
    g = make_grid(p, N)
    phis = [func(n, g.points, p) for n in range(1, 11)]
    gram = np.array([[integrate(a * b, g) for b in phis] for a in phis])
    return float(np.max(np.abs(np.diag(gram) - 1))), float(np.max(np.abs(gram - np.diag(np.diag(gram)))))


def _check_orthonormality(cfg, p):
    dn, off = _orthonormality(p, aw.eigenfunction, 16001)
    return dn <= 1e-10 and off <= 1e-8, off, 1e-8, f"norm error {dn:.3g}; closed-form family"


def _check_orthonormality_exact(cfg, p):
    dn, off = _orthonormality(p, aw.hermitian_eigenfunction, 16001)
    return dn <= 1e-10 and off <= 1e-8, off, 1e-8, f"norm error {dn:.3g}; exact Dirichlet eigenfunctions"


@functools.lru_cache(maxsize=16)
def _numeric_energies(p, K=10):
    return solve_well_refined(p, 8001, K).richardson_estimate


def _check_oracle(cfg, p):
    num = _numeric_energies(p)
    ref = np.array([aw.energy(n, p) for n in range(1, num.size + 1)])
    err = float(np.max(np.abs(num - ref) / ref))
    return err <= 1e-6, err, 1e-6, "numeric vs closed form with 3 hbar^2 gamma^2/8m offset"


def _check_oracle_exact(cfg, p):
    num = _numeric_energies(p)
    ref = np.array([aw.hermitian_energy(n, p) for n in range(1, num.size + 1)])
    err = float(np.max(np.abs(num - ref) / ref))
    return err <= 1e-6, err, 1e-6, "numeric vs exact Dirichlet spectrum"


def _check_bound(cfg, p):
    b = aw.energy_bound(p)
    num = solve_well(p, 2001, 10).energies
    ana = np.array([aw.energy(n, p) for n in range(1, 11)])
    margin = float(min(num.min(), ana.min()) - b)
    return margin > 0, margin, 0.0, "min(E) - 3 hbar^2 gamma^2/8m"


def _check_vonroos(cfg, p):
    a, b, c = cfg.ordering
    res = []
    for N in (201, 401, 801):
        g = make_grid(p, N)
        H = build_hamiltonian(g, p)
        T = build_vonroos_kinetic(g, p, a, b, c)
        worst = 0.0
        for k in range(1, 6):
            v = np.sin(k * math.pi * g.interior / p.L)
            worst = max(worst, math.sqrt(g.spacing * np.sum(np.abs(H @ v - T @ v) ** 2)))
        res.append(worst)
    orders = [math.log2(res[i] / res[i + 1]) if res[i + 1] > 0 else math.inf for i in range(2)]
    ok = all(1.8 <= o <= 2.2 for o in orders) or res[-1] < 1e-12
    return ok, orders[-1], "[1.8, 2.2]", f"ordering {a},{b},{c}; residuals {', '.join(f'{r:.3g}' for r in res)}"


def _check_unitarity(cfg, p):
    g = make_grid(p, 101)
    psi = WaveFunction(aw.hermitian_eigenfunction(1, g.points, p), g)
    H = build_hamiltonian(g, p)
    dt = 0.1 * p.hbar / float(np.max(np.sum(np.abs(H.toarray()), axis=1)))
    herm = propagate(psi, H, dt, 1000, hbar=p.hbar).max_norm_drift
    nonh = propagate(psi, build_hamiltonian_nonhermitian(g, p), dt, 1000, hbar=p.hbar).max_norm_drift
    ok = herm <= 1e-10 and (p.gamma == 0 or nonh > 1e-6)
    return ok, herm, 1e-10, f"non-Hermitian drift {nonh:.3g}"


_CHECK_FUNCS = {
    "hermiticity": _check_hermiticity,
    "orthonormality": _check_orthonormality,
    "orthonormality_exact": _check_orthonormality_exact,
    "oracle": _check_oracle,
    "oracle_exact": _check_oracle_exact,
    "bound": _check_bound,
    "vonroos": _check_vonroos,
    "unitarity": _check_unitarity,
}


def cmd_verify(cfg: RunConfig):
    names = cfg.checks or list(CHECKS)
    rows = []
    for gt in cfg.gamma_tilde:
        p = cfg.params(gt)
        for name in names:
            ok, value, threshold, detail = _CHECK_FUNCS[name](cfg, p)
            rows.append([gt, name, "pass" if ok else "FAIL", value, str(threshold), detail])
    return ["gamma_tilde", "check", "status", "value", "threshold", "detail"], rows, None


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "density2d": cmd_density2d,
    "expectation": cmd_expectation,
    "evolve": cmd_evolve,
    "verify": cmd_verify,
    "convergence": cmd_convergence,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _sweep(text: str):
    try:
        start, stop, steps = text.split(":")
        steps = int(steps)
        start, stop = float(start), float(stop)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:steps, got {text!r}") from None
    if steps < 1:
        raise argparse.ArgumentTypeError("sweep needs at least one step")
    return [float(v) for v in np.linspace(start, stop, steps)]


def _ordering(text: str):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b,c, got {text!r}") from None
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("ordering needs three comma-separated numbers")
    return vals


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pdmwell", description=__doc__.splitlines()[0])
    ap.add_argument("--command", required=True, choices=COMMANDS)
    g = ap.add_mutually_exclusive_group()
    g.add_argument("--gamma-tilde", type=float, help="dimensionless gamma*L (default 1)")
    g.add_argument("--gamma-sweep", type=_sweep, metavar="START:STOP:STEPS",
                   help="inclusive sweep; write --gamma-sweep=-0.5:1:7 for negative starts")
    g.add_argument("--gamma", type=float, help="absolute gamma, overrides gamma-tilde")
    ap.add_argument("--n", type=int, action="append", help="quantum number (repeatable)")
    ap.add_argument("--grid-points", type=int, default=4001)
    ap.add_argument("--hbar", type=float, default=1.0)
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--length", type=float, default=1.0)
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--out", metavar="PATH")
    ap.add_argument("--check", action="append", choices=CHECKS, help="verify only this check (repeatable)")
    ap.add_argument("--ordering", type=_ordering, default=(-0.25, -0.5, -0.25), metavar="A,B,C",
                    help="von Roos ordering for the vonroos check")
    ap.add_argument("--operator", choices=("hermitian", "nonhermitian"), default="hermitian")
    ap.add_argument("--steps", type=int, default=1000)
    ap.add_argument("--dt", type=float, default=1e-3)
    return ap


def config_from_args(args) -> RunConfig:
    if args.gamma_sweep is not None:
        gts = args.gamma_sweep
    elif args.gamma_tilde is not None:
        gts = [args.gamma_tilde]
    else:
        gts = [1.0]
    default_n = {"expectation": [1, 2, 3, 20], "density2d": [1, 1], "evolve": [1, 2]}.get(args.command, [1, 2, 3])
    return RunConfig(
        command=args.command,
        gamma_tilde=gts,
        L=args.length,
        hbar=args.hbar,
        mass=args.mass,
        n=args.n or default_n,
        grid_points=args.grid_points,
        format=args.format,
        out=args.out,
        gamma=args.gamma,
        checks=args.check or [],
        ordering=args.ordering,
        operator=args.operator,
        steps=args.steps,
        dt=args.dt,
    )


def run(cfg: RunConfig) -> tuple[str, int]:
    cfg.validate()
    cols, rows, extra = _DISPATCH[cfg.command](cfg)
    status = EXIT_OK
    if cfg.command == "verify" and any(r[2] != "pass" for r in rows):
        status = EXIT_VERIFY
    return render(cfg, cols, rows, extra), status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        text, status = run(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"pdmwell: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == EXIT_VERIFY:
        failed = [r for r in text.splitlines() if "FAIL" in r]
        print(f"pdmwell: {len(failed)} verification check(s) failed", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
