"""Command-line front end.

    bethe-qes table   [--mu 1 --omega 1 --cps 0 --g-list 1/2,2,4 --n-max 3 --kappa-max 5]
    bethe-qes energy  --g 2 --n 0 --kappa 3
    bethe-qes state   --omega 1 --a2 1/2 --g 2 --n 0 --kappa 1
    bethe-qes verify  --omega 1 --a2 1/2 --g 2 --n 0 --kappa 1
    bethe-qes bethe   --omega 1 --a2 1/2 --g 2 --kappa 1 --beta 1 --n 1
    bethe-qes sl2     --n 4

Physics flags accept rational literals such as ``1/2``.  Every output starts
with a schema marker (``# bethe-qes v1`` for text, ``"schema": 1`` for JSON).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import sl2
from .bethe import (QesCoefficients, SolverConfig, determinant_condition_n1,
                    ode_residual, solve_bethe_roots)
from .errors import NoConvergence, NoPositiveRoot, NoRealState, QesError, SubspaceLeak
from .gio import (GioParameters, Potential, Sector, StateConfig, StateLabel,
                  beta_from_energy_eq, energy_from_beta, first_excited_t1,
                  qes_coefficients, sextic_relative_residual, solve_state)
from .oracle import RadialGrid, coupled_residual, fd_eigensolve, second_order_residual
from .spinor import (build_lower, count_nodes, default_grid, derive_upper,
                     expected_nodes, make_state, normalize)

HEADER = "# bethe-qes v1"
SCHEMA = 1
SPINOR_TOL = 1e-8
FD_TOL = 1e-4


def number(text: str) -> float:
    """Parse a decimal or rational literal ("1/2", "-3", "0.25")."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        return float(text)


def number_list(text: str) -> list[float]:
    return [number(x) for x in text.split(",") if x.strip()]


def fmt(x: float, rounded: bool = False) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.7f}" if rounded else repr(float(x))


def short_exp(x: float) -> str:
    mant, exp = f"{x:.1e}".split("e")
    return f"{mant}e{int(exp)}"


# -- table ---------------------------------------------------------------------

def table_rows(mu=1.0, omega=1.0, c_ps=0.0, g_list=(0.5, 2.0, 4.0), n_max=3, kappa_max=5):
    """Rows (n, kappa, g, beta_n, E_n, diagnostic) of the even-sector table."""
    rows = []
    for n in range(n_max + 1):
        for kappa in range(1, kappa_max + 1):
            for g in g_list:
                p = GioParameters(omega=omega, g=g, mu=mu, c_ps=c_ps)
                label = StateLabel(n, kappa, Sector.EVEN)
                try:
                    betas = beta_from_energy_eq(p, label)
                    beta, diag = betas[0], ("" if len(betas) == 1 else f"{len(betas)} roots; first shown")
                    rows.append((n, kappa, g, beta, energy_from_beta(p, beta), diag))
                except NoPositiveRoot as exc:
                    rows.append((n, kappa, g, None, None, str(exc)))
    return rows


def render_table(rows, fmt_name: str, rounded: bool) -> str:
    cols = ["n", "kappa", "g", "beta_n", "E_n", "diagnostic"]
    if fmt_name == "json":
        body = [dict(zip(cols, (n, k, g, b, e, d))) for n, k, g, b, e, d in rows]
        if rounded:
            for r in body:
                for key in ("beta_n", "E_n"):
                    if r[key] is not None:
                        r[key] = round(r[key], 7)
        return json.dumps({"schema": SCHEMA, "command": "table", "rows": body}, indent=2) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        buf.write(HEADER + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for n, k, g, b, e, d in rows:
            w.writerow([n, k, fmt(g), fmt(b, rounded), fmt(e, rounded), d])
        return buf.getvalue()
    lines = [HEADER, f"{'n':>2} {'kappa':>5} {'g':>6} {'beta_n':>12} {'E_n':>12}"]
    for n, k, g, b, e, d in rows:
        bs = f"{b:12.7f}" if b is not None else f"{'--':>12}"
        es = f"{e:12.7f}" if e is not None else f"{'--':>12}"
        lines.append(f"{n:>2} {k:>5} {g:>6.3g} {bs} {es}" + (f"  {d}" if d else ""))
    return "\n".join(lines) + "\n"


def cmd_table(args) -> tuple[str, int]:
    rows = table_rows(args.mu, args.omega, args.cps, args.g_list, args.n_max, args.kappa_max)
    return render_table(rows, args.format or "ascii-table", args.paper_precision), 0


# -- energy --------------------------------------------------------------------

def cmd_energy(args) -> tuple[str, int]:
    p = GioParameters(omega=args.omega, a=args.a_value, g=args.g, mu=args.mu, c_ps=args.cps)
    label = StateLabel(args.n, args.kappa, args.sector)
    try:
        betas = beta_from_energy_eq(p, label)
    except NoPositiveRoot as exc:
        return dump({"schema": SCHEMA, "command": "energy", "error": str(exc), "roots": []}), 2
    roots = [{"beta_n": b, "E_n": energy_from_beta(p, b)} for b in betas]
    return dump({"schema": SCHEMA, "command": "energy", "n": label.n, "kappa": label.kappa,
                 "sector": label.sector.value, "roots": roots}), 0


# -- state / verify --------------------------------------------------------------

def _potential(args) -> Potential:
    return Potential(args.omega, args.a_value, args.g)


def state_report(pot: Potential, label: StateLabel, mu: float, point, sol,
                 with_fd: bool = False) -> dict:
    st = make_state(pot, label, point, sol, mu=mu)
    G, F = build_lower(st), derive_upper(st)
    p = st.params
    grid = RadialGrid.from_points(np.linspace(0.05, 12.0, 4000))
    second = second_order_residual(G, p, point.energy, label.kappa, grid)
    ca, cb = coupled_residual(F, G, p, point.energy, label.kappa, grid)
    c = qes_coefficients(pot, point.beta, label)
    rep = {
        "beta": point.beta,
        "b": point.b,
        "roots": list(sol.roots),
        "two_mu_plus_cps": point.two_mu_plus_cps,
        "mu": mu,
        "c_ps": p.c_ps,
        "E": point.energy,
        "r0": sol.r0,
        "r1": sol.r1,
        "bae_residual_max": max((abs(x) for x in sol.bae_residuals), default=0.0),
        "ode_residual": ode_residual(c, sol.r0, sol.r1, sol.polynomial),
        "second_order_residual": second,
        "coupled_residual_upper": ca,
        "coupled_residual_lower": cb,
        "nodes": count_nodes(G, default_grid(st)),
        "expected_nodes": expected_nodes(st),
        "normalization": normalize(st),
    }
    checks = {
        "ode": rep["ode_residual"] < 1e-10,
        "second_order": second < SPINOR_TOL,
        "coupled_upper": ca < SPINOR_TOL,
        "coupled_lower": cb < SPINOR_TOL,
        "nodes": rep["nodes"] == rep["expected_nodes"],
    }
    if label.n == 1:
        branches = first_excited_t1(pot, label.kappa, label.nu, point.beta)
        t1 = sol.roots[0]
        rep["t1_branches"] = [
            {"branch": name, "t1": t, "matches_solved_root": abs(t - t1) <= 1e-8 * (1 + abs(t1))}
            for name, t in zip(("minus", "plus"), branches)
        ]
        checks["t1_branch"] = any(b["matches_solved_root"] for b in rep["t1_branches"])
        rep["sextic_relative_residual_printed"] = sextic_relative_residual(pot, label.kappa, label.sector, point.beta)
        rep["sextic_relative_residual_derived"] = sextic_relative_residual(pot, label.kappa, label.sector,
                                                                           point.beta, printed=False)
    if with_fd:
        E = point.energy
        width = 0.05 * max(1.0, abs(E))
        try:
            Es = fd_eigensolve(p, label.kappa, (E - width, E + width))
            best = min(Es, key=lambda x: abs(x - E))
            rep["fd_energy"] = best
            rep["fd_relative_error"] = abs(best - E) / abs(E)
        except QesError as exc:
            rep["fd_energy"] = None
            rep["fd_relative_error"] = None
            rep["fd_error"] = str(exc)
        checks["fd_oracle"] = rep["fd_relative_error"] is not None and rep["fd_relative_error"] < FD_TOL
    rep["checks"] = {k: ("PASS" if v else "FAIL") for k, v in checks.items()}
    rep["pass"] = all(checks.values())
    return rep


def _solve(args):
    pot = _potential(args)
    label = StateLabel(args.n, args.kappa, args.sector)
    cfg = StateConfig(solver=SolverConfig(seed=args.seed))
    return pot, label, solve_state(pot, label, cfg, mu=args.mu)


def _state_like(args, command: str, with_fd: bool) -> tuple[str, int]:
    try:
        pot, label, found = _solve(args)
    except NoRealState as exc:
        return dump({"schema": SCHEMA, "command": command, "error": str(exc),
                     "constraint_values": exc.constraint_values}), 2
    reports = [state_report(pot, label, args.mu, pt, sol, with_fd) for pt, sol in found]
    ok = all(r["pass"] for r in reports)
    out = {"schema": SCHEMA, "command": command,
           "input": {"omega": pot.omega, "a": pot.a, "g": pot.g, "n": label.n,
                     "kappa": label.kappa, "sector": label.sector.value, "mu": args.mu},
           "solutions": reports, "pass": ok}
    return dump(out), 0 if ok else 1


def cmd_state(args):
    return _state_like(args, "state", with_fd=False)


def cmd_verify(args):
    return _state_like(args, "verify", with_fd=True)


# -- bethe -----------------------------------------------------------------------

def _coefficients(args) -> QesCoefficients:
    raw = [args.p2, args.p1, args.p0, args.q2, args.q1, args.q0]
    if any(x is not None for x in raw):
        if any(x is None for x in raw):
            raise SystemExit("give all of --p2 --p1 --p0 --q2 --q1 --q0, or none")
        return QesCoefficients(*raw)
    if args.beta is None:
        raise SystemExit("need --beta (with the GIO flags) or explicit --p*/--q* coefficients")
    return qes_coefficients(_potential(args), args.beta, StateLabel(args.n, args.kappa, args.sector))


def cmd_bethe(args) -> tuple[str, int]:
    c = _coefficients(args)
    cfg = SolverConfig(seed=args.seed, accept_tol=args.tol or SolverConfig.accept_tol)
    out = {"schema": SCHEMA, "command": "bethe", "coefficients": c.__dict__, "n": args.n}
    checks = {}
    try:
        sols = solve_bethe_roots(c, args.n, cfg)
    except NoConvergence as exc:
        out["error"] = str(exc)
        return dump(out), 2
    out["solutions"] = [{"roots": list(s.roots), "r0": s.r0, "r1": s.r1,
                         "bae_residuals": list(s.bae_residuals),
                         "ode_residual": s.ode_residual_norm} for s in sols]
    checks["closure"] = all(s.ode_residual_norm < 1e-10 for s in sols)
    eig = np.sort(-sl2.spectrum(c, args.n).real) if args.n > 0 else np.array([0.0])
    checks["spectral_equivalence"] = all(np.min(np.abs(eig - s.r0)) < 1e-8 * (1 + abs(s.r0)) for s in sols)
    if args.n == 1:
        pair = determinant_condition_n1(c)
        out["determinant_r0"] = list(pair)
        r0s = sorted(s.r0 for s in sols)
        checks["determinant_n1"] = len(r0s) == 2 and all(
            abs(x - y) <= 1e-10 * (1 + abs(y)) for x, y in zip(r0s, sorted(pair)))
    out["checks"] = {k: ("PASS" if v else "FAIL") for k, v in checks.items()}
    out["pass"] = all(checks.values())
    return dump(out), 0 if out["pass"] else 1


# -- sl2 -------------------------------------------------------------------------

def sl2_checks(n: int, seed: int = 0, samples: int = 5) -> list[tuple[str, bool, str]]:
    results = []
    jm, jp, j0 = sl2.generators(n, exact=True)
    comm_ok = (np.all(sl2.commutator(j0, jp) == jp) and np.all(sl2.commutator(j0, jm) == -jm)
               and np.all(sl2.commutator(jp, jm) == -2 * j0))
    results.append(("commutators [J0,J+]=J+, [J0,J-]=-J-, [J+,J-]=-2J0", bool(comm_ok), "exact"))
    cas = sl2.casimir(n, exact=True)
    target = Fraction(n, 2) * (Fraction(n, 2) + 1)
    results.append(("casimir", bool(np.all(cas == target * sl2.identity(n, exact=True))), f"{float(target)}"))
    rng = np.random.default_rng(seed)
    worst = Fraction(0)
    for _ in range(samples):
        v = rng.normal(size=6)
        c = QesCoefficients(1.0, v[1], 0.0, v[3], v[4], v[5])
        d = sl2.hamiltonian_direct(c, -n * c.q2, n, exact=True) - sl2.hamiltonian_from_generators(c, n, exact=True)
        worst = max(worst, max(abs(x) for x in d.ravel()))
    results.append(("hamiltonian identity", worst == 0, f"max entry diff {short_exp(float(worst))}"))
    c = QesCoefficients(1.0, -0.5, 0.0, -1.0, 1.5, 0.25)
    try:
        sl2.hamiltonian_direct(c, -n * c.q2 + 1e-3, n)
        leak = False
    except SubspaceLeak:
        leak = True
    results.append(("subspace leak detected under r1 perturbation", leak, "r1 += 1e-3"))
    return results


def cmd_sl2(args) -> tuple[str, int]:
    res = sl2_checks(args.n, args.seed)
    ok = all(r[1] for r in res)
    if args.format == "json":
        body = [{"check": name, "status": "PASS" if good else "FAIL", "detail": det} for name, good, det in res]
        return dump({"schema": SCHEMA, "command": "sl2", "n": args.n, "checks": body, "pass": ok}), 0 if ok else 1
    lines = [HEADER] + [f"{name}: {'PASS' if good else 'FAIL'} ({det})" for name, good, det in res]
    return "\n".join(lines) + "\n", 0 if ok else 1


# -- plumbing --------------------------------------------------------------------

def dump(obj) -> str:
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(type(x))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", type=number, default=1.0)
    common.add_argument("--omega", type=number, default=1.0)
    common.add_argument("--a", type=number, default=None, help="potential width a")
    common.add_argument("--a2", type=number, default=None, help="a^2 (alternative to --a)")
    common.add_argument("--g", type=number, default=2.0)
    common.add_argument("--cps", type=number, default=0.0)
    common.add_argument("--n", type=int, default=0)
    common.add_argument("--kappa", type=int, default=1)
    common.add_argument("--sector", choices=["even", "odd"], default="even")
    common.add_argument("--format", choices=["csv", "json", "ascii-table"], default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=number, default=None)

    parser = argparse.ArgumentParser(prog="bethe-qes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    t = sub.add_parser("table", parents=[common], help="reproduce the beta_n table")
    t.add_argument("--g-list", type=number_list, default=[0.5, 2.0, 4.0])
    t.add_argument("--n-max", type=int, default=3)
    t.add_argument("--kappa-max", type=int, default=5)
    t.add_argument("--paper-precision", action="store_true", help="7 decimals instead of 17 digits")
    sub.add_parser("energy", parents=[common], help="roots of the energy equation")
    sub.add_parser("state", parents=[common], help="solve the QES constraints for (beta, roots)")
    sub.add_parser("verify", parents=[common], help="state plus residual and FD-oracle checks")
    b = sub.add_parser("bethe", parents=[common], help="Bethe roots for given coefficients")
    b.add_argument("--beta", type=number, default=None)
    for name in ("p2", "p1", "p0", "q2", "q1", "q0"):
        b.add_argument(f"--{name}", type=number, default=None)
    sub.add_parser("sl2", parents=[common], help="sl(2) algebraization checks")
    return parser


COMMANDS = {"table": cmd_table, "energy": cmd_energy, "state": cmd_state,
            "verify": cmd_verify, "bethe": cmd_bethe, "sl2": cmd_sl2}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.a is not None and args.a2 is not None:
        raise SystemExit("use either --a or --a2")
    args.a_value = args.a if args.a is not None else (math.sqrt(args.a2) if args.a2 is not None else 1.0)
    try:
        text, code = COMMANDS[args.command](args)
    except QesError as exc:
        text, code = dump({"schema": SCHEMA, "command": args.command, "error": str(exc)}), 2
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
