"""kdvlab command line: derive, solve, verify, evolve.

Exit codes:
  0  success
  1  verification ran but failed its tolerance
  2  usage error (bad flags, unsupported order, stability bound violated)
  3  domain error (elliptic parameter outside (0, 1))
  4  verdict "inconsistent" where a solution was requested
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .ansatz import AnsatzFamily, derive_conditions
from .equations import UnsupportedOrderError, get_equation
from .evolver import EvolverUsageError, MeasurementError, collision_experiment, evolve, measure_velocity, \
    peak_position, stable_dt
from .solver import SolutionParams, SolverUsageError, solve
from .special_functions import EllipticDomainError
from .verifier import GridSpec, VerifierUsageError, default_grid, eval_field, residual, volume_mean

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_INCONSISTENT = 0, 1, 2, 3, 4

RESIDUAL_TOL = 1e-9
VOLUME_TOL = 1e-10
PRECISION_ENV = "KDVLAB_PRECISION"
FAMILIES = [f.value for f in AnsatzFamily]


class UsageError(ValueError):
    pass


# --- deterministic JSON -----------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "inf" not in s and "nan" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with fixed key order and floats at 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_schema(name: str) -> dict:
    text = resources.files("kdvlab").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt_float(float(c)) if isinstance(c, (float, np.floating)) else c for c in r])
    return buf.getvalue()


# --- validation -------------------------------------------------------------

def _tolerance(default: float) -> float:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None or raw == "":
        return default
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be a positive number, got {raw!r}") from None
    if not (val > 0 and math.isfinite(val)):
        raise UsageError(f"{PRECISION_ENV} must be a positive number, got {raw!r}")
    return val


def _validate(args):
    get_equation(args.order)
    for name in ("alpha", "beta"):
        val = getattr(args, name, None)
        if val is not None and not (val > 0 and math.isfinite(val)):
            raise UsageError(f"--{name} must be positive")
    m = getattr(args, "m", None)
    if m is not None and not (0.0 < m < 1.0):
        raise EllipticDomainError(f"elliptic parameter m={m!r} must lie in (0, 1)")
    n = getattr(args, "grid_n", None)
    if n is not None and (n < 16 or n & (n - 1)):
        raise UsageError("--grid-n must be a power of two >= 16")
    for name in ("domain_l", "dt"):
        val = getattr(args, name, None)
        if val is not None and not (val > 0 and math.isfinite(val)):
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    t = getattr(args, "t_final", None)
    if t is not None and not (t >= 0 and math.isfinite(t)):
        raise UsageError("--t-final must be non-negative")


# --- subcommands ------------------------------------------------------------

def cmd_derive(args) -> int:
    system = derive_conditions(args.ansatz, args.order)
    if args.format == "csv":
        rows = [(str(mono), cond.to_str()) for mono, cond in zip(system.monomials, system.conditions)]
        _emit(_csv(rows, ["basis", "condition"]), args.out)
    else:
        doc = {"command": "derive", **system.to_json(), "condition_count": len(system.conditions)}
        _emit(dumps(doc) + "\n", args.out)
    return EXIT_OK


def _run_solve(args):
    return solve(args.ansatz, args.order, args.alpha, args.beta, m=args.m, A=args.amplitude)


def cmd_solve(args) -> int:
    verdict = _run_solve(args)
    if args.format == "csv":
        fields = ["branch", "A", "B", "v", "D", "m", "z", "max_condition_residual"]
        rows = [[getattr(s, f) if getattr(s, f) is not None else "" for f in fields] for s in verdict.solutions]
        _emit(_csv(rows, fields), args.out)
    else:
        _emit(dumps({"command": "solve", **verdict.to_json()}) + "\n", args.out)
    return EXIT_INCONSISTENT if verdict.kind == "inconsistent" else EXIT_OK


def _load_solutions(path: str) -> tuple[list[SolutionParams], dict]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read parameters from {path}: {exc}") from None
    if isinstance(data, dict) and "solutions" in data:
        if data.get("verdict") == "inconsistent":
            return [], data
        items = data["solutions"]
    elif isinstance(data, list):
        items = data
    else:
        items = [data]
    try:
        return [SolutionParams.from_json(d) for d in items], data
    except TypeError as exc:
        raise UsageError(f"malformed solution record: {exc}") from None


def cmd_verify(args) -> int:
    res_tol = _tolerance(RESIDUAL_TOL)
    vol_tol = _tolerance(VOLUME_TOL)
    if args.params:
        sols, src = _load_solutions(args.params)
        if not sols and isinstance(src, dict) and src.get("verdict") == "inconsistent":
            _emit(dumps({"command": "verify", "status": "FAIL", "reason": "inconsistent verdict",
                         "results": []}) + "\n", args.out)
            return EXIT_INCONSISTENT
    else:
        verdict = _run_solve(args)
        if verdict.kind == "inconsistent":
            _emit(dumps({"command": "verify", "status": "FAIL", "reason": "inconsistent verdict",
                         "results": []}) + "\n", args.out)
            return EXIT_INCONSISTENT
        sols = verdict.solutions
    if not sols:
        raise UsageError("no solutions to verify")
    results = []
    for s in sols:
        if s.m is not None and not (0.0 < s.m <= 1.0):
            raise EllipticDomainError(f"elliptic parameter m={s.m!r} must lie in (0, 1]")
        order = args.order if args.order_given else s.order
        grid = default_grid(s, args.grid_n)
        if args.domain_l:
            grid = GridSpec(args.grid_n, args.domain_l)
        r = residual(s, order=order, grid=grid)
        rec = {"family": s.family, "order": order, "branch": s.branch, "residual": r,
               "residual_tol": res_tol, "grid_n": grid.n, "domain_length": grid.length}
        ok = r <= res_tol
        if s.ansatz.is_elliptic:
            mean = volume_mean(s)
            rec["volume_mean"] = mean
            rec["volume_tol"] = vol_tol
            ok = ok and abs(mean) <= vol_tol
        rec["status"] = "PASS" if ok else "FAIL"
        results.append(rec)
    status = "PASS" if all(r["status"] == "PASS" for r in results) else "FAIL"
    if args.format == "csv":
        s = sols[0]
        field = eval_field(s, grid=GridSpec(args.grid_n, args.domain_l) if args.domain_l else default_grid(s, args.grid_n))
        _emit(field.to_csv(), args.out)
    else:
        _emit(dumps({"command": "verify", "status": status, "results": results}) + "\n", args.out)
    return EXIT_OK if status == "PASS" else EXIT_FAIL


def _write_plot(path: Path, columns: list[str], rows) -> None:
    lines = ["# " + " ".join(columns)]
    lines += [" ".join(_fmt_float(float(c)) for c in r) for r in rows]
    path.write_text("\n".join(lines) + "\n")


def _default_dt(dt_max: float) -> float:
    return min(0.5 * dt_max, 0.05)


def cmd_evolve(args) -> int:
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    if args.collision:
        return _evolve_collision(args, out_dir)
    init_order = args.init_order or args.order
    get_equation(init_order)
    amplitude = args.amplitude
    if amplitude is None and init_order == 1:
        amplitude = 1.0
    verdict = solve(args.ansatz, init_order, args.alpha, args.beta, m=args.m, A=amplitude)
    if verdict.kind == "inconsistent" or not verdict.solutions:
        _emit(dumps({"command": "evolve", "error": "no traveling-wave solution to evolve",
                     "verdict": verdict.kind}) + "\n", None)
        return EXIT_INCONSISTENT
    sol = verdict.solutions[-1] if args.branch is None else _pick_branch(verdict.solutions, args.branch)
    n = args.grid_n
    if args.domain_l:
        grid = GridSpec(n, args.domain_l)
    elif sol.ansatz is AnsatzFamily.SOLITON:
        grid = GridSpec(n, 80.0 / sol.B)
    else:
        grid = default_grid(sol, n)
    initial = eval_field(sol, grid=grid)
    dt_max = stable_dt(initial, args.order, args.alpha, args.beta)
    dt = args.dt if args.dt else _default_dt(dt_max)
    run = evolve(initial, args.order, args.alpha, args.beta, args.t_final, dt,
                 snapshot_every=args.t_final / args.snapshots if args.t_final > 0 else None)
    deviation = [float(np.max(np.abs(w.samples - eval_field(sol, grid=grid, t=t).samples)))
                 for t, w in run.snapshots]
    try:
        velocity = measure_velocity(run)
    except MeasurementError:
        velocity = None
    files = []
    if out_dir:
        for i, (t, w) in enumerate(run.snapshots):
            name = f"snapshot_{i:04d}.csv"
            (out_dir / name).write_text(w.to_csv())
            files.append(name)
        try:
            peaks = [(t, peak_position(w)) for t, w in run.snapshots]
            _write_plot(out_dir / "peak.dat", ["t", "x_peak"], peaks)
            files.append("peak.dat")
        except MeasurementError:
            pass
        _write_plot(out_dir / "final.dat", ["x", "eta"], zip(run.final.x, run.final.samples))
        files.append("final.dat")
    manifest = {
        "command": "evolve",
        "mode": "single",
        "evolution_order": args.order,
        "initial": sol.to_json(),
        "run": run.manifest(),
        "predicted_velocity": sol.v,
        "measured_velocity": velocity,
        "linf_deviation": deviation,
        "mass_drift": run.mass_drift(),
        "files": files,
    }
    text = dumps(manifest) + "\n"
    if out_dir:
        (out_dir / "manifest.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _pick_branch(solutions, branch):
    for s in solutions:
        if s.branch == branch:
            return s
    raise UsageError(f"branch {branch!r} not among {[s.branch for s in solutions]}")


def _evolve_collision(args, out_dir: Path | None) -> int:
    kwargs = {}
    if args.grid_n_given:
        kwargs["n"] = args.grid_n
    if args.domain_l:
        kwargs["length"] = args.domain_l
    if args.dt:
        kwargs["dt"] = args.dt
    A1 = 1.0 if args.amplitude is None else args.amplitude
    t_final = args.t_final if args.t_final_given else 1500.0
    report = collision_experiment(args.order, args.alpha, args.beta, A1, args.amplitude2, args.separation,
                                  t_final, **kwargs)
    files = []
    if out_dir:
        (out_dir / "pre.csv").write_text(report.pre_profile.to_csv())
        files.append("pre.csv")
        if report.post_profile is not None:
            (out_dir / "post.csv").write_text(report.post_profile.to_csv())
            files.append("post.csv")
    manifest = {"command": "evolve", "mode": "collision", "evolution_order": args.order,
                **report.to_json(), "run": report.run.manifest(), "files": files}
    text = dumps(manifest) + "\n"
    if out_dir:
        (out_dir / "manifest.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


# --- parser -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, solve_flags: bool = True):
    p.add_argument("--order", type=int, default=None, help="equation order (1=KdV, 2=KdV2, 3=KdV3)")
    p.add_argument("--ansatz", default="soliton", choices=FAMILIES, help="ansatz family")
    if solve_flags:
        p.add_argument("--alpha", type=float, default=0.1)
        p.add_argument("--beta", type=float, default=0.1)
        p.add_argument("--m", type=float, default=None, help="elliptic parameter in (0, 1)")
        p.add_argument("--amplitude", type=float, default=None, help="amplitude A (free at order 1)")
    p.add_argument("--out", default=None, help="output file (directory for evolve)")
    p.add_argument("--format", default="json", choices=["json", "csv"])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kdvlab",
        description="Traveling waves of the KdV hierarchy: derive, solve, verify, evolve.",
        epilog="exit codes: 0 success; 1 verification failed; 2 usage error; 3 domain error; "
               f"4 inconsistent system where a solution was requested.  {PRECISION_ENV} overrides "
               "verification tolerances.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", help="coefficient conditions of an ansatz")
    _common(p, solve_flags=False)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("solve", help="solve the condition system")
    _common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="grid residual and period mean of solutions")
    _common(p)
    p.add_argument("--params", default=None, help="JSON from `solve` (or a single solution record)")
    p.add_argument("--grid-n", type=int, default=2048)
    p.add_argument("--domain-l", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("evolve", help="pseudo-spectral time evolution")
    _common(p)
    p.add_argument("--init-order", type=int, default=None, help="order of the initial solution (default: --order)")
    p.add_argument("--branch", default=None, help="solution branch to evolve (default: last admissible)")
    p.add_argument("--grid-n", type=int, default=1024)
    p.add_argument("--domain-l", type=float, default=None, help="periodic domain length (default 80/B)")
    p.add_argument("--dt", type=float, default=None, help="time step (default: half the stability bound, <= 0.05)")
    p.add_argument("--t-final", type=float, default=20.0)
    p.add_argument("--snapshots", type=int, default=10)
    p.add_argument("--collision", action="store_true", help="two-soliton overtaking experiment")
    p.add_argument("--amplitude2", type=float, default=0.4)
    p.add_argument("--separation", type=float, default=25.0)
    p.set_defaults(func=cmd_evolve)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    args.order_given = args.order is not None
    if args.order is None:
        args.order = 1
    args.grid_n_given = any(a.startswith("--grid-n") for a in argv)
    args.t_final_given = any(a.startswith("--t-final") for a in argv)
    try:
        _validate(args)
        if getattr(args, "snapshots", 10) < 2:
            raise UsageError("--snapshots must be at least 2")
        return args.func(args)
    except EllipticDomainError as exc:
        print(f"kdvlab: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (UsageError, UnsupportedOrderError, SolverUsageError, VerifierUsageError, EvolverUsageError,
            MeasurementError) as exc:
        print(f"kdvlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
