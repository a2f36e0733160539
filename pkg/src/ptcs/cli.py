"""Command-line entry point: ``ptcs eigen|verify|cs|limit|symbol``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or domain
error, 3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .asymptotics import DegradedLimitWarning, limit_fidelity
from .coherent import (
    PhasePoint,
    check_big_f_closed_form,
    coherent_state,
    expectation,
    lowering_symbol_A,
    lowering_symbol_H,
    lowering_symbol_invsin2,
    lowering_symbol_kinetic,
)
from .frames import check_fourier_weight, verify_resolution
from .numerics import NonConvergenceError, QuadratureError
from .ptmodel import DomainError, PTParams, energy
from .quantization import IDENTITY_NAMES, check_identity
from .reports import VerificationReport, relative_residual
from .sgp import SGPState, _values, norm
from .susy import (
    check_eigen_residual,
    check_factorization,
    check_gegenbauer,
    check_intertwining,
    eigenstate,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3
SUITES = ("unity", "susy", "identities", "symbols", "appendix")
DEFAULT_TOL = {"unity": 1e-8, "susy": 1e-10, "identities": 1e-8, "symbols": 1e-9, "appendix": 1e-8}


class UsageError(Exception):
    pass


def _fmt(v) -> str:
    return "%.17g" % v


def _thread_cap() -> int:
    raw = os.environ.get("PTCS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"PTCS_THREADS must be an integer, got {raw!r}") from None


def _run_tasks(tasks) -> list:
    """Run zero-argument callables, keeping input order in the results."""
    cap = _thread_cap()
    if cap == 1 or len(tasks) < 2:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=cap) as pool:
        return list(pool.map(lambda t: t(), tasks))


def _params(args) -> PTParams:
    return PTParams(nu=args.nu, beta=args.beta, L=args.length, m=args.mass, hbar=args.hbar, extended=args.extended)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header: list[str], rows, fmt: str) -> str:
    if fmt == "json":
        data = {"columns": header, "rows": [list(r) for r in rows]}
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# eigen


def cmd_eigen(args) -> int:
    params = _params(args)
    if not 0 <= args.n_max <= 30:
        raise UsageError("--n-max must lie in [0, 30]")
    if args.grid < 0:
        raise UsageError("--grid must be non-negative")
    L = params.L
    i = np.arange(1, args.grid + 1)
    xs, xcs = L * i / (args.grid + 1), L * (args.grid + 1 - i) / (args.grid + 1)
    rows = []
    if args.grid:
        for n in range(args.n_max + 1):
            e_n = energy(params, n).value
            vals = _values(eigenstate(params, n), xs, xcs)
            rows += [(n, e_n, float(x), float(v.real)) for x, v in zip(xs, vals)]
    _emit(_table(["n", "energy", "x", "phi"], rows, args.format), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify suites


def _suite_unity(params: PTParams, tol: float, seed: int):
    nu, L, hbar = params.nu, params.L, params.hbar
    states = [eigenstate(params, n) for n in range(3)]
    tasks = [lambda s=s: verify_resolution(nu, L, s, "parseval", tol, hbar) for s in states]
    tasks.append(lambda: verify_resolution(nu, L, states[0], "direct2d", max(tol, 1e-4), hbar))
    return tasks


def _random_state(params: PTParams, rng, degree: int = 3) -> SGPState:
    coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    gamma = complex(rng.uniform(-1.0, 1.0), rng.uniform(-2.0, 2.0)) / params.L
    # endpoint order nu + 1: the sin exponent carries the cot degree
    st = SGPState(params.nu + 1.0 + degree, gamma, coeffs, params.L)
    return st * (1.0 / norm(st))


def _suite_susy(params: PTParams, tol: float, seed: int):
    rng = np.random.default_rng(seed)
    randoms = [_random_state(params, rng) for _ in range(3)]
    tasks = []
    for n in range(6):
        tasks.append(lambda n=n: check_intertwining(params, n, tol))
        tasks.append(lambda n=n: check_eigen_residual(params, n, tol))
        tasks.append(lambda n=n: check_factorization(params, eigenstate(params, n), tol))
        if params.beta == 0.0:
            tasks.append(lambda n=n: check_gegenbauer(params, n, max(tol, 1e-9)))
    tasks += [lambda st=st: check_factorization(params, st, max(tol, 1e-9)) for st in randoms]
    return tasks


def _suite_identities(params: PTParams, tol: float, seed: int):
    return [lambda name=name: check_identity(name, params, tol=tol, seed=seed) for name in IDENTITY_NAMES]


def _symbol_grid(L: float, hbar: float):
    qs = [0.1 * L, 0.3 * L, 0.5 * L, 0.7 * L, 0.9 * L]
    ps = [k * hbar * math.pi / L for k in (-2.0, -1.0, 0.0, 1.0, 2.0)]
    return [PhasePoint(q, p) for q in qs for p in ps]


def _symbol_report(params: PTParams, kind: str, tol: float) -> VerificationReport:
    unit = {"A": params.hbar * params.k, "H": params.e0, "invsin2": 1.0, "kinetic": params.e0}[kind]
    closed = {
        "A": lambda pt: lowering_symbol_A(params, pt),
        "H": lambda pt: lowering_symbol_H(params, pt),
        "invsin2": lambda pt: lowering_symbol_invsin2(params.nu, params.L, pt),
        "kinetic": lambda pt: lowering_symbol_kinetic(params, pt),
    }[kind]
    worst, w_pt, lhs, rhs = 0.0, None, None, None
    for pt in _symbol_grid(params.L, params.hbar):
        a, b = complex(closed(pt)), expectation(params, pt, kind)
        res = relative_residual(a, b, unit)
        if w_pt is None or res > worst:
            worst, w_pt, lhs, rhs = res, pt, a, b
    return VerificationReport(
        identity=f"lowering-symbol-{kind}",
        inputs={"params": params.echo(), "grid": "5x5"},
        residual=worst,
        tolerance=tol,
        strategy="sgp-quadrature",
        lhs=lhs,
        rhs=rhs,
        details={"worst_point": [w_pt.q, w_pt.p]},
    )


def _suite_symbols(params: PTParams, tol: float, seed: int):
    kinds = ["A", "H"] + (["invsin2", "kinetic"] if params.nu > -0.5 else [])
    return [lambda k=k: _symbol_report(params, k, tol) for k in kinds]


def _suite_appendix(params: PTParams, tol: float, seed: int):
    tasks = [lambda nu=nu: check_big_f_closed_form(nu, tol=min(tol, 1e-11)) for nu in (0.0, 0.5, 1.0, 2.5)]
    tasks += [lambda nu=nu, x=x: check_fourier_weight(nu, x, tol) for nu in (0.0, 1.0) for x in (0.1, 0.25, 0.5)]
    return tasks


_SUITE_BUILDERS = {
    "unity": _suite_unity,
    "susy": _suite_susy,
    "identities": _suite_identities,
    "symbols": _suite_symbols,
    "appendix": _suite_appendix,
}


def _command_echo(argv: list[str]) -> list[str]:
    """argv without the output path, which does not affect the results."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        out.append(tok)
    return out


def build_manifest(suite: str, params: PTParams, tol: float, seed: int, command: list[str]) -> dict:
    tasks = _SUITE_BUILDERS[suite](params, tol, seed)
    reports = _run_tasks(tasks)
    return {
        "command": _command_echo(command),
        "suite": suite,
        "params": params.echo(),
        "extended": params.extended,
        "seed": seed,
        "tolerance": tol,
        "reports": [r.to_dict() for r in reports],
        "all_pass": all(r.passed for r in reports),
        "version": __version__,
        "wall_time": None,
    }


def cmd_verify(args, argv: list[str]) -> int:
    params = _params(args)
    tol = DEFAULT_TOL[args.suite] if args.tol is None else args.tol
    if not tol > 0:
        raise UsageError("--tol must be positive")
    start = time.perf_counter()
    manifest = build_manifest(args.suite, params, tol, args.seed, argv)
    if args.timing:
        manifest["wall_time"] = time.perf_counter() - start
    _emit(json.dumps(manifest, sort_keys=True, indent=2) + "\n", args.out)
    for rep in manifest["reports"]:
        flag = "PASS" if rep["pass"] else "FAIL"
        print(f"[{flag}] {rep['identity']}: residual {rep['residual']:.3e} (tol {rep['tolerance']:.1e})", file=sys.stderr)
    return EXIT_OK if manifest["all_pass"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# cs, limit, symbol


def cmd_cs(args) -> int:
    L, hbar = args.length, args.hbar
    if not L > 0 or not hbar > 0:
        raise UsageError("--length and --hbar must be positive")
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    point = PhasePoint(args.q, args.p)
    eta = coherent_state(args.nu, L, point, hbar).body
    i = np.arange(args.grid)
    xs = L * i / (args.grid - 1)
    xcs = L * (args.grid - 1 - i) / (args.grid - 1)
    vals = np.zeros(args.grid, dtype=complex)
    inside = (xs > 0) & (xcs > 0)
    vals[inside] = _values(eta, xs[inside], xcs[inside])
    rows = [(float(x), float(v.real), float(v.imag), float(abs(v) ** 2)) for x, v in zip(xs, vals)]
    _emit(_table(["x", "eta_re", "eta_im", "eta_abs2"], rows, args.format), args.out)
    return EXIT_OK


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def cmd_limit(args) -> int:
    Ls = _float_list(args.L_list)
    if not Ls:
        raise UsageError("--L-list is empty")
    if any(b <= a for a, b in zip(Ls, Ls[1:])):
        raise UsageError("--L-list must be strictly ascending")
    point = PhasePoint(args.q, args.p)
    tasks = [lambda L=L: limit_fidelity(args.nu, L, point, args.hbar) for L in Ls]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegradedLimitWarning)
        if any(abs(args.q) > 0.1 * L for L in Ls):
            print("warning: |q| > L/10 for some L; the harmonic limit is degraded there", file=sys.stderr)
        fids = _run_tasks(tasks)
    rows = [(L, args.nu, args.q, args.p, f) for L, f in zip(Ls, fids)]
    _emit(_table(["L", "nu", "q", "p", "fidelity"], rows, args.format), args.out)
    return EXIT_OK


def cmd_symbol(args) -> int:
    params = _params(args)
    qs, ps = _float_list(args.q_list), _float_list(args.p_list)
    fn = {
        "A": lambda pt: lowering_symbol_A(params, pt),
        "H": lambda pt: lowering_symbol_H(params, pt),
        "invsin2": lambda pt: lowering_symbol_invsin2(params.nu, params.L, pt),
        "kinetic": lambda pt: lowering_symbol_kinetic(params, pt),
    }[args.kind]
    rows = []
    for q in qs:
        for p in ps:
            v = complex(fn(PhasePoint(q, p)))
            rows.append((q, p, v.real, v.imag))
    _emit(_table(["q", "p", "value_re", "value_im"], rows, args.format), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nu", type=float, default=0.0)
    common.add_argument("--beta", type=float, default=0.0)
    common.add_argument("--length", type=float, default=1.0)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--extended", action="store_true", help="allow -1 < nu < 0 and beta < 0")
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="ptcs", description="Pöschl-Teller coherent states toolkit")
    parser.add_argument("--version", action="version", version=f"ptcs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigen", parents=[common], help="energies and sampled eigenfunctions")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--grid", type=int, default=101, help="interior sample points (0: header only)")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite, write a JSON manifest")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical output)")

    p = sub.add_parser("cs", parents=[common], help="sample a coherent state")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=2001)

    p = sub.add_parser("limit", parents=[common], help="fidelity with the harmonic Gaussian over L")
    p.add_argument("--L-list", dest="L_list", required=True, help="comma-separated ascending lengths")
    p.add_argument("--q", type=float, default=0.0, help="position on the centred interval")
    p.add_argument("--p", type=float, default=0.0)

    p = sub.add_parser("symbol", parents=[common], help="lowering symbol on a (q, p) grid")
    p.add_argument("--kind", choices=("A", "H", "invsin2", "kinetic"), default="H")
    p.add_argument("--q-list", default="0.1,0.3,0.5,0.7,0.9")
    p.add_argument("--p-list", default="-2,-1,0,1,2")
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "eigen":
            return cmd_eigen(args)
        if args.command == "verify":
            return cmd_verify(args, argv)
        if args.command == "cs":
            return cmd_cs(args)
        if args.command == "limit":
            return cmd_limit(args)
        return cmd_symbol(args)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergenceError, QuadratureError) as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
