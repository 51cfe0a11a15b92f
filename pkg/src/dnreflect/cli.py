"""Command-line interface: emit matrices, run exact checks, run the numeric solver.

JSON goes to stdout (or to ``--output`` / ``$DNREFLECT_OUTPUT``), logs to stderr.
Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 unsupported rank.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from dnreflect import __version__
from dnreflect import _kernels
from dnreflect.kmatrix import (
    NORMALIZATION_NOTE,
    build_K,
    build_Qhat_image,
    check_coideal,
    check_K_intertwining,
    check_reflection_equation,
    coideal_params,
    family_K,
)
from dnreflect.linalg import SparseMatrix, TimeBudgetExceeded
from dnreflect.rep import (
    UnsupportedRankError,
    check_basis_change,
    random_sigma,
    report_passed,
    sigma_transform,
    vector_rep,
    verify_relations,
)
from dnreflect.ring import ONE, VARIABLES, LaurentPoly, parse_monomial
from dnreflect.rmatrix import (
    VARIANTS,
    build_R,
    check_R_intertwining,
    check_sigma_invariance,
    check_YBE,
)
from dnreflect.solver import (
    DEFAULT_DEGREES,
    DEFAULT_Q,
    DEFAULT_SAMPLES,
    DEFAULT_TOL,
    SolveConfig,
    compare_to_closed_form,
    existence_eps,
    existence_eta,
    sample_points,
    scan_epsilon,
    scan_gap,
    solve_K,
)

SCHEMA_VERSION = "1"
OUTPUT_ENV = "DNREFLECT_OUTPUT"
CHECKS = ("relations", "coideal", "r-intertwine", "ybe", "k-intertwine", "reflection", "sigma")
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RANK = 0, 1, 2, 3

log = logging.getLogger("dnreflect")


class UsageError(Exception):
    pass


# -- argument types -------------------------------------------------------------


def complex_arg(text: str) -> complex:
    """``0.7``, ``0.9+0.2i`` or ``0.9+0.2j``."""
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def monomial_arg(text: str) -> LaurentPoly:
    try:
        return parse_monomial(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def sigma_arg(text: str) -> list[LaurentPoly]:
    return [monomial_arg(t) for t in text.split(",")]


def grid_arg(text: str) -> list[float]:
    """``a:b:step`` (inclusive) or a comma list."""
    try:
        if ":" in text:
            a, b, step = (float(v) for v in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError
            count = int(round((b - a) / step))
            return [round(a + k * step, 12) for k in range(count + 1)]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use a:b:step or a comma list") from None


def eval_arg(text: str) -> dict:
    out = {}
    for part in text.split(","):
        name, sep, val = part.partition("=")
        name = name.strip()
        if not sep or name not in VARIABLES:
            raise argparse.ArgumentTypeError(f"bad evaluation point {part!r}; use s=..,x=..,y=..")
        out[name] = complex_arg(val)
    return out


def degrees_arg(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("degrees must look like lo:hi") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("degrees must satisfy lo <= hi")
    return lo, hi


# -- JSON helpers -------------------------------------------------------------------


def _c(v) -> list[float]:
    v = complex(v)
    return [float(v.real), float(v.imag)]


def _variables(m: SparseMatrix) -> list[str]:
    used = set()
    for _, _, p in m.entries():
        for (es, ex, ey), _ in p.items():
            used.update(v for v, e in zip(VARIABLES, (es, ex, ey)) if e)
    return [v for v in VARIABLES if v in used]


def envelope(obj: str, n: int, m: SparseMatrix, note: str, at: dict | None, meta: dict | None = None) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "n": n,
        "object": obj,
        "normalization_note": note,
        "variables": _variables(m),
        "shape": [m.nrows, m.ncols],
    }
    if meta:
        out.update(meta)
    if at is None:
        out["entries"] = [{"row": i, "col": j, "poly": p.canonical()} for i, j, p in m.entries()]
    else:
        pt = {k: at.get(k, 1.0) for k in VARIABLES}
        out["evaluated_at"] = {k: _c(v) for k, v in pt.items()}
        out["entries"] = [{"row": i, "col": j, "value": _c(p.evaluate(**pt))} for i, j, p in m.entries()]
    return out


def write_json(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    path = path or os.environ.get(OUTPUT_ENV)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        log.info("wrote %s", path)
    else:
        sys.stdout.write(text)


# -- emit -----------------------------------------------------------------------------


def _generator(text: str) -> tuple[str, int]:
    for prefix, label in (("xp", "+"), ("xm", "-"), ("h", "h")):
        if text.startswith(prefix) and text[len(prefix):].isdigit():
            return label, int(text[len(prefix):])
    raise UsageError(f"bad generator {text!r}; use xp<i>, xm<i> or h<i>")


def _r_at_one_note(R) -> dict:
    """Informational: whether ``Rc(1)`` is a scalar matrix, and the scalar."""
    r1 = R.at(ONE)
    diag = r1.diagonal_values()
    scalar = r1.nnz() == r1.nrows and len({d.canonical() for d in diag if d}) == 1 and all(diag)
    return {"R_at_1": {"scalar_matrix": scalar, "scalar": diag[0].canonical() if scalar else None}}


def cmd_emit(args) -> int:
    n = args.n
    obj = args.object
    if obj == "R":
        R = build_R(n, args.variant)
        meta = {"variant": args.variant, **_r_at_one_note(R)}
        payload = envelope("R", n, R.mat, "raw polynomial gauge, no scalar normalization", args.eval, meta)
    elif obj == "K":
        payload = envelope("K", n, build_K(n).mat, NORMALIZATION_NOTE, args.eval)
    elif obj == "K_family":
        sigma = args.sigma if args.sigma is not None else [ONE] * (n + 1)
        st = sigma_transform(n, sigma)
        K = family_K(n, st, args.sign)
        meta = {"sigma": [v.canonical() for v in st.sigma], "sign": args.sign, "zeta": st.zeta.canonical()}
        payload = envelope("K_family", n, K.mat, NORMALIZATION_NOTE, args.eval, meta)
    elif obj == "Qhat":
        if not 0 <= args.j <= n:
            raise UsageError(f"--j must lie in 0..{n}")
        params = coideal_params(n, args.sign, args.eps_sign)
        arg = args.arg if args.arg is not None else params.eta * parse_monomial("x")
        m = build_Qhat_image(vector_rep(n), args.j, params, arg)
        meta = {"j": args.j, "spectral_arg": arg.canonical(), "eta": params.eta.canonical(),
                "epshat_numerator": params.epshat_numer[args.j].canonical(),
                "epshat_denominator": "s - s^-1"}
        payload = envelope("Qhat", n, m, "none", args.eval, meta)
    else:
        label, i = _generator(args.generator)
        if not 0 <= i <= n:
            raise UsageError(f"generator index must lie in 0..{n}")
        rep = vector_rep(n)
        payload = envelope("rep", n, rep.generator(label, i), "none", args.eval, {"generator": args.generator})
    write_json(payload, args.output)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------


def _sigma_for(args, n):
    if args.sigma is not None:
        return args.sigma
    return random_sigma(n, args.seed)


def run_check(check: str, args) -> list[dict]:
    n = args.n
    if args.sigma is not None and len(args.sigma) != n + 1:
        raise UsageError(f"--sigma needs {n + 1} comma-separated monomials")
    if check == "relations":
        rep = vector_rep(n)
        report = verify_relations(rep)
        if args.sigma is not None:
            report += verify_relations(rep.rescaled(args.sigma))
            report += check_basis_change(rep, sigma_transform(n, args.sigma))
        return report
    if check == "coideal":
        return check_coideal(n, coideal_params(n, args.sign, args.eps_sign))
    if check == "r-intertwine":
        return check_R_intertwining(n, build_R(n, args.variant))
    if check == "ybe":
        deadline = None
        if n >= 5:
            if args.time_budget is None:
                raise UsageError("exact YBE for n >= 5 needs --time-budget SECONDS")
            deadline = time.monotonic() + args.time_budget
        elif args.time_budget is not None:
            deadline = time.monotonic() + args.time_budget
        return check_YBE(n, build_R(n, args.variant), deadline)
    if check == "k-intertwine":
        if args.sigma is not None:
            raise UsageError("--sigma is not supported for k-intertwine; the sign flags select the family")
        sigma = [ONE] * (n + 1) if args.eps_sign == "+" else [-ONE] * (n + 1)
        return check_K_intertwining(n, family_K(n, sigma, args.sign), coideal_params(n, args.sign, args.eps_sign))
    if check == "reflection":
        sigma = args.sigma if args.sigma is not None else [ONE] * (n + 1)
        return check_reflection_equation(n, family_K(n, sigma, args.sign), build_R(n, args.variant))
    if check == "sigma":
        return check_sigma_invariance(n, _sigma_for(args, n), build_R(n, args.variant))
    raise UsageError(f"unknown check {check!r}")


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    status = "pass"
    try:
        report = run_check(args.check, args)
        status = "pass" if report_passed(report) else "fail"
    except TimeBudgetExceeded as exc:
        report = [{"relation_id": args.check, "indices": [args.n], "status": "timeout", "witness_entry": None}]
        status = "timeout"
        log.warning("%s", exc)
    failures = [e for e in report if e["status"] != "pass"]
    payload = {
        "schema_version": SCHEMA_VERSION,
        "check": args.check,
        "n": args.n,
        "status": status,
        "passed": status == "pass",
        "count": len(report),
        "failures": len(failures),
        "first_failure": failures[0] if failures else None,
        "report": report,
    }
    log.info("%s n=%d: %s (%d entries, %.2fs, %s kernels)", args.check, args.n, status, len(report),
             time.perf_counter() - t0, _kernels.BACKEND)
    write_json(payload, args.output)
    return EXIT_OK if status == "pass" else EXIT_FAIL


# -- solve ----------------------------------------------------------------------------


def _round(v: float, digits: int = 10) -> float:
    return float(f"{float(v):.{digits}g}")


def cmd_solve(args) -> int:
    n, q = args.n, args.q
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    xs = sample_points(args.samples, args.seed)
    if args.mode == "scan":
        grid = args.t_grid if args.t_grid is not None else [0.25 * k for k in range(1, 8)]
        if not grid:
            raise UsageError("--t-grid is empty")
        profile = scan_epsilon(n, q, grid, seed=args.seed, samples=args.samples, tol=args.tol)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "mode": "scan",
            "n": n,
            "q": _c(q),
            "seed": args.seed,
            "x_samples": [_c(x) for x in xs],
            "profile": [
                {"t": p["t"], "nullspace_dim": p["nullspace_dim"],
                 "smallest_singular_value": _round(p["smallest_singular_value"], 3)}
                for p in profile
            ],
            "solution_t": [p["t"] for p in profile if p["nullspace_dim"] >= 1],
            "gap": _round(scan_gap(profile), 3),
        }
        write_json(payload, args.output)
        return EXIT_OK

    pm = 1 if args.sign == "+" else -1
    eta = args.eta if args.eta is not None else existence_eta(n, q, pm)
    eps = existence_eps(q, 1.0 if args.eps_sign == "+" else -1.0)
    eta *= args.eta_scale
    eps *= args.eps_scale
    at_existence = args.eta is None and args.eta_scale == 1.0 and args.eps_scale == 1.0 and args.eps_sign == "+"
    cfg = SolveConfig(n=n, q_value=q, x_samples=xs, eta=eta, eps=eps, tol=args.tol, seed=args.seed,
                      degrees=args.degrees)
    res = solve_K(cfg)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "mode": "point",
        "n": n,
        "q": _c(q),
        "seed": args.seed,
        "x_samples": [_c(x) for x in xs],
        "eta": _c(eta),
        "eps": _c(eps),
        "degrees": list(res.degrees),
        "nullspace_dim": res.nullspace_dim,
        "singular_value_gap": _round(res.singular_value_gap, 3),
        "smallest_singular_value": _round(res.smallest_singular_value, 3),
        "max_residual": _round(max(res.residuals.values()), 3) if res.residuals else None,
        "residuals": {k: _round(v, 3) for k, v in res.residuals.items()},
        "K_numeric": None,
        "comparison": None,
    }
    if res.nullspace_dim == 1:
        K0 = res.K_at(xs[0])
        payload["K_numeric"] = {
            "x": _c(xs[0]),
            "gauge": "largest-magnitude entry of the stacked coefficients set to 1",
            "entries": [[_c(np.round(v, 12)) for v in row] for row in K0],
        }
        if at_existence and args.sign == "+":
            cmp = compare_to_closed_form(res)
            payload["comparison"] = {
                "scalar_ratio": [_round(cmp["scalar_ratio"].real), _round(cmp["scalar_ratio"].imag)],
                "max_rel_dev": _round(cmp["max_rel_dev"], 3),
            }
    log.info("solve n=%d q=%s: nullspace_dim=%d", n, q, res.nullspace_dim)
    write_json(payload, args.output)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dnreflect", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, default=4, help="rank, n >= 4 (default 4)")
        sp.add_argument("--output", help=f"write JSON here instead of stdout (also ${OUTPUT_ENV})")

    emitters = {
        "emit-r": ("R", "R-matrix Rc(x)"),
        "emit-k": ("K", "closed-form reflection matrix"),
        "emit-k-family": ("K_family", "K^+-_sigma(x)"),
        "emit-qhat": ("Qhat", "image of a coideal generator"),
        "emit-rep": ("rep", "image of an algebra generator"),
    }
    for name, (obj, helptext) in emitters.items():
        sp = sub.add_parser(name, help=f"emit the {helptext} as JSON")
        common(sp)
        sp.set_defaults(func=cmd_emit, object=obj)
        sp.add_argument("--eval", type=eval_arg, help="emit complex values at s=..,x=..,y=..")
        if obj == "R":
            sp.add_argument("--variant", choices=VARIANTS, default="intertwining")
        if obj in ("K_family", "Qhat"):
            sp.add_argument("--sign", choices=("+", "-"), default="+", help="sign of eta")
        if obj == "K_family":
            sp.add_argument("--sigma", type=sigma_arg, help="comma-separated monomials sigma_0..sigma_n")
        if obj == "Qhat":
            sp.add_argument("--j", type=int, default=0)
            sp.add_argument("--arg", type=monomial_arg, help="spectral argument (default eta*x)")
            sp.add_argument("--eps-sign", choices=("+", "-"), default="+")
        if obj == "rep":
            sp.add_argument("--generator", default="xp0", help="xp<i>, xm<i> or h<i>")

    sp = sub.add_parser("verify", help="run an exact identity check")
    common(sp)
    sp.set_defaults(func=cmd_verify)
    sp.add_argument("--check", choices=CHECKS, required=True)
    sp.add_argument("--sigma", type=sigma_arg, help="rescaling monomials sigma_0..sigma_n")
    sp.add_argument("--seed", type=int, default=42, help="seed for a random sigma (sigma check)")
    sp.add_argument("--sign", choices=("+", "-"), default="+", help="sign of eta / K family")
    sp.add_argument("--eps-sign", choices=("+", "-"), default="+")
    sp.add_argument("--variant", choices=VARIANTS, default="intertwining")
    sp.add_argument("--time-budget", type=float, help="seconds; required for ybe with n >= 5")

    sp = sub.add_parser("solve", help="numeric nullspace solve or epsilon scan")
    common(sp)
    sp.set_defaults(func=cmd_solve)
    sp.add_argument("--q", type=complex_arg, default=complex(DEFAULT_Q))
    sp.add_argument("--mode", choices=("point", "scan"), default="point")
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sp.add_argument("--t-grid", type=grid_arg)
    sp.add_argument("--degrees", type=degrees_arg, default=DEFAULT_DEGREES, help="x-degree window lo:hi")
    sp.add_argument("--sign", choices=("+", "-"), default="+", help="sign of eta")
    sp.add_argument("--eps-sign", choices=("+", "-"), default="+")
    sp.add_argument("--eps-scale", type=complex_arg, default=1.0)
    sp.add_argument("--eta-scale", type=complex_arg, default=1.0)
    sp.add_argument("--eta", type=complex_arg, help="explicit eta, overriding the existence value")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UnsupportedRankError as exc:
        print(f"dnreflect: {exc}", file=sys.stderr)
        return EXIT_RANK
    except (UsageError, ValueError) as exc:
        print(f"dnreflect: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
