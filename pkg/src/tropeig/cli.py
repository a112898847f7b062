"""Command-line front end.

All indices in files and output are 1-based.  Exit status: 0 on success,
1 on a domain error (reducible input, degenerate or singular case), 2 on
unreadable or malformed input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import asymptotics, linalg, verify
from .asymptotics import (
    EigAsymptotics,
    FirstOrderCoeff,
    PerturbedMatrix,
    eig_asymptotics,
    eigvec_asymptotics,
    newton_puiseux_first_order,
)
from .core import critical_graph, min_circuit_mean, trop_eigenvectors
from .critical import critical_sequence, gamma_equals_beta_blocks
from .graph import sccs
from .lidskii import NilSpec, lidskii
from .poly import char_poly_brute, char_poly_roots, char_poly_vertices, BRUTE_FORCE_LIMIT
from .semiring import TropMatrix, format_scalar, format_vector, scalar

SCHEMAS = """\
input schemas (indices 1-based, exponents as "p/q" strings or "inf"):
  min-plus matrix   {"n": 3, "entries": [["1", "0", "4"], ["inf", "1", "-2"], ...]}
  perturbed matrix  {"n": 3, "entries": [{"i": 1, "j": 2, "coeff": [re, im], "exp": "0"}, ...]}
                    (omitted entries are identically zero)
  polynomial        {"coeffs": [{"coeff": [re, im], "exp": "13"}, ...]}   lowest degree first, monic
  nilpotent data    {"m": [1, 1], "q": [3, 2], "b": [[[re, im], ...], ...]}

tolerance overrides (environment):
  TROPEIG_PIVOT_TOL, TROPEIG_NULLSPACE_TOL, TROPEIG_ZERO_EIG_TOL,
  TROPEIG_SIMPLE_TOL, TROPEIG_SLOPE_TOL, TROPEIG_COEFF_TOL
"""

_TOLERANCES = {
    "TROPEIG_PIVOT_TOL": (linalg, "PIVOT_TOL"),
    "TROPEIG_NULLSPACE_TOL": (linalg, "NULLSPACE_TOL"),
    "TROPEIG_ZERO_EIG_TOL": (asymptotics, "ZERO_EIG_TOL"),
    "TROPEIG_SIMPLE_TOL": (asymptotics, "SIMPLE_TOL"),
    "TROPEIG_SLOPE_TOL": (verify, "SLOPE_TOL"),
    "TROPEIG_COEFF_TOL": (verify, "COEFF_TOL"),
}


class InputError(Exception):
    """Unreadable or malformed input (exit status 2)."""


def _apply_env_tolerances() -> None:
    for var, (mod, attr) in _TOLERANCES.items():
        if var in os.environ:
            try:
                setattr(mod, attr, float(os.environ[var]))
            except ValueError as exc:
                raise InputError(f"{var} must be a number") from exc


def _load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _parse(fn, obj, what: str):
    try:
        return fn(obj)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed {what}: {exc}") from exc


def _cx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _nodes(s) -> list[int]:
    return sorted(i + 1 for i in s)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- subcommands ---------------------------------------------------------------


def cmd_tropeig(args) -> str:
    A = _parse(TropMatrix.from_json, _load(args.input), "min-plus matrix")
    rho = min_circuit_mean(A)
    g = critical_graph(A)
    if args.dot:
        return g.to_dot("critical")
    return _dumps(
        {
            "eigenvalue": format_scalar(rho),
            "critical_classes": [_nodes(c) for c in sccs(g)],
            "critical_arcs": [[i + 1, j + 1] for i, j in g.sorted_arcs()],
            "eigenvectors": [format_vector(v) for v in trop_eigenvectors(A)],
        }
    )


def cmd_charpoly(args) -> str:
    A = _parse(TropMatrix.from_json, _load(args.input), "min-plus matrix")
    gamma = char_poly_roots(A)
    verts = char_poly_vertices(A)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "k", "value"])
        for k, c in verts:
            w.writerow(["vertex", k, format_scalar(c)])
        for i, c in enumerate(gamma, start=1):
            w.writerow(["root", i, format_scalar(c)])
        return buf.getvalue()
    out = {
        "roots": format_vector(gamma),
        "vertices": [[k, format_scalar(c)] for k, c in verts],
    }
    if args.brute:
        if A.n > BRUTE_FORCE_LIMIT:
            raise ValueError(f"--brute limited to n <= {BRUTE_FORCE_LIMIT}")
        out["coeffs"] = char_poly_brute(A).to_json()["coeffs"]
    return _dumps(out)


def cmd_critical(args) -> str:
    A = _parse(TropMatrix.from_json, _load(args.input), "min-plus matrix")
    dec = critical_sequence(A)
    rep = gamma_equals_beta_blocks(A, dec, check=False)
    if args.dot:
        return "".join(g.to_dot(f"level{ell}") for ell, g in enumerate(dec.crit_graphs, start=1))
    rows = [
        {
            "level": lv.level,
            "alpha": format_scalar(lv.alpha),
            "class": _nodes(dec.classes[lv.level - 1]),
            "cover": rep.covers[lv.level],
            "gamma_equals_beta": lv.block_equal,
        }
        for lv in rep.levels
    ]
    if args.json:
        return _dumps({"levels": rows, "gamma": format_vector(rep.gamma), "beta": format_vector(rep.beta)})
    lines = [f"{'level':>5}  {'alpha':>8}  {'cover':>5}  {'gamma=beta':>10}  class"]
    for r in rows:
        cls = "{" + ",".join(str(i) for i in r["class"]) + "}"
        lines.append(
            f"{r['level']:>5}  {r['alpha']:>8}  {str(r['cover']).lower():>5}  "
            f"{str(r['gamma_equals_beta']).lower():>10}  {cls}"
        )
    lines.append("gamma: " + " ".join(format_vector(rep.gamma)))
    lines.append("beta:  " + " ".join(format_vector(rep.beta)))
    return "\n".join(lines) + "\n"


def _asymptotics_table(res: EigAsymptotics) -> str:
    lines = [f"{'level':>5}  {'alpha':>8}  {'omega':>5}  {'o':>5}  equivalents"]
    for lv in res.levels:
        if not lv.r_invertible:
            lines.append(f"{lv.level:>5}  {format_scalar(lv.alpha):>8}  singular r")
            continue
        eq = ", ".join(f"{z.real:+.6g}{z.imag:+.6g}j" for z in lv.equivalents) or "-"
        tail = "" if lv.t_invertible else "  (t singular)"
        lines.append(
            f"{lv.level:>5}  {format_scalar(lv.alpha):>8}  {lv.n_omega:>5}  {lv.n_o:>5}  {eq}{tail}"
        )
    return "\n".join(lines) + "\n"


def cmd_asymptotics(args) -> str:
    P = _parse(PerturbedMatrix.from_json, _load(args.input), "perturbed matrix")
    res = eig_asymptotics(P)
    return _asymptotics_table(res) if args.table else _dumps(res.to_json())


def _parse_complex(s: str) -> complex:
    try:
        parts = [float(x) for x in s.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse {s!r} as re[,im]") from exc
    if len(parts) not in (1, 2):
        raise InputError(f"cannot parse {s!r} as re[,im]")
    return complex(parts[0], parts[1] if len(parts) == 2 else 0.0)


def cmd_eigvec(args) -> str:
    P = _parse(PerturbedMatrix.from_json, _load(args.input), "perturbed matrix")
    mu = _parse_complex(args.mu)
    V = None
    if args.V:
        V = _parse(lambda s: [scalar(x) for x in s.split(",")], args.V, "vector V")
        if len(V) != P.n:
            raise InputError(f"V must have {P.n} entries")
    res = eigvec_asymptotics(P, args.level, mu, V=V)
    return _dumps(res.to_json())


def _parse_nil(obj: dict) -> tuple[NilSpec, np.ndarray]:
    spec = NilSpec(tuple(obj["m"]), tuple(obj["q"]))
    b = np.array([[complex(*z) if isinstance(z, list) else complex(z) for z in row] for row in obj["b"]])
    if b.shape != (spec.n, spec.n):
        raise ValueError(f"b must be {spec.n}x{spec.n}")
    return spec, b


def cmd_lidskii(args) -> str:
    spec, b = _parse(_parse_nil, _load(args.input), "nilpotent data")
    res = lidskii(spec, b)
    return _asymptotics_table(res) if args.table else _dumps(res.to_json())


def _parse_poly(obj: dict) -> list[FirstOrderCoeff]:
    out = []
    for c in obj["coeffs"]:
        z = c.get("coeff", [1.0, 0.0])
        out.append(FirstOrderCoeff(complex(*z) if isinstance(z, list) else complex(z), c["exp"]))
    return out


def cmd_puiseux(args) -> str:
    coeffs = _parse(_parse_poly, _load(args.input), "polynomial")
    branches = newton_puiseux_first_order(coeffs)
    return _dumps(
        {"branches": [{"coeff": _cx(b.coeff), "exp": format_scalar(b.exponent)} for b in branches]}
    )


def cmd_verify(args) -> str:
    P = _parse(PerturbedMatrix.from_json, _load(args.input), "perturbed matrix")
    grid = verify.DEFAULT_GRID
    if args.grid:
        try:
            grid = [float(x) for x in args.grid.split(",")]
        except ValueError as exc:
            raise InputError("--grid must be a comma separated list of numbers") from exc
    rep = verify.numeric_check(
        P, eig_asymptotics(P), grid, slope_tol=verify.SLOPE_TOL, coeff_tol=verify.COEFF_TOL
    )
    if args.csv:
        return rep.csv()
    return _dumps(rep.to_json()) if args.json else rep.table()


# -- driver --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tropeig",
        description="First-order eigenvalue and eigenvector asymptotics via min-plus algebra.",
        epilog=SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, **kw):
        sp = sub.add_parser(name, help=help_, description=help_, epilog=SCHEMAS,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.add_argument("input", help="input JSON file")
        sp.add_argument("-o", "--output", help="write output to this file instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    sp = add("tropeig", cmd_tropeig, "min-plus eigenvalue, critical graph and eigenvectors")
    sp.add_argument("--dot", action="store_true", help="emit the critical graph in DOT")
    sp = add("charpoly", cmd_charpoly, "roots and Newton polygon of the min-plus characteristic polynomial")
    sp.add_argument("--csv", action="store_true", help="emit polygon vertices and roots as CSV")
    sp.add_argument("--brute", action="store_true", help="also list all coefficients by enumeration")
    sp = add("critical", cmd_critical, "critical values, classes and circuit-cover report")
    sp.add_argument("--dot", action="store_true", help="emit the critical graph of every level in DOT")
    sp.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    sp = add("asymptotics", cmd_asymptotics, "eigenvalue equivalents of a perturbed matrix")
    sp.add_argument("--table", action="store_true", help="emit a table instead of JSON")
    sp = add("eigvec", cmd_eigvec, "eigenvector asymptotics for one eigenvalue")
    sp.add_argument("--level", type=int, required=True, help="critical level (1-based)")
    sp.add_argument("--mu", required=True, help="eigenvalue coefficient as re[,im]")
    sp.add_argument("--V", help="min-plus eigenvector as comma separated exponents (default: canonical)")
    sp = add("lidskii", cmd_lidskii, "classical Lidskii equivalents for Nil + eps b")
    sp.add_argument("--table", action="store_true", help="emit a table instead of JSON")
    add("puiseux", cmd_puiseux, "first-order roots of a polynomial with asymptotic coefficients")
    sp = add("verify", cmd_verify, "check predicted equivalents against dense eigensolves")
    sp.add_argument("--grid", help="comma separated eps values (default 1e-1 .. 1e-4 by half decades)")
    sp.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    sp.add_argument("--csv", action="store_true", help="emit (log eps, log|L|) per branch as CSV")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_env_tolerances()
        text = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError, IndexError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
