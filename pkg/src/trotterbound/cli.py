"""Command-line entry point: ``trotterbound {decompose,bound,sweep,spectrum,verify}``.

Exit codes: 0 success, 1 failed check or I/O error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from trotterbound import bounds, spectra
from trotterbound.models import MODELS, Boundary, LatticeSpec, ModelParams, build_model
from trotterbound.verification import run_checks

SWEEP_COLUMNS_DOC = "value, then one column per curve named <model>_<dim>d_<boundary>"


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _csv(rows: Sequence[Sequence[object]], header: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _add_lattice(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", required=True, choices=MODELS)
    p.add_argument("--dim", type=int, choices=(1, 2), default=2)
    p.add_argument("--nx", type=int, default=2, help="sites per row (chain length in 1D)")
    p.add_argument("--ny", type=int, default=None, help="rows (2D only; default: nx)")
    p.add_argument("--boundary", choices=[b.value for b in Boundary], default="open")


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t", type=float, default=1.0)
    u = p.add_mutually_exclusive_group()
    u.add_argument("--u", type=float, default=None)
    u.add_argument("--u-over-t", type=float, default=None)
    j = p.add_mutually_exclusive_group()
    j.add_argument("--j", type=float, default=None)
    j.add_argument("--j-derived", action="store_true", help="set J = 4 t^2 / U")


def _add_output(p: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", default=None, help="write to this path instead of stdout")


def lattice_from(args: argparse.Namespace) -> LatticeSpec:
    if args.dim == 1:
        if args.ny not in (None, 1):
            raise UsageError("--ny must be 1 (or omitted) for a 1D chain")
        return LatticeSpec.chain(args.nx, args.boundary)
    return LatticeSpec.square(args.nx, args.ny if args.ny is not None else args.nx, args.boundary)


def params_from(args: argparse.Namespace) -> ModelParams:
    u = args.u if args.u is not None else (args.u_over_t * args.t if args.u_over_t is not None else 0.0)
    if args.j_derived:
        return ModelParams(t=args.t, u=u, j_derived=True)
    return ModelParams(t=args.t, u=u, j=args.j if args.j is not None else 0.0)


def parse_grid(text: str) -> list[float]:
    """``a,b,c`` or ``start:stop:num`` (linear) or ``start:stop:num:log``."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
                raise ValueError
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
            if num < 1:
                raise ValueError
            if len(parts) == 4:
                if start <= 0 or stop <= 0:
                    raise ValueError
                return list(np.geomspace(start, stop, num))
            return list(np.linspace(start, stop, num))
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"invalid grid {text!r}") from None
    if not values:
        raise UsageError("empty grid")
    return values


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_decompose(args: argparse.Namespace) -> int:
    lattice = lattice_from(args)
    groups = build_model(args.model, lattice)
    records = [
        (g.site, sector, term)
        for g in groups
        for sector, term in zip(g.sectors, g.terms)
    ]
    if args.format == "json":
        text = _json([
            {"site": list(site), "sector": sector, "pauli": term.pauli.label,
             "weight": term.pauli.weight, "coefficient": term.coeff.to_json()}
            for site, sector, term in records
        ])
    else:
        text = _csv(
            [(site[0], site[1], sector, term.pauli.label, term.pauli.weight, str(term.coeff))
             for site, sector, term in records],
            ["site_row", "site_col", "sector", "pauli", "weight", "coefficient"],
        )
    _emit(text, args.output)
    return 0


def _agreement(model: str, lattice: LatticeSpec, polys: dict[str, bounds.Coefficient]) -> dict[str, bool]:
    """Cross-method equalities that hold exactly for this lattice."""
    checks = {}
    sides = (lattice.n_x,) if lattice.dimension == 1 else (lattice.n_x, lattice.n_y)
    if not lattice.periodic or min(sides) >= 3:
        checks["expanded == closed"] = polys["expanded"] == polys["closed"]
    if lattice.periodic:
        if min(sides) >= 3:
            checks["brute == closed"] = polys["brute"] == polys["closed"]
    elif "closed_exact" in polys:
        checks["brute == closed_exact"] = polys["brute"] == polys["closed_exact"]
    return checks


def cmd_bound(args: argparse.Namespace) -> int:
    lattice = lattice_from(args)
    params = params_from(args)
    sim = bounds.SimParams(args.tau, args.epsilon)
    methods = list(bounds.ROUTES) if args.method == "all" else [args.method]
    results = {}
    for m in methods:
        try:
            results[m] = bounds.bound(args.model, lattice, m, sim, params)
        except ValueError as exc:
            if args.method != "all":
                raise
            results[m] = exc
    out: dict[str, object] = {
        m: ({"error": str(r)} if isinstance(r, Exception) else r.to_json()) for m, r in results.items()
    }
    status = 0
    if args.method == "all":
        polys = {m: r.polynomial for m, r in results.items() if not isinstance(r, Exception)}
        agreement = _agreement(args.model, lattice, polys)
        out["agreement"] = agreement
        status = 0 if all(agreement.values()) else 1
    _emit(_json(out if args.method == "all" else out[args.method]), args.output)
    return status


def cmd_sweep(args: argparse.Namespace) -> int:
    grid = parse_grid(args.grid)
    if args.vary in ("u", "u_over_t") and args.j_derived and args.u is None and args.u_over_t is None:
        args.u = 1.0  # placeholder, replaced at every grid point
    fixed = params_from(args)
    columns: list[str] = []
    curves: list[list[tuple[float, float]]] = []
    for model in args.models.split(","):
        if model not in MODELS:
            raise UsageError(f"unknown model {model!r}")
        for dim in (int(d) for d in args.dims.split(",")):
            for boundary in args.boundaries.split(","):
                if dim == 1:
                    lattice = LatticeSpec.chain(args.nx * (args.ny or args.nx) if args.n_total else args.nx, boundary)
                else:
                    lattice = LatticeSpec.square(args.nx, args.ny or args.nx, boundary)
                columns.append(f"{model}_{dim}d_{Boundary(boundary).value}")
                curves.append(bounds.sweep(model, lattice, args.vary, grid, fixed, args.method))
    rows = [[_fmt(grid[k])] + [_fmt(c[k][1]) for c in curves] for k in range(len(grid))]
    _emit(_csv(rows, ["value"] + columns), args.output)
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    lattice = lattice_from(args)
    params = params_from(args)
    op = spectra.to_dense(build_model(args.model, lattice), params)
    sector = spectra.SectorFilter(args.particles, args.no_double_occupancy)
    levels = spectra.eigenvalues(op, sector)
    name = f"N={args.particles}" if args.particles is not None else "all"
    if args.no_double_occupancy:
        name += ",no-double"
    _emit(spectra.levels_to_csv(levels, name), args.output)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    golden = {}
    for model, path in (("hubbard", args.golden_hubbard), ("tj", args.golden_tj)):
        if path:
            golden[model] = Path(path).read_text(encoding="utf-8")
    results = run_checks(quick=args.quick, golden=golden)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trotterbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="per-site Pauli decomposition")
    _add_lattice(p)
    _add_output(p, ("csv", "json"))
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bound", help="Trotter step bound r")
    _add_lattice(p)
    _add_params(p)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--method", choices=list(bounds.ROUTES) + ["all"], default="closed")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help=f"bound versus one parameter as CSV ({SWEEP_COLUMNS_DOC})")
    p.add_argument("--models", default="hubbard")
    p.add_argument("--dims", default="2")
    p.add_argument("--boundaries", default="open")
    p.add_argument("--nx", type=int, default=6)
    p.add_argument("--ny", type=int, default=None)
    p.add_argument("--n-total", action="store_true",
                   help="1D curves use a chain of nx*ny sites instead of nx")
    p.add_argument("--vary", required=True, choices=bounds.SWEEP_VARIABLES)
    p.add_argument("--grid", required=True, help="a,b,c | start:stop:num | start:stop:num:log")
    p.add_argument("--method", choices=("closed", "brute", "one_norm", "omega"), default="closed")
    _add_params(p)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectrum", help="exact eigenvalues as index,eigenvalue CSV")
    _add_lattice(p)
    _add_params(p)
    p.add_argument("--particles", type=int, default=None)
    p.add_argument("--no-double-occupancy", action="store_true")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run the reproduction checks")
    p.add_argument("--quick", action="store_true", help="skip brute-force and spectrum checks")
    p.add_argument("--golden-hubbard", default=None, help="alternative Hubbard golden table")
    p.add_argument("--golden-tj", default=None, help="alternative t-J golden table")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on usage errors
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"trotterbound {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"trotterbound {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
