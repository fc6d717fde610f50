"""Command-line front end: one subcommand per library area, JSON out.

Exit codes: 0 success, 2 validation error, 3 resource cap, 4 failed certified
inequality (or any flag under --strict).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import convex, counting, majorants, models, pipeline, polyapprox
from .bohr import bohr_enumerate
from .errors import (
    EXIT_CERTIFICATION,
    EXIT_OK,
    EXIT_VALIDATION,
    CertificationError,
    DenseModelError,
    ValidationError,
)
from .pipeline import PipelineConfig, canonical_json
from .signals import DiscreteSignal, FrequencyGrid, read_csv, write_csv


def _emit(data: dict, strict: bool) -> None:
    sys.stdout.write(canonical_json(data))
    if strict:
        flags = _collect_flags(data)
        if flags:
            raise CertificationError(f"strict mode: flags raised: {flags}")


def _collect_flags(data) -> list:
    out = []
    if isinstance(data, dict):
        for k, v in data.items():
            if k == "flags" and v:
                out.extend(v)
            else:
                out.extend(_collect_flags(v))
    elif isinstance(data, list):
        for v in data:
            out.extend(_collect_flags(v))
    return out


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError as e:
        raise ValidationError(f"bad vector {text!r}") from e


def _parse_matrix(text: str) -> np.ndarray:
    rows = [_parse_vector(r) for r in text.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("matrix rows must share a length")
    return np.vstack(rows)


def _grid(args) -> FrequencyGrid | None:
    return FrequencyGrid(args.grid_M) if args.grid_M else None


def _load_majorant(args) -> majorants.Majorant:
    if args.majorant_csv:
        sig = read_csv(args.majorant_csv)
        N = args.N or sig.support_hi
        return majorants.Majorant(sig, N, {"kind": "file"})
    N = args.N or 1000
    if args.kind == "uniform":
        return majorants.make_uniform(N)
    if args.kind == "sparse":
        return majorants.make_random_sparse(N, args.exponent, args.seed)
    if args.kind == "squares":
        return majorants.make_squares(N)
    if args.kind == "primes":
        return majorants.make_weighted_primes(N)
    raise ValidationError(f"unknown majorant kind {args.kind!r}")


def cmd_majorant(args) -> None:
    nu = _load_majorant(args)
    if args.out:
        write_csv(nu.signal, args.out)
    data = {
        "N": nu.N,
        "mass": nu.l1_mass,
        "support_size": int(np.count_nonzero(nu.signal.values)),
        "metadata": dict(nu.metadata),
    }
    if args.diagnose:
        data["diagnostics"] = majorants.diagnose(
            nu, _grid(args), k_max=args.k_max, seed=args.seed).as_dict()
    _emit(data, args.strict)


def cmd_bohr(args) -> None:
    freqs = _parse_vector(args.freqs) if args.freqs else np.zeros(0)
    B = bohr_enumerate(freqs, args.eps, args.N)
    data = B.as_dict()
    if not args.elements:
        data.pop("elements", None)
    _emit(data, args.strict)


def cmd_densify(args) -> None:
    nu = _load_majorant(args)
    f = read_csv(args.signal) if args.signal else nu.signal
    grid = _grid(args)
    if args.variant == "green":
        report = models.green_model(f, nu, args.eps, args.eta,
                                    grid=grid, strict=args.strict)
    elif args.variant == "hdr":
        report = models.hdr_model(f, nu, args.eps, grid=grid, strict=args.strict)
    elif args.variant == "naslund":
        report = models.naslund_model(f, nu, args.k, args.p,
                                      grid=grid, strict=args.strict)
    elif args.variant == "hahn_banach":
        report = models.hahn_banach_model(f, nu, grid=grid, tol=args.tol)
    else:
        raise ValidationError(f"unknown variant {args.variant!r}")
    if args.g_out:
        write_csv(report.g, args.g_out)
    _emit(report.as_dict(), args.strict)


def cmd_count(args) -> None:
    form = counting.LinearForm(tuple(int(c) for c in args.form.split(",")))
    weights = [read_csv(p) for p in args.weights]
    if len(weights) == 1:
        weights = weights * form.s
    fn = {"convolution": counting.count_weighted,
          "brute": counting.count_brute,
          "spectral": counting.count_spectral}[args.method]
    _emit(fn(form, weights).as_dict(), args.strict)


def cmd_minimax(args) -> None:
    A = convex.PointHull(_parse_matrix(args.a_gens))
    B = convex.PointHull(_parse_matrix(args.b_gens))
    res = convex.minimax_solve(A, B, tol=args.tol)
    _emit({
        "value": res.value,
        "a_star": list(res.a_star),
        "b_star": list(res.b_star),
        "gap": res.gap,
    }, args.strict)


def cmd_project(args) -> None:
    hull = convex.PointHull(_parse_matrix(args.gens))
    proj = convex.project_onto_hull(_parse_vector(args.point), hull,
                                    tol=args.tol)
    data = {
        "projection": list(proj.point),
        "distance": proj.distance,
        "gap": proj.gap,
        "inside": proj.inside,
        "iterations": proj.iterations,
    }
    if proj.witness is not None:
        data["witness"] = {
            "normal": list(proj.witness.normal),
            "anchor_value": proj.witness.anchor_value,
        }
    _emit(data, args.strict)


def cmd_weierstrass(args) -> None:
    if args.n_terms:
        approx = polyapprox.build_abs_approx(args.n_terms)
    else:
        approx = polyapprox.build_positive_part(args.eps)
    data = approx.as_dict()
    if not args.coefficients:
        data.pop("coefficients", None)
    _emit(data, args.strict)


def cmd_pipeline(args) -> None:
    if args.config:
        cfg = PipelineConfig.read(args.config)
    else:
        cfg = PipelineConfig()
    if args.N:
        cfg.N = args.N
    if args.seed is not None:
        cfg.seed = args.seed
    if args.grid_M:
        cfg.grid_m = args.grid_M
    if args.tol:
        cfg.tol = args.tol
    if args.variant:
        cfg.variant = args.variant
    if args.out:
        cfg.output = args.out
    cfg.strict = cfg.strict or args.strict
    report = pipeline.run_pipeline(cfg)
    sys.stdout.write(report.to_json())
    if not report.ok:
        raise CertificationError("pipeline report contains failed inequalities")
    if args.strict and report.data["flags"]:
        raise CertificationError(
            f"strict mode: flags raised: {report.data['flags']}")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid-M", type=int, default=0, dest="grid_M",
                   help="frequency grid size (0 = automatic)")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict", action="store_true",
                   help="exit nonzero on any capping or flag")


def _add_majorant_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", default="sparse",
                   choices=["uniform", "sparse", "squares", "primes"])
    p.add_argument("--N", type=int, default=0)
    p.add_argument("--exponent", type=float, default=2.0 / 3.0)
    p.add_argument("--majorant-csv", default="",
                   help="load the majorant from a CSV signal instead")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="densemodel",
        description="Bounded approximants, Bohr sets, and certified solution "
                    "counting for sparse weighted sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("majorant", help="build and diagnose a majorant")
    _add_majorant_opts(p)
    p.add_argument("--diagnose", action="store_true")
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--out", default="", help="write the signal as CSV")
    _add_common(p)
    p.set_defaults(fn=cmd_majorant)

    p = sub.add_parser("bohr", help="enumerate a Bohr set with its certificate")
    p.add_argument("--freqs", default="", help="comma-separated frequencies")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--elements", action="store_true",
                   help="include the full element list")
    _add_common(p)
    p.set_defaults(fn=cmd_bohr)

    p = sub.add_parser("densify", help="build a bounded approximant g of f")
    _add_majorant_opts(p)
    p.add_argument("--variant", default="hdr",
                   choices=["green", "hdr", "naslund", "hahn_banach"])
    p.add_argument("--signal", default="", help="CSV for f (default: f = nu)")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--eta", type=float, default=0.1)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--p", type=float, default=4.0)
    p.add_argument("--g-out", default="", help="write g as CSV")
    _add_common(p)
    p.set_defaults(fn=cmd_densify)

    p = sub.add_parser("count", help="weighted solution count of a linear form")
    p.add_argument("--form", required=True, help="coefficients, e.g. 1,1,-2")
    p.add_argument("--weights", nargs="+", required=True,
                   help="CSV signal per position (one CSV reused if single)")
    p.add_argument("--method", default="convolution",
                   choices=["convolution", "brute", "spectral"])
    _add_common(p)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("minimax", help="saddle value over two point hulls")
    p.add_argument("--a-gens", required=True, help="rows 'x,y;x,y;...'")
    p.add_argument("--b-gens", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_minimax)

    p = sub.add_parser("project", help="nearest point in a hull plus witness")
    p.add_argument("--point", required=True)
    p.add_argument("--gens", required=True, help="rows 'x,y;x,y;...'")
    _add_common(p)
    p.set_defaults(fn=cmd_project)

    p = sub.add_parser("weierstrass",
                       help="certified polynomial approximation of x_+ or |x|")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--n-terms", type=int, default=0,
                   help="build the even |x| approximant at this order instead")
    p.add_argument("--coefficients", action="store_true")
    _add_common(p)
    p.set_defaults(fn=cmd_weierstrass)

    p = sub.add_parser("pipeline", help="run the full counting pipeline")
    p.add_argument("--config", default="", help="flat key=value config file")
    p.add_argument("--N", type=int, default=0)
    p.add_argument("--variant", default="")
    p.add_argument("--out", default="", help="write the JSON report here")
    _add_common(p)
    p.set_defaults(fn=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except DenseModelError as e:
        sys.stderr.write(f"error: {e}\n")
        return e.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
