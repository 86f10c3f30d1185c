"""Batch command-line front end.

Subcommands: measures, sample, interp, concentrate, fixedp, sweep, validate,
kthreshold. Domain errors exit with status 1 and the error class name on
stderr; usage errors exit 2. Identical argv and seed produce byte-identical
output files. SCHMIDT_FORGE_THREADS caps sweep parallelism (0 or unset =
auto, 1 = serial).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .efficiency import ReferenceLevel, optimal_plan_efficiency, reference_from
from .errors import OutOfRangeError, SchmidtForgeError
from .fixedprob import FixedProbRequest, optimal_plan_fixed
from .interp import default_xi_grid, interp_sweep
from .oracle import run_validation
from .sampling import SampleSpec, sample_haar_spectrum
from .spectrum import SchmidtSpectrum, measures

INTERP_COLUMNS = ["xi", "p_success", "purity", "schmidt_number", "concurrence_sq"]
EFFICIENCY_COLUMNS = [
    "p_ref", "n_opt", "p_success", "purity", "schmidt_number", "concurrence_sq", "q_value",
]
FIXEDPROB_COLUMNS = [
    "p_fix", "n_opt", "p_success", "purity", "schmidt_number", "concurrence_sq",
]


@dataclass(frozen=True)
class SweepRequest:
    """A resolved sweep: spectrum, mode, grid values, destination, format."""

    spectrum: SchmidtSpectrum
    mode: str
    grid: tuple[float, ...]
    out: str
    format: str


def worker_count() -> int:
    raw = os.environ.get("SCHMIDT_FORGE_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return os.cpu_count() or 1
    return n


def _grid_token(token: str, dim: int) -> float:
    if token == "1/D":
        return 1.0 / dim
    return float(token)


def parse_grid(text: str, dim: int) -> np.ndarray:
    """Parse ``log:a:b:n`` / ``lin:a:b:n`` / comma-separated values.

    Endpoint tokens may be numbers or the literal ``1/D`` (resolved against
    the spectrum's dimension).
    """
    if text.startswith(("log:", "lin:")):
        kind, lo, hi, num = text.split(":")
        a = _grid_token(lo, dim)
        b = _grid_token(hi, dim)
        n = int(num)
        if n < 1:
            raise ValueError("grid needs at least one point")
        if kind == "log":
            return np.geomspace(a, b, n)
        return np.linspace(a, b, n)
    return np.array([_grid_token(tok, dim) for tok in text.split(",")])


def _parallel_map(fn, items):
    workers = worker_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(v) for v in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _emit(obj: dict, out: str | None) -> None:
    if out:
        io.write_json(obj, out)
    else:
        sys.stdout.write(io._render(obj) + "\n")


# ---------------------------------------------------------------- subcommands


def _cmd_measures(args) -> int:
    s = io.read_spectrum(args.spectrum)
    m = measures(s)
    _emit(
        {
            "dim": s.dim,
            "concurrence": m.concurrence,
            "concurrence_sq": m.concurrence_sq,
            "schmidt_number": m.schmidt_number,
            "purity": m.purity,
        },
        None,
    )
    return 0


def _cmd_sample(args) -> int:
    spec = SampleSpec(dim=args.dim, seed=args.seed, count=args.count)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, s in enumerate(sample_haar_spectrum(spec)):
        io.write_spectrum(s, out / f"spectrum_{i:04d}.json")
    print(f"wrote {spec.count} spectra to {out}")
    return 0


def _cmd_interp(args) -> int:
    s = io.read_spectrum(args.spectrum)
    grid = default_xi_grid(args.grid_points)
    points = interp_sweep(s, grid)
    rows = [
        [p.xi, p.success_prob, p.measures.purity, p.measures.schmidt_number,
         p.measures.concurrence_sq]
        for p in points
    ]
    io.write_csv(args.out, INTERP_COLUMNS, rows)
    return 0


def _reference_from_args(args, dim: int) -> ReferenceLevel:
    if args.pref is not None:
        return reference_from("p_ref", args.pref, dim)
    if args.cref_sq is not None:
        return reference_from("c_ref_sq", args.cref_sq, dim)
    return reference_from("k_ref", args.kref, dim)


def _cmd_concentrate(args) -> int:
    s = io.read_spectrum(args.spectrum)
    ref = _reference_from_args(args, s.dim)
    outcome = optimal_plan_efficiency(s, ref)
    record = io.OutcomeRecord.from_outcome(outcome, "efficiency", ref.p_ref)
    _emit(record.to_dict(), args.out)
    return 0


def _cmd_fixedp(args) -> int:
    s = io.read_spectrum(args.spectrum)
    outcome = optimal_plan_fixed(s, FixedProbRequest(args.p))
    record = io.OutcomeRecord.from_outcome(outcome, "fixedprob", args.p)
    _emit(record.to_dict(), args.out)
    return 0


def _load_sweep_spectrum(args) -> SchmidtSpectrum:
    if args.spectrum:
        return io.read_spectrum(args.spectrum)
    spec = SampleSpec(dim=args.dim, seed=args.seed, count=1)
    return sample_haar_spectrum(spec)[0]


def _sweep_rows(req: SweepRequest) -> tuple[list[str], list[list]]:
    s = req.spectrum
    if req.mode == "efficiency":
        def row(p_ref: float) -> list:
            o = optimal_plan_efficiency(s, ReferenceLevel(s.dim, p_ref))
            m = o.post_measures
            return [p_ref, o.plan.n_opt, o.p_success, m.purity,
                    m.schmidt_number, m.concurrence_sq, o.q_value]
        return EFFICIENCY_COLUMNS, _parallel_map(row, list(req.grid))
    if req.mode == "fixedprob":
        def row(p_fix: float) -> list:
            o = optimal_plan_fixed(s, FixedProbRequest(p_fix))
            m = o.post_measures
            return [p_fix, o.plan.n_opt, o.p_success, m.purity,
                    m.schmidt_number, m.concurrence_sq]
        return FIXEDPROB_COLUMNS, _parallel_map(row, list(req.grid))
    def row(xi: float) -> list:
        from .interp import interpolate
        p = interpolate(s, xi)
        m = p.measures
        return [xi, p.success_prob, m.purity, m.schmidt_number, m.concurrence_sq]
    return INTERP_COLUMNS, _parallel_map(row, list(req.grid))


def _cmd_sweep(args) -> int:
    s = _load_sweep_spectrum(args)
    grid_text = {"efficiency": args.pref_grid, "fixedprob": args.pfix_grid,
                 "interp": args.xi_grid}[args.mode]
    if grid_text is None:
        raise OutOfRangeError(f"mode {args.mode} needs its grid option")
    grid = parse_grid(grid_text, s.dim)
    if grid.size == 0:
        raise OutOfRangeError("empty grid")
    req = SweepRequest(
        spectrum=s, mode=args.mode, grid=tuple(float(v) for v in grid),
        out=args.out, format=args.format,
    )
    header, rows = _sweep_rows(req)
    if req.format == "csv":
        io.write_csv(req.out, header, rows)
    else:
        io.write_json(
            {"mode": req.mode, "rows": [dict(zip(header, r)) for r in rows]},
            req.out,
        )
    return 0


def _cmd_validate(args) -> int:
    results = run_validation(dim_max=args.dim_max, instances=args.instances, seed=args.seed)
    failed = 0
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        print(f"{tag} {r.name}  {r.detail}")
        failed += not r.passed
    print(f"{len(results) - failed}/{len(results)} suites passed")
    return 1 if failed else 0


def _cmd_kthreshold(args) -> int:
    s = io.read_spectrum(args.spectrum)
    k_thr = args.kmin * (1.0 - args.gap)
    if k_thr < 1.0:
        raise OutOfRangeError(f"threshold Schmidt number {k_thr!r} below 1")
    ref = reference_from("k_ref", k_thr, s.dim)
    outcome = optimal_plan_efficiency(s, ref)
    record = io.OutcomeRecord.from_outcome(outcome, "efficiency", ref.p_ref)
    _emit(record.to_dict(), args.out)
    return 0


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schmidt-forge",
        description="Entanglement-concentration planning for bipartite qudit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="print entanglement measures of a spectrum")
    p.add_argument("spectrum", help="spectrum JSON file")
    p.set_defaults(fn=_cmd_measures)

    p = sub.add_parser("sample", help="write random spectra")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_sample)

    p = sub.add_parser("interp", help="interpolation-baseline sweep to CSV")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--grid-points", type=int, default=101)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_interp)

    p = sub.add_parser("concentrate", help="efficiency-optimal plan for one reference")
    p.add_argument("--spectrum", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--pref", type=float, help="reference purity")
    group.add_argument("--cref-sq", type=float, help="squared reference concurrence")
    group.add_argument("--kref", type=float, help="reference Schmidt number")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_concentrate)

    p = sub.add_parser("fixedp", help="maximum entanglement at fixed success probability")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_fixedp)

    p = sub.add_parser("sweep", help="sweep a reference grid, write a table")
    p.add_argument("--spectrum", default=None)
    p.add_argument("--dim", type=int, default=None, help="sample a spectrum instead of reading one")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("efficiency", "fixedprob", "interp"), required=True)
    p.add_argument("--pref-grid", default=None, help="log:a:b:n | lin:a:b:n | v1,v2,...")
    p.add_argument("--pfix-grid", default=None)
    p.add_argument("--xi-grid", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("validate", help="run oracle suites against the planners")
    p.add_argument("--dim-max", type=int, default=10)
    p.add_argument("--instances", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("kthreshold", help="plan from a minimum desired Schmidt number")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--kmin", type=float, required=True, help="minimum desirable Schmidt number")
    p.add_argument(
        "--gap", type=float, required=True,
        help="relative slack below kmin for the threshold (K_thr = kmin * (1 - gap))",
    )
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_kthreshold)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep" and bool(args.spectrum) == (args.dim is not None):
        parser.error("sweep needs exactly one of --spectrum or --dim")
    try:
        return args.fn(args)
    except SchmidtForgeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
