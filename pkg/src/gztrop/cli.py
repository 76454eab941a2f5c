"""Command line interface.

Subcommands: pattern, gw, converge-action, converge-angle, bracket-limit,
tropical-map, chambers, verify.  Matrices travel as JSON
{"n": int, "re": [[...]], "im": [[...]]}; reports are CSV (header row, one
record per measurement, floats at 17 significant digits) or JSON.  Exit
codes: 0 pass, 1 assertion failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .dualgroup import cluster_chart
from .errors import (
    ConvergenceError,
    DomainError,
    SamplingError,
    ScaleError,
    StepSizeError,
    UnsupportedSizeError,
)
from .experiments import (
    ExperimentConfig,
    Report,
    bracket_limit,
    chambers,
    converge_action,
    converge_angle,
    tropical_estimate,
    tropical_map_experiment,
)
from .gz import gz_actions, gz_angles, pattern_gap, to_ladder
from .gwmap import gw as gw_map
from .reports import (
    format_value,
    load_matrix,
    matrix_to_json_dict,
    report_json,
    rows_to_csv,
    write_report,
)
from .verification import VERIFY_TOLERANCES, run_checks

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2


def _parse_t_grid(text: str) -> tuple[float, ...]:
    """a:b:step (inclusive endpoints up to rounding), or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise DomainError(f"t grid must be a:b:step, got {text!r}")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise DomainError(f"bad t grid range {text!r}")
        count = int(np.floor((b - a) / step + 1e-9)) + 1
        return tuple(a + i * step for i in range(count))
    return tuple(float(p) for p in text.split(","))


def _parse_tols(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise DomainError(f"tolerance override must be NAME=VALUE, got {pair!r}")
        name, value = pair.split("=", 1)
        out[name.strip()] = float(value)
    return out


def add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=3, help="matrix size (2..5)")
    p.add_argument("--delta", type=float, default=0.5, help="cone gap depth")
    p.add_argument("--t-grid", default="1:20:1", help="scale grid a:b:step or comma list")
    p.add_argument("--samples", type=int, default=20, help="sample count")
    p.add_argument("--seed", type=int, default=20260808, help="stream seed")
    p.add_argument("--fd-step", type=float, default=1e-5, help="finite-difference step")
    p.add_argument("--box", type=float, default=1.3, help="spectral half-width of samples")
    p.add_argument("--out", default=None, help="report file path")
    p.add_argument("--format", default="csv", choices=("csv", "json"), help="report format")
    p.add_argument(
        "--tol",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="tolerance override (repeatable)",
    )
    p.add_argument("--plot", action="store_true", help="render a figure next to the report")


def config_from_args(args) -> ExperimentConfig:
    return ExperimentConfig(
        n=args.n,
        delta=args.delta,
        t_grid=_parse_t_grid(args.t_grid),
        samples=args.samples,
        seed=args.seed,
        fd_step=args.fd_step,
        box=args.box,
        out=args.out,
        fmt=args.format,
        plot=args.plot,
        tolerances=_parse_tols(args.tol),
    ).validate()


def emit_report(report: Report, cfg: ExperimentConfig) -> int:
    text = write_report(
        report.kind,
        report.config,
        report.fieldnames,
        report.rows,
        report.summary,
        cfg.out,
        cfg.fmt,
    )
    if text is not None:
        sys.stdout.write(text)
    for key, value in report.summary.items():
        if not isinstance(value, (list, dict)):
            print(f"# {key}: {format_value(value)}", file=sys.stderr)
    if cfg.plot:
        from . import plots

        path = plots.render(report, cfg.out)
        if path is not None:
            print(f"# figure: {path}", file=sys.stderr)
    print(f"# {report.kind}: {'PASS' if report.passed else 'FAIL'}", file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_pattern(args) -> int:
    a = load_matrix(args.matrix, hermitian=True)
    p = gz_actions(a)
    lad = to_ladder(p)
    gap = pattern_gap(p)
    rows = []
    for k in range(1, p.n + 1):
        for i in range(1, k + 1):
            rows.append(
                {
                    "i": i,
                    "k": k,
                    "lambda": p.value(i, k),
                    "ell": lad.value(i, k),
                    "psi": None,
                }
            )
    if args.angles:
        psi = gz_angles(a)
        for row in rows:
            if row["k"] < p.n:
                row["psi"] = psi.value(row["i"], row["k"])
    summary = {"n": p.n, "cone_gap": gap, "strict": bool(gap > 0)}
    fieldnames = ["i", "k", "lambda", "ell", "psi"]
    if args.format == "csv":
        text = rows_to_csv(fieldnames, rows)
    else:
        text = report_json("pattern", {"matrix": args.matrix}, rows, summary)
    if args.out:
        from pathlib import Path

        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"# cone_gap: {format_value(gap)}", file=sys.stderr)
    return EXIT_PASS


def cmd_gw(args) -> int:
    a = load_matrix(args.matrix, hermitian=True)
    res = gw_map(a, args.t, extended=True)
    point = cluster_chart(res.b, args.t)
    rows = []
    for k in range(1, point.n + 1):
        for i in range(1, k + 1):
            rows.append(
                {
                    "i": i,
                    "k": k,
                    "t": args.t,
                    "zeta": point.zeta_value(i, k),
                    "phi": point.phi_value(i, k) if i < k else 0.0,
                }
            )
    payload = {
        "b": matrix_to_json_dict(np.asarray(res.b, dtype=complex)),
        "source_gap": res.source_gap,
    }
    fieldnames = ["i", "k", "t", "zeta", "phi"]
    if args.format == "csv":
        text = rows_to_csv(fieldnames, rows)
    else:
        text = report_json("gw", {"matrix": args.matrix, "t": args.t}, rows, payload)
    if args.out:
        from pathlib import Path

        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.b_out:
        from .reports import save_matrix

        save_matrix(args.b_out, np.asarray(res.b, dtype=complex))
        print(f"# b written to {args.b_out}", file=sys.stderr)
    return EXIT_PASS


def cmd_verify(args) -> int:
    overrides = _parse_tols(args.tol)
    unknown = set(overrides) - set(VERIFY_TOLERANCES)
    if unknown:
        raise DomainError(f"unknown tolerance names: {sorted(unknown)}")
    results = run_checks(seed=args.seed, tolerances=overrides, fast=args.fast)
    rows = [
        {
            "check": r.name,
            "passed": r.passed,
            "value": r.value,
            "tolerance": r.tolerance,
        }
        for r in results
    ]
    passed = all(r.passed for r in results)
    summary = {
        "passed": passed,
        "checks": len(results),
        "failures": [r.name for r in results if not r.passed],
    }
    text = write_report(
        "verify",
        {"seed": args.seed, "fast": args.fast, "tolerances": overrides},
        ["check", "passed", "value", "tolerance"],
        rows,
        summary,
        args.out,
        args.format,
    )
    if text is not None:
        sys.stdout.write(text)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"# [{mark}] {r.name}: {r.value:.3e} (tol {r.tolerance:.1e})", file=sys.stderr)
    print(f"# verify: {'PASS' if passed else 'FAIL'}", file=sys.stderr)
    return EXIT_PASS if passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gztrop",
        description=(
            "Gelfand-Zeitlin actions and angles, scaled Ginzburg-Weinstein maps, "
            "cluster charts, and tropical limits at desk scale"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pattern", help="action/ladder/angle coordinates of a matrix")
    p.add_argument("--matrix", required=True, help="Hermitian matrix JSON file")
    p.add_argument("--angles", action="store_true", help="include angle coordinates")
    p.add_argument("--out", default=None)
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.set_defaults(fn=cmd_pattern)

    p = sub.add_parser("gw", help="scaled map image and its chart values")
    p.add_argument("--matrix", required=True, help="Hermitian matrix JSON file")
    p.add_argument("--t", type=float, default=1.0, help="scale parameter")
    p.add_argument("--b-out", default=None, help="write the image matrix JSON here")
    p.add_argument("--out", default=None)
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.set_defaults(fn=cmd_gw)

    def run_experiment(args, runner) -> int:
        cfg = config_from_args(args)
        return emit_report(runner(cfg), cfg)

    for name, runner in (
        ("converge-action", converge_action),
        ("converge-angle", converge_angle),
        ("bracket-limit", bracket_limit),
        ("chambers", chambers),
    ):
        p = sub.add_parser(name, help=f"run the {name.replace('-', ' ')} experiment")
        add_common_flags(p)
        p.set_defaults(fn=lambda a, r=runner: run_experiment(a, r))

    p = sub.add_parser("tropical-map", help="tropical ladder map sampling or estimate sweep")
    add_common_flags(p)
    p.add_argument(
        "--mode",
        default="map",
        choices=("map", "estimate"),
        help="map: feasibility and round trips; estimate: factorization error sweep",
    )
    p.set_defaults(
        fn=lambda a: run_experiment(
            a, tropical_estimate if a.mode == "estimate" else tropical_map_experiment
        )
    )

    p = sub.add_parser("verify", help="run every module invariant suite")
    p.add_argument("--seed", type=int, default=20260808)
    p.add_argument("--fast", action="store_true", help="reduced sample counts")
    p.add_argument("--out", default=None)
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConvergenceError, StepSizeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DomainError, SamplingError, ScaleError, UnsupportedSizeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
