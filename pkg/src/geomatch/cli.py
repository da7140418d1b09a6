"""Command-line surface: generate instances, match observations, sweep, verify.

Exit status contract: 0 success, 1 usage or parameter error, 2 I/O or file
format error, 3 verification check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional

from . import container, diagnostics, harness
from .matcher import match_distance, umeyama_match
from .model import ModelKind, sample_instance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_VERIFY = 3

CHECKS = ("alignment", "envelope", "goegap", "residual-sweep")


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with status 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> List[int]:
    return [int(part) for part in text.split(",") if part.strip() != ""]


def _float_list(text: str) -> List[float]:
    return [float(part) for part in text.split(",") if part.strip() != ""]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="geomatch", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="sample an instance and write it to a directory")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--sigma", type=float, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--model", choices=("dot", "dist"), default="dot")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--csv", action="store_true", help="also write plain CSV matrices")
    gen.set_defaults(func=_cmd_generate)

    match = sub.add_parser("match", help="match two observation matrix files")
    match.add_argument("--a", required=True, help="first observation (binary container)")
    match.add_argument("--b", required=True, help="second observation (binary container)")
    match.add_argument("--d", type=int, required=True)
    match.add_argument("--model", choices=("dot", "dist"), default="dot")
    match.add_argument("--out", required=True, help="output JSON file")
    match.add_argument("--trace", action="store_true", help="keep all 2^d sign objectives")
    match.set_defaults(func=_cmd_match)

    sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep grid")
    sweep.add_argument("--config", help="sweep config JSON file")
    sweep.add_argument("--n-values", type=_int_list)
    sweep.add_argument("--d-values", type=_int_list)
    sweep.add_argument("--multipliers", type=_float_list)
    sweep.add_argument("--mode", choices=("almost_exact", "exact"))
    sweep.add_argument("--model", choices=("dot", "dist"))
    sweep.add_argument("--trials", type=int, default=20)
    sweep.add_argument("--master-seed", type=int, default=0)
    sweep.add_argument("--keep-trace", action="store_true")
    sweep.add_argument("--threads", type=int, default=None, help="worker count, 0 = auto")
    sweep.add_argument("--out", required=True, help="output directory for the two CSVs")
    sweep.set_defaults(func=_cmd_sweep)

    verify = sub.add_parser("verify", help="run one diagnostics check")
    verify.add_argument("--check", choices=CHECKS, required=True)
    verify.add_argument("--out", required=True, help="output JSON report file")
    verify.add_argument("--n", type=int, default=2000)
    verify.add_argument("--d", type=int, default=None, help="default 5 (40 for goegap)")
    verify.add_argument("--sigma", type=float, default=0.0)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--bound-scale", type=float, default=None, help="default sqrt(log n)")
    verify.add_argument("--slack", type=float, default=None, help="default 3 d sqrt(log n)")
    verify.add_argument("--reps", type=int, default=500)
    verify.add_argument("--ks-threshold", type=float, default=diagnostics.DEFAULT_KS_THRESHOLD)
    verify.add_argument("--sigma-grid", type=_float_list, default=[1e-6, 2e-6])
    verify.add_argument("--seeds", type=int, default=5)
    verify.add_argument("--master-seed", type=int, default=0)
    verify.set_defaults(func=_cmd_verify)

    return parser


def _cmd_generate(args) -> int:
    kind = ModelKind(args.model)
    instance = sample_instance(args.n, args.d, args.sigma, args.seed)
    manifest_path = container.save_instance(args.out, instance, kind, write_csv=args.csv)
    print(manifest_path)
    return EXIT_OK


def _cmd_match(args) -> int:
    a = container.read_matrix(args.a)
    b = container.read_matrix(args.b)
    if args.model == "dist":
        result = match_distance(a, b, args.d, keep_trace=args.trace)
    else:
        result = umeyama_match(a, b, args.d, keep_trace=args.trace)
    payload = {
        "n": int(a.shape[0]),
        "d": args.d,
        "model": args.model,
        "pi_hat": [int(i) for i in result.pi_hat.map],
        "psi_star": [int(s) for s in result.psi_star.signs],
        "objective": result.objective,
    }
    if args.trace:
        payload["trace"] = [
            {"signs": [int(s) for s in psi.signs], "objective": value}
            for psi, value in result.trace
        ]
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return EXIT_OK


def _resolve_workers(threads: Optional[int]) -> Optional[int]:
    if threads is None:
        env = os.environ.get("GEOMATCH_THREADS")
        if env is None:
            threads = 1
        else:
            try:
                threads = int(env)
            except ValueError:
                raise ValueError(f"GEOMATCH_THREADS must be an integer, got {env!r}")
    if threads < 0:
        raise ValueError(f"thread count must be >= 0, got {threads}")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads if threads >= 2 else None


def _cmd_sweep(args) -> int:
    if args.config is not None:
        with open(args.config) as fh:
            payload = json.load(fh)
        config = harness.SweepConfig.from_dict(payload)
    else:
        inline = {
            "--n-values": args.n_values,
            "--d-values": args.d_values,
            "--multipliers": args.multipliers,
            "--mode": args.mode,
            "--model": args.model,
        }
        missing = [flag for flag, value in inline.items() if value is None]
        if missing:
            raise ValueError(f"sweep needs --config or all of: {', '.join(missing)}")
        config = harness.SweepConfig(
            n_values=args.n_values,
            d_values=args.d_values,
            sigma_multipliers=args.multipliers,
            threshold_mode=harness.ThresholdMode(args.mode),
            model_kind=ModelKind(args.model),
            trials=args.trials,
            master_seed=args.master_seed,
            keep_trace=args.keep_trace,
        )
    workers = _resolve_workers(args.threads)
    os.makedirs(args.out, exist_ok=True)
    records = []
    result = None
    try:
        result = harness.run_sweep(config, max_workers=workers, on_record=records.append)
    finally:
        # flush whatever completed, so an interrupted sweep still leaves data
        with open(os.path.join(args.out, "trials.csv"), "w") as fh:
            fh.write(harness.trials_csv(records))
        aggregates = result.aggregates if result is not None else harness.aggregate_records(records)
        with open(os.path.join(args.out, "aggregates.csv"), "w") as fh:
            fh.write(harness.aggregates_csv(aggregates))
    print(os.path.join(args.out, "trials.csv"))
    return EXIT_OK


def _cmd_verify(args) -> int:
    check = args.check
    d = args.d if args.d is not None else (40 if check == "goegap" else 5)
    if check == "alignment":
        instance = sample_instance(args.n, d, args.sigma, args.seed)
        report = diagnostics.best_sign_alignment(instance, bound_scale=args.bound_scale)
        payload = {"check": check, "n": args.n, "d": d, "sigma": args.sigma, "seed": args.seed}
        payload.update(report.to_dict())
        flags = [report.passed_qr, report.passed_uv]
    elif check == "envelope":
        instance = sample_instance(args.n, d, args.sigma, args.seed)
        slack = args.slack if args.slack is not None else 3.0 * d * math.sqrt(math.log(args.n))
        report_x, report_y = diagnostics.singular_envelope(instance, slack)
        payload = {
            "check": check,
            "n": args.n,
            "d": d,
            "sigma": args.sigma,
            "seed": args.seed,
            "x": report_x.to_dict(),
            "y": report_y.to_dict(),
        }
        flags = [report_x.passed, report_y.passed]
    elif check == "goegap":
        report = diagnostics.goe_min_gap_sample(
            d, args.reps, args.seed, ks_threshold=args.ks_threshold
        )
        payload = {"check": check, "d": d, "reps": args.reps, "seed": args.seed}
        payload.update(report.to_dict())
        flags = [report.passed]
    else:
        rows = diagnostics.basis_residual_sweep(
            args.n, d, args.sigma_grid, args.seeds, master_seed=args.master_seed
        )
        payload = {
            "check": check,
            "n": args.n,
            "d": d,
            "seeds": args.seeds,
            "rows": [row._asdict() for row in rows],
        }
        flags = []
    with open(args.out, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return EXIT_OK if all(flags) else EXIT_VERIFY


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except container.ContainerFormatError as exc:
        print(f"geomatch: format error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"geomatch: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"geomatch: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"geomatch: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
