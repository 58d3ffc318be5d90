"""``bench`` command line entry point."""

import argparse
import sys
from typing import List, Optional

from ..testbed import CLASSIC, GeneratedClass, GenerationError, generate_class, shift
from .criteria import ClassReport
from .report import emit_partition_snapshot, emit_report, read_report_csv
from .runner import ALGORITHMS, DEFAULT_T_MAX, RunSettings, run_class, run_problem

_CLASS_KEYS = {
    "N": ("N", int),
    "M": ("M", int),
    "fstar": ("f_star", float),
    "rho": ("rho_star", float),
    "r": ("r_star", float),
    "seed": ("seed", int),
    "size": ("size", int),
}


def parse_class_spec(text: str) -> GeneratedClass:
    """``N=2,M=10,fstar=-1,rho=0.1,r=0.9,seed=0`` -> GeneratedClass."""
    kw = {}
    for item in text.split(","):
        key, sep, value = item.strip().partition("=")
        if not sep or key not in _CLASS_KEYS:
            raise ValueError(f"bad class field {item!r}; expected one of {sorted(_CLASS_KEYS)}")
        name, conv = _CLASS_KEYS[key]
        kw[name] = conv(value)
    if "N" not in kw:
        raise ValueError("--class needs N")
    return GeneratedClass(**kw)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one solver on a classic function or a generated class")
    run.add_argument("--algorithm", choices=ALGORITHMS, default="adc")
    target = run.add_mutually_exclusive_group(required=True)
    target.add_argument("--problem", choices=sorted(CLASSIC))
    target.add_argument("--class", dest="class_spec", metavar="SPEC",
                        help="generated class, e.g. N=2,M=10,fstar=-1,rho=0.1,r=0.9,seed=0")
    run.add_argument("--shift", type=float, default=0.0, help="constant added to the objective")
    run.add_argument("--epsilon", type=float, default=1e-4)
    run.add_argument("--tmax", type=_positive_int, default=DEFAULT_T_MAX)
    run.add_argument("--delta", type=float, default=None,
                     help="accuracy coefficient of the stopping rule (default depends on N)")
    run.add_argument("--format", choices=("csv", "md"), default="csv")
    run.add_argument("--snapshot", metavar="PATH", help="write the final partition as CSV")
    run.add_argument("--compare", metavar="REF_CSV", help="report C4 against a saved report")
    run.add_argument("--jobs", type=_positive_int, default=1)
    run.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.delta is not None and not 0.0 < args.delta <= 1.0:
        parser.error("--delta must lie in (0, 1]")
    if args.epsilon < 0:
        parser.error("--epsilon must be non-negative")
    if args.snapshot and (args.problem is None or args.algorithm != "adc"):
        parser.error("--snapshot needs --problem and --algorithm adc")
    reference = None
    if args.compare:
        try:
            with open(args.compare, "rb") as fh:
                reference = read_report_csv(fh.read())
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read --compare file: {exc}")

    settings = RunSettings(args.algorithm, args.epsilon, args.tmax)
    if args.problem is not None:
        entry = CLASSIC[args.problem]
        problem = shift(entry.problem(), args.shift)
        delta = entry.delta if args.delta is None else args.delta
        result = run_problem(problem, settings, delta, keep_state=bool(args.snapshot))
        report = ClassReport(args.algorithm, problem.name, args.tmax)
        report.problem_ids.append(problem.name)
        report.raw_trials.append(result.trials)
        report.intervals.append(result.intervals)
        report.solved.append(result.solved)
        report.stop_reasons.append(result.stop_reason)
        if args.snapshot:
            with open(args.snapshot, "wb") as fh:
                fh.write(emit_partition_snapshot(result.state))
    else:
        try:
            params = parse_class_spec(args.class_spec)
            problems = generate_class(params)
        except (ValueError, TypeError, GenerationError) as exc:
            parser.error(f"--class: {exc}")
        if args.shift:
            problems = [shift(p, args.shift) for p in problems]
        report = run_class(
            problems, settings, args.delta, label=params.label(), params=params, jobs=args.jobs
        )
    if reference is not None and len(reference) != len(report):
        parser.error(f"--compare has {len(reference)} problems, this run has {len(report)}")

    data = emit_report(report, args.format, reference)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
