"""Command line front-end.

Subcommands: run (execute job files), verify (built-in suites), presets
(list built-ins).  Exit codes: 0 success, 1 validation error, 2 refused
by a computation guard, 3 verification failure.  Reports are written
atomically; wall times go to stderr so output files stay deterministic.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys
import time

from fhcalc.errors import ComputationGuardError, JobValidationError
from fhcalc.fdalg import ALGEBRA_PRESETS

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_GUARD = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad arguments; that code is reserved for
    computation guards, so remap argument problems to the validation code."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_VALIDATION)


def _build_parser() -> _Parser:
    parser = _Parser(prog="fhcalc", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="execute one or more job files")
    run.add_argument("jobfiles", nargs="+", metavar="JOBFILE")
    run.add_argument("--out", help="output file (one job) or directory")
    run.add_argument(
        "--format", choices=("text", "csv"), help="override the job's output format"
    )
    run.add_argument(
        "--assume-projective",
        action="store_true",
        help="assert projectivity of inputs, skipping the transfer guard",
    )
    run.add_argument(
        "--jobs", type=int, default=1, metavar="N", help="run N job files concurrently"
    )

    ver = sub.add_parser("verify", help="run a built-in verification suite")
    ver.add_argument("suite", help="linalg | graded | koszul | fdalg-balance | example-C | all")

    sub.add_parser("presets", help="list built-in algebras, representations, suites")
    return parser


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _execute(path: str, fmt: str | None, assume_projective: bool):
    """Run one job file; returns (exit code, rendered text, effective
    format, error message, elapsed seconds).  Importable at top level so
    a process pool can use it."""
    from fhcalc.jobs import load_job, render, run_job

    start = time.perf_counter()
    try:
        spec = load_job(path)
        report = run_job(spec, assume_projective=assume_projective)
        effective = fmt or spec.fmt
        rendered = render(report, effective)
    except JobValidationError as exc:
        return (
            EXIT_VALIDATION,
            "",
            "",
            f"{path}: validation error: {exc}",
            time.perf_counter() - start,
        )
    except ComputationGuardError as exc:
        return EXIT_GUARD, "", "", f"{path}: refused: {exc}", time.perf_counter() - start
    code = EXIT_OK
    if report.checks and not report.passed():
        code = EXIT_VERIFY
    return code, rendered, effective, "", time.perf_counter() - start


def _output_path(out: str, jobfile: str, rendered_fmt: str, multiple: bool) -> str:
    if multiple or os.path.isdir(out):
        os.makedirs(out, exist_ok=True)
        stem = os.path.splitext(os.path.basename(jobfile))[0]
        ext = "csv" if rendered_fmt == "csv" else "txt"
        return os.path.join(out, f"{stem}.{ext}")
    return out


def _cmd_run(args) -> int:
    if args.jobs < 1:
        sys.stderr.write("fhcalc: error: --jobs must be at least 1\n")
        return EXIT_VALIDATION
    multiple = len(args.jobfiles) > 1
    if args.jobs == 1:
        results = [
            _execute(path, args.format, args.assume_projective)
            for path in args.jobfiles
        ]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(
                pool.map(
                    _execute,
                    args.jobfiles,
                    [args.format] * len(args.jobfiles),
                    [args.assume_projective] * len(args.jobfiles),
                )
            )
    exit_code = EXIT_OK
    for path, (code, rendered, fmt, err, seconds) in zip(args.jobfiles, results):
        sys.stderr.write(f"[fhcalc] {path}: {seconds:.2f}s\n")
        if err:
            sys.stderr.write(err + "\n")
        elif args.out:
            target = _output_path(args.out, path, fmt, multiple)
            _atomic_write(target, rendered)
            sys.stderr.write(f"[fhcalc] wrote {target}\n")
        else:
            sys.stdout.write(rendered)
        if code != EXIT_OK and exit_code == EXIT_OK:
            exit_code = code
    return exit_code


def _cmd_verify(args) -> int:
    from fhcalc.verify import run_suite

    start = time.perf_counter()
    try:
        checks = run_suite(args.suite)
    except JobValidationError as exc:
        sys.stderr.write(f"fhcalc: {exc}\n")
        return EXIT_VALIDATION
    lines = [f"fhcalc verification: suite {args.suite}"]
    for check in checks:
        status = "pass" if check.passed else "FAIL"
        lines.append(f"  {status}  {check.name}")
        if check.detail:
            lines.append(f"        {check.detail}")
    n_pass = sum(1 for c in checks if c.passed)
    ok = n_pass == len(checks)
    lines.append(f"result: {'pass' if ok else 'FAIL'} ({n_pass}/{len(checks)} checks)")
    sys.stdout.write("\n".join(lines) + "\n")
    sys.stderr.write(f"[fhcalc] verify {args.suite}: {time.perf_counter() - start:.2f}s\n")
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_presets() -> int:
    from fhcalc.jobs import MODULE_PRESETS, REPRESENTATION_PRESETS, TASKS
    from fhcalc.verify import SUITES

    lines = ["algebra presets:"]
    lines.extend(f"  {name}" for name in ALGEBRA_PRESETS)
    lines.append("module presets:")
    lines.extend(f"  {name}" for name in MODULE_PRESETS)
    lines.append("representation presets:")
    lines.extend(f"  {name}" for name in REPRESENTATION_PRESETS)
    lines.append("tasks:")
    lines.extend(f"  {name}" for name in TASKS)
    lines.append("verify suites:")
    lines.extend(f"  {name}" for name in list(SUITES) + ["all"])
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_presets()


if __name__ == "__main__":
    raise SystemExit(main())
