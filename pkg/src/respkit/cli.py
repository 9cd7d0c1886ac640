"""Command-line pipeline over model, answer and requirement files.

Every subcommand is a thin wrapper over the library: artifacts go to
stdout (or the file named by ``-o``), diagnostics and errors go to stderr.
Exit status 0 means success with nothing to report, 1 means findings or
inconsistencies at or above the failure level, 2 means a usage, parse or
resolution error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path
from typing import Optional, TextIO

from . import analysis, elicitation, hazards, reporting
from .build import ModelBuildError, load_model
from .dsl import ParseFailure, parse_answers, parse_requirements, print_model, print_requirements
from .elicitation import IngestError, ingest_all
from .model import Model, Severity, UnknownResponsibility, validate
from .reporting import TraceResolutionError

_SEVERITY_CHOICES = [s.token for s in Severity]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="respkit",
        description="Responsibility modelling toolkit: check models, find "
                    "vulnerabilities, drive elicitation, analyse information "
                    "hazards and report traced requirements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse a model and report diagnostics")
    p.add_argument("file", type=Path)
    p.add_argument("--strict", action="store_true",
                   help="also report implicit declarations and missing channels")

    p = sub.add_parser("analyze", help="run every vulnerability analysis")
    p.add_argument("file", type=Path)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--load-threshold", type=int,
                   default=analysis.DEFAULT_LOAD_THRESHOLD, metavar="N",
                   help="overload threshold (default %(default)s)")
    p.add_argument("--fail-level", choices=_SEVERITY_CHOICES, default="medium",
                   help="exit 1 when findings reach this severity "
                        "(default %(default)s)")

    p = sub.add_parser("elicit", help="emit an answers skeleton to fill in")
    p.add_argument("file", type=Path)
    p.add_argument("--responsibility", required=True)
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("ingest", help="merge answer files into a model")
    p.add_argument("file", type=Path)
    p.add_argument("answers", type=Path)
    p.add_argument("-o", "--output", type=Path)
    p.add_argument("--strict", action="store_true",
                   help="refuse references the model cannot resolve")

    p = sub.add_parser("tables", help="render the information tables")
    p.add_argument("file", type=Path)
    p.add_argument("--responsibility", required=True)
    p.add_argument("--format", choices=["md", "csv"], default="md")
    p.add_argument("--which", choices=["required", "recorded", "both"],
                   default="both")

    p = sub.add_parser("hazards", help="render the hazard worksheet")
    p.add_argument("file", type=Path)
    p.add_argument("--responsibility", required=True)
    p.add_argument("--format", choices=["md", "csv"], default="md")

    p = sub.add_parser("mitigations",
                       help="stub coping requirements for serious hazards")
    p.add_argument("file", type=Path)
    p.add_argument("--responsibility", required=True)
    p.add_argument("--threshold", choices=_SEVERITY_CHOICES,
                   default=hazards.DEFAULT_MITIGATION_THRESHOLD.token,
                   help="minimum severity that needs a mitigation "
                        "(default %(default)s)")

    p = sub.add_parser("requirements", help="validate and report requirements")
    p.add_argument("file", type=Path)
    p.add_argument("reqs", type=Path)
    p.add_argument("--report", action="store_true",
                   help="print the numbered requirements report")

    p = sub.add_parser("dot", help="emit the model as a DOT graph")
    p.add_argument("file", type=Path)
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("diff", help="compare two models of the same duties")
    p.add_argument("left", type=Path)
    p.add_argument("right", type=Path)
    p.add_argument("--format", choices=["text", "json"], default="text")

    return parser


def _load(path: Path) -> Model:
    return load_model(path)


def _emit(text: str, output: Optional[Path], stdout: TextIO) -> None:
    if output is not None:
        output.write_text(text, encoding="utf-8", newline="")
    else:
        stdout.write(text)


def run(argv: list[str], stdin: Optional[TextIO] = None,
        stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None) -> int:
    """Dispatch one invocation; returns the exit status."""
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    parser = _build_parser()
    with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return 0 if exc.code in (0, None) else 2

    try:
        return _dispatch(args, stdout, stderr)
    except (ParseFailure, ModelBuildError) as exc:
        stderr.write(str(exc) + "\n")
        return 2
    except (IngestError, UnknownResponsibility, TraceResolutionError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return 2


def _dispatch(args: argparse.Namespace, stdout: TextIO, stderr: TextIO) -> int:
    if args.command == "check":
        model = _load(args.file)
        for diagnostic in validate(model, strict=args.strict):
            stderr.write(diagnostic.render() + "\n")
        return 0

    if args.command == "analyze":
        model = _load(args.file)
        findings = analysis.run_all(model, load_threshold=args.load_threshold)
        stdout.write(reporting.findings_report(findings, args.format))
        fail_level = Severity.from_token(args.fail_level)
        return 1 if any(f.severity >= fail_level for f in findings) else 0

    if args.command == "elicit":
        model = _load(args.file)
        _emit(elicitation.answers_skeleton(model, args.responsibility),
              args.output, stdout)
        return 0

    if args.command == "ingest":
        model = _load(args.file)
        records = parse_answers(args.answers.read_text(encoding="utf-8"),
                                str(args.answers))
        merged = ingest_all(model, records, strict=args.strict)
        _emit(print_model(merged), args.output, stdout)
        return 0

    if args.command == "tables":
        model = _load(args.file)
        renderer = (reporting.table_to_markdown if args.format == "md"
                    else reporting.table_to_csv)
        parts = []
        if args.which in ("required", "both"):
            parts.append(renderer(
                elicitation.information_required_table(model, args.responsibility)))
        if args.which in ("recorded", "both"):
            parts.append(renderer(
                elicitation.information_recorded_table(model, args.responsibility)))
        separator = "\r\n" if args.format == "csv" else "\n"
        stdout.write(separator.join(parts))
        return 0

    if args.command == "hazards":
        model = _load(args.file)
        worksheet = hazards.generate_worksheet(model, args.responsibility)
        table = reporting.worksheet_table(model, worksheet)
        renderer = (reporting.table_to_markdown if args.format == "md"
                    else reporting.table_to_csv)
        stdout.write(renderer(table))
        return 0

    if args.command == "mitigations":
        model = _load(args.file)
        stubs = hazards.derive_mitigations(
            model, args.responsibility,
            threshold=Severity.from_token(args.threshold))
        stdout.write(print_requirements(stubs))
        return 0

    if args.command == "requirements":
        model = _load(args.file)
        records = parse_requirements(args.reqs.read_text(encoding="utf-8"),
                                     str(args.reqs))
        if args.report:
            stdout.write(reporting.requirements_report(model, records))
        else:
            reporting.check_traces(model, records)
            count = len(records)
            stderr.write(f"{count} requirement(s), all traces resolve.\n")
        return 0

    if args.command == "dot":
        model = _load(args.file)
        _emit(reporting.to_dot(model), args.output, stdout)
        return 0

    if args.command == "diff":
        left = _load(args.left)
        right = _load(args.right)
        inconsistencies = analysis.diff_models(left, right)
        stdout.write(reporting.diff_report(inconsistencies, args.format))
        return 1 if inconsistencies else 0

    raise AssertionError(f"unhandled command {args.command!r}")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
