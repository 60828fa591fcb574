"""Command-line front end: evaluate expressions over the extended number
line, take derivatives through infinitesimal increments, run the worked
examples, and batch-check identity corpora.

Exit codes: 0 success, 2 usage or parse error, 3 evaluation error,
4 failed claim or failed identity (the report is still printed).
Nothing is written to standard error on success.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, TextIO

from .calculus import DiffResult, derivative_at, product_rule_report
from .core import (
    DEFAULT_PRECISION,
    Classification,
    LCError,
    LCNumber,
    classify,
    standard_part,
)
from .dsl import (
    Expr,
    LexError,
    ParseError,
    RESERVED_WORDS,
    TransferReport,
    evaluate,
    identities_transfer_check,
    parse_text,
)
from .gallery import (
    ChainBroken,
    ellipse_parabola_report,
    infinitesimal_equality_report,
    parallel_lines_report,
    write_parabola_csv,
)
from .report import GalleryReport

__all__ = [
    "CliConfig",
    "load_corpus",
    "main",
    "run",
]

GALLERY_IDS = (
    "parallel_lines",
    "infinitesimal_equality",
    "ellipse_parabola",
    "product_rule",
)

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class CliConfig:
    precision: int = DEFAULT_PRECISION
    format: str = "text"
    seed: int = 0
    bindings: tuple[str, ...] = field(default_factory=tuple)


class UsageError(ValueError):
    """Bad command-line input that is not a DSL parse error."""


def _positive_precision(text: str) -> int:
    value = int(text)
    if value < 2:
        raise argparse.ArgumentTypeError("precision must be at least 2")
    return value


def _seed_value(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-T",
        "--precision",
        type=_positive_precision,
        default=DEFAULT_PRECISION,
        help="relative truncation order (default 16, minimum 2)",
    )
    common.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        help="output format (default text)",
    )
    common.add_argument(
        "--seed",
        type=_seed_value,
        default=0,
        help="sampling seed for transfer checks (default 0)",
    )
    common.add_argument(
        "-b",
        "--bind",
        action="append",
        default=[],
        metavar="NAME=EXPR",
        help="bind a variable; may reference eps, H, and earlier bindings",
    )

    parser = argparse.ArgumentParser(
        prog="lcfield",
        description="exact arithmetic with infinitesimal and infinite quantities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser(
        "eval", parents=[common], help="evaluate an expression"
    )
    p_eval.add_argument("expr", help="expression in the DSL grammar")

    p_diff = sub.add_parser(
        "diff", parents=[common], help="derivative via an infinitesimal increment"
    )
    p_diff.add_argument("expr", help="expression to differentiate")
    p_diff.add_argument("var", help="variable of differentiation")
    p_diff.add_argument("point", type=_rational, help="assignable point, e.g. 3 or 5/2")

    p_gallery = sub.add_parser(
        "gallery", parents=[common], help="run a worked example"
    )
    p_gallery.add_argument("example_id", choices=GALLERY_IDS)
    p_gallery.add_argument(
        "--csv",
        metavar="PATH",
        help="write (x0, y0, st_of_lhs) rows; ellipse_parabola only",
    )

    p_transfer = sub.add_parser(
        "transfer", parents=[common], help="check a corpus of claimed identities"
    )
    p_transfer.add_argument("file", help="one 'lhs == rhs' per line, '#' comments")

    sub.add_parser("repl", parents=[common], help="interactive evaluation loop")

    return parser


# -- bindings -----------------------------------------------------------------


def parse_bindings(pairs: Sequence[str]) -> tuple[tuple[str, Expr], ...]:
    """Split and parse name=expr pairs; later pairs may use earlier names."""
    parsed = []
    for pair in pairs:
        name, sep, expr_text = pair.partition("=")
        name = name.strip()
        if not sep:
            raise UsageError(f"binding must look like name=expr, got {pair!r}")
        if not _NAME.match(name) or name in RESERVED_WORDS:
            raise UsageError(f"not a bindable name: {name!r}")
        parsed.append((name, parse_text(expr_text)))
    return tuple(parsed)


def evaluate_bindings(
    bindings: Sequence[tuple[str, Expr]], precision: int
) -> dict[str, LCNumber]:
    env: dict[str, LCNumber] = {}
    for name, expr in bindings:
        env[name] = evaluate(expr, env, precision)
    return env


# -- rendering ----------------------------------------------------------------


def _render_value_text(value: LCNumber, out: TextIO) -> None:
    kind = classify(value)
    print(f"{value.render()} ({kind.value})", file=out)
    if kind is not Classification.INFINITE:
        print(f"shadow: {standard_part(value)}", file=out)


def _diff_json(result: DiffResult) -> dict:
    return {
        "quotient": result.quotient.to_json(),
        "shadow": str(result.shadow),
        "superfluous": result.discarded.to_json(),
    }


# -- subcommands --------------------------------------------------------------


def cmd_eval(args, config: CliConfig, out: TextIO) -> int:
    env = evaluate_bindings(parse_bindings(config.bindings), config.precision)
    value = evaluate(parse_text(args.expr), env, config.precision)
    if config.format == "json":
        print(json.dumps(value.to_json()), file=out)
    else:
        _render_value_text(value, out)
    return 0


def cmd_diff(args, config: CliConfig, out: TextIO) -> int:
    env = evaluate_bindings(parse_bindings(config.bindings), config.precision)
    result = derivative_at(
        parse_text(args.expr), args.var, args.point, env, config.precision
    )
    if config.format == "json":
        print(json.dumps(_diff_json(result)), file=out)
    else:
        print(f"quotient: {result.quotient.render()}", file=out)
        print(f"shadow: {result.shadow}", file=out)
        print(f"superfluous: {result.discarded.render()}", file=out)
    return 0


def _gallery_report(args, config: CliConfig) -> GalleryReport:
    if args.example_id == "parallel_lines":
        return parallel_lines_report(precision=config.precision)
    if args.example_id == "infinitesimal_equality":
        return infinitesimal_equality_report(precision=config.precision)
    if args.example_id == "ellipse_parabola":
        report = ellipse_parabola_report(precision=config.precision)
        if args.csv:
            write_parabola_csv(args.csv, precision=config.precision)
        return report
    return product_rule_report(
        parse_text("x"),
        parse_text("x^2"),
        "x",
        1,
        precision=config.precision,
    )


def cmd_gallery(args, config: CliConfig, out: TextIO) -> int:
    if args.csv and args.example_id != "ellipse_parabola":
        raise UsageError("--csv applies only to ellipse_parabola")
    try:
        report = _gallery_report(args, config)
    except ChainBroken as exc:
        if exc.report is None:
            raise
        report = exc.report
    if config.format == "json":
        print(json.dumps(report.to_json()), file=out)
    else:
        print(report.render_text(), file=out)
    return 0 if report.passed else 4


# -- transfer corpus ----------------------------------------------------------


def load_corpus(path: str) -> list[tuple[int, str, str]]:
    """(line number, lhs text, rhs text) triples from a corpus file.

    Blank lines and '#' comments (whole-line or trailing) are skipped.
    Raises UsageError for a line without exactly one '=='.
    """
    entries = []
    with open(path, encoding="utf-8") as handle:
        for number, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            sides = line.split("==")
            if len(sides) != 2:
                raise UsageError(
                    f"line {number}: expected exactly one '==', got {raw.strip()!r}"
                )
            entries.append((number, sides[0].strip(), sides[1].strip()))
    return entries


def _parse_corpus(
    entries: list[tuple[int, str, str]], err: TextIO
) -> list[tuple[int, str, str, Expr, Expr]] | None:
    """Parse every side, reporting all failures before giving up."""
    parsed = []
    bad = False
    for number, lhs_text, rhs_text in entries:
        try:
            lhs = parse_text(lhs_text)
            rhs = parse_text(rhs_text)
        except (LexError, ParseError) as exc:
            print(f"line {number}: {exc}", file=err)
            bad = True
            continue
        parsed.append((number, lhs_text, rhs_text, lhs, rhs))
    return None if bad else parsed


def _counterexample_text(report: TransferReport) -> str:
    point = report.counterexample["point"]
    where = ", ".join(f"{name} = {value}" for name, value in sorted(point.items()))
    if not where:
        where = "(no variables)"
    return (
        f"counterexample at {where}: "
        f"{report.counterexample['lhs']} != {report.counterexample['rhs']}"
    )


def cmd_transfer(args, config: CliConfig, out: TextIO, err: TextIO) -> int:
    try:
        entries = load_corpus(args.file)
    except UsageError as exc:
        print(exc, file=err)
        return 2
    except OSError as exc:
        print(exc, file=err)
        return 2
    parsed = _parse_corpus(entries, err)
    if parsed is None:
        return 2

    results = []
    for number, lhs_text, rhs_text, lhs, rhs in parsed:
        report = identities_transfer_check(
            lhs, rhs, seed=config.seed, precision=config.precision
        )
        results.append((number, lhs_text, rhs_text, report))

    held = sum(1 for *_rest, r in results if r.identity)
    failed = len(results) - held
    if config.format == "json":
        payload = [
            {
                "line": number,
                "lhs": lhs_text,
                "rhs": rhs_text,
                "report": report.to_json(),
            }
            for number, lhs_text, rhs_text, report in results
        ]
        print(json.dumps(payload), file=out)
    else:
        for number, lhs_text, rhs_text, report in results:
            mark = "PASS" if report.identity else "FAIL"
            print(f"[{mark}] line {number}: {lhs_text} == {rhs_text}", file=out)
            if not report.identity and report.counterexample is not None:
                print(f"       {_counterexample_text(report)}", file=out)
        print(f"checked {len(results)}: {held} hold, {failed} fail", file=out)
    return 4 if failed else 0


# -- repl ---------------------------------------------------------------------

_BIND_LINE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*=(?!=)\s*(.*)$")


def cmd_repl(args, config: CliConfig, out: TextIO, err: TextIO) -> int:
    try:
        import readline  # noqa: F401  (line editing when the host provides it)
    except ImportError:
        pass
    env = evaluate_bindings(parse_bindings(config.bindings), config.precision)
    prompt = "lc> " if sys.stdin.isatty() else ""
    while True:
        try:
            line = input(prompt)
        except EOFError:
            break
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("exit", "quit"):
            break
        try:
            match = _BIND_LINE.match(line)
            if match and match.group(1) not in RESERVED_WORDS:
                name, expr_text = match.group(1), match.group(2)
                value = evaluate(parse_text(expr_text), env, config.precision)
                env[name] = value
                _render_value_text(value, out)
            else:
                value = evaluate(parse_text(line), env, config.precision)
                _render_value_text(value, out)
        except (LexError, ParseError, LCError, UsageError) as exc:
            print(f"error: {exc}", file=err)
    return 0


# -- dispatch -----------------------------------------------------------------


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = CliConfig(
        precision=args.precision,
        format=args.format,
        seed=args.seed,
        bindings=tuple(args.bind),
    )
    out, err = sys.stdout, sys.stderr
    try:
        if args.command == "eval":
            return cmd_eval(args, config, out)
        if args.command == "diff":
            return cmd_diff(args, config, out)
        if args.command == "gallery":
            return cmd_gallery(args, config, out)
        if args.command == "transfer":
            return cmd_transfer(args, config, out, err)
        return cmd_repl(args, config, out, err)
    except (LexError, ParseError, UsageError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    except LCError as exc:
        print(f"error: {exc}", file=err)
        return 3


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
