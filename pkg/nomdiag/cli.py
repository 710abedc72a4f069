"""Command-line front end."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from dotenv import load_dotenv

from nomdiag import services
from nomdiag.constants import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_SEED,
    EXIT_BUDGET,
    EXIT_NOT_EQUAL,
    EXIT_OK,
    EXIT_PARSE_ERROR,
    RULE_SAMPLES,
)
from nomdiag.errors import NomdiagError
from nomdiag.logging_setup import configure_logging
from nomdiag.schemas import OrdSemModel, semmap_to_json
from nomdiag.semantics import SemMap
from nomdiag.smt import Theory

logger = logging.getLogger(__name__)


def _read(path: str) -> str:
    """File contents, or standard input for ``-``."""
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _workspace(args: argparse.Namespace) -> services.Workspace:
    signature = _read(args.signature) if args.signature else None
    return services.Workspace.create(args.theory, args.calculus, signature)


def _names(text: Optional[str]) -> Optional[list[str]]:
    if text is None:
        return None
    return [a.strip() for a in text.split(",") if a.strip()]


# ---- Commands ----


def cmd_check(args: argparse.Namespace) -> int:
    dom, cod = services.check(_read(args.file), _workspace(args))
    print(f"{dom} -> {cod}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    value = services.evaluate(_read(args.file), _workspace(args))
    if isinstance(value, SemMap):
        print(semmap_to_json(value))
    else:
        print(OrdSemModel.from_ordsem(value).model_dump_json())
    return EXIT_OK


def cmd_normalize(args: argparse.Namespace) -> int:
    print(services.format_term(services.normalize(_read(args.file), _workspace(args))))
    return EXIT_OK


def cmd_eq(args: argparse.Namespace) -> int:
    outcome = services.equal(
        _read(args.left),
        _read(args.right),
        _workspace(args),
        derive=args.derive,
        max_depth=args.depth,
        max_nodes=args.nodes,
    )
    print(outcome.verdict)
    if args.derive:
        for line in outcome.lines() or []:
            print(line)
    if outcome.verdict == services.NOT_EQUAL:
        return EXIT_NOT_EQUAL
    if outcome.verdict == services.BUDGET_EXHAUSTED or (args.derive and outcome.derivation is None):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_translate(args: argparse.Namespace) -> int:
    term = services.translate(_read(args.file), args.dir, _workspace(args), _names(args.inputs), _names(args.outputs))
    print(services.format_term(term))
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    sys.stdout.write(services.render(_read(args.file), _workspace(args)))
    return EXIT_OK


def cmd_subst(args: argparse.Namespace) -> int:
    print(",".join(services.substitute(_read(args.file), args.apply)))
    return EXIT_OK


def cmd_soundness(args: argparse.Namespace) -> int:
    report = services.soundness(args.theory, samples=args.samples, seed=args.seed)
    for entry in report.entries:
        print(f"{entry.rule} samples={entry.samples} skipped={entry.skipped} failures={entry.failures}")
        if entry.counterexample:
            print(f"  counterexample: {entry.counterexample}")
    print(f"theory={report.theory.value} rules={len(report.entries)} failures={report.failures}")
    return EXIT_OK if report.ok else EXIT_NOT_EQUAL


# ---- Argument parsing ----


def _theory(text: str) -> Theory:
    try:
        return Theory.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_workspace(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theory", type=_theory, default=Theory.FREE, help="B I S F P R, nB .. nR, or free")
    parser.add_argument("--calculus", choices=["nmt", "smt"], help="defaults to the theory's calculus")
    parser.add_argument("--signature", help="file of 'label : m -> n' lines for the free theory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nomdiag", description="Ordered and nominal string diagrams.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    commands: list[tuple[str, str, Callable[[argparse.Namespace], int]]] = [
        ("check", "print the interfaces of a term", cmd_check),
        ("eval", "print the denotation as JSON", cmd_eval),
        ("normalize", "print the canonical form", cmd_normalize),
        ("render", "print DOT source", cmd_render),
    ]
    for name, help_text, handler in commands:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="term file, or - for stdin")
        _add_workspace(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("eq", help="decide equality of two terms")
    p.add_argument("left")
    p.add_argument("right")
    _add_workspace(p)
    p.add_argument("--derive", action="store_true", help="print a rewrite derivation")
    p.add_argument("--depth", type=int, default=None, help=f"search depth (default {DEFAULT_MAX_DEPTH})")
    p.add_argument("--nodes", type=int, default=None, help="search node budget")
    p.set_defaults(handler=cmd_eq)

    p = sub.add_parser("translate", help="translate between the calculi")
    p.add_argument("file")
    p.add_argument("--dir", choices=["nom", "ord"], required=True)
    p.add_argument("--in", dest="inputs", help="comma-separated input names for --dir nom")
    p.add_argument("--out", dest="outputs", help="comma-separated output names for --dir nom")
    _add_workspace(p)
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser("subst", help="apply a substitution to a list of names")
    p.add_argument("file")
    p.add_argument("--apply", required=True, help="comma-separated names")
    p.set_defaults(handler=cmd_subst)

    p = sub.add_parser("soundness", help="check the built-in rules of a theory")
    p.add_argument("--theory", type=_theory, required=True)
    p.add_argument("--samples", type=int, default=RULE_SAMPLES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"sampler seed (default {DEFAULT_SEED})")
    p.set_defaults(handler=cmd_soundness)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else None, stream=sys.stderr)
    try:
        return args.handler(args)
    except NomdiagError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR


if __name__ == "__main__":
    sys.exit(main())
