"""Command line: fluence run|export|serve <entry> [--config ...].

Exit codes map the failing stage: parse 2, desugar 3, evaluation 4,
configuration 5.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import to_sexpr
from .desugar import RecBinding, desugar_module
from .document import RunConfig, build_document, export_bundle
from .errors import (
    ConfigError, DesugarError, EvalError, FluenceError, LexError, ParseError,
    ViewError,
)
from .loader import evaluate_program
from .parser import parse_source
from .values import render_value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluence",
        description="run, export or serve a fluence program",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "evaluate a program and print its final value"),
        ("export", "write the literate-execution bundle as JSON"),
        ("serve", "serve the document over HTTP"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("entry", help="program file (.fld)")
        cmd.add_argument("--config", help="config file (default: fluence.json "
                                          "beside the entry)")
        if name == "run":
            cmd.add_argument("--dump-core", action="store_true",
                             help="print the desugared core as s-expressions")
        if name == "export":
            cmd.add_argument("--out", help="bundle output path")
        if name == "serve":
            cmd.add_argument("--port", type=int, help="port (default 8787)")
    return parser


def _dump_core(entry: str) -> None:
    module = parse_source(Path(entry).read_text("utf-8"), entry)
    core = desugar_module(module)
    for binding in core.bindings:
        if isinstance(binding, RecBinding):
            for name, elim in binding.defs:
                print(f"(def {name}\n  {to_sexpr(elim)})")
        else:
            print(f"(val\n  {to_sexpr(binding.expr)})")
    if core.final is not None:
        print(to_sexpr(core.final))


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = RunConfig.load(args.entry, args.config)
            if args.dump_core:
                _dump_core(args.entry)
            result = evaluate_program(config.entry)
            print(render_value(result.value))
            return 0
        if args.command == "export":
            config = RunConfig.load(args.entry, args.config, export_path=args.out)
            out = export_bundle(config)
            print(out)
            return 0
        if args.command == "serve":
            from .server import serve

            config = RunConfig.load(args.entry, args.config, port=args.port)
            document = build_document(config)
            serve(document, config.port)
            return 0
        raise ConfigError(f"unknown command {args.command!r}")
    except (LexError, ParseError) as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    except DesugarError as err:
        print(f"desugar error: {err}", file=sys.stderr)
        return 3
    except (EvalError, ViewError) as err:
        print(f"evaluation error: {err}", file=sys.stderr)
        return 4
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 5
    except FluenceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
