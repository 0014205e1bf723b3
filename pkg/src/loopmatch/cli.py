"""Command-line front end: ``loopmatch run|eval|repl``."""

from __future__ import annotations

import argparse
import sys
from typing import TextIO

from .reader import bracket_depth
from .session import Interpreter


def _non_negative(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _common(p: argparse.ArgumentParser, top: bool) -> None:
    # subcommands suppress their defaults so flags given before the subcommand survive
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--take", type=_non_negative, metavar="N", default=default(None),
                   help="print at most N elements of each collection")
    p.add_argument("--no-prelude", action="store_true", default=default(False),
                   help="start without the standard prelude")
    p.add_argument("--trace", action="store_true", default=default(False),
                   help="print per-sweep search statistics to stderr")
    p.add_argument("--dump-ast", action="store_true", default=default(False),
                   help="print each parsed form to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loopmatch",
                                     description="Pattern-matching language with loop patterns.")
    parser.add_argument("--eval", metavar="EXPR", dest="eval_text",
                        help="evaluate EXPR and exit (same as the eval command)")
    _common(parser, top=True)
    sub = parser.add_subparsers(dest="command")
    p = sub.add_parser("run", help="run a program file")
    p.add_argument("file")
    _common(p, top=False)
    p = sub.add_parser("eval", help="evaluate one expression")
    p.add_argument("expr")
    _common(p, top=False)
    p = sub.add_parser("repl", help="interactive session")
    _common(p, top=False)
    return parser


def main(argv: list[str] | None = None, stdin: TextIO | None = None,
         stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None and args.eval_text is None:
        parser.print_help(stderr)
        return 2
    try:
        interp = Interpreter(prelude=not args.no_prelude)
    except Exception as e:  # a broken prelude is fatal
        stderr.write(f"loopmatch: {e}\n")
        return 1
    opts = dict(out=stdout, err=stderr, take=args.take, trace=args.trace, dump_ast=args.dump_ast)
    if args.command == "run":
        try:
            with open(args.file, encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            stderr.write(f"loopmatch: cannot read {args.file}: {e.strerror}\n")
            return 1
        return 0 if interp.execute(text, source=args.file, **opts) else 1
    if args.command == "eval" or args.command is None:
        text = args.expr if args.command == "eval" else args.eval_text
        return 0 if interp.execute(text, source="<eval>", **opts) else 1
    return repl(interp, stdin, **opts)


def repl(interp: Interpreter, stdin: TextIO, out: TextIO, err: TextIO, **opts) -> int:
    """Read forms until ``:quit`` or end of input; errors are reported and the session goes on."""
    interactive = stdin.isatty()
    buffer = ""
    while True:
        if interactive:
            out.write("... " if buffer else "> ")
            out.flush()
        line = stdin.readline()
        if not line:
            break
        if not buffer:
            cmd = line.strip()
            if cmd == ":quit":
                break
            if cmd.startswith(":load"):
                path = cmd[len(":load"):].strip()
                try:
                    with open(path, encoding="utf-8") as f:
                        text = f.read()
                except OSError as e:
                    err.write(f"cannot read {path}: {e.strerror}\n")
                    continue
                interp.execute(text, out=out, err=err, source=path, **opts)
                continue
            if cmd.startswith(":"):
                err.write(f"unknown command {cmd.split()[0]}\n")
                continue
        buffer += line
        if bracket_depth(buffer) > 0:
            continue
        if buffer.strip():
            try:
                interp.execute(buffer, out=out, err=err, source="<repl>", **opts)
            except KeyboardInterrupt:
                err.write("interrupted\n")
        buffer = ""
    return 0


if __name__ == "__main__":
    sys.exit(main())
