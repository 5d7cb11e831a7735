"""Command-line front end.

Exit codes: 0 on success, 1 on a negative verdict (no match, no step, not a
development, not standard, a failed property), 2 on parse or usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import sys
from typing import Optional, Sequence

from .development import (
    HSplitter,
    ProofError,
    is_development,
    is_internal_development,
    is_internal_development_p,
)
from .head import (
    head_reduce_star,
    head_step_record,
    pattern_head_reduce_star,
    pattern_head_step_record,
    show_justification,
    head_step,
    pattern_head_step,
)
from .matching import MatchPreconditionError, match_pattern
from .oracle import UniverseConfig, enumerate_patterns, enumerate_terms
from .parser import ParseError, parse_pattern, parse_sequence, parse_term, show_pattern, show_term
from .reduction import PositionError, Strategy, one_step_reducts, parse_position, reduce_fuelled, show_position, step_at
from .serialize import to_data, to_sexpr
from .standard import check_standard, standardise_reduction
from .syntax import alpha_eq, format_subst

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad input: reported on stderr with exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class _Out:
    """Collects either text lines or one JSON document."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.lines: list[str] = []
        self.data: dict = {}

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def render(self) -> str:
        if self.as_json:
            return json.dumps(self.data, indent=2) + "\n"
        return "".join(line + "\n" for line in self.lines)


# -- input helpers ----------------------------------------------------------


def _read_sequence(arg: str) -> list:
    """A sequence from a file, from stdin (``-``), or inline with ``;`` separators."""
    if arg == "-":
        text = sys.stdin.read()
    elif os.path.isfile(arg):
        try:
            with open(arg, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {arg}: {exc}") from None
    else:
        text = arg
    terms = parse_sequence(text)
    if not terms:
        raise UsageError("empty sequence")
    return terms


def _positions_between(terms: Sequence) -> list:
    positions = []
    for i, (a, b) in enumerate(zip(terms, terms[1:])):
        for pos, r in one_step_reducts(a):
            if alpha_eq(r, b):
                positions.append(pos)
                break
        else:
            raise UsageError(f"term {i + 2} is not a one-step reduct of term {i + 1}")
    return positions


def _config(args) -> UniverseConfig:
    kwargs = {}
    if args.consts is not None:
        kwargs["constants"] = tuple(c for c in args.consts.split(",") if c)
    if args.vars is not None:
        kwargs["variables"] = tuple(v for v in args.vars.split(",") if v)
    if args.max_size is not None:
        kwargs["max_term_size"] = args.max_size
    if getattr(args, "max_chain", None) is not None:
        kwargs["max_chain_length"] = args.max_chain
    if getattr(args, "max_pattern_size", None) is not None:
        kwargs["max_pattern_size"] = args.max_pattern_size
    if getattr(args, "linear", False):
        kwargs["allow_non_linear"] = False
    for c in kwargs.get("constants", ()):
        if not c[:1].isupper():
            raise UsageError(f"constant {c!r} must start with an upper-case letter")
    for v in kwargs.get("variables", ()):
        if not v[:1].islower():
            raise UsageError(f"variable {v!r} must start with a lower-case letter")
    try:
        return UniverseConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- subcommands ------------------------------------------------------------


def _cmd_parse(args, out: _Out) -> int:
    if args.as_pattern:
        p = parse_pattern(args.text)
        out.text(show_pattern(p))
        out.data = {"pattern": show_pattern(p), "vars": sorted(p.fv), "size": p.size}
    else:
        m = parse_term(args.text)
        out.text(show_term(m))
        out.data = {"term": show_term(m), "free": sorted(m.fv), "size": m.size}
    return OK


def _cmd_match(args, out: _Out) -> int:
    p, m = parse_pattern(args.pattern), parse_term(args.term)
    theta = match_pattern(p, m)
    out.data = {"pattern": show_pattern(p), "term": show_term(m), "match": to_data(theta)}
    if theta is None:
        out.text("no match")
        return NEGATIVE
    out.text(format_subst(theta))
    return OK


def _cmd_step(args, out: _Out) -> int:
    m = parse_term(args.term)
    if args.at is not None:
        pos = parse_position(args.at)
        r = step_at(m, pos)
        out.text(show_term(r))
        out.data = {"term": show_term(m), "position": show_position(pos), "result": show_term(r)}
        return OK
    reducts = one_step_reducts(m)
    out.data = {
        "term": show_term(m),
        "reducts": [{"position": show_position(pos), "result": show_term(r)} for pos, r in reducts],
    }
    if not reducts:
        out.text("no redex")
        return NEGATIVE
    for pos, r in reducts:
        out.text(f"{show_position(pos)}: {show_term(r)}")
    return OK


def _cmd_head(args, out: _Out) -> int:
    m = parse_term(args.term)
    found = head_step(m)
    record = head_step_record(m)
    return _report_step(out, m, found, record, None)


def _cmd_phead(args, out: _Out) -> int:
    p, m = parse_pattern(args.pattern), parse_term(args.term)
    found = pattern_head_step(p, m)
    record = pattern_head_step_record(p, m)
    return _report_step(out, m, found, record, p)


def _report_step(out, m, found, record, p) -> int:
    out.data = {"term": show_term(m)}
    if p is not None:
        out.data["pattern"] = show_pattern(p)
    if found is None:
        out.data["result"] = None
        out.text("no head step" if p is None else "no pattern head step")
        return NEGATIVE
    out.data.update(
        result=show_term(found[0]),
        position=show_position(record.position),
        justification=to_data(found[1]),
    )
    out.text(show_term(found[0]))
    out.text(f"position: {show_position(record.position)}")
    out.text(f"justification: {show_justification(found[1])}")
    out.text(to_sexpr(found[1]))
    return OK


def _cmd_trace(args, out: _Out) -> int:
    m = parse_term(args.term)
    if args.fuel < 0:
        raise UsageError("--fuel must be non-negative")
    if args.pattern is not None:
        steps, last, exhausted = pattern_head_reduce_star(parse_pattern(args.pattern), m, args.fuel)
    elif args.strategy == "head":
        steps, last, exhausted = head_reduce_star(m, args.fuel)
    else:
        last, steps, exhausted = reduce_fuelled(m, Strategy.LEFTMOST, args.fuel)
    out.data = {
        "start": show_term(m),
        "steps": to_data(steps),
        "last": show_term(last),
        "exhausted": exhausted,
    }
    out.text(show_term(m))
    for s in steps:
        out.text(f"  -> {show_term(s.result)}    [{show_position(s.position)}]")
    out.text(f"{len(steps)} step(s); " + ("fuel exhausted" if exhausted else "no further step"))
    return OK


def _cmd_devcheck(args, out: _Out) -> int:
    m, n = parse_term(args.source), parse_term(args.target)
    proof = is_development(m, n)
    out.data = {"source": show_term(m), "target": show_term(n), "proof": to_data(proof)}
    if proof is None:
        out.text("not a development")
        return NEGATIVE
    out.text("development")
    out.text(to_sexpr(proof))
    if args.split or args.pattern is not None:
        splitter = HSplitter(proof)
        split = splitter.head() if args.pattern is None else splitter.for_pattern(parse_pattern(args.pattern))
        out.data["split"] = {"steps": to_data(list(split.steps)), "mid": show_term(split.mid), "internal": to_data(split.internal)}
        out.text(f"head steps to {show_term(split.mid)}:")
        for s in split.steps:
            out.text(f"  -> {show_term(s.result)}    [{show_position(s.position)}]")
        out.text(to_sexpr(split.internal))
    return OK


def _cmd_intdevcheck(args, out: _Out) -> int:
    m, n = parse_term(args.source), parse_term(args.target)
    if args.pattern is not None:
        p = parse_pattern(args.pattern)
        proof = is_internal_development_p(p, m, n)
    else:
        proof = is_internal_development(m, n)
    out.data = {"source": show_term(m), "target": show_term(n), "proof": to_data(proof)}
    if args.pattern is not None:
        out.data["pattern"] = args.pattern
    if proof is None:
        out.text("not an internal development")
        return NEGATIVE
    out.text("internal development")
    out.text(to_sexpr(proof))
    return OK


def _cmd_standardise(args, out: _Out) -> int:
    terms = _read_sequence(args.sequence)
    positions = _positions_between(terms)
    seq = standardise_reduction(terms[0], positions)
    out.data = {"input": [show_term(t) for t in terms], "terms": [show_term(t) for t in seq.terms], "proof": to_data(seq.proof)}
    for t in seq.terms:
        out.text(show_term(t))
    if args.proof:
        out.text()
        out.text(to_sexpr(seq.proof))
    return OK


def _cmd_checkstd(args, out: _Out) -> int:
    terms = _read_sequence(args.sequence)
    proof = check_standard(terms)
    out.data = {"terms": [show_term(t) for t in terms], "standard": proof is not None, "proof": to_data(proof)}
    if proof is None:
        out.text("not standard")
        return NEGATIVE
    out.text("standard")
    out.text(to_sexpr(proof))
    return OK


def _cmd_enumerate(args, out: _Out) -> int:
    cfg = _config(args)
    if args.patterns:
        items = [show_pattern(p) for p in enumerate_patterns(cfg)]
    else:
        items = [show_term(t) for t in enumerate_terms(cfg)]
    out.data = {"kind": "patterns" if args.patterns else "terms", "items": items}
    for s in items:
        out.text(s)
    return OK


def _cmd_verify(args, out: _Out) -> int:
    from .verify import verify

    cfg = _config(args)
    progress = None
    if args.progress:
        def progress(done):
            print(f"\r{done} terms checked", end="", file=sys.stderr, flush=True)

    report = verify(cfg, workers=args.workers, progress=progress)
    if args.progress:
        print(file=sys.stderr)
    out.data = {
        "passed": report.passed,
        "terms": report.terms,
        "seconds": round(report.seconds, 1),
        "workers": report.workers,
        "properties": [
            {
                "name": r.name,
                "criterion": r.criterion,
                "checked": r.checked,
                "failed": r.failed,
                "examples": r.examples,
            }
            for r in report.results
        ],
        "criteria": {str(k): v for k, v in report.criterion_verdicts().items()},
    }
    out.text(report.table())
    return OK if report.passed else NEGATIVE


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="structured output")

    parser = _Parser(prog="patstd", description="Pattern calculus: matching, head steps, developments, standardisation.")
    parser.add_argument("--json", action="store_true", help="structured output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(run=fn)
        return p

    p = add("parse", _cmd_parse, "parse and pretty-print a term")
    p.add_argument("text")
    p.add_argument("--as-pattern", action="store_true", help="parse a pattern instead of a term")

    p = add("match", _cmd_match, "match a term against a pattern")
    p.add_argument("pattern")
    p.add_argument("term")

    p = add("step", _cmd_step, "list one-step reducts, or contract at --at")
    p.add_argument("term")
    p.add_argument("--at", help="position such as root or arg.fun")

    p = add("head", _cmd_head, "the head step, with justification")
    p.add_argument("term")

    p = add("phead", _cmd_phead, "the pattern head step, with justification")
    p.add_argument("term")
    p.add_argument("--pattern", required=True)

    p = add("trace", _cmd_trace, "reduce step by step")
    p.add_argument("term")
    p.add_argument("--fuel", type=int, default=1000)
    p.add_argument("--strategy", choices=("head", "leftmost"), default="head")
    p.add_argument("--pattern", help="follow pattern head steps for this pattern")

    p = add("devcheck", _cmd_devcheck, "decide SOURCE |> TARGET and print the proof")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--split", action="store_true", help="also print the head/internal split")
    p.add_argument("--pattern", help="split relative to this pattern")

    p = add("intdevcheck", _cmd_intdevcheck, "decide an internal development")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--pattern")

    p = add("standardise", _cmd_standardise, "standardise a reduction sequence")
    p.add_argument("sequence", help="file with one term per line, '-' for stdin, or terms separated by ';'")
    p.add_argument("--proof", action="store_true", help="also print the standardness proof")

    p = add("checkstd", _cmd_checkstd, "check that a sequence is standard")
    p.add_argument("sequence", help="file with one term per line, '-' for stdin, or terms separated by ';'")

    def universe(p, chains: bool):
        p.add_argument("--max-size", type=int)
        p.add_argument("--consts", help="comma-separated, e.g. A,B")
        p.add_argument("--vars", help="comma-separated, e.g. x,y")
        p.add_argument("--max-pattern-size", type=int)
        p.add_argument("--linear", action="store_true", help="linear patterns only")
        if chains:
            p.add_argument("--max-chain", type=int)

    p = add("enumerate", _cmd_enumerate, "list the term (or pattern) universe")
    universe(p, chains=False)
    p.add_argument("--patterns", action="store_true")

    p = add("verify", _cmd_verify, "run the property suite over a universe")
    universe(p, chains=True)
    p.add_argument("--workers", type=int, help="worker processes (default: CPU count)")
    p.add_argument("--progress", action="store_true", help="report progress on stderr")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Run one invocation; returns the exit code and standard output."""
    parser = build_parser()
    buf = io.StringIO()
    try:
        with contextlib.redirect_stdout(buf):
            args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return USAGE, buf.getvalue()
    except SystemExit as exc:  # --help
        return (exc.code if isinstance(exc.code, int) else USAGE), buf.getvalue()
    out = _Out(bool(getattr(args, "json", False)))
    try:
        code = args.run(args, out)
    except (ParseError, PositionError, MatchPreconditionError, UsageError, ProofError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if out.as_json:
            return USAGE, json.dumps({"error": str(exc)}) + "\n"
        return USAGE, ""
    return code, out.render()


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
