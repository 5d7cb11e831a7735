"""Concrete syntax: tokenizer, recursive-descent parser and pretty printer.

    term    ::= '\\' pattern '.' term | atom+
    atom    ::= var | const | '(' term ')'
    pattern ::= patom+            (left-associative; the head must be data)
    patom   ::= var | const | '(' pattern ')'

``λ`` is accepted as a synonym of ``\\``.  A trailing abstraction may appear
unparenthesised as the last argument of an application (``A \\x.x``).
"""

from __future__ import annotations

import re

from .syntax import Abs, App, Const, PApp, PConst, Pattern, PVar, Term, Var, is_constant_name


class ParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[\\λ.()]))")


def tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].lstrip()[:1]!r} at offset {pos}")
        tok = m.group("ident") or m.group("sym")
        tokens.append("\\" if tok == "λ" else tok)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input" + (f", expected {expected!r}" if expected else ""))
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def done(self):
        if self.peek() is not None:
            raise ParseError(f"unexpected {self.peek()!r} after end of term")

    def term(self) -> Term:
        if self.peek() == "\\":
            return self.abstraction()
        items = []
        while True:
            tok = self.peek()
            if tok is None or tok in (")", "."):
                break
            if tok == "\\":
                items.append(self.abstraction())
                break
            items.append(self.atom())
        if not items:
            raise ParseError("expected a term" + (f", found {self.peek()!r}" if self.peek() else ""))
        out = items[0]
        for item in items[1:]:
            out = App(out, item)
        return out

    def abstraction(self) -> Term:
        self.take("\\")
        binder = self.pattern(stop=".")
        self.take(".")
        return Abs(binder, self.term())

    def atom(self) -> Term:
        tok = self.take()
        if tok == "(":
            inner = self.term()
            self.take(")")
            return inner
        if tok in (")", ".", "\\"):
            raise ParseError(f"unexpected {tok!r}")
        return Const(tok) if is_constant_name(tok) else Var(tok)

    def pattern(self, stop: str) -> Pattern:
        items = []
        while self.peek() not in (stop, None):
            items.append(self.pattern_atom())
        if not items:
            raise ParseError("expected a pattern")
        out = items[0]
        if len(items) > 1 and isinstance(out, PVar):
            raise ParseError(f"pattern head {out.name!r} is a variable; compound patterns must start with a constant")
        for item in items[1:]:
            out = PApp(out, item)
        return out

    def pattern_atom(self) -> Pattern:
        tok = self.take()
        if tok == "(":
            inner = self.pattern(stop=")")
            self.take(")")
            return inner
        if tok in (")", ".", "\\"):
            raise ParseError(f"unexpected {tok!r} in pattern")
        return PConst(tok) if is_constant_name(tok) else PVar(tok)


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    term = parser.term()
    parser.done()
    return term


def parse_pattern(text: str) -> Pattern:
    parser = _Parser(text)
    p = parser.pattern(stop=None)
    parser.done()
    return p


def parse_sequence(text: str) -> list[Term]:
    """One term per non-blank line; ``;`` also separates terms."""
    terms = []
    for line in text.splitlines():
        for chunk in line.split(";"):
            if chunk.strip() and not chunk.strip().startswith("#"):
                terms.append(parse_term(chunk))
    return terms


def show_pattern(p: Pattern) -> str:
    match p:
        case PVar(name) | PConst(name):
            return name
        case PApp(head, arg):
            right = f"({show_pattern(arg)})" if isinstance(arg, PApp) else show_pattern(arg)
            return f"{show_pattern(head)} {right}"
    raise TypeError(p)


def _show_binder(p: Pattern) -> str:
    return f"({show_pattern(p)})" if isinstance(p, PApp) else show_pattern(p)


def show_term(term: Term) -> str:
    match term:
        case Var(name) | Const(name):
            return name
        case Abs(binder, body):
            return f"\\{_show_binder(binder)}.{show_term(body)}"
        case App(fun, arg):
            left = f"({show_term(fun)})" if isinstance(fun, Abs) else show_term(fun)
            right = f"({show_term(arg)})" if isinstance(arg, (App, Abs)) else show_term(arg)
            return f"{left} {right}"
    raise TypeError(term)
