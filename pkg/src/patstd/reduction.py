"""One-step reduction, redex positions and fuelled multi-step reduction."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from .matching import match_raw
from .syntax import Abs, App, Term, apply_subst


class PositionError(ValueError):
    """A position does not denote a redex of the term."""


class Dir(str, enum.Enum):
    FUN = "fun"
    ARG = "arg"
    BODY = "body"


Position = tuple  # of Dir


def show_position(pos: Position) -> str:
    return "root" if not pos else ".".join(d.value for d in pos)


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("", "root", "ε"):
        return ()
    try:
        return tuple(Dir(part) for part in text.split("."))
    except ValueError:
        raise PositionError(f"bad position {text!r}; use dot-separated fun/arg/body or 'root'") from None


@dataclass(frozen=True)
class StepRecord:
    source: Term
    position: Position
    result: Term

    def __str__(self):
        return f"{self.source}  --[{show_position(self.position)}]-->  {self.result}"


def contract(redex: Term) -> Optional[Term]:
    """Contractum of ``(\\p.M) N`` when ``N`` matches ``p``, else ``None``."""
    if isinstance(redex, App) and isinstance(redex.fun, Abs):
        theta = match_raw(redex.fun.binder, redex.arg)
        if theta is not None:
            return apply_subst(theta, redex.fun.body)
    return None


def is_redex(term: Term) -> bool:
    return (
        isinstance(term, App)
        and isinstance(term.fun, Abs)
        and match_raw(term.fun.binder, term.arg) is not None
    )


def _positions(term: Term, prefix: Position) -> Iterator[Position]:
    if is_redex(term):
        yield prefix
    if isinstance(term, App):
        yield from _positions(term.fun, prefix + (Dir.FUN,))
        yield from _positions(term.arg, prefix + (Dir.ARG,))
    elif isinstance(term, Abs):
        yield from _positions(term.body, prefix + (Dir.BODY,))


def redex_positions(term: Term) -> list[Position]:
    """All redex positions, in left-to-right preorder."""
    return list(_positions(term, ()))


def subterm_at(term: Term, pos: Position) -> Term:
    for d in pos:
        if d is Dir.FUN and isinstance(term, App):
            term = term.fun
        elif d is Dir.ARG and isinstance(term, App):
            term = term.arg
        elif d is Dir.BODY and isinstance(term, Abs):
            term = term.body
        else:
            raise PositionError(f"position {show_position(pos)} is not valid here")
    return term


def replace_at(term: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    d, rest = pos[0], pos[1:]
    if d is Dir.FUN and isinstance(term, App):
        return App(replace_at(term.fun, rest, new), term.arg)
    if d is Dir.ARG and isinstance(term, App):
        return App(term.fun, replace_at(term.arg, rest, new))
    if d is Dir.BODY and isinstance(term, Abs):
        return Abs(term.binder, replace_at(term.body, rest, new))
    raise PositionError(f"position {show_position(pos)} is not valid here")


def step_at(term: Term, pos: Position) -> Term:
    """Contract the redex at ``pos``."""
    reduct = contract(subterm_at(term, pos))
    if reduct is None:
        raise PositionError(f"no redex at position {show_position(pos)} of {term}")
    return replace_at(term, pos, reduct)


def one_step_reducts(term: Term) -> list[tuple[Position, Term]]:
    return [(pos, step_at(term, pos)) for pos in redex_positions(term)]


class Strategy(str, enum.Enum):
    LEFTMOST = "leftmost"
    HEAD = "head"


def reduce_fuelled(term: Term, strategy: Strategy, fuel: int) -> tuple[Term, list[StepRecord], bool]:
    """Apply at most ``fuel`` steps of ``strategy``.

    Returns the last term, the steps taken and whether fuel ran out while a
    step was still available.
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    from .head import head_step_record

    steps = []
    while True:
        if strategy is Strategy.HEAD:
            record = head_step_record(term)
        else:
            positions = redex_positions(term)
            record = StepRecord(term, positions[0], step_at(term, positions[0])) if positions else None
        if record is None:
            return term, steps, False
        if len(steps) == fuel:
            return term, steps, True
        steps.append(record)
        term = record.result
