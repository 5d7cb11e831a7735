"""Head steps and pattern-relative preferred steps.

A head step of ``(\\p.M) N`` contracts the whole term when ``N`` matches
``p``; otherwise it is the step inside ``N`` that ``p`` needs in order to get
closer to a match.  Both relations are deterministic, so they are computed as
partial functions returning the reduct together with its justification tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .matching import match_raw
from .reduction import Dir, Position, StepRecord
from .syntax import Abs, App, PApp, Pattern, PVar, Term, apply_subst, format_subst, is_data_term


@dataclass(frozen=True)
class ByHApp1:
    inner: "HeadJustification"


@dataclass(frozen=True)
class ByHBeta:
    theta: dict

    def __hash__(self):
        return hash(tuple(sorted(self.theta)))


@dataclass(frozen=True)
class ByHPat:
    inner: "PatJustification"


@dataclass(frozen=True)
class ByPatHead:
    inner: "HeadJustification"


@dataclass(frozen=True)
class ByPat1:
    inner: "PatJustification"


@dataclass(frozen=True)
class ByPat2:
    inner: "PatJustification"
    left_match: dict

    def __hash__(self):
        return hash((self.inner, tuple(sorted(self.left_match))))


HeadJustification = Union[ByHApp1, ByHBeta, ByHPat]
PatJustification = Union[ByPatHead, ByPat1, ByPat2]


def head_step(term: Term) -> Optional[tuple[Term, HeadJustification]]:
    """The unique head reduct of ``term`` with its justification, or ``None``."""
    if not isinstance(term, App):
        return None
    fun, arg = term.fun, term.arg
    if isinstance(fun, Abs):
        theta = match_raw(fun.binder, arg)
        if theta is not None:
            return apply_subst(theta, fun.body), ByHBeta(theta)
        inner = pattern_head_step(fun.binder, arg)
        if inner is None:
            return None
        return App(fun, inner[0]), ByHPat(inner[1])
    inner = head_step(fun)
    if inner is None:
        return None
    return App(inner[0], arg), ByHApp1(inner[1])


def pattern_head_step(p: Pattern, term: Term) -> Optional[tuple[Term, PatJustification]]:
    """The preferred step of ``term`` towards matching ``p``, or ``None``.

    Variable patterns never need a step.  A term that already matches ``p``
    has no such step either.
    """
    if isinstance(p, PVar):
        return None
    head = head_step(term)
    if head is not None:
        return head[0], ByPatHead(head[1])
    if isinstance(p, PApp) and isinstance(term, App) and is_data_term(term.fun):
        left = match_raw(p.head, term.fun)
        if left is None:
            inner = pattern_head_step(p.head, term.fun)
            if inner is not None:
                return App(inner[0], term.arg), ByPat1(inner[1])
        else:
            inner = pattern_head_step(p.arg, term.arg)
            if inner is not None:
                return App(term.fun, inner[0]), ByPat2(inner[1], left)
    return None


def justification_position(just) -> Position:
    match just:
        case ByHBeta():
            return ()
        case ByHApp1(inner) | ByPat1(inner):
            return (Dir.FUN,) + justification_position(inner)
        case ByHPat(inner) | ByPat2(inner, _):
            return (Dir.ARG,) + justification_position(inner)
        case ByPatHead(inner):
            return justification_position(inner)
    raise TypeError(just)


def show_justification(just) -> str:
    match just:
        case ByHBeta(theta):
            return f"HBeta {format_subst(theta)}"
        case ByHApp1(inner):
            return f"HApp1({show_justification(inner)})"
        case ByHPat(inner):
            return f"HPat({show_justification(inner)})"
        case ByPatHead(inner):
            return f"PatHead({show_justification(inner)})"
        case ByPat1(inner):
            return f"Pat1({show_justification(inner)})"
        case ByPat2(inner, left):
            return f"Pat2({show_justification(inner)}; left {format_subst(left)})"
    raise TypeError(just)


def head_step_record(term: Term) -> Optional[StepRecord]:
    step = head_step(term)
    if step is None:
        return None
    return StepRecord(term, justification_position(step[1]), step[0])


def pattern_head_step_record(p: Pattern, term: Term) -> Optional[StepRecord]:
    step = pattern_head_step(p, term)
    if step is None:
        return None
    return StepRecord(term, justification_position(step[1]), step[0])


def _iterate(next_record, term: Term, fuel: int):
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    records = []
    while True:
        record = next_record(term)
        if record is None:
            return records, term, False
        if len(records) == fuel:
            return records, term, True
        records.append(record)
        term = record.result


def head_reduce_star(term: Term, fuel: int) -> tuple[list[StepRecord], Term, bool]:
    """Iterate head steps; returns the steps, the final term and whether fuel ran out."""
    return _iterate(head_step_record, term, fuel)


def pattern_head_reduce_star(p: Pattern, term: Term, fuel: int) -> tuple[list[StepRecord], Term, bool]:
    return _iterate(lambda t: pattern_head_step_record(p, t), term, fuel)
