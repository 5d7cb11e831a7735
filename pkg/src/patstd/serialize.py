"""Structured output for proofs, justifications and sequences.

Every proof node prints as ``(Rule child ...)``.  Terms and patterns appear
as ``[...]`` since the concrete syntax never uses square brackets, and
substitution proofs as ``(subst (x proof) ...)``.  The JSON form mirrors the
same tree: ``{"rule": ..., "source": ..., "target": ..., <fields>}``.
"""

from __future__ import annotations

import dataclasses
import json

from .head import ByHApp1, ByHBeta, ByHPat, ByPat1, ByPat2, ByPatHead
from .parser import show_pattern, show_term
from .reduction import StepRecord, show_position
from .syntax import Pattern, Term, format_subst

_JUSTIFICATIONS = {
    ByHApp1: "HApp1",
    ByHBeta: "HBeta",
    ByHPat: "HPat",
    ByPatHead: "PatHead",
    ByPat1: "Pat1",
    ByPat2: "Pat2",
}


def rule_name(node) -> str:
    name = _JUSTIFICATIONS.get(type(node))
    return name if name is not None else node.rule


def _children(node) -> list[tuple[str, object]]:
    from .development import SubstDevProof

    if isinstance(node, SubstDevProof):
        return list(node.proofs)
    return [(f.name, getattr(node, f.name)) for f in dataclasses.fields(node)]


def _is_node(obj) -> bool:
    return type(obj) in _JUSTIFICATIONS or (dataclasses.is_dataclass(obj) and hasattr(obj, "rule"))


# -- S-expressions ----------------------------------------------------------


def _sexpr_parts(obj) -> tuple[str, list]:
    """Head symbol and child items (strings or nested parts)."""
    from .development import SubstDevProof

    if isinstance(obj, SubstDevProof):
        return "subst", [(x, [_sexpr_tree(p)]) for x, p in obj.proofs]
    return rule_name(obj), [_sexpr_tree(v) for _, v in _children(obj)]


def _sexpr_tree(obj):
    if isinstance(obj, Term):
        return f"[{show_term(obj)}]"
    if isinstance(obj, Pattern):
        return f"[{show_pattern(obj)}]"
    if isinstance(obj, dict):
        return format_subst(obj)
    if isinstance(obj, StepRecord):
        return ("step", [f"[{show_term(obj.source)}]", show_position(obj.position), f"[{show_term(obj.result)}]"])
    if isinstance(obj, (tuple, list)):
        return ("list", [_sexpr_tree(x) for x in obj])
    if obj is None:
        return "nil"
    return _sexpr_parts(obj)


def _flat(tree) -> str:
    if isinstance(tree, str):
        return tree
    head, items = tree
    return "(" + " ".join([head] + [_flat(i) for i in items]) + ")"


def _render(tree, indent: int, width: int) -> list[str]:
    pad = " " * indent
    flat = _flat(tree)
    if isinstance(tree, str) or len(flat) + indent <= width:
        return [pad + flat]
    head, items = tree
    lines = [f"{pad}({head}"]
    for item in items:
        lines += _render(item, indent + 2, width)
    lines[-1] += ")"
    return lines


def to_sexpr(obj, width: int = 80) -> str:
    """Render a proof (or justification, step, list of either) as an S-expression."""
    return "\n".join(_render(_sexpr_tree(obj), 0, width))


# -- JSON -------------------------------------------------------------------


def to_data(obj):
    """A JSON-ready mirror of ``obj``."""
    from .development import SubstDevProof

    if isinstance(obj, Term):
        return show_term(obj)
    if isinstance(obj, Pattern):
        return show_pattern(obj)
    if isinstance(obj, SubstDevProof):
        return {x: to_data(p) for x, p in obj.proofs}
    if isinstance(obj, dict):
        return {x: to_data(t) for x, t in sorted(obj.items())}
    if isinstance(obj, StepRecord):
        return {
            "source": show_term(obj.source),
            "position": show_position(obj.position),
            "result": show_term(obj.result),
        }
    if isinstance(obj, (tuple, list)):
        return [to_data(x) for x in obj]
    if obj is None or isinstance(obj, (str, int, bool)):
        return obj
    if _is_node(obj):
        out = {"rule": rule_name(obj)}
        if hasattr(obj, "source") and hasattr(obj, "target"):
            out["source"] = show_term(obj.source)
            out["target"] = show_term(obj.target)
        for name, value in _children(obj):
            out[name] = to_data(value)
        return out
    if dataclasses.is_dataclass(obj):
        return {f.name: to_data(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(obj, indent: int | None = 2) -> str:
    return json.dumps(to_data(obj), indent=indent)
