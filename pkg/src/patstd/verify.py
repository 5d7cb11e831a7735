"""Exhaustive property checks over a finite universe, reported as a pass/fail table.

Every property is checked on every instance the universe generates; nothing
is sampled.  The parent streams the term enumeration to worker processes in
batches and merges their tallies in order.
"""

from __future__ import annotations

import gc
import multiprocessing
import os
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import islice
from typing import Callable, Iterable, Iterator, Optional

from .development import (
    DRefl,
    HSplitter,
    check_dev,
    check_int,
    check_pint,
    developments,
    erase,
    internal_developments,
    internal_developments_p,
    is_development,
    is_internal_development_p,
    match_after_dev,
    validate_dev,
    validate_hsplit,
)
from .head import head_step, head_step_record, pattern_head_step, pattern_head_step_record
from .matching import match_raw, match_under_subst
from .oracle import (
    UniverseConfig,
    brute_force_h_split,
    enumerate_patterns,
    enumerate_reduction_chains,
    enumerate_terms,
    head_derivations,
    match_derivations,
    pattern_head_derivations,
    standard_sequences,
)
from .parser import parse_pattern, parse_term, show_term
from .reduction import one_step_reducts, redex_positions, step_at
from .standard import check_standard, postpone, postpone_pattern, standardise_reduction
from .syntax import (
    Abs,
    App,
    PApp,
    PVar,
    Term,
    alpha_eq,
    apply_subst,
    canonical_key,
    is_data_term,
    is_linear,
    pattern_to_term,
    subst_eq,
    subst_vars,
)

# name, acceptance criterion ("" for supporting properties), description
PROPERTIES = [
    ("example-internal-development", "1", "A B ((\\y.y) C) |>int_{(A x) x} A B C via PCDataNo3, and no match"),
    ("example-head-selection", "2", "head step of (\\p.x) N selects R2, root, R1, R1 for the four patterns"),
    ("head-determinism", "3", "at most one head-step derivation, equal to head_step"),
    ("pattern-head-determinism", "3", "at most one p-step derivation, equal to pattern_head_step"),
    ("match-uniqueness", "4", "rule derivations of p << M agree with the matcher and are unique"),
    ("match-minimality", "4", "a match binds exactly the pattern variables"),
    ("match-data-only", "4", "data patterns only match data terms"),
    ("match-reconstruction", "4", "linear p with match theta: theta(p) = M"),
    ("match-substitution", "4", "p << nu M is nu theta restricted to fv(p)"),
    ("h-development", "5", "h_split replays: head chain, internal proof, endpoints"),
    ("h-split-oracle", "5", "h_split's mid is found by brute force"),
    ("h-development-pattern", "5", "h_split_pattern replays for every pattern"),
    ("postponement", "6", "M |>int N ->h R gives M ->h N' |> R, both replaying"),
    ("standardisation", "7", "standardise_reduction: endpoints, one-step pairs, passes check_standard"),
    ("negative-standard-check", "8", "[(\\x.C)((\\y.y)A); (\\x.C)A; C] rejected, [(\\x.C)((\\y.y)A); C] accepted"),
    ("no-lost-matches", "9", "M |> N and p << M give p << N with nu >> theta"),
    ("no-created-matches", "9", "M |>int_p N and not p << M give not p << N"),
    ("left-pattern-head-lift", "9", "M1 ->p1 N1 gives M1 M2 ->(p1 p2) N1 M2"),
    ("head-substitution", "9", "M ->h N gives nu M ->h nu N"),
    ("pattern-step-substitution", "9", "M ->p N gives nu M ->p nu N"),
    ("development-and-data", "9", "non-data stays non-data under |>int; data stays data under |>"),
    ("head-step-basics", "", "head steps: abstraction in head, no data match, is a one-step reduct"),
    ("pattern-step-no-match", "", "a p-step only exists when p does not match"),
    ("development-soundness", "", "every enumerated development proof checks; DRefl among them"),
    ("step-inclusion", "", "every one-step reduct is a development"),
    ("internal-erases", "", "internal development proofs erase to development proofs"),
    ("postponement-pattern", "", "M |>int_p N ->p R gives M ->p N' |> R"),
    ("check-standard-exactness", "", "check_standard agrees with grammar generation on reduction sequences"),
    ("print-parse-roundtrip", "", "parse(show(M)) is alpha-equal to M"),
]

CRITERIA = {
    "1": "Worked example: internal development via PCDataNo3",
    "2": "Worked example: head selection for p1..p4",
    "3": "Determinism of head and pattern-head steps",
    "4": "Matching metatheory",
    "5": "H-development property (plain and pattern-indexed)",
    "6": "Postponement",
    "7": "End-to-end standardisation",
    "8": "Negative standard-sequence check",
    "9": "Lemma suite",
}


@dataclass
class PropertyResult:
    name: str
    criterion: str
    description: str
    checked: int = 0
    failed: int = 0
    examples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """No failures, and at least one instance (an empty property proves nothing)."""
        return self.checked > 0 and self.failed == 0


@dataclass
class VerifyReport:
    config: UniverseConfig
    results: list
    terms: int
    seconds: float
    workers: int

    def criterion_verdicts(self) -> dict[str, bool]:
        out = {}
        for key in CRITERIA:
            rs = [r for r in self.results if r.criterion == key]
            out[key] = bool(rs) and all(r.passed for r in rs)
        return out

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def table(self) -> str:
        width = max(len(r.name) for r in self.results)
        lines = [f"{'property':<{width}}  crit  {'checked':>10}  {'failed':>7}  verdict"]
        for r in self.results:
            verdict = "PASS" if r.passed else ("FAIL" if r.failed else "EMPTY")
            lines.append(f"{r.name:<{width}}  {r.criterion or '-':>4}  {r.checked:>10}  {r.failed:>7}  {verdict}")
            for ex in r.examples:
                lines.append(f"    e.g. {ex}")
        cfg = self.config
        lines.append(
            f"universe: constants {list(cfg.constants)}, variables {list(cfg.variables)}, "
            f"term size <= {cfg.max_term_size}, pattern size <= {cfg.max_pattern_size}, "
            f"chain length <= {cfg.max_chain_length}; {self.terms} terms; "
            f"{self.seconds:.1f}s on {self.workers} worker(s)"
        )
        return "\n".join(lines)


class _Tally:
    def __init__(self):
        self.checked = Counter()
        self.failed = Counter()
        self.examples = defaultdict(list)

    def ok(self, name: str, cond: bool, detail: Callable[[], str] | str = "") -> None:
        self.checked[name] += 1
        if not cond:
            self._fail(name, detail() if callable(detail) else detail)

    def run(self, name: str, thunk: Callable[[], bool], detail: Callable[[], str] | str = "") -> None:
        """Count ``name`` as passed when ``thunk`` returns true without raising."""
        self.checked[name] += 1
        try:
            good = thunk()
        except Exception as exc:  # a crash is a failed instance, not an aborted run
            self._fail(name, f"{detail() if callable(detail) else detail}: {type(exc).__name__}: {exc}")
            return
        if not good:
            self._fail(name, detail() if callable(detail) else detail)

    def _fail(self, name, text):
        self.failed[name] += 1
        if len(self.examples[name]) < 3:
            self.examples[name].append(text)

    def merge(self, other: "_Tally") -> None:
        self.checked.update(other.checked)
        self.failed.update(other.failed)
        for k, v in other.examples.items():
            room = 3 - len(self.examples[k])
            self.examples[k].extend(v[:room])


# -- context ----------------------------------------------------------------


@dataclass
class _Context:
    cfg: UniverseConfig
    patterns: list
    substitutions: list
    brute_bound: int


def default_substitutions(cfg: UniverseConfig) -> list[dict]:
    """Substitutions used by the substitution-compatibility properties."""
    x = cfg.variables[0]
    y = cfg.variables[1] if len(cfg.variables) > 1 else x + "1"
    a = cfg.constants[0]
    out = [
        {},
        {x: parse_term(a)},
        {x: parse_term(y)},
        {y: parse_term(x)},
        {x: parse_term(y), y: parse_term(x)},
        {x: parse_term(f"{a} {y}")},
        {x: parse_term(f"\\{y}.{y}")},
        {y: parse_term(f"(\\{x}.{x}) {a}")},
    ]
    return out


def _make_context(cfg: UniverseConfig) -> _Context:
    return _Context(cfg, list(enumerate_patterns(cfg)), default_substitutions(cfg), 3 * cfg.max_chain_length)


# -- single-instance worked examples ---------------------------------------


def _example_checks(t: _Tally) -> None:
    def internal_example():
        m, n, p = parse_term("A B ((\\y.y) C)"), parse_term("A B C"), parse_pattern("(A x) x")
        proof = is_internal_development_p(p, m, n)
        check_pint(proof)
        return proof.rule == "PCDataNo3" and match_raw(p, m) is None

    t.run("example-internal-development", internal_example, "A B ((\\y.y) C)")

    def head_example():
        r1, r2 = "((\\z.z) B)", "((\\z.z) (B C))"
        n = f"(A {r1}) {r2}"
        expect = {
            "(A x) (B y)": ("arg", "arg"),
            "(A x) y": (),
            "A (B x) y": ("arg", "fun", "arg"),
            "A (B x) (C y)": ("arg", "fun", "arg"),
        }
        for p, pos in expect.items():
            term = parse_term(f"(\\({p}).x) ({n})")
            record = head_step_record(term)
            if record is None or tuple(d.value for d in record.position) != pos:
                return False
            if len(head_derivations(term)) != 1:
                return False
        return True

    t.run("example-head-selection", head_example, "head selection example")

    def negative():
        bad = [parse_term(s) for s in ("(\\x.C) ((\\y.y) A)", "(\\x.C) A", "C")]
        good = [bad[0], bad[2]]
        return check_standard(bad) is None and check_standard(good) is not None

    t.run("negative-standard-check", negative, "three-term sequence")


# -- per-term checks --------------------------------------------------------


def _show(*items) -> str:
    return " | ".join(str(i) for i in items)


def check_term(m: Term, ctx: _Context, t: _Tally) -> None:
    """Check every property instance rooted at the term ``m``."""
    _check_syntax(m, t)
    _check_head(m, ctx, t)
    _check_matching(m, ctx, t)
    _check_developments(m, ctx, t)
    _check_internal(m, ctx, t)
    _check_chains(m, ctx, t)


def _check_syntax(m, t):
    t.run("print-parse-roundtrip", lambda: alpha_eq(parse_term(show_term(m)), m), lambda: str(m))


def _check_head(m, ctx, t):
    derivs = head_derivations(m)
    found = head_step(m)
    t.ok(
        "head-determinism",
        len(derivs) <= 1 and (found is None) == (not derivs) and (found is None or alpha_eq(found[0], derivs[0][1])),
        lambda: _show(m, derivs),
    )
    if found is not None:
        reducts = [r for _, r in one_step_reducts(m)]
        head_ok = isinstance(m, App) and any(alpha_eq(found[0], r) for r in reducts)
        fun = m
        while isinstance(fun, App):
            fun = fun.fun
        head_ok = head_ok and isinstance(fun, Abs)
        head_ok = head_ok and not any(match_raw(p, m) is not None for p in ctx.patterns if not isinstance(p, PVar))
        t.ok("head-step-basics", head_ok, lambda: str(m))
        for nu in ctx.substitutions:
            t.run(
                "head-substitution",
                lambda: _head_under(nu, m, found[0]),
                lambda: _show(m, nu),
            )
    for p in ctx.patterns:
        pd = pattern_head_derivations(p, m)
        pf = pattern_head_step(p, m)
        t.ok(
            "pattern-head-determinism",
            len(pd) <= 1 and (pf is None) == (not pd) and (pf is None or alpha_eq(pf[0], pd[0][1])),
            lambda: _show(p, m, pd),
        )
        if pf is None:
            continue
        t.ok("pattern-step-no-match", match_raw(p, m) is None, lambda: _show(p, m))
        for nu in ctx.substitutions:
            t.run(
                "pattern-step-substitution",
                lambda: _pattern_head_under(nu, p, m, pf[0]),
                lambda: _show(p, m, nu),
            )
    if isinstance(m, App):
        for p in ctx.patterns:
            if not isinstance(p, PApp):
                continue
            left = pattern_head_step(p.head, m.fun)
            if left is None:
                continue
            whole = pattern_head_step(p, m)
            t.ok(
                "left-pattern-head-lift",
                whole is not None and alpha_eq(whole[0], App(left[0], m.arg)),
                lambda: _show(p, m),
            )


def _head_under(nu, m, n) -> bool:
    found = head_step(apply_subst(nu, m))
    return found is not None and alpha_eq(found[0], apply_subst(nu, n))


def _pattern_head_under(nu, p, m, n) -> bool:
    found = pattern_head_step(p, apply_subst(nu, m))
    return found is not None and alpha_eq(found[0], apply_subst(nu, n))


def _check_matching(m, ctx, t):
    for p in ctx.patterns:
        theta = match_raw(p, m)
        derivs = match_derivations(p, m)
        t.ok(
            "match-uniqueness",
            len(derivs) <= 1 and (theta is None) == (not derivs) and (theta is None or subst_eq(theta, derivs[0])),
            lambda: _show(p, m),
        )
        if theta is None:
            continue
        t.ok("match-minimality", theta.keys() == p.fv, lambda: _show(p, m))
        if not isinstance(p, PVar):
            t.ok("match-data-only", is_data_term(m), lambda: _show(p, m))
        if is_linear(p):
            t.ok(
                "match-reconstruction",
                alpha_eq(apply_subst(theta, pattern_to_term(p)), m),
                lambda: _show(p, m),
            )
        if p.fv & m.fv:
            continue
        for nu in ctx.substitutions:
            if p.fv & subst_vars(nu):
                continue
            t.run("match-substitution", lambda: match_under_subst(p, m, theta, nu) is not None, lambda: _show(p, m, nu))


def _check_developments(m, ctx, t):
    devs = developments(m)
    t.ok("development-soundness", any(isinstance(d, DRefl) for d in devs), lambda: str(m))
    for _, r in one_step_reducts(m):
        t.ok("step-inclusion", is_development(m, r) is not None, lambda: _show(m, r))
    data = is_data_term(m)
    matches = [(p, theta) for p in ctx.patterns if (theta := match_raw(p, m)) is not None]
    for d in devs:
        t.run("development-soundness", lambda: check_dev(d) is None and alpha_eq(d.source, m), lambda: _show(m, d.target))
        if data:
            t.ok("development-and-data", is_data_term(d.target), lambda: _show(m, d.target))
        splitter = HSplitter(d)
        split = None

        def head_split():
            nonlocal split
            split = splitter.head()
            validate_hsplit(split, d)
            return True

        t.run("h-development", head_split, lambda: _show(m, d.target))
        if split is not None:
            t.ok(
                "h-split-oracle",
                any(alpha_eq(split.mid, q) for q in brute_force_h_split(m, d.target, ctx.brute_bound)),
                lambda: _show(m, d.target, split.mid),
            )
        for p in ctx.patterns:
            t.run(
                "h-development-pattern",
                lambda: validate_hsplit(splitter.for_pattern(p), d) is None,
                lambda: _show(p, m, d.target),
            )
        for p, nu in matches:
            t.run("no-lost-matches", lambda: _no_lost(d, p, nu), lambda: _show(p, m, d.target))


def _no_lost(d, p, nu) -> bool:
    theta, sd = match_after_dev(d, p, nu)
    again = match_raw(p, d.target)
    return again is not None and subst_eq(again, theta) and all(
        alpha_eq(x.source, nu[v]) for v, x in sd.proofs
    )


def _check_internal(m, ctx, t):
    non_data = not is_data_term(m)
    for i in internal_developments(m):
        t.run(
            "internal-erases",
            lambda: check_int(i) is None and validate_dev(erase(i), i.source, i.target) is None,
            lambda: _show(m, i.target),
        )
        if non_data:
            t.ok("development-and-data", not is_data_term(i.target), lambda: _show(m, i.target))
        step = head_step_record(i.target)
        if step is not None:
            t.run("postponement", lambda: _postpone_ok(m, i, step), lambda: _show(m, i.target, step.result))
    for p in ctx.patterns:
        if isinstance(p, PVar):
            continue
        matched = match_raw(p, m) is not None
        for pi in internal_developments_p(p, m):
            if not matched:
                t.ok("no-created-matches", match_raw(p, pi.target) is None, lambda: _show(p, m, pi.target))
            step = pattern_head_step_record(p, pi.target)
            if step is not None:
                t.run(
                    "postponement-pattern",
                    lambda: _postpone_pattern_ok(p, m, pi, step),
                    lambda: _show(p, m, pi.target),
                )


def _postpone_ok(m, i, step) -> bool:
    record, dev = postpone(i, step)
    expected = head_step_record(m)
    if expected is None or record.position != expected.position or not alpha_eq(record.result, expected.result):
        return False
    validate_dev(dev, record.result, step.result)
    return True


def _postpone_pattern_ok(p, m, pi, step) -> bool:
    record, dev = postpone_pattern(p, pi, step)
    expected = pattern_head_step_record(p, m)
    if expected is None or record.position != expected.position or not alpha_eq(record.result, expected.result):
        return False
    validate_dev(dev, record.result, step.result)
    return True


def _check_chains(m, ctx, t):
    if not redex_positions(m):
        # the only sequence is [m]
        t.run("standardisation", lambda: _standardise_ok(m, []), lambda: str(m))
        t.run("check-standard-exactness", lambda: _exact(m, [m]), lambda: str(m))
        return
    for chain in enumerate_reduction_chains(m, ctx.cfg.max_chain_length):
        t.run("standardisation", lambda: _standardise_ok(m, chain), lambda: _show(m, chain))
        terms = [m]
        for pos in chain:
            terms.append(step_at(terms[-1], pos))
        t.run("check-standard-exactness", lambda: _exact(m, terms), lambda: _show(*terms))


def _standardise_ok(m, chain) -> bool:
    end = m
    for pos in chain:
        end = step_at(end, pos)
    seq = standardise_reduction(m, chain)
    terms = seq.terms
    if not alpha_eq(terms[0], m) or not alpha_eq(terms[-1], end):
        return False
    for a, b in zip(terms, terms[1:]):
        if not any(alpha_eq(b, r) for _, r in one_step_reducts(a)):
            return False
    return check_standard(terms) is not None


def _exact(m, terms) -> bool:
    key = tuple(canonical_key(x) for x in terms)
    return (check_standard(terms) is not None) == (key in standard_sequences(m, len(terms)))


# -- driver -----------------------------------------------------------------

_WORKER: dict = {}


def _worker_init(cfg: UniverseConfig):
    _WORKER["ctx"] = _make_context(cfg)
    # everything alive now lives until the end of the run: keep the cyclic
    # collector from rescanning it, and let it run less often
    gc.freeze()
    gc.set_threshold(50_000, 20, 100)


def _worker_run(batch: list) -> _Tally:
    ctx = _WORKER["ctx"]
    t = _Tally()
    for m in batch:
        check_term(m, ctx, t)
    return t


def _sized_run(batch: list) -> tuple[int, _Tally]:
    return len(batch), _worker_run(batch)


def _batches(cfg: UniverseConfig, size: int) -> Iterator[list]:
    it = enumerate_terms(cfg)
    while batch := list(islice(it, size)):
        yield batch


def verify(
    cfg: UniverseConfig = UniverseConfig(),
    workers: Optional[int] = None,
    progress: Optional[Callable[[int], None]] = None,
    chunk: int = 2000,
) -> VerifyReport:
    """Run the whole property suite over ``cfg``'s universe.

    Terms are streamed to the workers in batches of ``chunk``; results are
    merged in enumeration order, so the report does not depend on ``workers``.
    """
    start = time.perf_counter()
    workers = workers or os.cpu_count() or 1
    total = _Tally()
    _example_checks(total)
    batches = _batches(cfg, chunk)
    saved = gc.get_threshold()
    if workers == 1:
        _worker_init(cfg)
        pool = None
        results: Iterable = ((len(b), _worker_run(b)) for b in batches)
    else:
        ctx = multiprocessing.get_context("fork") if hasattr(os, "fork") else multiprocessing.get_context()
        pool = ctx.Pool(workers, initializer=_worker_init, initargs=(cfg,))
        results = pool.imap(_sized_run, batches)
    done = 0
    try:
        for n, part in results:
            total.merge(part)
            done += n
            if progress:
                progress(done)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
        else:
            gc.unfreeze()
            gc.set_threshold(*saved)
    terms = done
    out = []
    for name, crit, desc in PROPERTIES:
        out.append(PropertyResult(name, crit, desc, total.checked[name], total.failed[name], total.examples[name]))
    return VerifyReport(cfg, out, terms, time.perf_counter() - start, workers)
