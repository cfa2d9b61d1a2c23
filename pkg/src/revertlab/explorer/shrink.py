"""Counterexample reduction by delta debugging.

A candidate is kept when it re-executes to the same primary violation
signature.  Passes, repeated to a fixpoint:

1. drop transactions together with the choices they drew;
2. drop runs of choices (ddmin over the flat log);
3. lower each remaining choice to the smallest value that still works.

Every candidate is re-executed and its choice list truncated to what was
actually drawn, so the result always replays.
"""
from __future__ import annotations

from ..adversary import ChoiceExhausted
from ..models import make_model
from ..trace import Trace, violation_signature
from .replay import run_choices, trace_config


class NotAViolation(Exception):
    """The trace does not replay to a violation."""


def _ddmin(items: list, keep) -> list:
    """Classic ddmin: a 1-minimal sublist of ``items`` satisfying ``keep``."""
    n = 2
    while len(items) >= 2:
        chunk = -(-len(items) // n)
        reduced = False
        for i in range(0, len(items), chunk):
            cand = items[:i] + items[i + chunk:]
            if keep(cand):
                items, n, reduced = cand, max(n - 1, 2), True
                break
        if not reduced:
            if n >= len(items):
                break
            n = min(n * 2, len(items))
    if len(items) == 1 and keep([]):
        return []
    return items


class _Oracle:
    def __init__(self, trace: Trace):
        self.model = make_model(trace_config(trace))
        self.cache: dict = {}
        got = self.run(trace.transactions, trace.choices)
        if got is None:
            raise NotAViolation("trace does not replay to a violation")
        self.target = violation_signature(got.violation, got.frames)
        self.best = got

    def run(self, txs, choices) -> Trace | None:
        key = (tuple(txs), tuple(choices))
        if key in self.cache:
            return self.cache[key]
        try:
            trace, _, _, _ = run_choices(self.model, txs, choices)
        except ChoiceExhausted:
            trace = None
        if trace is not None and trace.violation is None:
            trace = None
        self.cache[key] = trace
        return trace

    def keeps(self, txs, choices) -> Trace | None:
        t = self.run(txs, choices)
        if t is None or violation_signature(t.violation, t.frames) != self.target:
            return None
        return t

    def drawn(self, txs, choices) -> list[int]:
        _, _, drawn, _ = run_choices(self.model, txs, choices)
        return drawn


def _smaller(v: int):
    seen = set()
    for c in list(range(min(v, 6))) + [v % 6, v % 2, v % 3, v // 2]:
        if c < v and c not in seen:
            seen.add(c)
            yield c


def shrink(trace: Trace) -> Trace:
    """A trace no larger than ``trace`` with the same primary violation."""
    o = _Oracle(trace)
    cur = o.best
    while True:
        before = (cur.transactions, cur.choices)
        # 1. transactions with their choices
        drawn = o.drawn(cur.transactions, cur.choices)
        units, pos = [], 0
        for tx, d in zip(cur.transactions, drawn):
            units.append((tx, cur.choices[pos:pos + d]))
            pos += d

        def keep_units(us):
            return o.keeps([u[0] for u in us], [c for u in us for c in u[1]]) is not None

        if units:
            units = _ddmin(units, keep_units)
            cur = o.keeps([u[0] for u in units], [c for u in units for c in u[1]])
        # 2. choices
        txs = list(cur.transactions)
        choices = _ddmin(list(cur.choices), lambda cs: o.keeps(txs, cs) is not None)
        cur = o.keeps(txs, choices)
        # 3. values
        choices = list(cur.choices)
        i = 0
        while i < len(choices):
            for c in _smaller(choices[i]):
                cand = choices[:i] + [c] + choices[i + 1:]
                t = o.keeps(txs, cand)
                if t is not None:
                    cur, choices = t, list(t.choices)
                    break
            i += 1
        if (cur.transactions, cur.choices) == before:
            return cur
