"""Bounded-exhaustive exploration of transaction sequences, level by level.

Level ``i`` runs every transaction of the domain from every state first
committed at level ``i - 1`` (up to address renaming when the model has
that symmetry).  Within a level, :class:`~.search.LevelSearch` walks every
havoc choice.  A sequence that met a violation is reported and not
extended.

Roots of a level are keyed ``(state index, transaction index)`` and every
outcome keeps its least ``(key, choices)`` witness, so splitting roots
across worker processes cannot change the report.
"""
from __future__ import annotations

import multiprocessing
import time
from dataclasses import dataclass, field

from ..config import Config
from ..models import Model, make_model
from ..trace import violation_signature
from .replay import execute
from .report import Finding, Report
from .search import LevelSearch


class BudgetExceeded(Exception):
    """The branch or wall-clock budget ran out; carries the partial report."""

    def __init__(self, report: Report):
        super().__init__("exploration budget exceeded")
        self.report = report


@dataclass
class _Partial:
    commits: dict = field(default_factory=dict)  # orbit -> (key, choices, state)
    firsts: dict = field(default_factory=dict)  # signature -> (key, choices)
    bad_states: dict = field(default_factory=dict)  # signature -> set of orbits
    outcomes: set = field(default_factory=set)  # (orbit, frames, primary signature)
    coverage: dict = field(default_factory=lambda: {"k": set(), "b": set(), "result": set()})
    finished: bool = True

    def merge(self, other: _Partial) -> None:
        for orbit, entry in other.commits.items():
            cur = self.commits.get(orbit)
            if cur is None or entry[:2] < cur[:2]:
                self.commits[orbit] = entry
        for sig, entry in other.firsts.items():
            cur = self.firsts.get(sig)
            if cur is None or entry < cur:
                self.firsts[sig] = entry
        for sig, orbits in other.bad_states.items():
            self.bad_states.setdefault(sig, set()).update(orbits)
        self.outcomes |= other.outcomes
        for k, v in other.coverage.items():
            self.coverage[k] |= v
        self.finished = self.finished and other.finished


def _run_roots(model: Model, frontier, txs, seen, lo, hi, deadline_at) -> _Partial:
    search = LevelSearch(model)
    out = _Partial()

    def on_commit(key, choices, state, frames, primary):
        orbit = model.orbit_key(state)
        out.outcomes.add((orbit, frames, primary))
        if primary is not None:
            out.firsts.setdefault(primary, (key, choices))
            out.bad_states.setdefault(primary, set()).add(orbit)
        elif orbit not in seen and orbit not in out.commits:
            out.commits[orbit] = (key, choices, state)

    n = len(txs)
    roots = ((divmod(r, n), frontier[r // n], txs[r % n]) for r in range(lo, hi))
    deadline = None if deadline_at is None else (lambda: time.monotonic() > deadline_at)
    out.finished = search.run(roots, on_commit, deadline)
    out.coverage = search.coverage
    return out


# state handed to forked workers; set just before the pool is created
_SHARED: tuple = ()


def _worker(bounds: tuple[int, int]) -> _Partial:
    model, frontier, txs, seen, deadline_at = _SHARED
    return _run_roots(model, frontier, txs, seen, bounds[0], bounds[1], deadline_at)


def _split(total: int, pieces: int) -> list[tuple[int, int]]:
    pieces = max(1, min(pieces, total))
    step, extra = divmod(total, pieces)
    out, lo = [], 0
    for i in range(pieces):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def _run_level(model, frontier, txs, seen, total, workers, deadline_at) -> _Partial:
    global _SHARED
    if workers <= 1 or total < 2:
        return _run_roots(model, frontier, txs, seen, 0, total, deadline_at)
    _SHARED = (model, frontier, txs, seen, deadline_at)
    try:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers) as pool:
            parts = pool.map(_worker, _split(total, workers * 4))
    finally:
        _SHARED = ()
    merged = _Partial()
    for p in parts:
        merged.merge(p)
    return merged


def explore(cfg: Config, workers: int | None = None, raise_on_budget: bool = False) -> Report:
    """Explore every sequence of at most ``cfg.max_txs`` transactions."""
    model = make_model(cfg)
    workers = cfg.workers if workers is None else workers
    txs = model.tx_domain()
    deadline_at = None if cfg.time_limit is None else time.monotonic() + cfg.time_limit
    s0 = model.initial_state()
    seen = {model.orbit_key(s0)}
    # (state, transactions so far, choices so far)
    frontier: list[tuple] = [(s0, (), ())]
    report = Report(mode="explore", config=cfg.echo())
    firsts: dict = {}  # signature -> (level, key, choices, transactions, choices so far)
    bad_states: dict = {}
    coverage = {"k": set(), "b": set(), "result": set()}
    complete = True

    for level in range(cfg.max_txs):
        if not frontier:
            break
        total = len(frontier) * len(txs)
        if cfg.max_branches is not None and report.branches + total > cfg.max_branches:
            total = cfg.max_branches - report.branches
            complete = False
        states = [f[0] for f in frontier]
        part = _run_level(model, states, txs, seen, total, workers, deadline_at)
        report.branches += total
        complete = complete and part.finished
        for sig, (key, choices) in part.firsts.items():
            if sig not in firsts:
                fi, ti = key
                _, txs_so_far, ch_so_far = frontier[fi]
                firsts[sig] = (txs_so_far + (txs[ti],), ch_so_far + choices)
        for sig, orbits in part.bad_states.items():
            bad_states.setdefault(sig, set()).update(orbits)
        for k, v in part.coverage.items():
            coverage[k] |= v
        report.frames_total += sum(n for _, n, _ in part.outcomes)
        report.frames_max = max([report.frames_max] + [n for _, n, _ in part.outcomes])
        ordered = sorted(part.commits.items(), key=lambda kv: kv[1][:2])
        nxt = []
        for orbit, ((fi, ti), choices, state) in ordered:
            seen.add(orbit)
            _, txs_so_far, ch_so_far = frontier[fi]
            nxt.append((state, txs_so_far + (txs[ti],), ch_so_far + choices))
        frontier = nxt
        if not complete:
            break

    report.states = len(seen)
    report.complete = complete
    report.coverage = {k: sorted(v) for k, v in coverage.items()}
    for sig, (wtxs, wchoices) in firsts.items():
        trace, _ = execute(model, list(wtxs), list(wchoices))
        got = violation_signature(trace.violation, trace.frames) if trace.violation else None
        if got != sig:
            raise AssertionError(
                f"witness for {sig} replays to {got}: explorer and interpreter disagree"
            )
        report.findings.append(Finding(*sig, count=len(bad_states[sig]), trace=trace))
    report.sort()
    if not complete and raise_on_budget:
        raise BudgetExceeded(report)
    return report
