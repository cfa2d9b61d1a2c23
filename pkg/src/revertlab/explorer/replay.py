"""Concrete execution of transaction sequences and trace replay."""
from __future__ import annotations

from collections.abc import Sequence

from ..adversary import ChoiceExhausted, ChoiceSource
from ..config import Config
from ..models import Model, Monitor, make_model, run_transaction
from ..trace import Frame, Trace, Transaction, Violation, primary_violation, violation_signature
from .report import Finding, Report


class ReplayDivergence(Exception):
    """A trace did not re-execute to the recorded frames or violation."""


def run_choices(
    model: Model,
    transactions: Sequence[Transaction],
    choices: Sequence[int] | None = None,
    seed: int | None = None,
    stop_on_violation: bool = False,
) -> tuple[Trace, object, list[int], int]:
    """Like :func:`execute` but never complains about unused choices.

    Also returns how many choices each transaction drew and how many
    recorded choices were left over.
    """
    cs = ChoiceSource.exhaustive(choices or ()) if seed is None else ChoiceSource.random(seed)
    monitor = Monitor(model)
    state = model.initial_state()
    done: list[Transaction] = []
    drawn: list[int] = []
    for tx in transactions:
        before, used = len(monitor.violations), cs.draws
        _, _, state = run_transaction(model, state, tx, cs, monitor)
        done.append(tx)
        drawn.append(cs.draws - used)
        if stop_on_violation and len(monitor.violations) > before:
            break
    trace = Trace(
        model=model.cfg.model,
        config=model.cfg.echo(),
        transactions=done,
        choices=list(cs.log),
        frames=monitor.frames,
        violation=primary_violation(monitor.violations, monitor.frames),
    )
    left = cs.remaining() if cs.is_exhaustive else 0
    return trace, state, drawn, left


def execute(
    model: Model | Config,
    transactions: Sequence[Transaction],
    choices: Sequence[int] | None = None,
    seed: int | None = None,
    stop_on_violation: bool = False,
) -> tuple[Trace, object]:
    """Run ``transactions`` from the model's initial state.

    Choices come from the given list (exhaustive mode) or from a seeded
    generator; either way the trace records the naturals actually drawn.
    Returns the trace and the final state.  Raises ``ChoiceExhausted`` when
    a recorded list is too short and ``ReplayDivergence`` when it is too
    long.
    """
    if isinstance(model, Config):
        model = make_model(model)
    trace, state, _, left = run_choices(model, transactions, choices, seed, stop_on_violation)
    if left:
        raise ReplayDivergence(f"{left} recorded choices were never drawn")
    return trace, state


def tx_frames(frames: list[Frame]) -> list[int]:
    """Executing frames per transaction of a frame list."""
    out: list[int] = []
    for f in frames:
        if f.depth == 0:
            out.append(0)
        if f.gas_in >= 1:
            out[-1] += 1
    return out


def trace_config(trace: Trace) -> Config:
    return Config.from_dict(dict(trace.config))


def replay(trace: Trace) -> Trace:
    """Re-execute ``trace`` and check it against its own record.

    Every frame must match (same call shape, same state hashes) and the
    primary violation must be the same.  Returns the fresh trace.
    """
    cfg = trace_config(trace)
    if cfg.model != trace.model:
        raise ReplayDivergence(f"trace model {trace.model!r} != config model {cfg.model!r}")
    try:
        fresh, _ = execute(cfg, trace.transactions, trace.choices)
    except ChoiceExhausted as exc:
        raise ReplayDivergence(f"choice log too short: {exc}") from None
    if len(fresh.frames) != len(trace.frames):
        raise ReplayDivergence(
            f"{len(fresh.frames)} frames on replay, {len(trace.frames)} recorded"
        )
    for i, (a, b) in enumerate(zip(fresh.frames, trace.frames)):
        if (a.depth, a.kind, a.method, a.gas_in) != (b.depth, b.kind, b.method, b.gas_in):
            raise ReplayDivergence(f"frame {i}: call shape differs")
        if a.state_hash_after != b.state_hash_after:
            raise ReplayDivergence(
                f"frame {i}: state hash {a.state_hash_after} != recorded {b.state_hash_after}"
            )
    if not _same_violation(fresh.violation, trace.violation):
        raise ReplayDivergence(f"violation {fresh.violation} != recorded {trace.violation}")
    return fresh


def _same_violation(a: Violation | None, b: Violation | None) -> bool:
    if a is None or b is None:
        return a is b
    return (a.kind, a.frame, a.site, a.relation) == (b.kind, b.frame, b.site, b.relation)


def replay_report(trace: Trace) -> Report:
    """Replay ``trace`` and summarise it as a one-trace report."""
    fresh = replay(trace)
    report = Report(mode="replay", config=dict(trace.config), branches=1, states=1)
    per_tx = tx_frames(fresh.frames) or [0]
    report.frames_total = sum(per_tx)
    report.frames_max = max(per_tx)
    if fresh.violation is not None:
        sig = violation_signature(fresh.violation, fresh.frames)
        report.findings.append(Finding(*sig, count=1, trace=fresh))
    return report
