"""Randomized exploration: random transaction sequences under random havoc.

Every run draws its transactions and a per-run seed from one generator
seeded by ``cfg.seed``, so the whole report is a function of the config.
Each trace stores the naturals its run actually consumed and therefore
replays in exhaustive mode.
"""
from __future__ import annotations

import random

from ..config import Config, ConfigError
from ..models import make_model
from ..trace import violation_signature
from .replay import run_choices, tx_frames
from .report import Finding, Report


def fuzz(cfg: Config, seed: int | None = None, iterations: int | None = None) -> Report:
    """Run ``iterations`` random sequences of 1 to ``cfg.max_txs`` transactions.

    A run stops at its first violating transaction.  Findings are grouped by
    primary violation signature; ``count`` is the number of runs and the
    witness is the earliest one.  ``states`` counts distinct final state
    hashes.
    """
    seed = cfg.seed if seed is None else seed
    iterations = cfg.iterations if iterations is None else iterations
    if iterations < 1:
        raise ConfigError("fuzz needs at least one iteration")
    cfg = cfg.replace(seed=seed, iterations=iterations)
    model = make_model(cfg)
    txs = model.tx_domain()
    rng = random.Random(seed)
    report = Report(mode="fuzz", config=cfg.echo())
    groups: dict = {}
    finals = set()
    for _ in range(iterations):
        seq = [rng.choice(txs) for _ in range(rng.randint(1, cfg.max_txs))]
        run_seed = rng.getrandbits(64)
        trace, state, _, _ = run_choices(model, seq, seed=run_seed, stop_on_violation=True)
        report.branches += 1
        per_tx = tx_frames(trace.frames)
        report.frames_total += sum(per_tx)
        report.frames_max = max(report.frames_max, *per_tx)
        finals.add(model.hash(state))
        if trace.violation is not None:
            sig = violation_signature(trace.violation, trace.frames)
            if sig in groups:
                groups[sig][0] += 1
            else:
                groups[sig] = [1, trace]
    report.states = len(finals)
    report.findings = [Finding(*sig, count=n, trace=t) for sig, (n, t) in groups.items()]
    report.sort()
    return report


def violating_runs(report: Report) -> int:
    return sum(f.count for f in report.findings)
