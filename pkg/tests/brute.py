"""Brute-force reference for the explorer.

Runs the concrete interpreter on every choice sequence over
``range(max_choice)``, extending a prefix whenever the source runs dry, and
level by level from every newly reached clean state.  ``frames_total`` sums
executing frames over the distinct (end state, frames, primary violation)
outcomes of each level.
"""
from collections import defaultdict

from revertlab.adversary import ChoiceExhausted, ChoiceSource
from revertlab.models import Monitor, executing_frames, make_model, run_transaction
from revertlab.trace import violation_signature


def runs(model, state, tx):
    mc = model.cfg.max_choice
    todo = [[]]
    while todo:
        prefix = todo.pop()
        cs = ChoiceSource.exhaustive(prefix)
        mon = Monitor(model)
        try:
            _, _, new = run_transaction(model, state, tx, cs, mon)
        except ChoiceExhausted:
            todo.extend(prefix + [v] for v in range(mc))
            continue
        sigs = [violation_signature(v, mon.frames) for v in mon.violations]
        yield new, executing_frames(mon.frames), sigs


def brute_explore(cfg):
    from revertlab.trace import signature_rank

    model = make_model(cfg)
    key = model.orbit_key
    s0 = model.initial_state()
    seen = {key(s0)}
    level = [s0]
    bad = defaultdict(set)
    frames_total = frames_max = 0
    for _ in range(cfg.max_txs):
        nxt = {}
        outcomes = set()
        for s in level:
            for tx in model.tx_domain():
                for new, n, sigs in runs(model, s, tx):
                    primary = min(sigs, key=signature_rank) if sigs else None
                    outcomes.add((key(new), n, primary))
                    frames_max = max(frames_max, n)
                    if primary is not None:
                        bad[primary].add(key(new))
                    elif key(new) not in seen:
                        nxt.setdefault(key(new), new)
        frames_total += sum(n for _, n, _ in outcomes)
        seen |= set(nxt)
        level = list(nxt.values())
    return {
        "states": len(seen),
        "findings": {sig: len(v) for sig, v in bad.items()},
        "frames_total": frames_total,
        "frames_max": frames_max,
    }
