"""Runtime versions of the interpreter's worked proof obligations."""
from __future__ import annotations

import random
from typing import NamedTuple

from .machine import (
    INC_CONTRACT, INC_JUMPDEST_PC, INC_REVERT_PC, MAX_U256, Returns, Reverts, add_bytes, init,
    trace_n,
)

INC_BOUNDARY = (0, 1, 5, MAX_U256 - 1, MAX_U256)


class IncCase(NamedTuple):
    initial: int
    outcome: str
    final: int | None
    pcs: tuple[int, ...]
    ok: bool


def run_inc(initial: int, gas: int = 40_000) -> IncCase:
    st, log = trace_n(init(INC_CONTRACT, gas, {0: initial}), 20)
    pcs = tuple(pc for pc, _, _, _ in log)
    if isinstance(st, Returns):
        final = st.load(0)
        ok = initial < MAX_U256 and final == initial + 1 and INC_JUMPDEST_PC in pcs
        return IncCase(initial, "RETURNS", final, pcs, ok)
    if isinstance(st, Reverts):
        ok = initial == MAX_U256 and INC_REVERT_PC in pcs and INC_JUMPDEST_PC not in pcs
        return IncCase(initial, "REVERTS", None, pcs, ok)
    return IncCase(initial, type(st).__name__.upper(), None, pcs, False)


def inc_values(n_random: int = 1000, seed: int = 0) -> list[int]:
    rng = random.Random(seed)
    return list(INC_BOUNDARY) + [rng.randrange(MAX_U256 + 1) for _ in range(n_random)]


def check_inc(n_random: int = 1000, seed: int = 0) -> list[IncCase]:
    """Every case of the increment suite; a case fails when ``ok`` is False."""
    return [run_inc(v) for v in inc_values(n_random, seed)]


def check_add_bytes() -> list[tuple[int, int]]:
    """Byte pairs whose three-step sum is wrong (empty when the check passes)."""
    bad = []
    for x in range(256):
        for y in range(256):
            st = add_bytes(x, y)
            if not (st.__class__.__name__ == "Ok" and st.stack == (x + y,)):
                bad.append((x, y))
    return bad
