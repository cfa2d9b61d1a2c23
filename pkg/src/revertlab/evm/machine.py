"""Machine states and the functional interpreter API."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Union

from . import opcodes
from .kernel import E_GAS, E_JUMP, E_OPCODE, E_OVERFLOW, E_UNDERFLOW, INVALID, OK, REVERTS
from .kernel import expand as _expand_into
from .kernel import grow_words, jumpdests, run

MAX_U256 = (1 << 256) - 1
MAX_STACK = 1024


class Error(enum.Enum):
    STACK_UNDERFLOW = "STACK_UNDERFLOW"
    STACK_OVERFLOW = "STACK_OVERFLOW"
    OUT_OF_GAS = "OUT_OF_GAS"
    INVALID_JUMP = "INVALID_JUMP"
    INVALID_OPCODE = "INVALID_OPCODE"


_ERRORS = {
    E_UNDERFLOW: Error.STACK_UNDERFLOW,
    E_OVERFLOW: Error.STACK_OVERFLOW,
    E_GAS: Error.OUT_OF_GAS,
    E_JUMP: Error.INVALID_JUMP,
    E_OPCODE: Error.INVALID_OPCODE,
}


@dataclass(frozen=True)
class GasSchedule:
    """Flat cost per opcode plus a cost per 32-byte word of memory growth."""

    costs: tuple[int, ...] = (1,) * 256
    word: int = 1

    def __post_init__(self):
        if len(self.costs) != 256 or min(self.costs) < 1 or self.word < 0:
            raise ValueError("every opcode must cost at least one unit")

    @classmethod
    def with_costs(cls, overrides: Mapping[int, int], word: int = 1, base: int = 1) -> GasSchedule:
        costs = [base] * 256
        for op, c in overrides.items():
            costs[op] = c
        return cls(tuple(costs), word)


DEFAULT_SCHEDULE = GasSchedule()


@dataclass(frozen=True)
class Ok:
    gas: int
    pc: int
    stack: tuple[int, ...]
    memory: bytes
    storage: Mapping[int, int]
    code: bytes
    dests: frozenset = field(repr=False, compare=False, default=frozenset())

    def load(self, key: int) -> int:
        return self.storage.get(key, 0)

    def peek(self, i: int = 0) -> int:
        return self.stack[-1 - i]


@dataclass(frozen=True)
class Reverts:
    gas: int
    data: bytes = b""


@dataclass(frozen=True)
class Returns:
    gas: int
    data: bytes = b""
    storage: Mapping[int, int] = field(default_factory=dict)

    def load(self, key: int) -> int:
        return self.storage.get(key, 0)


@dataclass(frozen=True)
class Invalid:
    error: Error


MachineState = Union[Ok, Reverts, Returns, Invalid]


def init(code: bytes, gas: int, storage: Mapping[int, int] | None = None) -> Ok:
    code = bytes(code)
    return Ok(gas, 0, (), b"", dict(storage or {}), code, jumpdests(code))


def gas_cost(op: int, st: Ok, schedule: GasSchedule = DEFAULT_SCHEDULE) -> int:
    """Cost of executing ``op`` in ``st``, memory growth included."""
    cost = schedule.costs[op]
    s = st.stack
    if op in (opcodes.MLOAD, opcodes.MSTORE) and s:
        cost += schedule.word * grow_words(len(st.memory), s[-1], 32)
    elif op == opcodes.REVERT and len(s) >= 2:
        cost += schedule.word * grow_words(len(st.memory), s[-1], s[-2])
    return cost


def expand(memory: bytes, addr: int, n: int) -> bytes:
    """Memory grown with zeros to cover ``[addr, addr + n)``, in whole words."""
    out = bytearray(memory)
    _expand_into(out, addr, n)
    return bytes(out)


def _advance(st: MachineState, n: int, schedule: GasSchedule, log) -> MachineState:
    if not isinstance(st, Ok) or n <= 0:
        return st
    stack, memory, storage = list(st.stack), bytearray(st.memory), dict(st.storage)
    status, gas, pc, data, err, _ = run(
        st.code, st.dests, st.gas, st.pc, stack, memory, storage, n,
        list(schedule.costs), schedule.word, log,
    )
    if status == OK:
        return Ok(gas, pc, tuple(stack), bytes(memory), storage, st.code, st.dests)
    if status == REVERTS:
        return Reverts(gas, data)
    if status == INVALID:
        return Invalid(_ERRORS[err])
    return Returns(gas, data, storage)


def step(st: MachineState, schedule: GasSchedule = DEFAULT_SCHEDULE) -> MachineState:
    """One instruction; non-OK states are returned unchanged."""
    return _advance(st, 1, schedule, None)


def execute_n(st: MachineState, n: int, schedule: GasSchedule = DEFAULT_SCHEDULE) -> MachineState:
    """At most ``n`` instructions, stopping at the first non-OK state."""
    return _advance(st, n, schedule, None)


def trace_n(
    st: MachineState, n: int, schedule: GasSchedule = DEFAULT_SCHEDULE
) -> tuple[MachineState, list[tuple[int, int, int, int]]]:
    """``execute_n`` that also returns ``(pc, opcode, gas, stack depth)`` per step."""
    log: list = []
    return _advance(st, n, schedule, log), log


def format_trace(log) -> str:
    return "\n".join(
        f"{pc:04x} {opcodes.name(op):<8} gas={gas} depth={depth}" for pc, op, gas, depth in log
    )


# increments storage slot 0, reverting when it would wrap
INC_CONTRACT = opcodes.assemble(
    "PUSH1", 0x00, "SLOAD", "PUSH1", 0x01, "ADD", "DUP1", "PUSH1", 0x0F, "JUMPI",
    "PUSH1", 0x00, "PUSH1", 0x00, "REVERT",
    "JUMPDEST", "PUSH1", 0x00, "SSTORE", "STOP",
)
INC_REVERT_PC = 0x0A
INC_JUMPDEST_PC = 0x0F


def add_bytes(x: int, y: int, gas: int = 10) -> MachineState:
    """``[PUSH1 x, PUSH1 y, ADD]`` run for three steps."""
    return execute_n(init(bytes([opcodes.PUSH1, x, opcodes.PUSH1, y, opcodes.ADD]), gas), 3)
