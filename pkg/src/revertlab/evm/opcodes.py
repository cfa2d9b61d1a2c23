"""The opcode subset, by byte value."""
from __future__ import annotations

STOP = 0x00
ADD = 0x01
ISZERO = 0x15
POP = 0x50
MLOAD = 0x51
MSTORE = 0x52
SLOAD = 0x54
SSTORE = 0x55
JUMP = 0x56
JUMPI = 0x57
JUMPDEST = 0x5B
PUSH1 = 0x60
DUP1 = 0x80
REVERT = 0xFD

NAMES = {
    STOP: "STOP", ADD: "ADD", ISZERO: "ISZERO", POP: "POP", MLOAD: "MLOAD",
    MSTORE: "MSTORE", SLOAD: "SLOAD", SSTORE: "SSTORE", JUMP: "JUMP",
    JUMPI: "JUMPI", JUMPDEST: "JUMPDEST", PUSH1: "PUSH1", DUP1: "DUP1",
    REVERT: "REVERT",
}
BY_NAME = {v: k for k, v in NAMES.items()}

# (pops, pushes) per opcode
STACK_EFFECT = {
    STOP: (0, 0), ADD: (2, 1), ISZERO: (1, 1), POP: (1, 0), MLOAD: (1, 1),
    MSTORE: (2, 0), SLOAD: (1, 1), SSTORE: (2, 0), JUMP: (1, 0), JUMPI: (2, 0),
    JUMPDEST: (0, 0), PUSH1: (0, 1), DUP1: (1, 2), REVERT: (2, 0),
}


def name(op: int) -> str:
    return NAMES.get(op, f"0x{op:02x}")


def assemble(*items) -> bytes:
    """Bytes from opcode names, opcode values and PUSH1 operands.

    >>> assemble("PUSH1", 1, "PUSH1", 2, "ADD").hex()
    '6001600201'
    """
    out = bytearray()
    for it in items:
        out.append(BY_NAME[it] if isinstance(it, str) else it)
    return bytes(out)


def disassemble(code: bytes) -> list[tuple[int, str, int | None]]:
    """``(pc, name, operand)`` per instruction."""
    out, pc = [], 0
    while pc < len(code):
        op = code[pc]
        if op == PUSH1:
            arg = code[pc + 1] if pc + 1 < len(code) else 0
            out.append((pc, "PUSH1", arg))
            pc += 2
        else:
            out.append((pc, name(op), None))
            pc += 1
    return out
