"""Pure-Python interpreter loop; the Cython kernel mirrors it line by line.

``run`` advances a machine for at most ``steps`` instructions, mutating
``stack``, ``memory`` and ``storage`` in place, and returns
``(status, gas, pc, data, error, done)``.
"""
from __future__ import annotations

OK, REVERTS, RETURNS, INVALID = 0, 1, 2, 3
E_NONE, E_UNDERFLOW, E_OVERFLOW, E_GAS, E_JUMP, E_OPCODE = 0, 1, 2, 3, 4, 5

MAX_STACK = 1024
MASK = (1 << 256) - 1

KNOWN = bytes([0x00, 0x01, 0x15, 0x50, 0x51, 0x52, 0x54, 0x55, 0x56, 0x57, 0x5B, 0x60, 0x80, 0xFD])
# (pops, pushes) indexed by opcode; unknown opcodes never reach the lookup
NEED = [0] * 256
GROW = [0] * 256
for _op, _need, _grow in (
    (0x01, 2, -1), (0x15, 1, 0), (0x50, 1, -1), (0x51, 1, 0), (0x52, 2, -2),
    (0x54, 1, 0), (0x55, 2, -2), (0x56, 1, -1), (0x57, 2, -2), (0x60, 0, 1),
    (0x80, 1, 1), (0xFD, 2, -2),
):
    NEED[_op], GROW[_op] = _need, _grow


def jumpdests(code: bytes) -> frozenset:
    """Offsets of JUMPDEST bytes that are not PUSH1 operands."""
    out, pc, n = set(), 0, len(code)
    while pc < n:
        op = code[pc]
        if op == 0x5B:
            out.add(pc)
        pc += 2 if op == 0x60 else 1
    return frozenset(out)


def grow_words(size: int, addr: int, n: int) -> int:
    """Words added when memory must cover ``[addr, addr + n)``."""
    if n == 0:
        return 0
    end = addr + n
    if end <= size:
        return 0
    return (end + 31) // 32 - size // 32


def expand(memory: bytearray, addr: int, n: int) -> None:
    w = grow_words(len(memory), addr, n)
    if w:
        memory.extend(bytes(32 * w))


def run(code, dests, gas, pc, stack, memory, storage, steps, costs, word_cost, log=None):
    ncode = len(code)
    done = 0
    while done < steps:
        if pc >= ncode:
            op = 0x00  # running off the end is an implicit STOP
        else:
            op = code[pc]
        if log is not None:
            log.append((pc, op, gas, len(stack)))
        if op not in KNOWN:
            return INVALID, gas, pc, b"", E_OPCODE, done + 1
        depth = len(stack)
        cost = costs[op]
        if depth >= NEED[op]:
            if op == 0x51 or op == 0x52:
                cost += word_cost * grow_words(len(memory), stack[-1], 32)
            elif op == 0xFD:
                cost += word_cost * grow_words(len(memory), stack[-1], stack[-2])
        if cost > gas:
            return INVALID, gas, pc, b"", E_GAS, done + 1
        gas -= cost
        done += 1
        if depth < NEED[op]:
            return INVALID, gas, pc, b"", E_UNDERFLOW, done
        if depth + GROW[op] > MAX_STACK:
            return INVALID, gas, pc, b"", E_OVERFLOW, done
        if op == 0x60:
            stack.append(code[pc + 1] if pc + 1 < ncode else 0)
            pc = min(pc + 2, ncode)
        elif op == 0x01:
            a = stack.pop()
            stack[-1] = (a + stack[-1]) & MASK
            pc += 1
        elif op == 0x80:
            stack.append(stack[-1])
            pc += 1
        elif op == 0x57:
            dest = stack.pop()
            cond = stack.pop()
            if cond:
                if dest not in dests:
                    return INVALID, gas, pc, b"", E_JUMP, done
                pc = dest
            else:
                pc += 1
        elif op == 0x56:
            dest = stack.pop()
            if dest not in dests:
                return INVALID, gas, pc, b"", E_JUMP, done
            pc = dest
        elif op == 0x5B:
            pc += 1
        elif op == 0x54:
            stack[-1] = storage.get(stack[-1], 0)
            pc += 1
        elif op == 0x55:
            key = stack.pop()
            storage[key] = stack.pop()
            pc += 1
        elif op == 0x15:
            stack[-1] = 1 if stack[-1] == 0 else 0
            pc += 1
        elif op == 0x50:
            stack.pop()
            pc += 1
        elif op == 0x51:
            loc = stack[-1]
            expand(memory, loc, 32)
            stack[-1] = int.from_bytes(memory[loc:loc + 32], "big")
            pc += 1
        elif op == 0x52:
            loc = stack.pop()
            value = stack.pop()
            expand(memory, loc, 32)
            memory[loc:loc + 32] = value.to_bytes(32, "big")
            pc += 1
        elif op == 0xFD:
            offset = stack.pop()
            length = stack.pop()
            expand(memory, offset, length)
            data = bytes(memory[offset:offset + length]) if length else b""
            return REVERTS, gas, pc, data, E_NONE, done
        else:  # STOP
            return RETURNS, gas, pc, b"", E_NONE, done
    return OK, gas, pc, b"", E_NONE, done
