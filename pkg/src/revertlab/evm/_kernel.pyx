# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled interpreter loop; must stay in step with ``_kernel_py``."""

DEF MAX_STACK = 1024

cdef object MASK = (1 << 256) - 1
cdef bint KNOWN[256]
cdef int NEED[256]
cdef int GROW[256]

cdef int _i
for _i in range(256):
    KNOWN[_i] = 0
    NEED[_i] = 0
    GROW[_i] = 0
for _op, _need, _grow in (
    (0x00, 0, 0), (0x01, 2, -1), (0x15, 1, 0), (0x50, 1, -1), (0x51, 1, 0), (0x52, 2, -2),
    (0x54, 1, 0), (0x55, 2, -2), (0x56, 1, -1), (0x57, 2, -2), (0x5B, 0, 0), (0x60, 0, 1),
    (0x80, 1, 1), (0xFD, 2, -2),
):
    KNOWN[_op] = 1
    NEED[_op] = _need
    GROW[_op] = _grow


def jumpdests(const unsigned char[:] code):
    cdef Py_ssize_t pc = 0, n = code.shape[0]
    out = set()
    while pc < n:
        if code[pc] == 0x5B:
            out.add(pc)
        pc += 2 if code[pc] == 0x60 else 1
    return frozenset(out)


cdef object grow_words(Py_ssize_t size, object addr, object n):
    if n == 0:
        return 0
    end = addr + n
    if end <= size:
        return 0
    return (end + 31) // 32 - size // 32


cdef void expand(bytearray memory, object addr, object n):
    w = grow_words(len(memory), addr, n)
    if w:
        memory.extend(bytes(32 * w))


def run(const unsigned char[:] code, dests, object gas, Py_ssize_t pc, list stack,
        bytearray memory, dict storage, Py_ssize_t steps, list costs, object word_cost,
        list log=None):
    cdef Py_ssize_t ncode = code.shape[0]
    cdef Py_ssize_t done = 0
    cdef Py_ssize_t depth
    cdef int op
    cdef object cost, a, dest, cond, key, loc, value, offset, length
    while done < steps:
        if pc >= ncode:
            op = 0x00
        else:
            op = code[pc]
        if log is not None:
            log.append((pc, op, gas, len(stack)))
        if not KNOWN[op]:
            return 3, gas, pc, b"", 5, done + 1
        depth = len(stack)
        cost = costs[op]
        if depth >= NEED[op]:
            if op == 0x51 or op == 0x52:
                cost = cost + word_cost * grow_words(len(memory), stack[depth - 1], 32)
            elif op == 0xFD:
                cost = cost + word_cost * grow_words(len(memory), stack[depth - 1], stack[depth - 2])
        if cost > gas:
            return 3, gas, pc, b"", 3, done + 1
        gas = gas - cost
        done += 1
        if depth < NEED[op]:
            return 3, gas, pc, b"", 1, done
        if depth + GROW[op] > MAX_STACK:
            return 3, gas, pc, b"", 2, done
        if op == 0x60:
            stack.append(code[pc + 1] if pc + 1 < ncode else 0)
            pc = pc + 2 if pc + 2 < ncode else ncode
        elif op == 0x01:
            a = stack.pop()
            stack[depth - 2] = (a + stack[depth - 2]) & MASK
            pc += 1
        elif op == 0x80:
            stack.append(stack[depth - 1])
            pc += 1
        elif op == 0x57:
            dest = stack.pop()
            cond = stack.pop()
            if cond:
                if dest not in dests:
                    return 3, gas, pc, b"", 4, done
                pc = dest
            else:
                pc += 1
        elif op == 0x56:
            dest = stack.pop()
            if dest not in dests:
                return 3, gas, pc, b"", 4, done
            pc = dest
        elif op == 0x5B:
            pc += 1
        elif op == 0x54:
            stack[depth - 1] = storage.get(stack[depth - 1], 0)
            pc += 1
        elif op == 0x55:
            key = stack.pop()
            storage[key] = stack.pop()
            pc += 1
        elif op == 0x15:
            stack[depth - 1] = 1 if stack[depth - 1] == 0 else 0
            pc += 1
        elif op == 0x50:
            stack.pop()
            pc += 1
        elif op == 0x51:
            loc = stack[depth - 1]
            expand(memory, loc, 32)
            stack[depth - 1] = int.from_bytes(memory[loc:loc + 32], "big")
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
            return 1, gas, pc, data, 0, done
        else:
            return 2, gas, pc, b"", 0, done
    return 0, gas, pc, b"", 0, done
