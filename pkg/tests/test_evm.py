import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from revertlab.evm import (
    INC_CONTRACT, MAX_STACK, MAX_U256, Error, GasSchedule, Invalid, Ok, Returns, Reverts,
    execute_n, expand, gas_cost, init, step, trace_n,
)
from revertlab.evm import _kernel_py, kernel, opcodes
from revertlab.evm.checks import check_add_bytes, check_inc, run_inc
from revertlab.evm.opcodes import assemble

try:
    from revertlab.evm import _kernel as _compiled
except ImportError:  # pragma: no cover - only without a C toolchain
    _compiled = None


def run(code, gas=100, n=100, storage=None):
    return execute_n(init(code, gas, storage), n)


def test_init():
    st0 = init(bytes([opcodes.STOP]), 10, {})
    assert isinstance(st0, Ok) and st0.pc == 0 and st0.stack == () and st0.memory == b""


def test_empty_code_returns():
    assert isinstance(step(init(b"", 10)), Returns)


def test_jumpdest_scan():
    assert kernel.jumpdests(INC_CONTRACT) == {0x0F}
    # a 0x5b inside a PUSH1 operand is data, not a destination
    assert kernel.jumpdests(assemble("PUSH1", 0x5B, "JUMPDEST")) == {2}


def test_add_example():
    st0 = execute_n(init(assemble("PUSH1", 1, "PUSH1", 2, "ADD"), 10), 3)
    assert st0.stack == (3,)


def test_add_wraps():
    code = assemble("PUSH1", 1, "ADD")
    st0 = Ok(10, 0, (MAX_U256,), b"", {}, code, kernel.jumpdests(code))
    assert execute_n(st0, 2).stack == (0,)


def test_underflow_and_overflow():
    assert step(init(assemble("ADD"), 10)) == Invalid(Error.STACK_UNDERFLOW)
    code = assemble("PUSH1", 0)
    full = Ok(10, 0, (0,) * MAX_STACK, b"", {}, code, frozenset())
    assert step(full) == Invalid(Error.STACK_OVERFLOW)
    assert step(Ok(10, 0, (0,) * (MAX_STACK - 1), b"", {}, code, frozenset())).stack == (0,) * MAX_STACK


def test_invalid_opcode_and_jump():
    assert step(init(bytes([0xFE]), 10)) == Invalid(Error.INVALID_OPCODE)
    # jumping into a PUSH1 operand that happens to be 0x5b
    code = assemble("PUSH1", 0x5B, "PUSH1", 1, "PUSH1", 1, "JUMPI")
    assert run(code) == Invalid(Error.INVALID_JUMP)
    assert run(assemble("PUSH1", 7, "JUMP")) == Invalid(Error.INVALID_JUMP)


def test_jumpi_falls_through_on_zero():
    code = assemble("PUSH1", 0, "PUSH1", 99, "JUMPI", "PUSH1", 4, "STOP")
    st0 = execute_n(init(code, 100), 4)
    assert isinstance(st0, Ok) and st0.stack == (4,)


def test_out_of_gas():
    assert execute_n(init(assemble("PUSH1", 1, "PUSH1", 2), 1), 5) == Invalid(Error.OUT_OF_GAS)


def test_memory_roundtrip_big_endian():
    code = assemble("PUSH1", 0xAB, "PUSH1", 1, "MSTORE", "PUSH1", 1, "MLOAD")
    st0 = execute_n(init(code, 100), 5)
    assert st0.stack == (0xAB,) and len(st0.memory) == 64
    assert st0.memory[32] == 0xAB and st0.memory[:32] == bytes(32)


def test_revert_returns_memory_slice():
    code = assemble("PUSH1", 0x11, "PUSH1", 0, "MSTORE", "PUSH1", 32, "PUSH1", 0, "REVERT")
    st0 = run(code)
    assert isinstance(st0, Reverts) and st0.data == (0x11).to_bytes(32, "big")


def test_storage_roundtrip():
    code = assemble("PUSH1", 9, "PUSH1", 3, "SSTORE", "PUSH1", 3, "SLOAD", "ISZERO", "POP", "STOP")
    st0 = run(code)
    assert isinstance(st0, Returns) and st0.load(3) == 9 and st0.load(4) == 0


def test_push_operand_past_end():
    st0 = step(init(bytes([opcodes.PUSH1]), 5))
    assert st0.stack == (0,) and st0.pc == 1
    assert isinstance(step(st0), Returns)


def test_expand_examples():
    assert expand(b"", 0, 32) == bytes(32)
    mem = bytes(range(64))
    assert expand(mem, 0, 32) == mem
    assert len(expand(b"", 33, 32)) == 96
    assert expand(mem, 100, 0) == mem


@given(st.integers(0, 4096), st.integers(0, 200), st.integers(0, 200))
def test_expand_properties(size_words, addr, n):
    mem = bytes(32 * (size_words % 8))
    out = expand(mem, addr, n)
    assert len(out) % 32 == 0 and len(out) >= len(mem) and out[: len(mem)] == mem
    if n:
        assert len(out) >= addr + n and len(out) - 32 < max(addr + n, len(mem))


def test_gas_cost_examples():
    st0 = init(b"", 10)
    assert gas_cost(opcodes.ADD, st0) == 1
    assert gas_cost(opcodes.STOP, st0) == 1
    loaded = Ok(10, 0, (0,), b"", {}, b"", frozenset())
    assert gas_cost(opcodes.MLOAD, loaded) == 2


def test_memory_growth_is_charged():
    code = assemble("PUSH1", 64, "MLOAD")
    st0 = execute_n(init(code, 10), 2)
    assert st0.gas == 10 - 1 - (1 + 3)


def test_pluggable_schedule():
    sched = GasSchedule.with_costs({opcodes.ADD: 5}, word=3)
    st0 = execute_n(init(assemble("PUSH1", 1, "PUSH1", 2, "ADD", "PUSH1", 0, "MLOAD"), 100), 5, sched)
    assert st0.gas == 100 - 1 - 1 - 5 - 1 - (1 + 3)
    with pytest.raises(ValueError):
        GasSchedule.with_costs({opcodes.ADD: 0})


def test_execute_n_zero_is_identity():
    st0 = init(INC_CONTRACT, 100, {0: 1})
    assert execute_n(st0, 0) is st0


def test_non_ok_states_absorb():
    for st0 in (Invalid(Error.OUT_OF_GAS), Reverts(3, b"x"), Returns(2)):
        assert step(st0) is st0 and execute_n(st0, 10) is st0


def test_inc_examples():
    out = run(INC_CONTRACT, 40_000, 20, {0: 5})
    assert isinstance(out, Returns) and out.load(0) == 6
    assert isinstance(run(INC_CONTRACT, 40_000, 20, {0: MAX_U256}), Reverts)


def test_inc_paths():
    ok, wrap = run_inc(5), run_inc(MAX_U256)
    assert ok.ok and 0x0F in ok.pcs and 0x0A not in ok.pcs
    assert wrap.ok and 0x0A in wrap.pcs and wrap.pcs[-1] == 0x0E


def test_inc_suite_small():
    assert all(c.ok for c in check_inc(n_random=50, seed=3))


def test_trace_dump_lines():
    _, log = trace_n(init(assemble("PUSH1", 1, "STOP"), 5), 5)
    assert [(pc, opcodes.name(op), g, d) for pc, op, g, d in log] == [(0, "PUSH1", 5, 0), (2, "STOP", 4, 1)]


codes = st.lists(st.sampled_from(list(opcodes.NAMES) + [0x00, 0x01, 0x02, 0x5B]), max_size=24).map(bytes)


@given(codes, st.integers(0, 60), st.dictionaries(st.integers(0, 3), st.integers(0, MAX_U256), max_size=3))
def test_machine_invariants(code, gas, storage):
    st0 = init(code, gas, storage)
    prev = st0
    for _ in range(gas + 1):
        nxt = step(prev)
        if not isinstance(nxt, Ok):
            break
        assert nxt.gas < prev.gas
        assert len(nxt.stack) <= MAX_STACK and len(nxt.memory) % 32 == 0
        assert len(nxt.memory) >= len(prev.memory) and nxt.pc <= len(code)
        prev = nxt
    else:
        pytest.fail("machine outlived its gas")
    assert execute_n(st0, gas + 1) == nxt


@pytest.mark.skipif(_compiled is None, reason="compiled kernel not built")
@given(codes, st.integers(0, 60), st.integers(0, MAX_U256))
def test_compiled_kernel_matches_python(code, gas, slot):
    outs = []
    for impl in (_kernel_py, _compiled):
        stack, memory, storage = [], bytearray(), {0: slot}
        res = impl.run(code, impl.jumpdests(code), gas, 0, stack, memory, storage, 100, [1] * 256, 1)
        outs.append((res, stack, bytes(memory), storage))
    assert outs[0] == outs[1]


def test_add_bytes_exhaustive():
    assert check_add_bytes() == []
