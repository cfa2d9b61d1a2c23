import pytest
from hypothesis import given
from hypothesis import strategies as st

from decoding import EXPECTED, SEQUENCES, decode
from revertlab.adversary import (
    ChoiceExhausted, ChoiceSource, HavocDomains, else_branch_gas, havoc_address, havoc_amount,
    havoc_bool, havoc_msg, havoc_nat, havoc_result,
)
from revertlab.core import MAX_UINT256, REVERT, SUCCESS, Registry
from revertlab.explorer.replay import execute
from revertlab.config import Config
from revertlab.trace import Transaction

REG = Registry.of_size(4)
DOM = HavocDomains(REG.addresses)


def test_havoc_decoding():
    cs = ChoiceSource.exhaustive([5, 3, 2, 6, 4, 0, 1, 9])
    assert havoc_address(cs, DOM) == REG[1]
    assert havoc_bool(cs) is True
    assert havoc_bool(cs) is False
    assert havoc_amount(cs, DOM) == 2  # 6 mod 4 picks the third default amount
    assert havoc_amount(cs, DOM) == 0
    assert havoc_result(cs) is REVERT
    assert havoc_result(cs) is SUCCESS
    assert havoc_nat(cs) == 9
    assert cs.log == [5, 3, 2, 6, 4, 0, 1, 9]


def test_default_amounts():
    assert DOM.amounts == (0, 1, 2, MAX_UINT256)


def test_havoc_msg_has_zero_value():
    m = havoc_msg(ChoiceSource.exhaustive([2]), DOM)
    assert m.sender == REG[2] and m.value == 0


def test_exhausted_source():
    with pytest.raises(ChoiceExhausted):
        havoc_nat(ChoiceSource.exhaustive([]))


@given(st.integers(0, 2**64 - 1))
def test_random_source_replays_from_its_log(seed):
    a = ChoiceSource.random(seed)
    first = [a.next() for _ in range(8)]
    again = ChoiceSource.random(seed)
    assert [again.next() for _ in range(8)] == first
    b = ChoiceSource.exhaustive(a.log)
    assert [b.next() for _ in range(8)] == first and b.remaining() == 0


def test_else_branch_gas_modes():
    # literal: reset from the entry gas; strict: from what is left after the k-branch
    assert else_branch_gas(5, 2, strict_gas=False) == 4
    assert else_branch_gas(5, 2, strict_gas=True) == 1
    assert else_branch_gas(0, 0, strict_gas=False) == 0


@pytest.mark.parametrize("name", list(SEQUENCES))
def test_choice_sequences_decode_to_call_trees(name):
    trace, mon = decode(SEQUENCES[name])
    assert trace.call_shape() == EXPECTED[name]
    assert not mon.violations


def test_gas_strictly_decreases_along_edges():
    trace, _ = decode(SEQUENCES["mint;mint"])
    stack = []
    for f in trace.frames:
        del stack[f.depth:]
        if stack:
            assert f.gas_in < stack[-1]
        stack.append(f.gas_in)
    assert [f.gas_in for f in trace.frames] == [6, 5, 3, 2, 0]


def test_every_frame_records_checkpoints():
    trace, _ = decode(SEQUENCES["two nested transfers"])
    for f in trace.frames:
        assert f.ginv_before is True and f.ginv_after is True and f.state_hash_after


def test_gas_zero_external_call_draws_k_and_b_only():
    trace, _ = decode([0, 1, 0], gas=0)
    assert trace.call_shape() == [["ExternalCall", []]]
    assert trace.frames[0].gas_out == 0


def test_hand_exploit_replays_to_violation(exploit_cfg):
    tx = Transaction("Attacker", "TransferNotify", ("Attacker", "Accomplice", 10), 0, 6)
    choices = [0, 1, 2, 2, 1, 2, 0, 1, 0, 1]
    trace, final = execute(exploit_cfg, [tx], choices)
    assert trace.violation is not None and trace.violation.kind == "InvariantAtBoundary"
    assert sum(final.balances.values()) == 20 and final.total_amount == 10
    assert trace.call_shape() == [
        ["TransferNotify", [["ExternalCall", [["Transfer", [["ExternalCall", []]]]]]]]
    ]
