"""A minimal open auction with ghost history.

Only the contract's name and its temporal property ("once ended, always
ended") are fixed; the method bodies below are a small reconstruction:
strictly-greater bids, a refund ledger for outbid bidders, and a
single-shot ``auction_end`` that pays the beneficiary.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .core import (
    REVERT,
    SUCCESS,
    Address,
    CallResult,
    CheckedOverflow,
    FrozenMap,
    Msg,
    U256,
    checked_add,
    checked_sub,
    gas_after_call,
    sum_values,
)


@dataclass(frozen=True)
class Snapshot:
    ended: bool
    highest_bid: U256


@dataclass(frozen=True)
class AuctionState:
    beneficiary: Address
    highest_bid: U256
    highest_bidder: Address | None
    ended: bool
    eth_balance: U256
    pending_returns: FrozenMap
    deposit: U256 = 0  # constructor value, never paid out
    paid_out: U256 = 0
    history: tuple[Snapshot, ...] = ()  # ghost

    def snapshot(self) -> Snapshot:
        return Snapshot(self.ended, self.highest_bid)


def _record(state: AuctionState) -> AuctionState:
    return replace(state, history=state.history + (state.snapshot(),))


def new_auction(beneficiary: Address, msg: Msg) -> AuctionState:
    st = AuctionState(
        beneficiary=beneficiary,
        highest_bid=0,
        highest_bidder=None,
        ended=False,
        eth_balance=msg.value,
        pending_returns=FrozenMap(),
        deposit=msg.value,
    )
    return _record(st)


def _revert(state: AuctionState, gas: int) -> tuple[int, CallResult, AuctionState]:
    return gas_after_call(gas), REVERT, _record(state)


def bid(state: AuctionState, msg: Msg, gas: int) -> tuple[int, CallResult, AuctionState]:
    if state.ended or msg.value <= state.highest_bid or gas < 1:
        return _revert(state, gas)
    try:
        eth = checked_add(state.eth_balance, msg.value)
        pending = state.pending_returns
        if state.highest_bidder is not None and state.highest_bid > 0:
            prev = state.highest_bidder
            pending = pending.set(prev, checked_add(pending.get(prev, 0), state.highest_bid))
    except CheckedOverflow:
        return _revert(state, gas)
    new = replace(
        state,
        highest_bid=msg.value,
        highest_bidder=msg.sender,
        eth_balance=eth,
        pending_returns=pending,
    )
    return gas - 1, SUCCESS, _record(new)


def auction_end(state: AuctionState, msg: Msg, gas: int) -> tuple[int, CallResult, AuctionState]:
    if state.ended or gas < 1:
        return _revert(state, gas)
    new = replace(
        state,
        ended=True,
        eth_balance=checked_sub(state.eth_balance, state.highest_bid),
        paid_out=state.highest_bid,
    )
    return gas - 1, SUCCESS, _record(new)


def withdraw(state: AuctionState, msg: Msg, gas: int) -> tuple[int, CallResult, AuctionState]:
    amount = state.pending_returns.get(msg.sender, 0)
    if amount == 0 or gas < 1:
        return _revert(state, gas)
    new = replace(
        state,
        pending_returns=state.pending_returns.remove(msg.sender),
        eth_balance=checked_sub(state.eth_balance, amount),
    )
    return gas - 1, SUCCESS, _record(new)


def ended_monotone(history: tuple[Snapshot, ...]) -> bool:
    """For all i < j: history[i].ended implies history[j].ended."""
    seen_end = False
    for snap in history:
        if seen_end and not snap.ended:
            return False
        seen_end = seen_end or snap.ended
    return True


def bid_monotone(history: tuple[Snapshot, ...]) -> bool:
    """highest_bid never decreases, and is frozen once ended."""
    for prev, cur in zip(history, history[1:]):
        if cur.highest_bid < prev.highest_bid:
            return False
        if prev.ended and cur.highest_bid != prev.highest_bid:
            return False
    return True


def escrow_balanced(state: AuctionState) -> bool:
    """ETH held equals deposit + refunds owed + the live highest bid."""
    held = sum_values(state.pending_returns) + (0 if state.ended else state.highest_bid)
    return state.eth_balance == state.deposit + held


def same_modulo_history(old: AuctionState, new: AuctionState) -> bool:
    return replace(new, history=old.history) == old
