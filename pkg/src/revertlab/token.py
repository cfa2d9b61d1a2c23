"""The Token contract lifted to explicit revert semantics.

Three variants share the same guard and bookkeeping:

* ``PLAIN``: ``transfer``/``mint`` with no external interaction.
* ``NOTIFY_SAFE``: ``transfer`` notifies the receiver *after* both balance
  writes (checks-effects-interactions).
* ``NOTIFY_VULNERABLE``: the notification happens between the credit of
  ``to`` and the (stale) write of ``from``.

All functions are pure: they return ``(gas_left, result, new_state)`` and
never mutate their input, so a revert is simply "return the old state".
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .core import (
    MAX_UINT256,
    REVERT,
    SUCCESS,
    Address,
    CallResult,
    FrozenMap,
    Msg,
    Revert,
    U256,
    checked_add,
    checked_sub,
    gas_after_call,
    sum_values,
)

if TYPE_CHECKING:
    from .adversary import Adversary


class Variant(enum.Enum):
    PLAIN = "plain"
    NOTIFY_SAFE = "notify-safe"
    NOTIFY_VULNERABLE = "notify-vuln"


@dataclass(frozen=True)
class TokenState:
    minter: Address
    balances: FrozenMap
    eth_balance: U256
    total_amount: int  # ghost: minted supply, unbounded
    is_contract: bool = True

    def __hash__(self) -> int:
        # states are dictionary keys all over the explorer; hash once
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.minter, self.balances, self.eth_balance, self.total_amount, self.is_contract))
            object.__setattr__(self, "_hash", h)
        return h

    def __reduce__(self):
        # the cached hash is per process; never pickle it
        return (TokenState, (self.minter, self.balances, self.eth_balance, self.total_amount, self.is_contract))


def new_token(msg: Msg) -> TokenState:
    """Constructor; has no precondition and always succeeds."""
    return TokenState(
        minter=msg.sender,
        balances=FrozenMap(),
        eth_balance=msg.value,
        total_amount=0,
    )


def ginv(state: TokenState) -> bool:
    """Global invariant: minted supply equals the sum of all balances."""
    return state.total_amount == sum_values(state.balances)


def transfer_guard(
    state: TokenState, from_: Address, to: Address, amount: U256, msg: Msg, gas: int,
    nonpayable: bool = False,
) -> bool:
    b = state.balances
    # short-circuits left to right: balances[from] is never read when absent
    return (
        from_ in b
        and b[from_] >= amount
        and msg.sender == from_
        and gas >= 1
        and (to not in b or b[to] + amount <= MAX_UINT256)
        and (not nonpayable or msg.value == 0)
    )


def mint_guard(
    state: TokenState, to: Address, amount: U256, msg: Msg, gas: int,
    nonpayable: bool = False,
) -> bool:
    b = state.balances
    return (
        msg.sender == state.minter
        and gas >= 1
        and (to not in b or b[to] + amount <= MAX_UINT256)
        and (not nonpayable or msg.value == 0)
    )


def _credit(balances: FrozenMap, to: Address, amount: U256) -> FrozenMap:
    return balances.set(to, checked_add(balances.get(to, 0), amount))


def _move(
    balances: FrozenMap, from_: Address, to: Address, amount: U256, literal_aliasing: bool,
) -> FrozenMap:
    """Credit ``to`` then write ``from``.

    The debit is taken from the post-credit balance, so a self-transfer
    nets to zero.  ``literal_aliasing`` instead writes the pre-credit
    ``balances[from] - amount`` last, which on ``from == to`` destroys
    ``amount`` tokens.  Both agree whenever ``from != to``.
    """
    new_amount = checked_sub(balances[from_], amount)
    credited = _credit(balances, to, amount)
    if not literal_aliasing:
        new_amount = checked_sub(credited[from_], amount)
    return credited.set(from_, new_amount)


def transfer(
    state: TokenState, from_: Address, to: Address, amount: U256, msg: Msg, gas: int,
    *, nonpayable: bool = False, literal_aliasing: bool = False,
) -> tuple[int, CallResult, TokenState]:
    if not transfer_guard(state, from_, to, amount, msg, gas, nonpayable):
        return gas_after_call(gas), REVERT, state
    balances = _move(state.balances, from_, to, amount, literal_aliasing)
    new = replace(
        state, balances=balances, eth_balance=checked_add(state.eth_balance, msg.value)
    )
    return gas - 1, SUCCESS, new


def mint(
    state: TokenState, to: Address, amount: U256, msg: Msg, gas: int,
    *, nonpayable: bool = False,
) -> tuple[int, CallResult, TokenState]:
    if not mint_guard(state, to, amount, msg, gas, nonpayable):
        return gas_after_call(gas), REVERT, state
    new = replace(
        state,
        balances=_credit(state.balances, to, amount),
        total_amount=state.total_amount + amount,
    )
    return gas - 1, SUCCESS, new


def notify_effects(
    state: TokenState, variant: Variant, from_: Address, to: Address, amount: U256, msg: Msg,
    literal_aliasing: bool = False,
) -> tuple[TokenState, U256]:
    """State handed to the external call, plus the pending ``from`` balance.

    Only valid once :func:`transfer_guard` has passed.  For the vulnerable
    order the pending balance is read before the credit and written after
    the call, whatever happened in between.
    """
    new_amount = checked_sub(state.balances[from_], amount)
    if variant is Variant.NOTIFY_SAFE:
        balances = _move(state.balances, from_, to, amount, literal_aliasing)
    elif variant is Variant.NOTIFY_VULNERABLE:
        balances = _credit(state.balances, to, amount)
    else:
        raise ValueError(f"{variant} has no external call")
    eth = checked_add(state.eth_balance, msg.value)
    return replace(state, balances=balances, eth_balance=eth), new_amount


def notify_return(
    state: TokenState,
    variant: Variant,
    from_: Address,
    new_amount: U256,
    gas: int,
    g1: int,
    r1: CallResult,
    after_call: TokenState,
    propagate_failure: bool = False,
) -> tuple[int, CallResult, TokenState]:
    """Finish a notify-transfer once the external call returned ``(g1, r1)``."""
    g = gas_after_call(g1)
    if propagate_failure and isinstance(r1, Revert):
        return g, REVERT, state
    if variant is Variant.NOTIFY_VULNERABLE:
        # stale write: overwrites whatever re-entrant calls did to balances[from]
        after_call = replace(after_call, balances=after_call.balances.set(from_, new_amount))
    return g, SUCCESS, after_call


def transfer_with_notify(
    state: TokenState,
    variant: Variant,
    from_: Address,
    to: Address,
    amount: U256,
    msg: Msg,
    gas: int,
    adversary: Adversary,
) -> tuple[int, CallResult, TokenState]:
    if not transfer_guard(state, from_, to, amount, msg, gas, adversary.nonpayable):
        return gas_after_call(gas), REVERT, state
    at_call, new_amount = notify_effects(
        state, variant, from_, to, amount, msg, adversary.literal_aliasing
    )
    g1, r1, after = adversary.external_call(at_call, gas - 1)
    return notify_return(
        state, variant, from_, new_amount, gas, g1, r1, after, adversary.propagate_failure
    )
