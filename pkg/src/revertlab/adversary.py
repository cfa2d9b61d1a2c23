"""Havoc-driven model of an arbitrary external call.

Every nondeterministic decision is a raw natural pulled from a
:class:`ChoiceSource` and decoded by residue, so a recorded log of naturals
replays the exact same call tree.
"""
from __future__ import annotations

import random
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from . import token
from .core import (
    MAX_UINT256,
    REVERT,
    SUCCESS,
    Address,
    CallResult,
    Msg,
    U256,
    gas_after_call,
)

DEFAULT_AMOUNTS: tuple[int, ...] = (0, 1, 2, MAX_UINT256)

# k mod 3 dispatch of the external call
REENTER_TRANSFER, REENTER_MINT, NO_REENTRY = 0, 1, 2


class ChoiceExhausted(Exception):
    """An exhaustive choice source ran out of recorded naturals."""


class ChoiceSource:
    """Replayable oracle of nondeterminism.

    Build with :meth:`exhaustive` (a fixed list) or :meth:`random`
    (a seeded generator).  ``log`` holds every natural consumed so far.
    """

    def __init__(self, choices: Sequence[int] | None = None, seed: int | None = None):
        if (choices is None) == (seed is None):
            raise ValueError("give exactly one of choices or seed")
        self.choices = None if choices is None else list(choices)
        self.seed = seed
        self.cursor = 0
        self.log: list[int] = []
        self._rng = None if seed is None else random.Random(seed)

    @classmethod
    def exhaustive(cls, choices: Iterable[int]) -> ChoiceSource:
        choices = list(choices)
        if any((not isinstance(c, int)) or c < 0 for c in choices):
            raise ValueError("choices must be naturals")
        return cls(choices=choices)

    @classmethod
    def random(cls, seed: int) -> ChoiceSource:
        return cls(seed=seed & (2**64 - 1))

    @property
    def is_exhaustive(self) -> bool:
        return self.choices is not None

    @property
    def draws(self) -> int:
        return len(self.log)

    def next(self) -> int:
        if self.choices is not None:
            if self.cursor >= len(self.choices):
                raise ChoiceExhausted(f"no choice left at draw {self.cursor}")
            n = self.choices[self.cursor]
            self.cursor += 1
        else:
            n = self._rng.getrandbits(32)
        self.log.append(n)
        return n

    def remaining(self) -> int:
        if self.choices is None:
            raise TypeError("random sources are unbounded")
        return len(self.choices) - self.cursor


@dataclass(frozen=True)
class HavocDomains:
    addresses: tuple[Address, ...]
    amounts: tuple[U256, ...] = DEFAULT_AMOUNTS
    msg_values: tuple[U256, ...] = (0,)

    def __post_init__(self):
        if not self.addresses or not self.amounts or not self.msg_values:
            raise ValueError("havoc domains must be non-empty")


def havoc_nat(cs: ChoiceSource) -> int:
    return cs.next()


def havoc_bool(cs: ChoiceSource) -> bool:
    return cs.next() % 2 == 1


def havoc_address(cs: ChoiceSource, domains: HavocDomains) -> Address:
    return domains.addresses[cs.next() % len(domains.addresses)]


def havoc_amount(cs: ChoiceSource, domains: HavocDomains) -> U256:
    return domains.amounts[cs.next() % len(domains.amounts)]


def havoc_msg(cs: ChoiceSource, domains: HavocDomains) -> Msg:
    sender = havoc_address(cs, domains)
    if len(domains.msg_values) == 1:
        # no draw spent on a singleton value domain
        return Msg(sender, domains.msg_values[0])
    return Msg(sender, domains.msg_values[cs.next() % len(domains.msg_values)])


def havoc_result(cs: ChoiceSource) -> CallResult:
    return REVERT if cs.next() % 2 == 0 else SUCCESS


def else_branch_gas(gas: int, g: int, strict_gas: bool) -> int:
    """Gas returned when the external call makes no further external call.

    The literal reading recomputes from the *parameter* ``gas`` and forgets
    whatever the re-entrant call consumed; strict accounting charges from
    the current ``g`` instead.
    """
    return gas_after_call(g if strict_gas else gas)


class _Direct:
    """Monitor stand-in that just runs the body."""

    def invoke(self, kind, method, args, gas, state, body):
        return body()


@dataclass
class Adversary:
    """Everything an external call needs: the oracle, domains and mode flags."""

    cs: ChoiceSource
    domains: HavocDomains
    variant: token.Variant = token.Variant.NOTIFY_SAFE
    strict_gas: bool = False
    propagate_failure: bool = False
    nonpayable: bool = False
    literal_aliasing: bool = False
    monitor: Any = field(default_factory=_Direct)

    def external_call(self, state: token.TokenState, gas: int):
        return self.monitor.invoke(
            "external", "ExternalCall", (), gas, state, lambda: self._external_body(state, gas)
        )

    def _external_body(self, state, gas):
        cs, d = self.cs, self.domains
        g, r = gas, None
        k = havoc_nat(cs)
        if k % 3 == REENTER_TRANSFER and g >= 1:
            from_ = havoc_address(cs, d)
            to = havoc_address(cs, d)
            amount = havoc_amount(cs, d)
            msg = havoc_msg(cs, d)
            g, r, state = self.reenter_transfer(state, from_, to, amount, msg, g - 1)
        elif k % 3 == REENTER_MINT and g >= 1:
            to = havoc_address(cs, d)
            amount = havoc_amount(cs, d)
            msg = havoc_msg(cs, d)
            g, r, state = self.reenter_mint(state, to, amount, msg, g - 1)
        b = havoc_bool(cs)
        if b and g >= 1:
            g, r, state = self.external_call(state, g - 1)
        else:
            g = else_branch_gas(gas, g, self.strict_gas)
            r = havoc_result(cs)
        return g, r, state

    def reenter_transfer(self, state, from_, to, amount, msg, gas):
        body: Callable = lambda: token.transfer_with_notify(
            state, self.variant, from_, to, amount, msg, gas, self
        )
        if self.variant is token.Variant.PLAIN:
            body = lambda: token.transfer(
                state, from_, to, amount, msg, gas,
                nonpayable=self.nonpayable, literal_aliasing=self.literal_aliasing,
            )
        return self.monitor.invoke(
            "reentrant", "Transfer", (from_, to, amount, msg), gas, state, body
        )

    def reenter_mint(self, state, to, amount, msg, gas):
        return self.monitor.invoke(
            "reentrant", "Mint", (to, amount, msg), gas, state,
            lambda: token.mint(state, to, amount, msg, gas, nonpayable=self.nonpayable),
        )


def external_call(state: token.TokenState, gas: int, adversary: Adversary):
    """Functional alias of :meth:`Adversary.external_call`."""
    return adversary.external_call(state, gas)
