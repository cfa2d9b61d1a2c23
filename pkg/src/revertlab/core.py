"""Fixed-width arithmetic, accounts, messages and call results.

Contract-level arithmetic is *checked*: an addition that would leave the
256-bit range raises instead of wrapping, and the caller is expected to
turn that into a revert.  The bytecode interpreter in :mod:`revertlab.evm`
wraps modulo 2**256 instead; the two semantics are deliberately distinct.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Any, NamedTuple

MAX_UINT256 = 2**256 - 1

#: Contract amounts are plain Python ints kept inside [0, MAX_UINT256].
U256 = int


class CheckedOverflow(ArithmeticError):
    """a + b does not fit in 256 bits."""


class CheckedUnderflow(ArithmeticError):
    """a - b would be negative."""


def u256(value: int) -> U256:
    """Validate a natural as a 256-bit word."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"expected int, got {type(value).__name__}")
    if value < 0 or value > MAX_UINT256:
        raise ValueError(f"{value} is outside the uint256 range")
    return value


def checked_add(a: U256, b: U256) -> U256:
    s = a + b
    if s > MAX_UINT256:
        raise CheckedOverflow(f"{a} + {b} exceeds MAX_UINT256")
    return s


def checked_sub(a: U256, b: U256) -> U256:
    if a < b:
        raise CheckedUnderflow(f"{a} - {b} is negative")
    return a - b


def sum_values(m: Mapping[Any, int]) -> int:
    """Exact (unbounded) sum of the values of ``m``."""
    return sum(m.values())


def transaction_fee(max_gas: int, gas_left: int, gas_price: int) -> int:
    """ETH charged to the initiator: ``(max_gas - gas_left) * gas_price``."""
    if min(max_gas, gas_left, gas_price) < 0:
        raise ValueError("gas quantities are naturals")
    if gas_left > max_gas:
        raise ValueError(f"gas_left={gas_left} exceeds max_gas={max_gas}")
    return (max_gas - gas_left) * gas_price


class Address(NamedTuple):
    id: int
    name: str = ""
    is_contract: bool = False

    def __repr__(self) -> str:
        return self.name or f"@{self.id}"


class Msg(NamedTuple):
    sender: Address
    value: U256 = 0


DEFAULT_NAMES = ("Minter", "A", "B", "Attacker")
CONTRACT_NAMES = frozenset({"Attacker", "Accomplice"})


class Registry:
    """Finite address universe with symbolic names."""

    def __init__(self, names: Iterable[str]):
        names = list(names)
        if not names:
            raise ValueError("address universe must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate address names in {names}")
        self.addresses = tuple(
            Address(i, n, n in CONTRACT_NAMES) for i, n in enumerate(names)
        )
        self._by_name = {a.name: a for a in self.addresses}

    @classmethod
    def of_size(cls, n: int) -> Registry:
        if n < 1:
            raise ValueError("address universe must be non-empty")
        names = list(DEFAULT_NAMES[:n]) + [f"U{i}" for i in range(len(DEFAULT_NAMES), n)]
        return cls(names)

    def __getitem__(self, key: str | int) -> Address:
        if isinstance(key, int):
            return self.addresses[key]
        return self._by_name[key]

    def __len__(self) -> int:
        return len(self.addresses)

    def __iter__(self) -> Iterator[Address]:
        return iter(self.addresses)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.addresses]


class Revert:
    """Failed call; carries no payload."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Revert()"

    def __reduce__(self):
        return (Revert, ())


REVERT = Revert()


@dataclass(frozen=True)
class Success:
    value: Any = ()


CallResult = Revert | Success
SUCCESS = Success()


def result_name(r: CallResult | None) -> str | None:
    if r is None:
        return None
    return "Revert" if isinstance(r, Revert) else "Success"


def gas_after_call(gas: int) -> int:
    """Gas left after a call that consumes one unit (floored at zero)."""
    return gas - 1 if gas >= 1 else 0


class FrozenMap(Mapping):
    """Immutable, hashable mapping; updates return new instances."""

    __slots__ = ("_d", "_hash")

    def __init__(self, items: Mapping | Iterable = ()):
        self._d = dict(items)
        self._hash = None

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def __contains__(self, key) -> bool:
        return key in self._d

    def get(self, key, default=None):
        return self._d.get(key, default)

    def set(self, key, value) -> FrozenMap:
        d = dict(self._d)
        d[key] = value
        return FrozenMap(d)

    def remove(self, key) -> FrozenMap:
        d = dict(self._d)
        del d[key]
        return FrozenMap(d)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, FrozenMap):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}: {v!r}" for k, v in self.sorted_items())
        return "{" + inner + "}"

    def sorted_items(self) -> list[tuple[Any, Any]]:
        return sorted(self._d.items(), key=lambda kv: kv[0])

    def __reduce__(self):
        return (FrozenMap, (self._d,))
