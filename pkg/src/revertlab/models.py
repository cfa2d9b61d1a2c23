"""Scenario models and the runtime contract monitor.

A model ties a contract to its transaction alphabet, its invariant and a
canonical serialization.  :class:`Monitor` wraps every call frame, checks
the proof obligations at its boundaries and records the frame list that
ends up in a trace.
"""
from __future__ import annotations

from collections.abc import Callable
from typing import Any

from . import auction, token
from .adversary import Adversary, ChoiceSource, HavocDomains
from .config import Config, ConfigError
from .core import Address, Msg, Registry, Revert, result_name, sum_values
from .trace import Frame, Transaction, Violation, state_hash

# (kind, site, relation, message)
Failure = tuple[str, str, str, str]


class Model:
    name: str
    methods: tuple[str, ...]

    def __init__(self, cfg: Config):
        self.cfg = cfg
        if isinstance(cfg.addresses, int):
            self.registry = Registry.of_size(cfg.addresses)
        else:
            self.registry = Registry(cfg.addresses)
        self.domains = HavocDomains(
            self.registry.addresses, tuple(cfg.amounts), tuple(cfg.msg_values)
        )

    # -- hooks -------------------------------------------------------------
    def constructor(self) -> Any:
        raise NotImplementedError

    def failures(self, state) -> list[tuple[str, str, str]]:
        """Invariant failures as ``(kind, relation, message)``."""
        raise NotImplementedError

    def revert_pure(self, old, new) -> bool:
        return old == new

    def canonical(self, state) -> Any:
        raise NotImplementedError

    def body(self, state, tx: Transaction, msg: Msg, adversary: Adversary) -> Callable:
        raise NotImplementedError

    def tx_domain(self) -> list[Transaction]:
        raise NotImplementedError

    def orbit_key(self, state) -> Any:
        """Key shared by states that differ only by renaming addresses.

        Models without a symmetry argument return the state itself.
        """
        return state

    # -- shared ------------------------------------------------------------
    def holds(self, state) -> bool:
        return not self.failures(state)

    def hash(self, state) -> str:
        return state_hash(self.canonical(state))

    def addr(self, name: str) -> Address:
        try:
            return self.registry[name]
        except KeyError:
            raise ConfigError(f"unknown address {name!r}") from None

    def initial_state(self):
        """Constructor followed by the configured setup transactions."""
        state = self.constructor()
        for step in self.cfg.setup:
            tx = Transaction(
                step["caller"], step["method"], tuple(step.get("args", ())),
                step.get("value", 0), step.get("gas", self.cfg.gas),
            )
            cs = ChoiceSource.exhaustive([])
            _, r, state = self.body(state, tx, self.msg_for(tx), self.adversary(cs))()
            if isinstance(r, Revert):
                raise ConfigError(f"setup step reverted: {tx}")
        return state

    def msg_for(self, tx: Transaction) -> Msg:
        return Msg(self.addr(tx.caller), tx.value)

    def adversary(self, cs: ChoiceSource, monitor=None) -> Adversary:
        kw = {} if monitor is None else {"monitor": monitor}
        return Adversary(
            cs,
            self.domains,
            variant=getattr(self, "variant", token.Variant.PLAIN),
            strict_gas=self.cfg.strict_gas,
            propagate_failure=self.cfg.propagate_failure,
            nonpayable=self.cfg.nonpayable,
            literal_aliasing=self.cfg.literal_aliasing,
            **kw,
        )


class TokenModel(Model):
    def __init__(self, cfg: Config, variant: token.Variant):
        super().__init__(cfg)
        self.variant = variant
        self.name = cfg.model
        transfer = "Transfer" if variant is token.Variant.PLAIN else "TransferNotify"
        self.methods = (transfer, "Mint")

    def constructor(self):
        return token.new_token(Msg(self.registry[0], self.cfg.constructor_value))

    def failures(self, state):
        total, s = state.total_amount, sum_values(state.balances)
        if total == s:
            return []
        rel = "sum>total" if s > total else "sum<total"
        return [("InvariantAtBoundary", rel, f"GInv: sum(balances)={s} total_amount={total}")]

    def orbit_key(self, state):
        # Renaming addresses maps executions to executions as long as every
        # domain (callers, havoced addresses) covers the whole universe.
        if not self.cfg.symmetry or self.cfg.max_choice < len(self.registry):
            return state
        bal = state.balances
        profile = sorted(
            (a == state.minter, a in bal, bal.get(a, 0)) for a in self.registry.addresses
        )
        return (tuple(profile), state.eth_balance, state.total_amount)

    def canonical(self, state):
        return {
            "minter": state.minter.name,
            "balances": [[a.name, v] for a, v in state.balances.sorted_items()],
            "eth": state.eth_balance,
            "total": state.total_amount,
        }

    def body(self, state, tx, msg, adversary):
        np = self.cfg.nonpayable
        if tx.method == "Mint":
            to, amount = self.addr(tx.args[0]), tx.args[1]
            return lambda: token.mint(state, to, amount, msg, tx.gas, nonpayable=np)
        if tx.method not in self.methods:
            raise ConfigError(f"{tx.method} is not a method of {self.name}")
        from_, to, amount = self.addr(tx.args[0]), self.addr(tx.args[1]), tx.args[2]
        if tx.method == "Transfer":
            la = self.cfg.literal_aliasing
            return lambda: token.transfer(
                state, from_, to, amount, msg, tx.gas, nonpayable=np, literal_aliasing=la
            )
        return lambda: token.transfer_with_notify(
            state, self.variant, from_, to, amount, msg, tx.gas, adversary
        )

    def tx_domain(self):
        names = self.registry.names
        txs = []
        for method in self.methods:
            for caller in names:
                for value in self.cfg.tx_values:
                    if method == "Mint":
                        for to in names:
                            for amt in self.cfg.amounts:
                                txs.append(Transaction(caller, method, (to, amt), value, self.cfg.gas))
                    else:
                        for fr in names:
                            for to in names:
                                for amt in self.cfg.amounts:
                                    txs.append(
                                        Transaction(caller, method, (fr, to, amt), value, self.cfg.gas)
                                    )
        return txs


class AuctionModel(Model):
    name = "auction"
    methods = ("Bid", "AuctionEnd", "Withdraw")

    def constructor(self):
        return auction.new_auction(self.registry[0], Msg(self.registry[0], self.cfg.constructor_value))

    def failures(self, state):
        out = []
        if not auction.ended_monotone(state.history):
            out.append(("HistoryMonotonicity", "ended", "ended was reset after becoming true"))
        if not auction.bid_monotone(state.history):
            out.append(("HistoryMonotonicity", "highest_bid", "highest_bid decreased or moved after end"))
        if not auction.escrow_balanced(state):
            out.append(("InvariantAtBoundary", "escrow", "eth balance does not match escrow"))
        return out

    def revert_pure(self, old, new):
        return auction.same_modulo_history(old, new)

    def canonical(self, state):
        return {
            "beneficiary": state.beneficiary.name,
            "highest_bid": state.highest_bid,
            "highest_bidder": None if state.highest_bidder is None else state.highest_bidder.name,
            "ended": state.ended,
            "eth": state.eth_balance,
            "pending": [[a.name, v] for a, v in state.pending_returns.sorted_items()],
            "paid_out": state.paid_out,
            "history": [[s.ended, s.highest_bid] for s in state.history],
        }

    def body(self, state, tx, msg, adversary):
        fn = {"Bid": auction.bid, "AuctionEnd": auction.auction_end, "Withdraw": auction.withdraw}
        if tx.method not in fn:
            raise ConfigError(f"{tx.method} is not a method of auction")
        return lambda: fn[tx.method](state, msg, tx.gas)

    def tx_domain(self):
        txs = []
        for caller in self.registry.names:
            for value in self.cfg.amounts:
                txs.append(Transaction(caller, "Bid", (), value, self.cfg.gas))
            for method in ("AuctionEnd", "Withdraw"):
                txs.append(Transaction(caller, method, (), 0, self.cfg.gas))
        return txs


def make_model(cfg: Config) -> Model:
    variants = {
        "token-plain": token.Variant.PLAIN,
        "token-notify-safe": token.Variant.NOTIFY_SAFE,
        "token-notify-vuln": token.Variant.NOTIFY_VULNERABLE,
    }
    if cfg.model == "auction":
        return AuctionModel(cfg)
    return TokenModel(cfg, variants[cfg.model])


# -- boundary checks ---------------------------------------------------------

def entry_failures(model: Model, state, gas: int, parent_gas: int | None) -> list[Failure]:
    out = [(k, "entry", rel, msg) for k, rel, msg in model.failures(state)]
    if parent_gas is not None and gas >= parent_gas:
        out.append(("GasContract", "entry", "edge", f"callee gas {gas} not below caller gas {parent_gas}"))
    return out


def exit_failures(model: Model, state, gas: int, g: int, r, new, kind: str = "tx") -> list[Failure]:
    out = []
    if not (g == 0 or g <= gas - 1):
        out.append(("GasContract", "exit", "gas-left", f"gas_left={g} for gas={gas}"))
    # the havoced status of an external call says nothing about its effects
    if kind != "external" and isinstance(r, Revert) and not model.revert_pure(state, new):
        out.append(("RevertPurity", "exit", "", "state changed on revert"))
    out.extend((k, "exit", rel, msg) for k, rel, msg in model.failures(new))
    return out


def jsonable(arg):
    if isinstance(arg, Address):
        return arg.name
    if isinstance(arg, Msg):
        return [arg.sender.name, arg.value]
    return arg


class Monitor:
    """Records frames and checks boundary obligations around every call."""

    def __init__(self, model: Model):
        self.model = model
        self.frames: list[Frame] = []
        self.violations: list[Violation] = []
        self._gas: list[int] = []

    def invoke(self, kind, method, args, gas, state, body):
        idx = len(self.frames)
        frame = Frame(len(self._gas), kind, method, [jsonable(a) for a in args], gas)
        self.frames.append(frame)
        parent = self._gas[-1] if self._gas else None
        self._record(idx, entry_failures(self.model, state, gas, parent))
        frame.ginv_before = self.model.holds(state)
        self._gas.append(gas)
        try:
            g, r, new = body()
        finally:
            self._gas.pop()
        self._record(idx, exit_failures(self.model, state, gas, g, r, new, kind))
        frame.gas_out = g
        frame.result = result_name(r)
        frame.ginv_after = self.model.holds(new)
        frame.state_hash_after = self.model.hash(new)
        return g, r, new

    def _record(self, idx: int, failures: list[Failure]) -> None:
        for kind, site, rel, msg in failures:
            self.violations.append(Violation(kind, idx, site, rel, msg))


def executing_frames(frames: list[Frame]) -> int:
    """Frames that ran a body, i.e. were entered with at least one unit of gas."""
    return sum(1 for f in frames if f.gas_in >= 1)


def run_transaction(model: Model, state, tx: Transaction, cs: ChoiceSource, monitor: Monitor):
    """Execute one top-level transaction under ``monitor``."""
    start = len(monitor.frames)
    adv = model.adversary(cs, monitor)
    body = model.body(state, tx, model.msg_for(tx), adv)
    g, r, new = monitor.invoke("tx", tx.method, tx.args, tx.gas, state, body)
    n = executing_frames(monitor.frames[start:])
    if n > tx.gas:
        monitor.violations.append(
            Violation("GasContract", start, "exit", "frame-bound", f"{n} executing frames for gas {tx.gas}")
        )
    return g, r, new
