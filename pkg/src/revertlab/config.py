"""Scenario configuration shared by the explorer and the CLI."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .core import MAX_UINT256

MODEL_IDS = ("token-plain", "token-notify-safe", "token-notify-vuln", "auction")

# runtime-only knobs: never echoed, so reports do not depend on them
_NOT_ECHOED = ("workers", "out", "time_limit")


class ConfigError(ValueError):
    pass


@dataclass
class Config:
    model: str = "token-notify-safe"
    addresses: int | list[str] = 4
    amounts: list[int] = field(default_factory=lambda: [0, 1, 2, MAX_UINT256])
    gas: int = 6
    max_txs: int = 3
    max_choice: int = 6
    strict_gas: bool = False
    propagate_failure: bool = False
    nonpayable: bool = False
    literal_aliasing: bool = False
    symmetry: bool = True
    seed: int = 0
    iterations: int = 10_000
    workers: int = 1
    tx_values: list[int] = field(default_factory=lambda: [0])
    msg_values: list[int] = field(default_factory=lambda: [0])
    constructor_value: int = 0
    setup: list[dict] = field(default_factory=list)
    max_branches: int | None = None
    time_limit: float | None = None
    out: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.model not in MODEL_IDS:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {MODEL_IDS}")
        if isinstance(self.addresses, int):
            if self.addresses < 1:
                raise ConfigError("addresses must be >= 1")
        elif not self.addresses or not all(isinstance(a, str) for a in self.addresses):
            raise ConfigError("addresses must be a positive int or a list of names")
        for name in ("gas", "max_txs", "max_choice", "iterations", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        for name in ("amounts", "tx_values", "msg_values"):
            vals = getattr(self, name)
            if not vals or any(not (0 <= v <= MAX_UINT256) for v in vals):
                raise ConfigError(f"{name} must be a non-empty list of uint256 values")
        if self.max_branches is not None and self.max_branches < 1:
            raise ConfigError("max_branches must be >= 1")
        for step in self.setup:
            unknown = set(step) - {"caller", "method", "args", "value", "gas"}
            if unknown or "caller" not in step or "method" not in step:
                raise ConfigError(f"bad setup step {step!r}")

    @classmethod
    def from_dict(cls, d: dict) -> Config:
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def load(cls, path: str) -> Config:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)

    def echo(self) -> dict:
        """Config as recorded in traces and reports."""
        d = self.to_dict()
        for k in _NOT_ECHOED:
            d.pop(k, None)
        return d

    def replace(self, **changes) -> Config:
        d = self.to_dict()
        d.update(changes)
        return Config.from_dict(d)
