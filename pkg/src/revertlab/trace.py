"""Transactions, call frames, violations and the JSON trace format."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

TRACE_VERSION = "1"

METHODS = ("Transfer", "Mint", "TransferNotify", "Bid", "AuctionEnd", "Withdraw")

FRAME_KINDS = ("tx", "reentrant", "external")

VIOLATION_KINDS = ("InvariantAtBoundary", "GasContract", "RevertPurity", "HistoryMonotonicity")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 2**64 - 1


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def state_hash(canonical: Any) -> str:
    return f"{fnv1a64(canonical_json(canonical).encode()):016x}"


@dataclass(frozen=True)
class Transaction:
    caller: str
    method: str
    args: tuple = ()
    value: int = 0
    gas: int = 1

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.gas < 0 or self.value < 0:
            raise ValueError("gas and value are naturals")

    def to_json(self) -> dict:
        return {
            "caller": self.caller,
            "method": self.method,
            "args": list(self.args),
            "value": self.value,
            "gas": self.gas,
        }

    @classmethod
    def from_json(cls, d: dict) -> Transaction:
        return cls(d["caller"], d["method"], tuple(d["args"]), d["value"], d["gas"])

    def __str__(self) -> str:
        args = ", ".join(str(a) for a in self.args)
        return f"{self.caller} -> {self.value}, {self.gas}, {self.method}({args})"


@dataclass
class Frame:
    depth: int
    kind: str
    method: str
    args: list
    gas_in: int
    gas_out: int | None = None
    result: str | None = None
    ginv_before: bool | None = None
    ginv_after: bool | None = None
    state_hash_after: str | None = None


@dataclass(frozen=True)
class Violation:
    kind: str
    frame: int
    site: str  # "entry" | "exit"
    relation: str = ""
    message: str = ""


def signature(kind: str, site: str, frame_kind: str, relation: str) -> tuple[str, str, str, str]:
    return (kind, site, frame_kind, relation)


def signature_rank(sig: tuple[str, str, str, str]) -> tuple:
    """Order used to pick a trace's primary violation.

    A broken invariant at transaction exit (the committed state) comes
    first; everything else is ordered by kind, frame kind and site.
    """
    kind, site, frame_kind, relation = sig
    committed = 0 if (frame_kind == "tx" and site == "exit") else 1
    return (
        committed,
        VIOLATION_KINDS.index(kind),
        FRAME_KINDS.index(frame_kind),
        0 if site == "entry" else 1,
        relation,
    )


def violation_signature(v: Violation, frames: list[Frame]) -> tuple[str, str, str, str]:
    return signature(v.kind, v.site, frames[v.frame].kind, v.relation)


def primary_violation(violations: list[Violation], frames: list[Frame]) -> Violation | None:
    if not violations:
        return None
    return min(
        violations, key=lambda v: (signature_rank(violation_signature(v, frames)), v.frame)
    )


@dataclass
class Trace:
    model: str
    config: dict
    transactions: list[Transaction] = field(default_factory=list)
    choices: list[int] = field(default_factory=list)
    frames: list[Frame] = field(default_factory=list)
    violation: Violation | None = None
    version: str = TRACE_VERSION

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "model": self.model,
            "config": self.config,
            "transactions": [t.to_json() for t in self.transactions],
            "choices": list(self.choices),
            "frames": [asdict(f) for f in self.frames],
            "violation": None if self.violation is None else asdict(self.violation),
        }

    @classmethod
    def from_json(cls, d: dict) -> Trace:
        if str(d.get("version")) != TRACE_VERSION:
            raise ValueError(f"unsupported trace version {d.get('version')!r}")
        v = d.get("violation")
        return cls(
            model=d["model"],
            config=d["config"],
            transactions=[Transaction.from_json(t) for t in d["transactions"]],
            choices=[int(c) for c in d["choices"]],
            frames=[Frame(**f) for f in d.get("frames", [])],
            violation=None if v is None else Violation(**v),
            version=str(d["version"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def loads(cls, text: str) -> Trace:
        return cls.from_json(json.loads(text))

    def size(self) -> int:
        return len(self.transactions) + len(self.choices)

    def call_shape(self) -> list:
        """Nested ``[method, [children...]]`` view of the frame list."""
        root: list = []
        stack = [(-1, root)]
        for f in self.frames:
            while stack[-1][0] >= f.depth:
                stack.pop()
            node = [f.method, []]
            stack[-1][1].append(node)
            stack.append((f.depth, node[1]))
        return root
