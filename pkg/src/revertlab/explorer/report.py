"""Exploration reports: what was covered and which violations were found."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from ..trace import Trace, signature_rank


@dataclass
class Finding:
    """One violation signature with its least witness."""

    kind: str
    site: str
    frame_kind: str
    relation: str
    count: int
    trace: Trace

    @property
    def signature(self) -> tuple[str, str, str, str]:
        return (self.kind, self.site, self.frame_kind, self.relation)

    def to_json(self) -> dict:
        v = self.trace.violation
        return {
            "kind": self.kind,
            "site": self.site,
            "frame_kind": self.frame_kind,
            "relation": self.relation,
            "count": self.count,
            "frame": None if v is None else v.frame,
            "message": None if v is None else v.message,
            "trace": self.trace.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> Finding:
        return cls(
            d["kind"], d["site"], d["frame_kind"], d["relation"], d["count"],
            Trace.from_json(d["trace"]),
        )


@dataclass
class Report:
    mode: str
    config: dict
    complete: bool = True
    branches: int = 0
    states: int = 0
    frames_total: int = 0
    frames_max: int = 0
    coverage: dict = field(default_factory=dict)
    findings: list[Finding] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return len(self.findings)

    def sort(self) -> None:
        self.findings.sort(key=lambda f: signature_rank(f.signature))

    def find(self, kind=None, site=None, frame_kind=None, relation=None) -> list[Finding]:
        want = {"kind": kind, "site": site, "frame_kind": frame_kind, "relation": relation}
        return [
            f for f in self.findings
            if all(v is None or getattr(f, k) == v for k, v in want.items())
        ]

    def to_json(self) -> dict:
        d = asdict(self)
        d["findings"] = [f.to_json() for f in self.findings]
        d["violations"] = self.violations
        return d

    @classmethod
    def from_json(cls, d: dict) -> Report:
        d = dict(d)
        d.pop("violations", None)
        d["findings"] = [Finding.from_json(f) for f in d.get("findings", [])]
        return cls(**d)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def loads(cls, text: str) -> Report:
        return cls.from_json(json.loads(text))

    def summary(self) -> str:
        head = (
            f"{self.mode} {self.config.get('model')}: "
            f"{self.branches} branches, {self.states} states, "
            f"{self.violations} violation signature(s)"
        )
        if not self.complete:
            head += " [INCOMPLETE: budget exceeded]"
        lines = [head]
        for f in self.findings:
            rel = f" {f.relation}" if f.relation else ""
            lines.append(
                f"  {f.kind} at {f.frame_kind} {f.site}{rel}: count={f.count}, "
                f"witness {len(f.trace.transactions)} tx / {len(f.trace.choices)} choices"
            )
        return "\n".join(lines)
