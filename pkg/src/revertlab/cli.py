"""Command-line front end.

Exit codes: 0 clean, 2 violations found, 1 usage or internal error,
3 replay divergence.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .config import Config, ConfigError
from .explorer.exhaustive import explore
from .explorer.fuzz import fuzz
from .explorer.replay import ReplayDivergence, replay_report
from .explorer.report import Report
from .explorer.shrink import NotAViolation, shrink
from .trace import Trace

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION, EXIT_DIVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    return [int(x, 0) for x in text.split(",") if x.strip()]


def _addresses(text: str):
    return int(text) if text.isdigit() else [a.strip() for a in text.split(",")]


def _config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("scenario (flags override --config)")
    g.add_argument("--config", help="JSON file with config fields")
    g.add_argument("--model")
    g.add_argument("--addresses", type=_addresses, help="count or comma-separated names")
    g.add_argument("--amounts", type=_ints, help="comma-separated havoc amounts")
    g.add_argument("--gas", type=int)
    g.add_argument("--max-txs", type=int)
    g.add_argument("--max-choice", type=int)
    g.add_argument("--strict-gas", action="store_true", default=None)
    g.add_argument("--propagate-failure", action="store_true", default=None)
    g.add_argument("--nonpayable", action="store_true", default=None)
    g.add_argument("--literal-aliasing", action="store_true", default=None)
    g.add_argument("--no-symmetry", dest="symmetry", action="store_false", default=None)
    g.add_argument("--setup", help="JSON list of setup transactions")
    g.add_argument("--seed", type=int)
    g.add_argument("--iterations", type=int)
    g.add_argument("--workers", type=int, help="worker processes (env WORKERS also works)")
    g.add_argument("--max-branches", type=int)
    g.add_argument("--time-limit", type=float)
    p.add_argument("--out", help="write the JSON report here")


_FIELDS = (
    "model", "addresses", "amounts", "gas", "max_txs", "max_choice", "strict_gas",
    "propagate_failure", "nonpayable", "literal_aliasing", "symmetry", "seed",
    "iterations", "workers", "max_branches", "time_limit", "out",
)


def build_config(args: argparse.Namespace) -> Config:
    d: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                d.update(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if "workers" not in d and os.environ.get("WORKERS"):
        d["workers"] = int(os.environ["WORKERS"])
    for name in _FIELDS:
        v = getattr(args, name, None)
        if v is not None:
            d[name] = v
    if getattr(args, "setup", None):
        d["setup"] = json.loads(args.setup)
    return Config.from_dict(d)


def _write(path: str | None, text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")


def _report_exit(report: Report) -> int:
    if report.violations:
        return EXIT_VIOLATION
    return EXIT_OK if report.complete else EXIT_ERROR


def cmd_explore(args) -> int:
    cfg = build_config(args)
    report = explore(cfg)
    _write(cfg.out, report.dumps())
    print(report.summary())
    return _report_exit(report)


def cmd_fuzz(args) -> int:
    cfg = build_config(args)
    report = fuzz(cfg)
    _write(cfg.out, report.dumps())
    print(report.summary())
    return _report_exit(report)


def load_trace(path: str, index: int = 0) -> Trace:
    """A trace file, or finding ``index`` of a report file."""
    with open(path) as fh:
        d = json.load(fh)
    if "findings" in d:
        findings = d["findings"]
        if not 0 <= index < len(findings):
            raise UsageError(f"{path} has {len(findings)} finding(s); no index {index}")
        d = findings[index]["trace"]
    return Trace.from_json(d)


def cmd_replay(args) -> int:
    trace = load_trace(args.trace, args.index)
    report = replay_report(trace)
    _write(args.out, report.dumps())
    print(report.summary())
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_shrink(args) -> int:
    trace = load_trace(args.trace, args.index)
    small = shrink(trace)
    _write(args.out, small.dumps())
    print(f"shrunk {trace.size()} -> {small.size()} (transactions + choices)")
    for tx in small.transactions:
        print(f"  {tx}")
    print(f"  choices {small.choices}")
    return EXIT_VIOLATION


def _storage(items: list[str]) -> dict[int, int]:
    out = {}
    for it in items:
        k, sep, v = it.partition("=")
        if not sep:
            raise UsageError(f"storage entry {it!r} is not key=value")
        out[int(k, 0)] = int(v, 0)
    return out


def cmd_evm_run(args) -> int:
    from .evm import format_trace, init, trace_n

    text = args.code[2:] if args.code.startswith("0x") else args.code
    try:
        code = bytes.fromhex(text)
    except ValueError:
        raise UsageError(f"--code is not hex: {args.code!r}") from None
    st, log = trace_n(init(code, args.gas, _storage(args.storage)), args.steps)
    if args.trace:
        print(format_trace(log))
    print(st)
    return EXIT_OK


def cmd_evm_check_inc(args) -> int:
    from .evm.checks import check_inc

    cases = check_inc(args.random, args.seed)
    bad = [c for c in cases if not c.ok]
    returns = sum(c.outcome == "RETURNS" for c in cases)
    print(f"INC: {len(cases)} cases, {returns} RETURNS, {len(cases) - returns} REVERTS, {len(bad)} failure(s)")
    for c in bad[:10]:
        print(f"  initial={c.initial}: {c.outcome}")
    return EXIT_VIOLATION if bad else EXIT_OK


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="revertlab", description="Re-entrancy model checker and mini EVM.")
    sub = p.add_subparsers(dest="command", required=True)
    e = sub.add_parser("explore", help="bounded-exhaustive exploration")
    _config_flags(e)
    e.set_defaults(fn=cmd_explore)
    f = sub.add_parser("fuzz", help="randomized exploration")
    _config_flags(f)
    f.set_defaults(fn=cmd_fuzz)
    for name, fn, what in (("replay", cmd_replay, "re-execute"), ("shrink", cmd_shrink, "minimize")):
        s = sub.add_parser(name, help=f"{what} a trace (or a report finding)")
        s.add_argument("trace")
        s.add_argument("--index", type=int, default=0, help="finding index when given a report")
        s.add_argument("--out")
        s.set_defaults(fn=fn)
    ev = sub.add_parser("evm", help="mini EVM").add_subparsers(dest="evm_command", required=True)
    r = ev.add_parser("run", help="run bytecode")
    r.add_argument("--code", required=True, help="hex bytecode")
    r.add_argument("--gas", type=int, required=True)
    r.add_argument("--steps", type=int, default=10_000)
    r.add_argument("--storage", nargs="*", default=[], metavar="K=V")
    r.add_argument("--trace", action="store_true", help="print one line per step")
    r.set_defaults(fn=cmd_evm_run)
    c = ev.add_parser("check-inc", help="increment contract biconditional suite")
    c.add_argument("--random", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_evm_check_inc)
    return p


def run(argv: list[str] | None = None) -> int:
    p = parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.fn(args)
    except ReplayDivergence as exc:
        print(f"replay divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except NotAViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ConfigError, UsageError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())
