import json

import pytest

from brute import brute_explore
from revertlab.config import Config
from revertlab.core import MAX_UINT256
from revertlab.explorer.exhaustive import BudgetExceeded, explore
from revertlab.explorer.replay import replay
from revertlab.explorer.report import Report

SMALL = dict(addresses=2, amounts=[1, MAX_UINT256], gas=3, max_txs=2, max_choice=3)
ONE_TX = dict(
    addresses=2, amounts=[0, 1, MAX_UINT256], gas=3, max_txs=1, max_choice=3,
    setup=[{"caller": "Minter", "method": "Mint", "args": ["A", 1]}],
)


def summary(report):
    return {
        "states": report.states,
        "findings": {f.signature: f.count for f in report.findings},
        "frames_total": report.frames_total,
        "frames_max": report.frames_max,
    }


@pytest.mark.parametrize("model", ["token-plain", "auction"])
@pytest.mark.parametrize("flags", [{}, {"strict_gas": True}, {"literal_aliasing": True}, {"symmetry": False}])
def test_matches_brute_force_cheap_models(model, flags):
    cfg = Config(model=model, **SMALL, **flags)
    assert summary(explore(cfg)) == brute_explore(cfg)


@pytest.mark.parametrize("model", ["token-notify-safe", "token-notify-vuln"])
@pytest.mark.parametrize(
    "flags",
    [{}, {"strict_gas": True}, {"propagate_failure": True}, {"literal_aliasing": True}, {"symmetry": False}],
)
def test_matches_brute_force_one_transaction(model, flags):
    cfg = Config(model=model, **ONE_TX, **flags)
    assert summary(explore(cfg)) == brute_explore(cfg)


@pytest.mark.parametrize("model", ["token-notify-safe", "token-notify-vuln"])
def test_matches_brute_force_two_levels(model):
    cfg = Config(model=model, **SMALL)
    assert summary(explore(cfg)) == brute_explore(cfg)


def test_symmetry_reduction_keeps_findings():
    base = dict(model="token-notify-vuln", addresses=3, amounts=[1, 2], gas=3, max_txs=2, max_choice=3)
    on, off = explore(Config(**base)), explore(Config(**base, symmetry=False))
    assert [f.signature for f in on.findings] == [f.signature for f in off.findings]
    assert on.states <= off.states


def test_plain_token_is_clean():
    r = explore(Config(model="token-plain", max_txs=2))
    assert r.complete and r.violations == 0 and r.frames_max == 1


def test_literal_aliasing_breaks_safe_order():
    r = explore(Config(model="token-notify-safe", **SMALL, literal_aliasing=True))
    assert [f.relation for f in r.findings] == ["sum<total"]
    assert r.findings[0].trace.transactions[-1].args[0] == r.findings[0].trace.transactions[-1].args[1]


def test_findings_replay_and_carry_least_witnesses():
    r = explore(Config(model="token-notify-vuln", **SMALL))
    assert r.violations >= 1
    for f in r.findings:
        fresh = replay(f.trace)
        assert fresh.violation == f.trace.violation
        assert f.trace.frames[f.trace.violation.frame].kind == f.frame_kind


def test_report_order_and_json_roundtrip():
    r = explore(Config(model="token-notify-vuln", **SMALL))
    first = r.findings[0]
    assert (first.site, first.frame_kind) == ("exit", "tx")
    back = Report.loads(r.dumps())
    assert back.dumps() == r.dumps()
    assert json.loads(r.dumps())["violations"] == r.violations


def test_workers_do_not_change_the_report():
    cfg = Config(model="token-notify-vuln", **SMALL)
    assert explore(cfg, workers=1).dumps() == explore(cfg, workers=3).dumps()


def test_branch_budget():
    cfg = Config(model="token-plain", max_txs=3, max_branches=100)
    r = explore(cfg)
    assert not r.complete and r.branches == 100
    with pytest.raises(BudgetExceeded) as exc:
        explore(cfg, raise_on_budget=True)
    assert not exc.value.report.complete


def test_time_budget():
    r = explore(Config(model="token-notify-safe", time_limit=0.0))
    assert not r.complete


@pytest.mark.parametrize("gas,literal_max", [(6, 6), (7, 8), (8, 10)])
def test_frame_bound_literal_vs_strict(gas, literal_max):
    base = dict(ONE_TX, gas=gas, amounts=[1])
    lit = explore(Config(model="token-notify-safe", **base))
    strict = explore(Config(model="token-notify-safe", **base, strict_gas=True))
    assert lit.frames_max == literal_max
    assert strict.frames_max <= gas and strict.violations == 0
    bound = lit.find(kind="GasContract", relation="frame-bound")
    assert bool(bound) == (literal_max > gas)


def test_coverage_of_residues():
    r = explore(Config(model="token-notify-safe", **dict(SMALL, max_choice=6)))
    assert r.coverage == {"k": [0, 1, 2], "b": [0, 1], "result": [0, 1]}
