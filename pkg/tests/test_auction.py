from hypothesis import given
from hypothesis import strategies as st

from revertlab import auction
from revertlab.auction import Snapshot
from revertlab.core import REVERT, SUCCESS, Msg, Registry

REG = Registry(["Minter", "A", "B", "C"])
BEN, A, B, C = REG.addresses


def fresh(value=0):
    return auction.new_auction(BEN, Msg(BEN, value))


def test_first_bid():
    g, r, s = auction.bid(fresh(), Msg(A, 5), 2)
    assert (g, r, s.highest_bid, s.highest_bidder) == (1, SUCCESS, 5, A)


def test_equal_bid_reverts():
    _, _, s = auction.bid(fresh(), Msg(A, 5), 2)
    g, r, s2 = auction.bid(s, Msg(B, 5), 2)
    assert (g, r) == (1, REVERT) and auction.same_modulo_history(s, s2)
    assert len(s2.history) == len(s.history) + 1


def test_outbid_refund_and_withdraw():
    _, _, s = auction.bid(fresh(), Msg(A, 5), 3)
    _, _, s = auction.bid(s, Msg(B, 7), 3)
    assert s.pending_returns[A] == 5 and s.eth_balance == 12
    _, r, s = auction.withdraw(s, Msg(A), 3)
    assert r is SUCCESS and A not in s.pending_returns and s.eth_balance == 7
    assert auction.withdraw(s, Msg(A), 3)[1] is REVERT


def test_ended_stays_ended():
    _, _, s = auction.bid(fresh(), Msg(A, 5), 3)
    _, r, s = auction.auction_end(s, Msg(C), 3)
    assert r is SUCCESS and s.ended and s.eth_balance == 0 and s.paid_out == 5
    for step in (lambda x: auction.bid(x, Msg(B, 9), 3), lambda x: auction.auction_end(x, Msg(A), 3)):
        _, r, s = step(s)
        assert r is REVERT and s.history[-1].ended
    assert auction.ended_monotone(s.history) and auction.bid_monotone(s.history)


def test_gas_zero_reverts_everything():
    s = fresh()
    for fn in (auction.auction_end, auction.withdraw):
        assert fn(s, Msg(A), 0)[:2] == (0, REVERT)
    assert auction.bid(s, Msg(A, 1), 0)[:2] == (0, REVERT)


def test_history_predicates_detect_regressions():
    assert not auction.ended_monotone((Snapshot(False, 0), Snapshot(True, 0), Snapshot(False, 0)))
    assert not auction.bid_monotone((Snapshot(False, 3), Snapshot(False, 2)))
    assert not auction.bid_monotone((Snapshot(True, 3), Snapshot(True, 4)))


ops = st.lists(
    st.tuples(st.sampled_from(["bid", "end", "withdraw"]), st.sampled_from([A, B, C]),
              st.integers(0, 20), st.integers(0, 3)),
    max_size=25,
)


@given(ops)
def test_random_histories_are_monotone(seq):
    s = fresh(3)
    for op, who, value, gas in seq:
        before = s
        if op == "bid":
            g, r, s = auction.bid(s, Msg(who, value), gas)
        elif op == "end":
            g, r, s = auction.auction_end(s, Msg(who), gas)
        else:
            g, r, s = auction.withdraw(s, Msg(who), gas)
        assert len(s.history) == len(before.history) + 1
        assert g == 0 or g <= gas - 1
        if r is REVERT:
            assert auction.same_modulo_history(before, s)
        assert auction.escrow_balanced(s)
    assert auction.ended_monotone(s.history) and auction.bid_monotone(s.history)
