"""Small-step search over every execution of one level of transactions.

A transaction that notifies its receiver unfolds into a tree of call
frames driven by havoc choices.  Rather than enumerating choice sequences
one by one, the search walks *configurations*

    (tag, stack, state id, gas, frames, primary)

where ``stack`` lists the open frames as small tuples, ``frames`` counts
executing frames of the current transaction and ``primary`` is the
highest-ranked violation signature met on the path so far (or None).  Stack records never mention
the transaction's start state (and only the vulnerable order keeps the
pending ``from`` write), so configurations reached from different start
states or different transactions are explored once.

Children are produced in the lexicographic order of the choice labels
that lead to them and the walk is depth-first with first-visit pruning.
The first path that reaches a configuration is therefore the
lexicographically least one, which makes every witness independent of
how roots are split between workers.
"""
from __future__ import annotations

from itertools import product

from .. import token
from ..adversary import else_branch_gas
from ..core import REVERT, SUCCESS, Msg, gas_after_call
from ..models import Model, TokenModel
from ..trace import Transaction, signature, signature_rank

_EMPTY: frozenset = frozenset()

# configuration tags
ROOT, ENTER, AFTER_K, COMMIT = "R", "E", "K", "C"
# stack record tags
EXT, NOTIFY = "E", "T"
# move kinds
_FAIL, _OK = 0, 1

FRAME_BOUND = signature("GasContract", "exit", "tx", "frame-bound")
_BOUND = frozenset({FRAME_BOUND})
_RANK: dict = {}


def _rank(sig):
    r = _RANK.get(sig)
    if r is None:
        r = _RANK[sig] = signature_rank(sig)
    return r


def _fold(best, new: frozenset):
    """Keep only the primary signature: the set of signatures met on a path
    only grows, so its minimum can be folded in as it goes."""
    if not new:
        return best
    m = min(new, key=_rank)
    if best is None or _rank(m) < _rank(best):
        return m
    return best


class LevelSearch:
    """Explores the roots of one transaction level, depth-first."""

    def __init__(self, model: Model):
        self.model = model
        cfg = model.cfg
        mc = cfg.max_choice
        d = model.domains
        self.addresses = d.addresses
        self.amounts = d.amounts
        self.msg_values = d.msg_values
        self.variant = getattr(model, "variant", None)
        self.notify = isinstance(model, TokenModel) and self.variant is not token.Variant.PLAIN
        self.strict = cfg.strict_gas
        self.propagate = cfg.propagate_failure
        self.nonpayable = cfg.nonpayable
        self.aliasing = cfg.literal_aliasing
        # only the stale write of the vulnerable order reads the pending
        # ``from`` balance after the call; keeping it elsewhere would split
        # otherwise identical configurations
        self.pending = self.variant is token.Variant.NOTIFY_VULNERABLE
        self.k_dom = range(min(3, mc))
        self.bool_dom = range(min(2, mc))
        self.addr_dom = range(min(len(d.addresses), mc))
        self.amt_dom = range(min(len(d.amounts), mc))
        self.val_dom = range(min(len(d.msg_values), mc)) if len(d.msg_values) > 1 else None
        self.states: list = []
        self._ids: dict = {}
        self._bad: list = []
        self._transfer_moves: dict = {}
        self._mint_moves: dict = {}
        self._stale: dict = {}
        self.coverage = {"k": set(), "b": set(), "result": set()}

    # -- interning -----------------------------------------------------------
    def intern(self, state) -> int:
        sid = self._ids.get(state)
        if sid is None:
            sid = len(self.states)
            self._ids[state] = sid
            self.states.append(state)
            self._bad.append(tuple((k, rel) for k, rel, _ in self.model.failures(state)))
        return sid

    # -- checks ------------------------------------------------------------
    def entry_sigs(self, sid: int, kind: str) -> frozenset:
        f = self._bad[sid]
        if not f:
            return _EMPTY
        return frozenset(signature(k, "entry", kind, rel) for k, rel in f)

    def exit_sigs(self, kind: str, gas: int, g: int, r, entry, sid: int) -> frozenset:
        bad = self._bad[sid]
        gas_ok = g == 0 or g <= gas - 1
        pure = r is not REVERT or kind == "external" or entry == sid
        if gas_ok and pure and not bad:
            return _EMPTY
        out = {signature(k, "exit", kind, rel) for k, rel in bad}
        if not gas_ok:
            out.add(signature("GasContract", "exit", kind, "gas-left"))
        if not pure and not self.model.revert_pure(self.states[entry], self.states[sid]):
            out.add(signature("RevertPurity", "exit", kind, ""))
        return frozenset(out) if out else _EMPTY

    @staticmethod
    def _edge(caller_gas: int, gas: int, kind: str) -> frozenset:
        if gas >= caller_gas:
            return frozenset({signature("GasContract", "entry", kind, "edge")})
        return _EMPTY

    # -- havoced argument moves (independent of gas once gas >= 1) ----------
    def _msgs(self):
        for si in self.addr_dom:
            if self.val_dom is None:
                yield (si,), Msg(self.addresses[si], self.msg_values[0])
            else:
                for vi in self.val_dom:
                    yield (si, vi), Msg(self.addresses[si], self.msg_values[vi])

    def transfer_moves(self, sid: int) -> list:
        """``(label, kind, data)`` for every passing argument tuple plus the
        least failing one; all failing tuples lead to the same outcome."""
        hit = self._transfer_moves.get(sid)
        if hit is not None:
            return hit
        state = self.states[sid]
        A, M = self.addresses, self.amounts
        bal = state.balances
        moves = []
        first_fail = None
        for fi, ti, ai in product(self.addr_dom, self.addr_dom, self.amt_dom):
            frm = A[fi]
            funded = frm in bal and bal[frm] >= M[ai]
            if not funded and first_fail is not None:
                continue
            for mw, msg in self._msgs():
                if funded and msg.sender == frm and token.transfer_guard(
                    state, frm, A[ti], M[ai], msg, 1, self.nonpayable
                ):
                    data = self._transfer_ok(state, frm, A[ti], M[ai], msg)
                    moves.append(((fi, ti, ai) + mw, _OK, data))
                elif first_fail is None:
                    first_fail = (fi, ti, ai) + mw
        if first_fail is not None:
            moves.append((first_fail, _FAIL, None))
            moves.sort(key=lambda m: m[0])
        self._transfer_moves[sid] = moves
        return moves

    def _transfer_ok(self, state, frm, to, amount, msg):
        if not self.notify:
            _, _, new = token.transfer(
                state, frm, to, amount, msg, 1,
                nonpayable=self.nonpayable, literal_aliasing=self.aliasing,
            )
            return self.intern(new)
        at_call, na = token.notify_effects(state, self.variant, frm, to, amount, msg, self.aliasing)
        if not self.pending:
            frm = na = None
        return frm, self.intern(at_call), na

    def mint_moves(self, sid: int) -> list:
        hit = self._mint_moves.get(sid)
        if hit is not None:
            return hit
        state = self.states[sid]
        A, M = self.addresses, self.amounts
        moves = []
        failed = False
        for ti, ai in product(self.addr_dom, self.amt_dom):
            for mw, msg in self._msgs():
                label = (ti, ai) + mw
                if token.mint_guard(state, A[ti], M[ai], msg, 1, self.nonpayable):
                    _, _, new = token.mint(state, A[ti], M[ai], msg, 1, nonpayable=self.nonpayable)
                    moves.append((label, _OK, self.intern(new)))
                elif not failed:
                    failed = True
                    moves.append((label, _FAIL, None))
        self._mint_moves[sid] = moves
        return moves

    def _first_label(self, k: int) -> tuple:
        n = 4 if k == 0 else 3
        return (k,) + (0,) * (n + (self.val_dom is not None))

    # -- transitions -------------------------------------------------------
    def start(self, state, tx: Transaction):
        """The configuration (or commit) a root transaction leads to."""
        m = self.model
        msg = m.msg_for(tx)
        gas = tx.gas
        sid = self.intern(state)
        sig = _fold(None, self.entry_sigs(sid, "tx"))
        n = 1 if gas >= 1 else 0
        if self.notify and tx.method == "TransferNotify":
            frm, to, amount = m.addr(tx.args[0]), m.addr(tx.args[1]), tx.args[2]
            if token.transfer_guard(state, frm, to, amount, msg, gas, self.nonpayable):
                at_call, na = token.notify_effects(
                    state, self.variant, frm, to, amount, msg, self.aliasing
                )
                if not self.pending:
                    frm = na = None
                rec = (NOTIFY, "tx", gas, frm, na, sid if self.propagate else None)
                cg = gas - 1
                edge = self._edge(gas, cg, "external")
                return (ENTER, (rec, (EXT, cg)), self.intern(at_call), n, _fold(sig, edge))
            g, r, new = gas_after_call(gas), REVERT, sid
        else:
            g, r, after = m.body(state, tx, msg, m.adversary(None))()
            new = self.intern(after)
        sig = _fold(sig, self.exit_sigs("tx", gas, g, r, sid, new))
        if n > gas:
            sig = _fold(sig, _BOUND)
        return (COMMIT, new, n, sig)

    def _notify_return(self, rec, g1, r1, sid):
        _, _, gas_in, frm, na, entry = rec
        g = gas_after_call(g1)
        if self.propagate and r1 is REVERT:
            return g, REVERT, entry
        if self.pending:
            key = (sid, frm, na)
            new = self._stale.get(key)
            if new is None:
                _, _, after = token.notify_return(
                    None, self.variant, frm, na, gas_in, g1, r1, self.states[sid]
                )
                new = self._stale[key] = self.intern(after)
            return g, SUCCESS, new
        return g, SUCCESS, sid

    def _return(self, stack, s, g, r, n, sig):
        """The frame on top of ``stack`` returns ``(s, g, r)``; unwind until
        the next choice point or the end of the transaction."""
        while True:
            rec = stack[-1]
            stack = stack[:-1]
            if rec[0] == EXT:
                sig = _fold(sig, self.exit_sigs("external", rec[1], g, r, None, s))
                parent = stack[-1]
                if parent[0] == NOTIFY:
                    g, r, s = self._notify_return(parent, g, r, s)
                # an external parent made this call as its tail: it returns as is
                continue
            _, kind, gas_in, _, _, entry = rec
            sig = _fold(sig, self.exit_sigs(kind, gas_in, g, r, entry, s))
            if not stack:
                if n > gas_in:
                    sig = _fold(sig, _BOUND)
                return (COMMIT, s, n, sig)
            return (AFTER_K, stack, s, g, n, sig)

    def children(self, c) -> list:
        """``(label, child)`` pairs in label order."""
        if c[0] == ENTER:
            return self._enter(c)
        return self._after_k(c)

    def _enter(self, c):
        _, stack, s, n, sig = c
        gas = stack[-1][1]
        sig = _fold(sig, self.entry_sigs(s, "external"))
        if gas >= 1:
            n += 1
        out = []
        cov = self.coverage["k"]
        for k in self.k_dom:
            res = k % 3
            cov.add(res)
            if res >= 2 or gas < 1:
                out.append(((k,), (AFTER_K, stack, s, gas, n, sig)))
                continue
            cg = gas - 1
            n2 = n + 1 if cg >= 1 else n
            base = _fold(_fold(sig, self.entry_sigs(s, "reentrant")), self._edge(gas, cg, "reentrant"))
            if cg == 0:
                # every guard requires gas >= 1
                out.append((self._first_label(res), self._fail(stack, s, cg, n2, base)))
                continue
            if res == 1:
                for label, kind, data in self.mint_moves(s):
                    if kind == _FAIL:
                        child = self._fail(stack, s, cg, n2, base)
                    else:
                        child = self._ok(stack, s, data, cg, n2, base)
                    out.append(((k,) + label, child))
                continue
            for label, kind, data in self.transfer_moves(s):
                if kind == _FAIL:
                    child = self._fail(stack, s, cg, n2, base)
                elif not self.notify:
                    child = self._ok(stack, s, data, cg, n2, base)
                else:
                    frm, at_call, na = data
                    rec = (NOTIFY, "reentrant", cg, frm, na, s if self.propagate else None)
                    edge = self._edge(cg, cg - 1, "external")
                    child = (ENTER, stack + (rec, (EXT, cg - 1)), at_call, n2, _fold(base, edge))
                out.append(((k,) + label, child))
        return out

    def _fail(self, stack, s, cg, n, sig):
        g = gas_after_call(cg)
        return (AFTER_K, stack, s, g, n, _fold(sig, self.exit_sigs("reentrant", cg, g, REVERT, s, s)))

    def _ok(self, stack, s, new, cg, n, sig):
        g = cg - 1
        return (AFTER_K, stack, new, g, n, _fold(
            sig, self.exit_sigs("reentrant", cg, g, SUCCESS, s, new)))

    def _after_k(self, c):
        _, stack, s, ga, n, sig = c
        gp = stack[-1][1]
        out = []
        for b in self.bool_dom:
            self.coverage["b"].add(b % 2)
            if b % 2 == 1 and ga >= 1:
                cg = ga - 1
                child = (ENTER, stack + ((EXT, cg),), s, n, _fold(sig, self._edge(gp, cg, "external")))
                out.append(((b,), child))
                continue
            g = else_branch_gas(gp, ga, self.strict)
            for res in self.bool_dom:
                self.coverage["result"].add(res % 2)
                r = REVERT if res % 2 == 0 else SUCCESS
                out.append(((b, res), self._return(stack, s, g, r, n, sig)))
        return out

    # -- driver ------------------------------------------------------------
    def run(self, roots, on_commit, deadline=None) -> bool:
        """Depth-first walk from each ``(key, state, tx)`` root in order.

        ``on_commit(key, choices, state, frames, primary)`` is called once per
        distinct commit configuration, with its least witness.  Returns
        False if ``deadline`` (a zero-argument callable) fired first.
        """
        seen: dict = {}
        states = self.states
        children = self.children
        for key, state, tx in roots:
            if deadline is not None and deadline():
                return False
            root = (ROOT, key)
            seen[root] = None
            stack = [(self.start(state, tx), root, ())]
            while stack:
                c, parent, label = stack.pop()
                if c in seen:
                    continue
                seen[c] = (parent, label)
                if c[0] == COMMIT:
                    on_commit(key, _choices(seen, c), states[c[1]], c[2], c[3])
                    continue
                for lab, child in reversed(children(c)):
                    if child not in seen:
                        stack.append((child, c, lab))
        return True


def _choices(seen: dict, c) -> tuple:
    labels = []
    while True:
        entry = seen[c]
        if entry is None:
            break
        c, label = entry
        labels.append(label)
    out: list = []
    for label in reversed(labels):
        out.extend(label)
    return tuple(out)
