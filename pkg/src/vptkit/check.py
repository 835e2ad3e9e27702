"""Functionality and equivalence of visibly pushdown transducers.

A VPT restricted to inputs of nesting height at most ``cap`` is a finite
transducer whose states are ``(state, stack)`` pairs.  Functionality is decided
by running the delay search of :mod:`vptkit.fst` over the square of that
transducer, built on demand.  Inputs whose height exceeds ``8 N^4`` never need
to be looked at, so ``cap = 8 N^4`` gives an exact answer.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .fst import FunctionalityVerdict, Witness, confirm_witness, delay_search
from .model import (CallTrans, InputWord, RetTrans, StructuredAlphabet, Vpa, Vpt, height,
                    merge_alphabets, reencode)
from .semantics import PushdownGraph, full_summary, graph_of, summary_layers, transduce

DEFAULT_BUDGET = 500_000


def height_bound(n: int) -> int:
    """Nesting height beyond which a shorter non-functionality witness exists."""
    if n < 1:
        raise ValueError("height_bound needs at least one state")
    return 8 * n ** 4


def default_budget() -> int:
    return int(os.environ.get("VPTKIT_NODE_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class CheckOptions:
    height_cap: Optional[int] = None  # None: the exact bound 8 N^4
    node_budget: int = field(default_factory=default_budget)

    def __post_init__(self):
        if self.height_cap is not None and self.height_cap < 1:
            raise ValueError("height_cap must be >= 1")
        if self.node_budget < 1:
            raise ValueError("node_budget must be >= 1")

    def cap_for(self, t: Vpa) -> int:
        return self.height_cap if self.height_cap is not None else height_bound(max(t.n_states, 1))

    def exact_for(self, t: Vpa) -> bool:
        return self.cap_for(t) >= height_bound(max(t.n_states, 1))


# -- on-demand expansion ----------------------------------------------------


class ExpandedState(NamedTuple):
    state: int
    stack: tuple[int, ...]


class LazyFst:
    """The finite transducer simulating ``t`` on inputs of height <= ``cap``.

    Nothing is materialised; states are produced by :meth:`successors`.
    """

    def __init__(self, t: Vpt, cap: int):
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self.vpt = t
        self.cap = cap

    def initial(self) -> list[ExpandedState]:
        return [ExpandedState(q, ()) for q in sorted(self.vpt.initial)]

    def is_final(self, s: ExpandedState) -> bool:
        return not s.stack and s.state in self.vpt.final

    def successors(self, s: ExpandedState) -> list[tuple[int, str, ExpandedState]]:
        t = self.vpt
        out = []
        if len(s.stack) < self.cap:
            for tr in t.calls_by_state.get(s.state, ()):
                out.append((tr.sym, tr.out, ExpandedState(tr.dst, s.stack + (tr.push,))))
        if s.stack:
            for tr in t.returns_by_state.get(s.state, ()):
                if tr.pop == s.stack[-1]:
                    out.append((tr.sym, tr.out, ExpandedState(tr.dst, s.stack[:-1])))
        out.sort(key=lambda e: e[0])
        return out

    def transduce(self, u: InputWord) -> frozenset[str]:
        current = {s: {""} for s in self.initial()}
        for a in u:
            nxt: dict = {}
            for s, outs in current.items():
                for b, o, s2 in self.successors(s):
                    if b == a:
                        nxt.setdefault(s2, set()).update(v + o for v in outs)
            current = nxt
        return frozenset(v for s, outs in current.items() if self.is_final(s) for v in outs)

    def accepts(self, u: InputWord) -> bool:
        return bool(self.transduce(u))


def expand_on_demand(t: Vpt, cap: int) -> LazyFst:
    return LazyFst(t, cap)


class VptSquare:
    """Trimmed square of ``expand_on_demand(t, cap)``, built lazily.

    Both runs read the same input, so their stacks have equal height and are
    stored as one stack of symbol pairs.  Pair stacks are hash-consed to
    integer ids (0 is the empty stack).  Co-accessibility of ``(pair, stack)``
    is decided from well-nested summaries of the square bounded by the
    headroom ``cap - height``.
    """

    def __init__(self, t: Vpt, cap: int):
        self.vpt = t
        self.cap = cap
        q = range(t.n_states)
        self.pairs = [(a, b) for a in q for b in q]
        calls = []
        for c in t.alphabet.call_ids:
            for q1 in q:
                for t1 in t.calls_from.get((q1, c), ()):
                    for q2 in q:
                        for t2 in t.calls_from.get((q2, c), ()):
                            calls.append(((q1, q2), c, (t1.push, t2.push), (t1.dst, t2.dst),
                                          t1.out, t2.out))
        rets = []
        for t1 in t.returns:
            for t2 in t.returns:
                if t1.sym == t2.sym:
                    rets.append(((t1.src, t2.src), t1.sym, (t1.pop, t2.pop), (t1.dst, t2.dst),
                                 t1.out, t2.out))
        self._calls_from: dict = {}
        for e in calls:
            self._calls_from.setdefault(e[0], []).append(e)
        self._rets_from: dict = {}
        for e in rets:
            self._rets_from.setdefault((e[0], e[2]), []).append(e)
        for d in (self._calls_from, self._rets_from):
            for k in d:
                d[k].sort(key=lambda e: e[1])
        graph = PushdownGraph(tuple(self.pairs), tuple(e[:4] for e in calls), tuple(e[:4] for e in rets))
        self.layers = list(summary_layers(graph, limit=cap))
        self.finals = [(a, b) for a in sorted(t.final) for b in sorted(t.final)]
        self._rets_by_top: dict = {}
        for e in rets:
            self._rets_by_top.setdefault(e[2], []).append(e)
        self._by_target: dict = {}
        # stack interning: sid -> (parent sid, top pair); heights; completions
        self._stack = [(None, None)]
        self._height = [0]
        self._ids: dict = {}
        self._comp: list[dict] = []
        self._comp.append(self._completion_table(0))

    def _layer(self, headroom: int) -> dict:
        return self.layers[min(headroom, len(self.layers) - 1)]

    def _layer_index(self, headroom: int) -> dict:
        """mid pair -> [(src pair, length)] for the layer used at ``headroom``."""
        i = min(headroom, len(self.layers) - 1)
        idx = self._by_target.get(i)
        if idx is None:
            idx = {}
            for (p, q), w in self.layers[i].items():
                idx.setdefault(q, []).append((p, len(w)))
            self._by_target[i] = idx
        return idx

    def _completion_table(self, sid: int) -> dict:
        """pair -> (length, hop) for the shortest completion from (pair, sid).

        ``hop`` is ``(target pair, None)`` for the empty stack and
        ``(mid pair, return symbol, next pair)`` otherwise.
        """
        into = self._layer_index(self.cap - self._height[sid])
        table: dict = {}
        if sid == 0:
            cands = [(f, None, 0) for f in self.finals]
        else:
            parent, top = self._stack[sid]
            below = self._comp[parent]
            cands = []
            for e in self._rets_by_top.get(top, ()):
                rest = below.get(e[3])
                if rest is not None:
                    cands.append(((e[0], e[1], e[3]), True, rest[0] + 1))
        for hop, is_ret, extra in cands:
            mid = hop[0] if is_ret else hop
            for p, n in into.get(mid, ()):
                n += extra
                cur = table.get(p)
                if cur is None or n < cur[0]:
                    table[p] = (n, hop if is_ret else (hop, None))
        return table

    def _push(self, sid: int, top) -> int:
        key = (sid, top)
        nid = self._ids.get(key)
        if nid is None:
            nid = len(self._stack)
            self._ids[key] = nid
            self._stack.append(key)
            self._height.append(self._height[sid] + 1)
            self._comp.append(self._completion_table(nid))
        return nid

    @property
    def stacks_seen(self) -> int:
        return len(self._stack)

    def coaccessible(self, node) -> bool:
        p, sid = node
        return p in self._comp[sid]

    def initial(self):
        out = []
        for a in sorted(self.vpt.initial):
            for b in sorted(self.vpt.initial):
                if (a, b) in self._comp[0]:
                    out.append(((a, b), 0))
        return out

    def is_final(self, node) -> bool:
        p, sid = node
        return sid == 0 and p[0] in self.vpt.final and p[1] in self.vpt.final

    def successors(self, node):
        p, sid = node
        out = []
        if self._height[sid] < self.cap:
            for _, c, top, dst, o1, o2 in self._calls_from.get(p, ()):
                nid = self._push(sid, top)
                if dst in self._comp[nid]:
                    out.append((c, o1, o2, (dst, nid)))
        if sid:
            parent, top = self._stack[sid]
            for _, r, _, dst, o1, o2 in self._rets_from.get((p, top), ()):
                if dst in self._comp[parent]:
                    out.append((r, o1, o2, (dst, parent)))
        return out

    def completion(self, node) -> InputWord:
        p, sid = node
        word: list[int] = []
        while True:
            _, hop = self._comp[sid][p]
            w = self._layer(self.cap - self._height[sid])
            if hop[1] is None:
                word.extend(w[(p, hop[0])])
                return tuple(word)
            mid, r, nxt = hop
            word.extend(w[(p, mid)])
            word.append(r)
            p, sid = nxt, self._stack[sid][0]


def check_functional(t: Vpt, opts: Optional[CheckOptions] = None) -> FunctionalityVerdict:
    """Decide functionality of ``t`` on inputs of height <= the configured cap.

    Non-functional answers are always sound and carry a confirmed witness.
    A positive answer is exact when the cap reaches ``8 N^4`` or covers the
    whole domain; otherwise it is labelled as holding up to the cap.
    """
    opts = opts or CheckOptions()
    cap = opts.cap_for(t)
    sq = VptSquare(t, cap)
    res = delay_search(sq, budget=opts.node_budget)
    if res.functional is None:
        return FunctionalityVerdict(None, exact=False, bound=cap, explored=res.explored)
    if res.functional is False:
        w = confirm_witness(res.candidates, lambda u: transduce(t, u))
        return FunctionalityVerdict(False, w, exact=True, bound=cap, explored=res.explored)
    dh = domain_height(t)
    exact = opts.exact_for(t) or (dh is not None and dh <= cap)
    return FunctionalityVerdict(True, exact=exact, bound=cap, explored=res.explored)


def domain_height(t: Vpa) -> Optional[float]:
    """Largest nesting height of a word in ``dom(t)``.

    ``None`` for an empty domain and ``math.inf`` when heights are unbounded.
    """
    g = graph_of(t)
    every = set(full_summary(g))
    ends = {(i, f) for i in t.initial for f in t.final}
    if not ends & every:
        return None
    rets: dict = {}
    for src, _, pop, dst in g.returns:
        rets.setdefault((src, pop), []).append(dst)
    succ: dict = {}
    for p, q in every:
        succ.setdefault(p, set()).add(q)
    pred: dict = {}
    for p, q in every:
        pred.setdefault(q, set()).add(p)
    # tall[h]: pairs joined by a well-nested word of height >= h
    tall = every
    h = 0
    while True:
        wraps = set()
        for src, _, push, dst in g.calls:
            for p, q in tall:
                if p == dst:
                    for fin in rets.get((q, push), ()):
                        wraps.add((src, fin))
        nxt = {(a, d) for b, c in wraps for a in pred.get(b, ()) for d in succ.get(c, ())}
        if not nxt & ends:
            return h
        if nxt == tall:
            return math.inf
        tall = nxt
        h += 1


# -- alphabets and unions ---------------------------------------------------


def disjoint_union(t1: Vpt, t2: Vpt) -> Vpt:
    alpha = merge_alphabets(t1.alphabet, t2.alphabet)
    a, b = reencode(t1, alpha), reencode(t2, alpha)
    n, k = a.n_states, len(a.stack)
    calls = a.calls + tuple(CallTrans(t.src + n, t.sym, t.out, t.push + k, t.dst + n) for t in b.calls)
    rets = a.returns + tuple(RetTrans(t.src + n, t.sym, t.out, t.pop + k, t.dst + n) for t in b.returns)
    return Vpt(
        alpha,
        tuple("1:" + s for s in a.states) + tuple("2:" + s for s in b.states),
        a.initial | {q + n for q in b.initial},
        a.final | {q + n for q in b.final},
        tuple("1:" + g for g in a.stack) + tuple("2:" + g for g in b.stack),
        calls,
        rets,
    )


# -- domain equivalence -----------------------------------------------------


class BudgetExhausted(Exception):
    pass


def _determinize(t: Vpa, budget: int):
    """Summary-set determinisation of ``t``.

    Returns the reachable macro-states, the identity macro-state and the
    return-update function.  A macro-state is the set of state pairs
    connected by the well-nested segment read since the last pending call.
    """
    ident = frozenset((q, q) for q in range(t.n_states))
    calls = t.alphabet.call_ids
    rets = t.alphabet.return_ids
    call_to: dict = {}
    for tr in t.calls:
        call_to.setdefault((tr.src, tr.sym), []).append((tr.push, tr.dst))
    ret_to: dict = {}
    for tr in t.returns:
        ret_to.setdefault((tr.src, tr.sym, tr.pop), []).append(tr.dst)

    def update(below: frozenset, c: int, cur: frozenset, r: int) -> frozenset:
        cur_from: dict = {}
        for x, y in cur:
            cur_from.setdefault(x, []).append(y)
        out = set()
        for q, q1 in below:
            for g, q2 in call_to.get((q1, c), ()):
                for q3 in cur_from.get(q2, ()):
                    for q4 in ret_to.get((q3, r, g), ()):
                        out.add((q, q4))
        return frozenset(out)

    states = [ident]
    index = {ident: 0}
    trans: dict = {}
    i = 0
    while i < len(states):
        # new state i pairs with every earlier state in both roles
        for j in range(i + 1):
            for below, cur in {(states[i], states[j]), (states[j], states[i])}:
                for c in calls:
                    for r in rets:
                        nxt = update(below, c, cur, r)
                        trans[(below, c, cur, r)] = nxt
                        if nxt not in index:
                            if len(states) >= budget:
                                raise BudgetExhausted
                            index[nxt] = len(states)
                            states.append(nxt)
        i += 1
    return states, ident, trans


def _difference_witness(a: Vpa, b: Vpa, budget: int) -> Optional[InputWord]:
    """Shortest word accepted by ``a`` and rejected by ``b``."""
    macros, ident, upd = _determinize(b, budget)
    b_ends = {(i, f) for i in b.initial for f in b.final}
    states = tuple((p, s) for p in range(a.n_states) for s in macros)
    if len(states) > budget:
        raise BudgetExhausted
    calls = []
    for tr in a.calls:
        for s in macros:
            calls.append(((tr.src, s), tr.sym, (tr.push, s, tr.sym), (tr.dst, ident)))
    rets = []
    for tr in a.returns:
        for (below, c, cur, r), nxt in upd.items():
            if r == tr.sym:
                rets.append(((tr.src, cur), r, (tr.pop, below, c), (tr.dst, nxt)))
    summ = full_summary(PushdownGraph(states, tuple(calls), tuple(rets)))
    found = []
    for i in a.initial:
        for f in a.final:
            for s in macros:
                if not (s & b_ends):
                    w = summ.get(((i, ident), (f, s)))
                    if w is not None:
                        found.append(w)
    return min(found, key=lambda w: (len(w), w)) if found else None


@dataclass(frozen=True)
class DomainVerdict:
    equal: Optional[bool]  # None: inconclusive
    witness: Optional[InputWord] = None
    in_first: Optional[bool] = None  # which domain contains the witness

    @property
    def label(self) -> str:
        return {True: "equal", False: "differ", None: "inconclusive"}[self.equal]


def domain_equiv(t1: Vpa, t2: Vpa, opts: Optional[CheckOptions] = None) -> DomainVerdict:
    opts = opts or CheckOptions()
    alpha = merge_alphabets(t1.alphabet, t2.alphabet)
    a, b = reencode(t1, alpha), reencode(t2, alpha)
    try:
        w1 = _difference_witness(a, b, opts.node_budget)
        w2 = _difference_witness(b, a, opts.node_budget)
    except BudgetExhausted:
        return DomainVerdict(None)
    cands = [(len(w), w, True) for w in [w1] if w is not None]
    cands += [(len(w), w, False) for w in [w2] if w is not None]
    if not cands:
        return DomainVerdict(True)
    _, w, first = min(cands)
    # report the witness in t1's own symbol ids
    return DomainVerdict(False, t1_word(t1, alpha, w), first)


def t1_word(t1: Vpa, alpha: StructuredAlphabet, w: InputWord) -> InputWord:
    """Re-encode ``w`` from the merged alphabet into ``t1``'s, where possible."""
    try:
        return tuple(t1.alphabet.symbol(alpha.name(s)) for s in w)
    except KeyError:
        return w


# -- equivalence of functional VPTs -----------------------------------------


class NotFunctionalError(ValueError):
    def __init__(self, which: int, verdict: FunctionalityVerdict):
        super().__init__(f"machine {which} is not functional")
        self.which = which
        self.verdict = verdict


@dataclass(frozen=True)
class EquivWitness:
    input: InputWord  # over the merged alphabet of both machines
    out1: Optional[str]  # None: outside dom(T1)
    out2: Optional[str]


@dataclass(frozen=True)
class EquivVerdict:
    equivalent: Optional[bool]  # None: inconclusive
    witness: Optional[EquivWitness] = None
    exact: bool = True
    bound: Optional[int] = None
    alphabet: Optional[StructuredAlphabet] = None

    @property
    def label(self) -> str:
        if self.equivalent is None:
            return "inconclusive"
        if not self.equivalent:
            return "not-equivalent"
        return "equivalent" if self.exact else "equivalent-up-to-bound"


def check_equiv_functional(t1: Vpt, t2: Vpt, opts: Optional[CheckOptions] = None) -> EquivVerdict:
    """Equivalence of functional VPTs: equal domains and a functional union."""
    opts = opts or CheckOptions()
    alpha = merge_alphabets(t1.alphabet, t2.alphabet)
    a, b = reencode(t1, alpha), reencode(t2, alpha)
    exact = True
    bound = None
    for which, t in ((1, a), (2, b)):
        v = check_functional(t, opts)
        if v.functional is False:
            raise NotFunctionalError(which, v)
        if v.functional is None:
            return EquivVerdict(None, exact=False, bound=v.bound, alphabet=alpha)
        exact = exact and v.exact
    dom = domain_equiv(a, b, opts)
    if dom.equal is None:
        return EquivVerdict(None, exact=False, alphabet=alpha)
    if dom.equal is False:
        u = dom.witness
        o1 = _single(transduce(a, u))
        o2 = _single(transduce(b, u))
        return EquivVerdict(False, EquivWitness(u, o1, o2), alphabet=alpha)
    union = disjoint_union(a, b)
    vu = check_functional(union, opts)
    if vu.functional is None:
        return EquivVerdict(None, exact=False, bound=vu.bound, alphabet=alpha)
    if vu.functional is False:
        u = vu.witness.input
        o1 = _single(transduce(a, u))
        o2 = _single(transduce(b, u))
        return EquivVerdict(False, EquivWitness(u, o1, o2), alphabet=alpha)
    return EquivVerdict(True, exact=exact and vu.exact, bound=vu.bound, alphabet=alpha)


def _single(outs: frozenset) -> Optional[str]:
    return min(outs, key=lambda v: (len(v), v)) if outs else None


__all__ = [
    "CheckOptions", "DomainVerdict", "EquivVerdict", "EquivWitness", "ExpandedState", "LazyFst",
    "NotFunctionalError", "VptSquare", "Witness", "check_equiv_functional", "check_functional",
    "disjoint_union", "domain_equiv", "domain_height", "expand_on_demand", "height",
    "height_bound", "merge_alphabets", "reencode",
]
