"""Functionality of finite state transducers.

The decision procedure walks the trimmed square of a transducer breadth-first
and tracks, for every pair of states, the delay between the two outputs.  The
search itself only needs a *square view*: initial pairs, a successor function
and a way to complete a pair into an accepting pair.  The same search runs
unchanged over the lazily expanded square of a visibly pushdown transducer
(see :mod:`vptkit.check`).
"""

from __future__ import annotations

import hashlib
import os
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Protocol

from .model import Fst, FstTrans, InputWord, StructuredAlphabet
from .semantics import fst_transduce


_SHORT = 256


@dataclass(frozen=True)
class DelayPair:
    """Pending outputs of two synchronised runs, common prefix removed."""

    left: str = ""
    right: str = ""
    mismatched: bool = False

    @property
    def empty(self) -> bool:
        return not self.left and not self.right

    def key(self):
        """Compact identity: the strings themselves when short, else a digest."""
        if len(self.left) + len(self.right) <= _SHORT:
            return (self.left, self.right, self.mismatched)
        h = hashlib.blake2b(digest_size=16)
        h.update(self.left.encode())
        h.update(b"\x00|%d|" % len(self.left))
        h.update(self.right.encode())
        return h.digest()

    def advance(self, out1: str, out2: str) -> "DelayPair":
        if self.mismatched:
            return self
        a, b = self.left + out1, self.right + out2
        k = len(os.path.commonprefix((a, b)))
        if k < len(a) and k < len(b):
            return DelayPair(a[k], b[k], True)
        return DelayPair(a[k:], b[k:])


@dataclass(frozen=True)
class Witness:
    input: InputWord
    out1: str
    out2: str


@dataclass(frozen=True)
class FunctionalityVerdict:
    """Outcome of a functionality check.

    ``functional`` is ``None`` when the search ran out of budget.  ``exact``
    is false when a positive answer only covers inputs up to ``bound``
    (input length for brute searches, nesting height for VPT expansions).
    """

    functional: Optional[bool]
    witness: Optional[Witness] = None
    exact: bool = True
    bound: Optional[int] = None
    explored: int = 0

    @property
    def inconclusive(self) -> bool:
        return self.functional is None

    @property
    def label(self) -> str:
        if self.functional is None:
            return "inconclusive"
        if not self.functional:
            return "non-functional"
        return "functional" if self.exact else "functional-up-to-bound"


class SquareView(Protocol):
    """Trimmed square of a transducer.

    Every pair yielded by ``initial`` or ``successors`` must be co-accessible,
    and ``completion`` must return an input word leading it to a final pair.
    """

    def initial(self) -> Iterable[Hashable]: ...

    def successors(self, pair) -> Iterable[tuple[int, str, str, Hashable]]: ...

    def is_final(self, pair) -> bool: ...

    def completion(self, pair) -> InputWord: ...


@dataclass
class SearchResult:
    functional: Optional[bool]
    candidates: list[InputWord] = field(default_factory=list)
    explored: int = 0


def delay_search(sq: SquareView, budget: Optional[int] = None) -> SearchResult:
    """Breadth-first delay search over a trimmed square.

    Non-functional iff one of these is reached:

    * a mismatched delay,
    * a final pair with a nonempty delay,
    * a pair reached a second time with a different delay.

    On failure the result lists candidate inputs; at least one of them has two
    distinct outputs (for the third rule, exactly which one depends on the
    continuation, so both are offered).

    Visited pairs keep only a key of their delay (see :meth:`DelayPair.key`);
    full delays live in the queue.  Delays can grow linearly with the depth
    of the search, so storing them all would cost quadratic memory.
    """
    seen: dict = {}
    parent: dict = {}
    queue: deque = deque()

    def path(p) -> InputWord:
        syms = []
        while parent[p] is not None:
            p, a = parent[p]
            syms.append(a)
        return tuple(reversed(syms))

    for p in sq.initial():
        if p in seen:
            continue
        seen[p] = DelayPair().key()
        parent[p] = None
        queue.append((p, DelayPair()))

    while queue:
        p, d = queue.popleft()
        for a, o1, o2, p2 in sq.successors(p):
            d2 = d.advance(o1, o2)
            if d2.mismatched:
                return SearchResult(False, [path(p) + (a,) + sq.completion(p2)], len(seen))
            old = seen.get(p2)
            if old is not None:
                if old != d2.key():
                    tail = sq.completion(p2)
                    return SearchResult(False, [path(p2) + tail, path(p) + (a,) + tail], len(seen))
                continue
            if sq.is_final(p2) and not d2.empty:
                return SearchResult(False, [path(p) + (a,)], len(seen))
            if budget is not None and len(seen) >= budget:
                return SearchResult(None, [], len(seen))
            seen[p2] = d2.key()
            parent[p2] = (p, a)
            queue.append((p2, d2))
    return SearchResult(True, [], len(seen))


def confirm_witness(candidates: Iterable[InputWord],
                    evaluate: Callable[[InputWord], frozenset]) -> Witness:
    """Pick the first candidate with two outputs, re-evaluated from scratch."""
    for u in candidates:
        outs = sorted(evaluate(u), key=lambda v: (len(v), v))
        if len(outs) >= 2:
            return Witness(u, outs[0], outs[1])
    raise AssertionError("delay search reported a violation with no confirmable witness")


# -- explicit squares -------------------------------------------------------


class FstSquare:
    """Trimmed square of an explicit FST: pairs of states reading the same input."""

    def __init__(self, f: Fst):
        self.fst = f
        edges: dict = {}
        seen = set()
        todo = deque(sorted((p, q) for p in f.initial for q in f.initial))
        seen.update(todo)
        while todo:
            p, q = todo.popleft()
            out = []
            for t1 in f.trans_from.get(p, ()):
                for t2 in f.trans_from.get(q, ()):
                    if t1.sym == t2.sym:
                        nxt = (t1.dst, t2.dst)
                        out.append((t1.sym, t1.out, t2.out, nxt))
                        if nxt not in seen:
                            seen.add(nxt)
                            todo.append(nxt)
            edges[(p, q)] = out
        # backward BFS from final pairs gives co-accessibility and shortest completions
        rev: dict = {}
        for src, out in edges.items():
            for a, _, _, dst in out:
                rev.setdefault(dst, []).append((a, src))
        finals = [pq for pq in sorted(seen) if pq[0] in f.final and pq[1] in f.final]
        nxt_hop: dict = {pq: None for pq in finals}
        todo = deque(finals)
        while todo:
            dst = todo.popleft()
            for a, src in rev.get(dst, ()):
                if src not in nxt_hop:
                    nxt_hop[src] = (a, dst)
                    todo.append(src)
        self._hop = nxt_hop
        self.pairs = frozenset(nxt_hop)
        self.edges = {
            pq: [e for e in out if e[3] in nxt_hop] for pq, out in edges.items() if pq in nxt_hop
        }

    def initial(self):
        return [(p, q) for p in sorted(self.fst.initial) for q in sorted(self.fst.initial)
                if (p, q) in self.pairs]

    def successors(self, pair):
        return self.edges[pair]

    def is_final(self, pair) -> bool:
        return pair[0] in self.fst.final and pair[1] in self.fst.final

    def completion(self, pair) -> InputWord:
        syms = []
        hop = self._hop[pair]
        while hop is not None:
            a, pair = hop
            syms.append(a)
            hop = self._hop[pair]
        return tuple(syms)


def square(f: Fst) -> FstSquare:
    return FstSquare(f)


def fst_functional(f: Fst) -> FunctionalityVerdict:
    res = delay_search(square(f))
    if res.functional:
        return FunctionalityVerdict(True, explored=res.explored)
    w = confirm_witness(res.candidates, lambda u: fst_transduce(f, u))
    return FunctionalityVerdict(False, w, explored=res.explored)


def schutzenberger_bound(m: int) -> int:
    return 3 * m * m


def _keep_two(outs) -> frozenset:
    """The two least outputs.  Whether a continuation yields two distinct
    outputs only depends on these, so larger sets are never needed."""
    if len(outs) <= 2:
        return frozenset(outs)
    return frozenset(sorted(outs, key=lambda v: (len(v), v))[:2])


def _coaccessible(f: Fst) -> set:
    live = set(f.final)
    changed = True
    while changed:
        changed = False
        for t in f.trans:
            if t.dst in live and t.src not in live:
                live.add(t.src)
                changed = True
    return live


def fst_functional_bounded(f: Fst, max_len: int) -> FunctionalityVerdict:
    """Search inputs of length up to ``max_len`` for one with two outputs.

    Exact once ``max_len`` reaches the ``3 m^2`` witness-length bound.
    Prefixes whose output sets coincide after stripping their common prefix
    behave identically on every continuation, so only the first is kept.
    """
    exact = max_len >= schutzenberger_bound(f.n_states)
    live = _coaccessible(f)
    start = {q: frozenset({""}) for q in f.initial if q in live}
    layer = [((), start)] if start else []
    seen = {_signature(start)}
    explored = 0
    for _ in range(max_len + 1):
        nxt_layer = []
        for u, conf in layer:
            explored += 1
            outs = set()
            for q, vs in conf.items():
                if q in f.final:
                    outs |= vs
            if len(outs) >= 2:
                o = sorted(fst_transduce(f, u), key=lambda v: (len(v), v))
                return FunctionalityVerdict(False, Witness(u, o[0], o[1]), bound=max_len,
                                            explored=explored)
            for a in range(f.alphabet.size):
                nxt: dict = {}
                for q, vs in conf.items():
                    for t in f.trans_from.get(q, ()):
                        if t.sym == a and t.dst in live:
                            nxt.setdefault(t.dst, set()).update(v + t.out for v in vs)
                if not nxt:
                    continue
                conf2 = {q: _keep_two(vs) for q, vs in nxt.items()}
                sig = _signature(conf2)
                if sig not in seen:
                    seen.add(sig)
                    nxt_layer.append((u + (a,), conf2))
        layer = nxt_layer
        if not layer:
            exact = True
            break
    return FunctionalityVerdict(True, exact=exact, bound=max_len, explored=explored)


def _signature(conf: dict) -> frozenset:
    allv = [v for vs in conf.values() for v in vs]
    k = len(os.path.commonprefix(allv)) if allv else 0
    return frozenset((q, frozenset(v[k:] for v in vs)) for q, vs in conf.items())


def end_marked(f: Fst, marker: str = "#", out_mark: str = "$") -> Fst:
    """Append an end-of-input symbol that emits a fresh output letter.

    ``F'(u #) = F(u) $``: an output that is a strict prefix of another becomes a
    letter mismatch, so every witness of ``F'`` differs at some position.
    """
    a = f.alphabet
    if marker in a.calls or marker in a.returns:
        raise ValueError(f"marker {marker!r} already used")
    if out_mark in a.outputs:
        raise ValueError(f"output mark {out_mark!r} already used")
    alpha = StructuredAlphabet(a.calls + (marker,), a.returns, a.outputs + (out_mark,))
    shift = {s: alpha.symbol(a.name(s)) for s in range(a.size)}
    end = f.n_states
    trans = [FstTrans(t.src, shift[t.sym], t.out, t.dst) for t in f.trans]
    trans += [FstTrans(q, alpha.symbol(marker), out_mark, end) for q in sorted(f.final)]
    return Fst(alpha, f.states + ("<end>",), f.initial, frozenset({end}), tuple(trans))
