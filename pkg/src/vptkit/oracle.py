"""Brute-force ground truth for the decision procedures, at desk scale.

Inputs are enumerated explicitly, by increasing length.  None of the
shortcuts below changes an answer:

* configurations that can no longer reach acceptance are dropped (their
  stack is taller than the remaining length, or no return sequence can empty
  it into a final state);
* for functionality, each configuration keeps only its two least outputs;
* two prefixes whose configuration-to-outputs maps agree once the longest
  common output prefix is stripped have identical futures, so only the first
  one (in length-lexicographic order) is extended.

``naive=True`` on :func:`enumerate_domain` switches to plain generate-and-test,
for checking the pruning itself.  This module deliberately shares no code
with the symbolic checkers beyond the one-step semantics.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterator, Optional

from .model import InputWord, Vpa, Vpt, is_well_nested, merge_alphabets, reencode
from .semantics import Configuration, accepts, step, transduce

MAX_OUTPUTS = 100_000


class OracleResourceError(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleReport:
    """``checked_count`` is the number of domain words (of the first machine,
    or of either machine for equivalence) up to the search horizon: ``max_len``,
    or the witness length when one is found."""

    verdict: str  # functional-up-to | non-functional | equiv-up-to | differ
    max_len: int
    checked_count: int
    witness: Optional[InputWord] = None
    outputs1: tuple[str, ...] = ()
    outputs2: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.verdict in ("functional-up-to", "equiv-up-to")


def _sorted(outs) -> tuple[str, ...]:
    return tuple(sorted(outs, key=lambda v: (len(v), v)))


class _Live:
    """Which configurations of ``m`` can still be completed to acceptance."""

    def __init__(self, m: Vpa):
        self.m = m
        n = m.n_states
        # wn[p]: states reachable from p by a well-nested word (boolean fixpoint)
        wn = [{p} for p in range(n)]
        changed = True
        while changed:
            changed = False
            for c in m.calls:
                for mid in list(wn[c.dst]):
                    for r in m.returns_by_state.get(mid, ()):
                        if r.pop == c.push:
                            for q in list(wn[r.dst]):
                                if q not in wn[c.src]:
                                    wn[c.src].add(q)
                                    changed = True
            for p in range(n):
                for q in list(wn[p]):
                    extra = wn[q] - wn[p]
                    if extra:
                        wn[p] |= extra
                        changed = True
        self.wn = wn
        self._cache: dict = {(): frozenset(p for p in range(n) if wn[p] & m.final)}

    def states_for(self, stack: tuple) -> frozenset:
        got = self._cache.get(stack)
        if got is None:
            below = self.states_for(stack[:-1])
            top = stack[-1]
            got = frozenset(
                p for p in range(self.m.n_states)
                if any(r.pop == top and r.dst in below
                       for mid in self.wn[p] for r in self.m.returns_by_state.get(mid, ()))
            )
            self._cache[stack] = got
        return got

    def __call__(self, c: Configuration, remaining: int) -> bool:
        return len(c.stack) <= remaining and c.state in self.states_for(c.stack)


def _advance(m, live, conf: dict, a: int, remaining: int, max_outputs: int,
             keep_two: bool) -> dict:
    nxt: dict = {}
    for c, outs in conf.items():
        for c2, o in step(m, c, a):
            if not live(c2, remaining):
                continue
            bucket = nxt.setdefault(c2, set())
            bucket.update(v + o for v in outs)
            if len(bucket) > max_outputs:
                raise OracleResourceError(f"more than {max_outputs} outputs in one configuration")
    if keep_two:
        for c, vs in nxt.items():
            if len(vs) > 2:
                nxt[c] = set(sorted(vs, key=lambda v: (len(v), v))[:2])
    return nxt


def _accepted(m, conf: dict) -> set:
    return {v for c, vs in conf.items() if not c.stack and c.state in m.final for v in vs}


def _signature(confs) -> tuple:
    allv = [v for conf in confs for vs in conf.values() for v in vs]
    k = len(os.path.commonprefix(allv)) if allv else 0
    return tuple(frozenset((c, frozenset(v[k:] for v in vs)) for c, vs in conf.items())
                 for conf in confs)


def _search(machines, max_len: int, max_outputs: int, differs, keep_two=False):
    """Length-ordered search for the least word ``u`` with ``differs(outs(u))``.

    Returns ``(u, outputs per machine)`` or ``None``.  With ``keep_two``
    each configuration keeps only its two least outputs, which is enough
    to decide whether some continuation has two distinct outputs.
    """
    lives = [_Live(m) for m in machines]
    start = tuple(
        {c: {""} for q in sorted(m.initial) for c in [Configuration(q, ())] if live(c, max_len)}
        for m, live in zip(machines, lives)
    )
    seen = {_signature(start)}
    level = [((), start)]
    size = machines[0].alphabet.size
    for depth in range(max_len + 1):
        nxt_level = []
        for word, confs in level:
            outs = [_accepted(m, conf) for m, conf in zip(machines, confs)]
            if differs(outs):
                return word, outs
            if depth == max_len:
                continue
            rem = max_len - depth - 1
            for a in range(size):
                nconfs = tuple(_advance(m, live, conf, a, rem, max_outputs, keep_two)
                               for m, live, conf in zip(machines, lives, confs))
                if not any(nconfs):
                    continue
                sig = _signature(nconfs)
                if sig not in seen:
                    seen.add(sig)
                    nxt_level.append((word + (a,), nconfs))
        level = nxt_level
        if not level:
            break
    return None


def count_domain(machines, max_len: int) -> int:
    """Number of words of length <= ``max_len`` accepted by at least one machine."""
    lives = [_Live(m) for m in machines]
    start = tuple(frozenset(c for q in sorted(m.initial) for c in [Configuration(q, ())]
                            if live(c, max_len)) for m, live in zip(machines, lives))
    level = {start: 1}
    total = 0
    size = machines[0].alphabet.size
    for depth in range(max_len + 1):
        nxt: dict = {}
        for confs, k in level.items():
            if any(any(not c.stack and c.state in m.final for c in cs)
                   for m, cs in zip(machines, confs)):
                total += k
            if depth == max_len:
                continue
            rem = max_len - depth - 1
            for a in range(size):
                nconfs = tuple(
                    frozenset(c2 for c in cs for c2, _ in step(m, c, a) if live(c2, rem))
                    for m, live, cs in zip(machines, lives, confs)
                )
                if any(nconfs):
                    nxt[nconfs] = nxt.get(nconfs, 0) + k
        level = nxt
    return total


def enumerate_domain(t: Vpa, max_len: int, naive: bool = False) -> Iterator[InputWord]:
    """Words of ``dom(t)`` of length <= ``max_len`` in length-lexicographic order."""
    if naive:
        for n in range(max_len + 1):
            for w in itertools.product(range(t.alphabet.size), repeat=n):
                if accepts(t, w):
                    yield w
        return
    live = _Live(t)
    level = [((), frozenset(c for q in sorted(t.initial) for c in [Configuration(q, ())]
                            if live(c, max_len)))]
    for depth in range(max_len + 1):
        nxt = []
        for word, cs in level:
            if any(not c.stack and c.state in t.final for c in cs):
                yield word
            if depth == max_len:
                continue
            rem = max_len - depth - 1
            for a in range(t.alphabet.size):
                cs2 = frozenset(c2 for c in cs for c2, _ in step(t, c, a) if live(c2, rem))
                if cs2:
                    nxt.append((word + (a,), cs2))
        level = nxt


def brute_functional(t: Vpt, max_len: int, max_outputs: int = MAX_OUTPUTS) -> OracleReport:
    """Shortest (then lexicographically least) input with two outputs, if any."""
    found = _search([t], max_len, max_outputs, lambda outs: len(outs[0]) >= 2, keep_two=True)
    if found is None:
        return OracleReport("functional-up-to", max_len, count_domain([t], max_len))
    w = found[0]
    outs = transduce(t, w)
    assert len(outs) >= 2 and is_well_nested(t.alphabet, w)
    return OracleReport("non-functional", max_len, count_domain([t], len(w)), w, _sorted(outs))


def brute_equiv(t1: Vpt, t2: Vpt, max_len: int, max_outputs: int = MAX_OUTPUTS) -> OracleReport:
    """Compare domains and output sets on every input of length <= ``max_len``.

    The witness is over the merged alphabet of both machines (which is ``t1``'s
    own alphabet whenever ``t2`` uses no extra symbols).
    """
    alpha = merge_alphabets(t1.alphabet, t2.alphabet)
    a, b = reencode(t1, alpha), reencode(t2, alpha)
    found = _search([a, b], max_len, max_outputs, lambda outs: outs[0] != outs[1])
    if found is None:
        return OracleReport("equiv-up-to", max_len, count_domain([a, b], max_len))
    w = found[0]
    o1, o2 = transduce(a, w), transduce(b, w)
    assert o1 != o2
    return OracleReport("differ", max_len, count_domain([a, b], len(w)), w, _sorted(o1), _sorted(o2))
