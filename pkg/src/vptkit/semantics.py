"""Runs, acceptance and the transduction relation of VPAs, VPTs and FSTs."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

from .model import Fst, InputWord, Vpa, Vpt

Stack = tuple[int, ...]


class Configuration(NamedTuple):
    state: int
    stack: Stack  # bottom first


@dataclass(frozen=True)
class RunTrace:
    configs: tuple[Configuration, ...]
    outputs: tuple[str, ...]

    @property
    def states(self) -> tuple[int, ...]:
        return tuple(c.state for c in self.configs)

    @property
    def output(self) -> str:
        return "".join(self.outputs)


def _check_symbol(m, a: int) -> None:
    if not 0 <= a < m.alphabet.size:
        raise ValueError(f"symbol {a} not in alphabet")


def step(m: Vpa, c: Configuration, a: int) -> tuple[tuple[Configuration, str], ...]:
    """Successor configurations of ``c`` on input symbol ``a``, with outputs."""
    _check_symbol(m, a)
    if m.alphabet.is_call(a):
        return tuple(
            (Configuration(t.dst, c.stack + (t.push,)), t.out)
            for t in m.calls_from.get((c.state, a), ())
        )
    if not c.stack:
        return ()
    return tuple(
        (Configuration(t.dst, c.stack[:-1]), t.out)
        for t in m.returns_from.get((c.state, a, c.stack[-1]), ())
    )


def _initial(m) -> list[Configuration]:
    return [Configuration(q, ()) for q in sorted(m.initial)]


def transduce(m, u: InputWord) -> frozenset[str]:
    """All outputs of accepting runs of ``m`` (VPT or FST) on ``u``."""
    if isinstance(m, Fst):
        return fst_transduce(m, u)
    current: dict[Configuration, set[str]] = {c: {""} for c in _initial(m)}
    for a in u:
        nxt: dict[Configuration, set[str]] = {}
        for c, outs in current.items():
            for c2, o in step(m, c, a):
                nxt.setdefault(c2, set()).update(v + o for v in outs)
        current = nxt
        if not current:
            return frozenset()
    return frozenset(
        v for c, outs in current.items() if not c.stack and c.state in m.final for v in outs
    )


def accepts(m, u: InputWord) -> bool:
    if isinstance(m, Fst):
        states = set(m.initial)
        for a in u:
            states = {t.dst for q in states for t in m.trans_from.get(q, ()) if t.sym == a}
        return bool(states & m.final)
    current = set(_initial(m))
    for a in u:
        current = {c2 for c in current for c2, _ in step(m, c, a)}
        if not current:
            return False
    return any(not c.stack and c.state in m.final for c in current)


def fst_transduce(f: Fst, u: InputWord) -> frozenset[str]:
    current: dict[int, set[str]] = {q: {""} for q in f.initial}
    for a in u:
        nxt: dict[int, set[str]] = {}
        for q, outs in current.items():
            for t in f.trans_from.get(q, ()):
                if t.sym == a:
                    nxt.setdefault(t.dst, set()).update(v + t.out for v in outs)
        current = nxt
    return frozenset(v for q, outs in current.items() if q in f.final for v in outs)


def accepting_runs(m: Vpa, u: InputWord) -> Iterator[RunTrace]:
    """Enumerate accepting runs on ``u`` in transition-declaration order.

    Configurations that cannot complete an accepting run are pruned first, so
    the enumeration never backtracks out of a dead branch.
    """
    layers = [set(_initial(m))]
    for a in u:
        layers.append({c2 for c in layers[-1] for c2, _ in step(m, c, a)})
    alive = [set() for _ in layers]
    alive[-1] = {c for c in layers[-1] if not c.stack and c.state in m.final}
    for i in range(len(u) - 1, -1, -1):
        alive[i] = {c for c in layers[i] if any(c2 in alive[i + 1] for c2, _ in step(m, c, u[i]))}

    def walk(i, configs, outs):
        if i == len(u):
            yield RunTrace(tuple(configs), tuple(outs))
            return
        for c2, o in step(m, configs[-1], u[i]):
            if c2 in alive[i + 1]:
                yield from walk(i + 1, configs + [c2], outs + [o])

    for c in _initial(m):
        if c in alive[0]:
            yield from walk(0, [c], [])


# -- well-nested summaries --------------------------------------------------


class PushdownGraph(NamedTuple):
    """Minimal view of a visibly pushdown system for summary computations.

    ``calls`` holds ``(src, sym, push, dst)`` and ``returns`` holds
    ``(src, sym, pop, dst)``; states may be any hashable values.
    """

    states: tuple
    calls: tuple
    returns: tuple


def graph_of(m: Vpa) -> PushdownGraph:
    return PushdownGraph(
        tuple(range(m.n_states)),
        tuple((t.src, t.sym, t.push, t.dst) for t in m.calls),
        tuple((t.src, t.sym, t.pop, t.dst) for t in m.returns),
    )


Summary = dict  # (p, q) -> shortest well-nested word taking p to q


def _closure(states, base: Summary) -> Summary:
    """Concatenation closure of ``base`` by Dijkstra from each source."""
    adj: dict = {}
    for (p, q), w in base.items():
        adj.setdefault(p, []).append((q, w))
    out: Summary = {}
    for s in states:
        best = {s: ()}
        heap = [(0, (), 0, s)]
        tick = 0
        while heap:
            _, w, _, p = heapq.heappop(heap)
            if best.get(p) != w:
                continue
            for q, e in adj.get(p, ()):
                cand = w + e
                old = best.get(q)
                if old is None or (len(cand), cand) < (len(old), old):
                    best[q] = cand
                    tick += 1
                    heapq.heappush(heap, (len(cand), cand, tick, q))
        for q, w in best.items():
            out[(s, q)] = w
    return out


def summary_layers(g: PushdownGraph, limit: Optional[int] = None) -> Iterator[Summary]:
    """Yield ``W_0, W_1, ...`` where ``W_h`` maps each pair ``(p, q)`` joined by
    a well-nested word of height at most ``h`` to a shortest such word.

    Stops after ``W_limit``, or once a layer repeats (then every later layer
    equals it).
    """
    rets: dict = {}
    for src, sym, pop, dst in g.returns:
        rets.setdefault((src, pop), []).append((sym, dst))
    by_src: dict = {}
    prev: Summary = {(q, q): () for q in g.states}
    yield prev
    h = 0
    while limit is None or h < limit:
        for k, w in prev.items():
            by_src.setdefault(k[0], []).append((k[1], w))
        base: Summary = {(q, q): () for q in g.states}
        for src, sym, push, dst in g.calls:
            for mid, w in by_src.get(dst, ()):
                for rsym, fin in rets.get((mid, push), ()):
                    cand = (sym,) + w + (rsym,)
                    old = base.get((src, fin))
                    if old is None or (len(cand), cand) < (len(old), old):
                        base[(src, fin)] = cand
        by_src.clear()
        cur = _closure(g.states, base)
        h += 1
        if cur == prev:
            return
        yield cur
        prev = cur


def full_summary(g: PushdownGraph) -> Summary:
    last: Summary = {}
    for last in summary_layers(g):
        pass
    return last


def domain_nonempty(m: Vpa) -> Optional[InputWord]:
    """A shortest word of ``dom(m)``, or ``None`` if the domain is empty."""
    summ = full_summary(graph_of(m))
    found = [summ[(i, f)] for i in m.initial for f in m.final if (i, f) in summ]
    if not found:
        return None
    return min(found, key=lambda w: (len(w), w))
