"""Vertical pumping of pairs of runs over tall nested words.

Given two accepting runs on a word ``u`` whose height exceeds ``n N^4``, the
word and both outputs split into

    u0 u1 ... un  um  u_n' ... u_1' u0'

where each ``(ui, ui')`` is a synchronised call loop / return loop of both
runs.  Any sequence ``pi`` over ``1..n`` selects loops to keep (with repeats
and in any order) and the pumped word still carries both pumped outputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .model import InputWord, Vpt, depth_profile, height
from .semantics import RunTrace, accepting_runs, step, transduce


class Split(NamedTuple):
    left: tuple   # parts 0..n
    middle: object
    right: tuple  # right[i] is the part matching left[i]


@dataclass(frozen=True)
class Decomposition:
    n: int
    u: Split
    v: Split
    w: Split
    heights: tuple[int, ...]          # k_1 < ... < k_{n+1}
    states: tuple[int, int, int, int]  # (p, p', q, q') repeated at every cut

    def loop_size(self, i: int) -> int:
        return len(self.u.left[i]) + len(self.u.right[i])


PumpScheme = Sequence[int]


class PreconditionError(ValueError):
    pass


def _check_run(t: Vpt, u: InputWord, run: RunTrace) -> None:
    cs = run.configs
    if len(cs) != len(u) + 1 or len(run.outputs) != len(u):
        raise PreconditionError("run length does not match the input")
    if cs[0].stack or cs[0].state not in t.initial:
        raise PreconditionError("run does not start in an initial configuration")
    if cs[-1].stack or cs[-1].state not in t.final:
        raise PreconditionError("run is not accepting")
    for i, a in enumerate(u):
        if (cs[i + 1], run.outputs[i]) not in step(t, cs[i], a):
            raise PreconditionError(f"step {i} of the run is not a transition")


def decompose(t: Vpt, u: InputWord, run1: RunTrace, run2: RunTrace, n: int) -> Decomposition:
    if n < 1:
        raise PreconditionError("n must be >= 1")
    for run in (run1, run2):
        _check_run(t, u, run)
    big_n = t.n_states
    h = height(t.alphabet, u)
    if h <= n * big_n ** 4:
        raise PreconditionError(f"height {h} does not exceed n*N^4 = {n * big_n ** 4}")
    prof = depth_profile(t.alphabet, u)
    j = prof.index(h)  # leftmost position of maximal height
    alpha = [max(d for d in range(j + 1) if prof[d] == k) for k in range(h + 1)]
    beta = [min(d for d in range(j, len(prof)) if prof[d] == k) for k in range(h + 1)]
    p, q = run1.states, run2.states
    by_quad: dict = {}
    for k in range(h + 1):
        quad = (p[alpha[k]], p[beta[k]], q[alpha[k]], q[beta[k]])
        by_quad.setdefault(quad, []).append(k)
    quad, ks = min(
        ((qd, ks) for qd, ks in by_quad.items() if len(ks) > n),
        key=lambda e: (e[1][n], e[0]),
    )
    ks = ks[: n + 1]
    a_cut = [alpha[k] for k in ks]
    b_cut = [beta[k] for k in ks]

    def split(seq, empty):
        def part(x, y):
            s = seq[x:y]
            return s if not isinstance(empty, str) else "".join(s)

        left = [part(0, a_cut[0])] + [part(a_cut[i], a_cut[i + 1]) for i in range(n)]
        right = [part(b_cut[0], len(seq))] + [part(b_cut[i + 1], b_cut[i]) for i in range(n)]
        return Split(tuple(left), part(a_cut[n], b_cut[n]), tuple(right))

    return Decomposition(
        n=n,
        u=split(tuple(u), ()),
        v=split(run1.outputs, ""),
        w=split(run2.outputs, ""),
        heights=tuple(ks),
        states=quad,
    )


def _assemble(s: Split, pi: PumpScheme, empty):
    parts = [s.left[0]] + [s.left[i] for i in pi] + [s.middle]
    parts += [s.right[i] for i in reversed(pi)] + [s.right[0]]
    out = empty
    for x in parts:
        out = out + x
    return out


def pump(d: Decomposition, pi: PumpScheme) -> tuple[InputWord, str, str]:
    """Assemble ``(u_pi, v_pi, w_pi)``; ``pi = (1, ..., n)`` rebuilds the originals."""
    for i in pi:
        if not 1 <= i <= d.n:
            raise ValueError(f"pump index {i} outside 1..{d.n}")
    return _assemble(d.u, pi, ()), _assemble(d.v, pi, ""), _assemble(d.w, pi, "")


def pumped_length(d: Decomposition, pi: PumpScheme) -> int:
    base = len(d.u.left[0]) + len(d.u.middle) + len(d.u.right[0])
    return base + sum(d.loop_size(i) for i in pi)


def distinct_runs(t: Vpt, u: InputWord) -> tuple[RunTrace, RunTrace]:
    """First run, and the first later run whose output differs from it."""
    runs = accepting_runs(t, u)
    first = next(runs, None)
    if first is None:
        raise PreconditionError("input is not in the domain")
    for r in runs:
        if r.output != first.output:
            return first, r
    raise PreconditionError("input has a single output")


def shrink_witness(t: Vpt, u: InputWord, max_k: int = 7) -> InputWord:
    """A strictly shorter input that still has two outputs.

    Decomposes with eight loops and tries pump schemes of length up to
    ``max_k`` in order of length; if none of those works, longer schemes that
    still shorten the word are tried before giving up.
    """
    n = 8
    if len(transduce(t, u)) < 2:
        raise PreconditionError("input has fewer than two outputs")
    h = height(t.alphabet, u)
    if h <= n * t.n_states ** 4:
        raise PreconditionError(f"height {h} does not exceed 8*N^4 = {n * t.n_states ** 4}")
    r1, r2 = distinct_runs(t, u)
    d = decompose(t, u, r1, r2, n)
    smallest = min(d.loop_size(i) for i in range(1, n + 1))
    room = len(u) - pumped_length(d, ())
    k = 0
    while k <= max_k or k * smallest < room:
        for pi in itertools.product(range(1, n + 1), repeat=k):
            if pumped_length(d, pi) >= len(u):
                continue
            u2, v2, w2 = pump(d, pi)
            if v2 != w2:
                return u2
        k += 1
    raise AssertionError("no shorter witness found; the pumping argument guarantees one")


def reduce_height(t: Vpt, u: InputWord) -> InputWord:
    """Shrink a witness until its height is at most ``8 N^4``."""
    bound = 8 * t.n_states ** 4
    while height(t.alphabet, u) > bound:
        u = shrink_witness(t, u)
    return u
