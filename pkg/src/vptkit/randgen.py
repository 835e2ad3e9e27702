"""Seeded random machines for differential testing and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .model import CallTrans, Fst, FstTrans, RetTrans, StructuredAlphabet, Vpt


@dataclass(frozen=True)
class VptShape:
    max_states: int = 3
    max_stack: int = 2
    max_calls: int = 2
    max_returns: int = 2
    max_out: int = 2               # letters per transition output
    outputs: str = "ab"
    density: float = 0.4           # chance that a given transition slot is used


@dataclass(frozen=True)
class FstShape:
    max_states: int = 4
    inputs: int = 2
    max_out: int = 2
    outputs: str = "ab"
    density: float = 0.3


def _word(rng: random.Random, letters: str, k: int) -> str:
    return "".join(rng.choice(letters) for _ in range(rng.randint(0, k)))


def random_vpt(seed: int, shape: Optional[VptShape] = None) -> Vpt:
    s = shape or VptShape()
    rng = random.Random(seed)
    n = rng.randint(1, s.max_states)
    k = rng.randint(1, s.max_stack)
    nc = rng.randint(1, s.max_calls)
    nr = rng.randint(1, s.max_returns)
    alpha = StructuredAlphabet(tuple(f"c{i}" for i in range(nc)),
                               tuple(f"r{i}" for i in range(nr)), tuple(s.outputs))
    calls = []
    for q in range(n):
        for c in range(nc):
            for g in range(k):
                for d in range(n):
                    if rng.random() < s.density:
                        calls.append(CallTrans(q, c, _word(rng, s.outputs, s.max_out), g, d))
    rets = []
    for q in range(n):
        for r in range(nr):
            for g in range(k):
                for d in range(n):
                    if rng.random() < s.density:
                        rets.append(RetTrans(q, nc + r, _word(rng, s.outputs, s.max_out), g, d))
    initial = frozenset(q for q in range(n) if q == 0 or rng.random() < 0.2)
    # an initial final state only adds the empty word, so make it rarer
    final = frozenset(q for q in range(n) if rng.random() < (0.2 if q in initial else 0.6))
    final = final or frozenset({n - 1})
    return Vpt(alpha, tuple(f"q{i}" for i in range(n)), initial, final,
               tuple(f"g{i}" for i in range(k)), tuple(calls), tuple(rets))


def random_fst(seed: int, shape: Optional[FstShape] = None) -> Fst:
    s = shape or FstShape()
    rng = random.Random(seed)
    n = rng.randint(1, s.max_states)
    alpha = StructuredAlphabet(tuple("xyz"[: s.inputs]), (), tuple(s.outputs))
    trans = [
        FstTrans(q, a, _word(rng, s.outputs, s.max_out), d)
        for q in range(n) for a in range(s.inputs) for d in range(n)
        if rng.random() < s.density
    ]
    initial = frozenset(q for q in range(n) if q == 0 or rng.random() < 0.2)
    final = frozenset(q for q in range(n) if rng.random() < 0.5) or frozenset({n - 1})
    return Fst(alpha, tuple(f"q{i}" for i in range(n)), initial, final, tuple(trans))
