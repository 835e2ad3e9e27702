"""Alphabets, nested words and machine descriptions.

Input symbols are interned to dense integer ids: calls occupy ``0..C-1`` and
returns ``C..C+R-1``.  States and stack symbols are likewise integer indices
into name tables.  Output words are plain ``str`` values over single-character
output symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence, Union

InputWord = tuple[int, ...]


class NotWellNested(ValueError):
    pass


@dataclass(frozen=True)
class StructuredAlphabet:
    calls: tuple[str, ...]
    returns: tuple[str, ...]
    outputs: tuple[str, ...] = ()

    @cached_property
    def _ids(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.calls + self.returns)}

    @property
    def size(self) -> int:
        return len(self.calls) + len(self.returns)

    @property
    def call_ids(self) -> range:
        return range(len(self.calls))

    @property
    def return_ids(self) -> range:
        return range(len(self.calls), self.size)

    def is_call(self, sym: int) -> bool:
        return sym < len(self.calls)

    def name(self, sym: int) -> str:
        return (self.calls + self.returns)[sym]

    def symbol(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise KeyError(f"unknown input symbol {name!r}") from None

    def word(self, text: Union[str, Sequence[str]]) -> InputWord:
        """Intern a space-separated symbol list (or a list of names)."""
        names = text.split() if isinstance(text, str) else text
        return tuple(self.symbol(n) for n in names)

    def spell(self, word: InputWord) -> str:
        return " ".join(self.name(s) for s in word)

    def problems(self) -> list[str]:
        out = []
        shared = set(self.calls) & set(self.returns)
        if shared:
            out.append(f"symbols both call and return: {sorted(shared)}")
        for kind, names in (("call", self.calls), ("return", self.returns), ("output", self.outputs)):
            if len(set(names)) != len(names):
                out.append(f"duplicate {kind} symbol")
            for n in names:
                if not n or any(ch.isspace() for ch in n):
                    out.append(f"bad {kind} symbol {n!r}")
        return out


class CallTrans(NamedTuple):
    src: int
    sym: int
    out: str
    push: int
    dst: int


class RetTrans(NamedTuple):
    src: int
    sym: int
    out: str
    pop: int
    dst: int


class FstTrans(NamedTuple):
    src: int
    sym: int
    out: str
    dst: int


@dataclass(frozen=True)
class Vpa:
    """Visibly pushdown automaton.  Transitions carry an empty output."""

    alphabet: StructuredAlphabet
    states: tuple[str, ...]
    initial: frozenset[int]
    final: frozenset[int]
    stack: tuple[str, ...]
    calls: tuple[CallTrans, ...]
    returns: tuple[RetTrans, ...]

    kind = "vpa"

    @property
    def n_states(self) -> int:
        return len(self.states)

    @cached_property
    def calls_from(self) -> dict[tuple[int, int], tuple[CallTrans, ...]]:
        """(state, call symbol) -> transitions, in declaration order."""
        idx: dict[tuple[int, int], list[CallTrans]] = {}
        for t in self.calls:
            idx.setdefault((t.src, t.sym), []).append(t)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def returns_from(self) -> dict[tuple[int, int, int], tuple[RetTrans, ...]]:
        """(state, return symbol, popped symbol) -> transitions."""
        idx: dict[tuple[int, int, int], list[RetTrans]] = {}
        for t in self.returns:
            idx.setdefault((t.src, t.sym, t.pop), []).append(t)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def returns_by_state(self) -> dict[int, tuple[RetTrans, ...]]:
        idx: dict[int, list[RetTrans]] = {}
        for t in self.returns:
            idx.setdefault(t.src, []).append(t)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def calls_by_state(self) -> dict[int, tuple[CallTrans, ...]]:
        idx: dict[int, list[CallTrans]] = {}
        for t in self.calls:
            idx.setdefault(t.src, []).append(t)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def max_output(self) -> int:
        return max((len(t.out) for t in self.calls + self.returns), default=0)

    @classmethod
    def build(cls, alphabet, states, initial, final, stack, calls=(), returns=()):
        """Construct from names.  Transition tuples are
        ``(src, sym, out, stack_sym, dst)`` for transducers and
        ``(src, sym, stack_sym, dst)`` for automata."""
        sidx = {n: i for i, n in enumerate(states)}
        gidx = {n: i for i, n in enumerate(stack)}

        def conv(t, tcls):
            if cls is Vpa:
                src, sym, g, dst = t
                out = ""
            else:
                src, sym, out, g, dst = t
            return tcls(_lookup(sidx, src, "state"), alphabet.symbol(sym), out or "",
                        _lookup(gidx, g, "stack symbol"), _lookup(sidx, dst, "state"))

        return cls(
            alphabet=alphabet,
            states=tuple(states),
            initial=frozenset(_lookup(sidx, q, "state") for q in initial),
            final=frozenset(_lookup(sidx, q, "state") for q in final),
            stack=tuple(stack),
            calls=tuple(conv(t, CallTrans) for t in calls),
            returns=tuple(conv(t, RetTrans) for t in returns),
        )


@dataclass(frozen=True)
class Vpt(Vpa):
    """Visibly pushdown transducer: a VPA whose transitions emit words."""

    kind = "vpt"


@dataclass(frozen=True)
class Fst:
    alphabet: StructuredAlphabet
    states: tuple[str, ...]
    initial: frozenset[int]
    final: frozenset[int]
    trans: tuple[FstTrans, ...]

    kind = "fst"

    @property
    def n_states(self) -> int:
        return len(self.states)

    @cached_property
    def trans_from(self) -> dict[int, tuple[FstTrans, ...]]:
        idx: dict[int, list[FstTrans]] = {}
        for t in self.trans:
            idx.setdefault(t.src, []).append(t)
        return {k: tuple(v) for k, v in idx.items()}

    @cached_property
    def max_output(self) -> int:
        return max((len(t.out) for t in self.trans), default=0)

    @classmethod
    def build(cls, alphabet, states, initial, final, trans=()):
        sidx = {n: i for i, n in enumerate(states)}
        return cls(
            alphabet=alphabet,
            states=tuple(states),
            initial=frozenset(_lookup(sidx, q, "state") for q in initial),
            final=frozenset(_lookup(sidx, q, "state") for q in final),
            trans=tuple(
                FstTrans(_lookup(sidx, s, "state"), alphabet.symbol(a), o or "", _lookup(sidx, d, "state"))
                for s, a, o, d in trans
            ),
        )


Machine = Union[Vpa, Vpt, Fst]


def _lookup(table: dict[str, int], name: str, what: str) -> int:
    try:
        return table[name]
    except KeyError:
        raise KeyError(f"undeclared {what} {name!r}") from None


def merge_alphabets(a: StructuredAlphabet, b: StructuredAlphabet) -> StructuredAlphabet:
    def add(xs, ys):
        return tuple(xs) + tuple(y for y in ys if y not in xs)

    return StructuredAlphabet(add(a.calls, b.calls), add(a.returns, b.returns), add(a.outputs, b.outputs))


def reencode(t: Vpa, alphabet: StructuredAlphabet) -> Vpa:
    """Same machine over a larger alphabet (symbols matched by name)."""
    old = t.alphabet
    m = {s: alphabet.symbol(old.name(s)) for s in range(old.size)}
    return type(t)(
        alphabet, t.states, t.initial, t.final, t.stack,
        tuple(tr._replace(sym=m[tr.sym]) for tr in t.calls),
        tuple(tr._replace(sym=m[tr.sym]) for tr in t.returns),
    )


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(m: Machine) -> ValidationReport:
    """List every structural invariant the machine breaks."""
    errs = list(m.alphabet.problems())
    n = m.n_states
    for q in sorted(m.initial):
        if not 0 <= q < n:
            errs.append(f"initial state {q} not declared")
    for q in sorted(m.final):
        if not 0 <= q < n:
            errs.append(f"final state {q} not declared")
    outs = set(m.alphabet.outputs)

    def check_out(where, out):
        if isinstance(m, Vpt) or isinstance(m, Fst):
            bad = sorted(set(out) - outs)
            if bad:
                errs.append(f"{where}: undeclared output symbols {bad}")
        elif out:
            errs.append(f"{where}: automaton transition with output")

    if isinstance(m, Fst):
        for i, t in enumerate(m.trans):
            where = f"transition {i}"
            if not (0 <= t.src < n and 0 <= t.dst < n):
                errs.append(f"{where}: undeclared state")
            if not 0 <= t.sym < m.alphabet.size:
                errs.append(f"{where}: undeclared input symbol")
            check_out(where, t.out)
        return ValidationReport(tuple(errs))

    k = len(m.stack)
    if len(set(m.stack)) != k:
        errs.append("duplicate stack symbol")
    for i, t in enumerate(m.calls):
        where = f"call transition {i}"
        if not (0 <= t.src < n and 0 <= t.dst < n):
            errs.append(f"{where}: undeclared state")
        if not (0 <= t.sym < m.alphabet.size and m.alphabet.is_call(t.sym)):
            errs.append(f"{where}: symbol is not a call")
        if not 0 <= t.push < k:
            errs.append(f"{where}: undeclared stack symbol {t.push}")
        check_out(where, t.out)
    for i, t in enumerate(m.returns):
        where = f"return transition {i}"
        if not (0 <= t.src < n and 0 <= t.dst < n):
            errs.append(f"{where}: undeclared state")
        if not (0 <= t.sym < m.alphabet.size and not m.alphabet.is_call(t.sym)):
            errs.append(f"{where}: symbol is not a return")
        if not 0 <= t.pop < k:
            errs.append(f"{where}: undeclared stack symbol {t.pop}")
        check_out(where, t.out)
    return ValidationReport(tuple(errs))


# -- nested words -----------------------------------------------------------


def is_well_nested(alphabet: StructuredAlphabet, word: InputWord) -> bool:
    depth = 0
    for s in word:
        if alphabet.is_call(s):
            depth += 1
        else:
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def depth_profile(alphabet: StructuredAlphabet, word: InputWord) -> list[int]:
    """Stack height after each prefix: ``len(word) + 1`` entries."""
    prof = [0]
    for s in word:
        prof.append(prof[-1] + (1 if alphabet.is_call(s) else -1))
    return prof


def height(alphabet: StructuredAlphabet, word: InputWord) -> int:
    if not is_well_nested(alphabet, word):
        raise NotWellNested(alphabet.spell(word))
    return max(depth_profile(alphabet, word))


def matching(alphabet: StructuredAlphabet, word: InputWord) -> dict[int, int]:
    """Map each call position to the position of its matching return."""
    pending: list[int] = []
    pairs = {}
    for i, s in enumerate(word):
        if alphabet.is_call(s):
            pending.append(i)
        elif pending:
            pairs[pending.pop()] = i
        else:
            raise NotWellNested(alphabet.spell(word))
    if pending:
        raise NotWellNested(alphabet.spell(word))
    return dict(sorted(pairs.items()))
