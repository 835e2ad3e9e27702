"""Line-oriented machine files.

::

    vpt                                   # header: vpa | vpt | fst
    alphabet calls c1 c2
    alphabet returns r1 r2
    alphabet outputs a b                  # single-character output symbols
    alphabet internals x                  # sugar, see below
    stack g1 g2
    states q0 q1
    initial q0
    final q1
    call q0 c1 / ab push g1 -> q1         # "eps" is the empty output
    return q1 r1 / eps pop g1 -> q1
    internal q0 x / a -> q1

An internal symbol ``x`` becomes the call ``<x`` and the return ``x>``.  An
``internal`` line becomes a call into the hub state ``~x`` that pushes
``@q1``, followed by the return from ``~x`` popping ``@q1`` into ``q1``; the
output sits on the call half.  In input words ``x`` stands for ``<x x>``.

FST files use ``alphabet inputs`` and ``trans q a / out -> q'`` lines; VPA
files omit the ``/ out`` part.
"""

from __future__ import annotations

from typing import Union

from .model import (CallTrans, Fst, FstTrans, InputWord, Machine, RetTrans, StructuredAlphabet,
                    Vpa, Vpt)

KINDS = {"vpa": Vpa, "vpt": Vpt, "fst": Fst}


class ParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col
        self.msg = msg


class _Line:
    def __init__(self, number: int, raw: str):
        self.number = number
        text = raw.split("#", 1)[0]
        self.tokens: list[tuple[str, int]] = []
        i = 0
        for tok in text.split():
            i = text.index(tok, i)
            self.tokens.append((tok, i + 1))
            i += len(tok)

    def error(self, idx: int, msg: str) -> ParseError:
        col = self.tokens[idx][1] if idx < len(self.tokens) else 1
        return ParseError(self.number, col, msg)

    def words(self, start: int = 0) -> list[str]:
        return [t for t, _ in self.tokens[start:]]


def _output(line: _Line, idx: int) -> str:
    tok = line.tokens[idx][0]
    return "" if tok == "eps" else tok


def parse_machine(text: str) -> Machine:
    lines = [_Line(i + 1, raw) for i, raw in enumerate(text.splitlines())]
    lines = [ln for ln in lines if ln.tokens]
    if not lines:
        raise ParseError(1, 1, "empty machine file")
    head = lines[0]
    kind = head.tokens[0][0]
    if kind not in KINDS or len(head.tokens) != 1:
        raise head.error(0, f"expected header vpa, vpt or fst, got {' '.join(head.words())!r}")

    decl: dict[str, list[str]] = {}
    seen_at: dict[str, _Line] = {}
    trans_lines = []
    for ln in lines[1:]:
        key = ln.tokens[0][0]
        if key == "alphabet":
            if len(ln.tokens) < 2:
                raise ln.error(0, "alphabet needs a kind")
            sub = ln.tokens[1][0]
            allowed = ("inputs",) if kind == "fst" else ("calls", "returns", "internals")
            if sub not in allowed + ("outputs",):
                raise ln.error(1, f"unknown alphabet kind {sub!r}")
            key = "alphabet " + sub
            names = ln.words(2)
            start = 2
        elif key in ("stack", "states", "initial", "final"):
            if key == "stack" and kind == "fst":
                raise ln.error(0, "fst files have no stack")
            names = ln.words(1)
            start = 1
        elif key in ("call", "return", "internal", "trans"):
            trans_lines.append(ln)
            continue
        else:
            raise ln.error(0, f"unknown directive {key!r}")
        if key in decl:
            raise ln.error(0, f"duplicate declaration {key!r} (first on line {seen_at[key].number})")
        for i, n in enumerate(names):
            if names.index(n) != i:
                raise ln.error(start + i, f"duplicate name {n!r}")
        decl[key] = names
        seen_at[key] = ln

    internals = decl.get("alphabet internals", [])
    if kind == "fst":
        calls, returns = decl.get("alphabet inputs", []), []
    else:
        calls = decl.get("alphabet calls", []) + ["<" + x for x in internals]
        returns = decl.get("alphabet returns", []) + [x + ">" for x in internals]
    outputs = decl.get("alphabet outputs", [])
    for o in outputs:
        if len(o) != 1:
            raise seen_at["alphabet outputs"].error(2 + outputs.index(o), f"output symbol {o!r} is not a single character")
    alphabet = StructuredAlphabet(tuple(calls), tuple(returns), tuple(outputs))
    states = list(decl.get("states", []))
    stack = list(decl.get("stack", []))
    if internals:
        stack += ["@" + q for q in decl.get("states", [])]
        states += ["~" + x for x in internals]
    sidx = {n: i for i, n in enumerate(states)}
    gidx = {n: i for i, n in enumerate(stack)}

    def state(ln, i):
        name = ln.tokens[i][0]
        if name not in sidx:
            raise ln.error(i, f"undeclared state {name!r}")
        return sidx[name]

    def stack_sym(ln, i):
        name = ln.tokens[i][0]
        if name not in gidx:
            raise ln.error(i, f"undeclared stack symbol {name!r}")
        return gidx[name]

    def symbol(ln, i, want_call=None):
        name = ln.tokens[i][0]
        try:
            s = alphabet.symbol(name)
        except KeyError:
            raise ln.error(i, f"undeclared input symbol {name!r}") from None
        if want_call is not None and alphabet.is_call(s) != want_call:
            raise ln.error(i, f"{name!r} is not a {'call' if want_call else 'return'} symbol")
        return s

    initial = frozenset(state(seen_at["initial"], 1 + i) for i in range(len(decl.get("initial", []))))
    final = frozenset(state(seen_at["final"], 1 + i) for i in range(len(decl.get("final", []))))

    with_out = kind != "vpa"
    ct, rt, ft = [], [], []
    for ln in trans_lines:
        op = ln.tokens[0][0]
        toks = ln.words()
        if kind == "fst":
            if op != "trans":
                raise ln.error(0, f"{op!r} lines are not allowed in fst files")
            _expect(ln, ["trans", None, None, "/", None, "->", None])
            ft.append(FstTrans(state(ln, 1), symbol(ln, 2), _output(ln, 4), state(ln, 6)))
            continue
        if op == "trans":
            raise ln.error(0, "trans lines are only allowed in fst files")
        if op == "internal":
            if with_out:
                _expect(ln, ["internal", None, None, "/", None, "->", None])
                out, dst_i = _output(ln, 4), 6
            else:
                _expect(ln, ["internal", None, None, "->", None])
                out, dst_i = "", 4
            x = toks[2]
            if x not in internals:
                raise ln.error(2, f"undeclared internal symbol {x!r}")
            src, dst = state(ln, 1), state(ln, dst_i)
            hub = sidx["~" + x]
            g = gidx["@" + toks[dst_i]]
            ct.append(CallTrans(src, alphabet.symbol("<" + x), out, g, hub))
            rt.append(RetTrans(hub, alphabet.symbol(x + ">"), "", g, dst))
            continue
        verb = "push" if op == "call" else "pop"
        if with_out:
            _expect(ln, [op, None, None, "/", None, verb, None, "->", None])
            out, k = _output(ln, 4), 6
        else:
            _expect(ln, [op, None, None, verb, None, "->", None])
            out, k = "", 4
        src, sym = state(ln, 1), symbol(ln, 2, want_call=(op == "call"))
        g, dst = stack_sym(ln, k), state(ln, k + 2)
        if op == "call":
            ct.append(CallTrans(src, sym, out, g, dst))
        else:
            rt.append(RetTrans(src, sym, out, g, dst))

    if kind == "fst":
        return Fst(alphabet, tuple(states), initial, final, tuple(ft))
    return KINDS[kind](alphabet, tuple(states), initial, final, tuple(stack), tuple(ct), tuple(rt))


def _expect(ln: _Line, shape: list) -> None:
    toks = ln.words()
    if len(toks) != len(shape):
        raise ln.error(min(len(toks), len(shape)), f"expected {len(shape)} fields, got {len(toks)}")
    for i, (tok, want) in enumerate(zip(toks, shape)):
        if want is not None and tok != want:
            raise ln.error(i, f"expected {want!r}, got {tok!r}")


def serialize_machine(m: Machine) -> str:
    a = m.alphabet
    out = [m.kind]
    if isinstance(m, Fst):
        out.append(" ".join(["alphabet inputs", *a.calls]).rstrip())
    else:
        out.append(" ".join(["alphabet calls", *a.calls]).rstrip())
        out.append(" ".join(["alphabet returns", *a.returns]).rstrip())
    if m.kind != "vpa" or a.outputs:
        out.append(" ".join(["alphabet outputs", *a.outputs]).rstrip())
    if not isinstance(m, Fst):
        out.append(" ".join(["stack", *m.stack]).rstrip())
    out.append(" ".join(["states", *m.states]).rstrip())
    out.append(" ".join(["initial", *(m.states[q] for q in sorted(m.initial))]).rstrip())
    out.append(" ".join(["final", *(m.states[q] for q in sorted(m.final))]).rstrip())
    if isinstance(m, Fst):
        for t in m.trans:
            out.append(f"trans {m.states[t.src]} {a.name(t.sym)} / {t.out or 'eps'} -> {m.states[t.dst]}")
        return "\n".join(out) + "\n"
    mid = (lambda o: f" / {o or 'eps'}") if isinstance(m, Vpt) else (lambda o: "")
    for t in m.calls:
        out.append(f"call {m.states[t.src]} {a.name(t.sym)}{mid(t.out)} push {m.stack[t.push]} -> {m.states[t.dst]}")
    for t in m.returns:
        out.append(f"return {m.states[t.src]} {a.name(t.sym)}{mid(t.out)} pop {m.stack[t.pop]} -> {m.states[t.dst]}")
    return "\n".join(out) + "\n"


def load_machine(path) -> Machine:
    with open(path, encoding="utf-8") as fh:
        return parse_machine(fh.read())


def parse_word(alphabet: StructuredAlphabet, text: Union[str, list[str]]) -> InputWord:
    """Space-separated symbol names; an internal ``x`` expands to ``<x x>``."""
    names = text.split() if isinstance(text, str) else list(text)
    out: list[int] = []
    for n in names:
        if n not in alphabet.calls and n not in alphabet.returns and "<" + n in alphabet.calls:
            out += [alphabet.symbol("<" + n), alphabet.symbol(n + ">")]
        else:
            out.append(alphabet.symbol(n))
    return tuple(out)
