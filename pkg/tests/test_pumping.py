import random

import pytest

from conftest import load
from vptkit.model import height, is_well_nested
from vptkit.pumping import (PreconditionError, decompose, distinct_runs, pump, pumped_length,
                            reduce_height, shrink_witness)
from vptkit.semantics import accepting_runs, transduce


def tall(m, h):
    return m.alphabet.word(["c"] * h + ["r"] * h)


def first_two_runs(m, u):
    runs = accepting_runs(m, u)
    r1 = next(runs)
    return r1, next(runs, r1)


def test_decompose_single_loop():
    m = load("pump_loop.vpt")
    u = tall(m, 18)
    r1, r2 = first_two_runs(m, u)
    d = decompose(m, u, r1, r2, 1)
    c, r = m.alphabet.symbol("c"), m.alphabet.symbol("r")
    assert d.u.left[1] == (c,) and d.u.right[1] == (r,)
    assert pump(d, [1]) == (u, r1.output, r2.output)


def test_decompose_needs_strict_height():
    m = load("pump_loop.vpt")
    u = tall(m, 16)
    r1, r2 = first_two_runs(m, u)
    with pytest.raises(PreconditionError, match="does not exceed"):
        decompose(m, u, r1, r2, 1)


def test_decompose_rejects_foreign_run():
    m = load("pump_loop.vpt")
    r1, _ = first_two_runs(m, tall(m, 18))
    with pytest.raises(PreconditionError):
        decompose(m, tall(m, 17), r1, r1, 1)


@pytest.mark.parametrize("name,h", [("pump_loop.vpt", 17), ("pump_choice.vpt", 17),
                                    ("pump_choice.vpt", 20)])
def test_pumped_words_keep_both_outputs(name, h):
    m = load(name)
    u = tall(m, h)
    r1, r2 = (distinct_runs(m, u) if name == "pump_choice.vpt" else first_two_runs(m, u))
    d = decompose(m, u, r1, r2, 1)
    assert pump(d, [1]) == (u, r1.output, r2.output)
    for i in range(1, d.n + 1):
        assert d.u.left[i] and d.u.right[i]
    u0, v0, w0 = pump(d, [])
    assert u0 == d.u.left[0] + d.u.middle + d.u.right[0]
    rng = random.Random(name)
    for _ in range(50):
        pi = [rng.randint(1, d.n) for _ in range(rng.randint(0, 4))]
        up, vp, wp = pump(d, pi)
        assert is_well_nested(m.alphabet, up)
        outs = transduce(m, up)
        assert vp in outs and wp in outs
        assert len(up) == pumped_length(d, pi)


def test_pump_index_range():
    m = load("pump_loop.vpt")
    u = tall(m, 17)
    r1, r2 = first_two_runs(m, u)
    d = decompose(m, u, r1, r2, 1)
    with pytest.raises(ValueError):
        pump(d, [2])


def test_decompose_larger_n():
    m = load("coin.vpt")  # N = 1: needs h > n
    u = tall(m, 12)
    r1, r2 = distinct_runs(m, u)
    d = decompose(m, u, r1, r2, 8)
    assert pump(d, list(range(1, 9))) == (u, r1.output, r2.output)
    assert d.heights == tuple(range(9))


def test_shrink_coin():
    m = load("coin.vpt")
    u = tall(m, 9)
    u2 = shrink_witness(m, u)
    assert len(u2) < len(u) and len(transduce(m, u2)) >= 2


def test_shrink_preconditions():
    m = load("coin.vpt")
    with pytest.raises(PreconditionError):
        shrink_witness(m, tall(m, 8))
    loop = load("pump_loop.vpt")
    with pytest.raises(PreconditionError):
        shrink_witness(loop, tall(loop, 200))


def test_reduce_height_terminates():
    m = load("coin.vpt")
    u = reduce_height(m, tall(m, 14))
    assert height(m.alphabet, u) <= 8 and len(transduce(m, u)) >= 2
