"""One test per acceptance criterion.  Each prints a single PASS/FAIL line."""

import random
import time

import pytest

from conftest import fig1_formulas, fig1_word, load
from test_pumping import tall
from test_wordcomb import (all_words, check_overlap, hk_candidate, naive_primitive, naive_root,
                           overlap_instances)
from test_wordcomb import test_shifted_period_prefix_exhaustive as shifted_period_prefix
from test_wordcomb import test_period_absorbs_prefix_exhaustive as period_absorbs_prefix
from test_wordcomb import test_sandwiched_factor_exhaustive as sandwiched_factor
from vptkit.check import CheckOptions, check_equiv_functional, check_functional, height_bound
from vptkit.fst import fst_functional, fst_functional_bounded, schutzenberger_bound
from vptkit.model import StructuredAlphabet, Vpt, height, is_well_nested, validate
from vptkit.oracle import brute_equiv, brute_functional
from vptkit.pumping import decompose, distinct_runs, pump, shrink_witness
from vptkit.randgen import random_fst, random_vpt
from vptkit.semantics import accepting_runs, fst_transduce, transduce
from vptkit.wordcomb import commute, conjugacy_witness, hk_equation, is_primitive, primitive_root


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail
    return emit


def cap(h):
    return CheckOptions(height_cap=h)


def test_criterion_1_fig1_outputs(report):
    t0 = time.perf_counter()
    m = load("fig1.vpt")
    bad = [] if validate(m).ok else ["invalid"]
    for n in range(6):
        a, b = fig1_formulas(n)
        outs = transduce(m, fig1_word(m, n))
        if a != b or outs != {a}:
            bad.append(n)
    dt = time.perf_counter() - t0
    report(1, not bad and dt < 1.0, f"fig1 n=0..5 single output matches both closed forms "
                                    f"(failures={bad}, {dt:.2f}s)")


def test_criterion_2_functionality_verdicts(report):
    fig1, mut = load("fig1.vpt"), load("fig1_mutated.vpt")
    t0 = time.perf_counter()
    v = check_functional(fig1, cap(10))
    dt1 = time.perf_counter() - t0
    ok1 = v.functional is True and v.label == "functional-up-to-bound" and not v.exact
    t0 = time.perf_counter()
    w = check_functional(mut, cap(10))
    dt2 = time.perf_counter() - t0
    ok2 = w.functional is False and w.witness.out1 != w.witness.out2
    ok2 = ok2 and {w.witness.out1, w.witness.out2} <= transduce(mut, w.witness.input)
    report(2, ok1 and ok2 and dt1 < 10 and dt2 < 10,
           f"fig1 {v.label} at cap 10 ({dt1:.1f}s); mutation {w.label} on "
           f"{mut.alphabet.spell(w.witness.input)!r} ({dt2:.1f}s)")


def test_criterion_3_oracle_agreement(report):
    t0 = time.perf_counter()
    disagree, found = [], 0
    for seed in range(200):
        t = random_vpt(seed)
        v = check_functional(t, cap(6))
        o = brute_functional(t, 12)
        if o.verdict == "non-functional":
            found += 1
            if v.functional is not False:
                disagree.append(seed)
        if v.functional is False:
            wi = v.witness
            if wi.out1 == wi.out2 or not {wi.out1, wi.out2} <= transduce(t, wi.input):
                disagree.append(seed)
        if v.functional is None:
            disagree.append(seed)
    dt = time.perf_counter() - t0
    report(3, not disagree and dt < 300,
           f"200 random VPTs, {found} oracle witnesses, disagreements={disagree} ({dt:.1f}s)")


def oracle_shortest(f, max_len):
    """Level-by-level enumeration keeping every (state, output) pair."""
    level = [((), {(q, "") for q in f.initial})]
    for n in range(max_len + 1):
        nxt = []
        for u, conf in level:
            if len({o for q, o in conf if q in f.final}) >= 2:
                return u
            if n == max_len:
                continue
            for a in range(f.alphabet.size):
                c2 = {(t.dst, o + t.out) for q, o in conf for t in f.trans_from.get(q, ()) if t.sym == a}
                if c2:
                    nxt.append((u + (a,), c2))
        level = nxt
    return None


def test_criterion_4_fst_layer(report):
    bad = []
    for seed in range(500):
        f = random_fst(seed)
        v = fst_functional(f)
        ref = oracle_shortest(f, 10)
        if (ref is not None) and v.functional is not False:
            bad.append(("missed", seed))
        if v.functional is False:
            w = v.witness
            if w.out1 == w.out2 or not {w.out1, w.out2} <= fst_transduce(f, w.input):
                bad.append(("witness", seed))
            shortest = fst_functional_bounded(f, schutzenberger_bound(f.n_states)).witness
            if shortest is None or len(shortest.input) > schutzenberger_bound(f.n_states):
                bad.append(("bound", seed))
            elif ref is not None and len(shortest.input) != len(ref):
                bad.append(("length", seed))
    report(4, not bad, f"500 random FSTs vs enumeration up to length 10, violations={bad}")


def test_criterion_5_pumping(report):
    failures = []
    for name in ("pump_loop.vpt", "pump_choice.vpt"):
        m = load(name)
        u = tall(m, 17)
        if name == "pump_choice.vpt":
            r1, r2 = distinct_runs(m, u)
        else:
            runs = accepting_runs(m, u)
            r1 = next(runs)
            r2 = next(runs, r1)
        d = decompose(m, u, r1, r2, 1)
        if pump(d, [1]) != (u, r1.output, r2.output):
            failures.append((name, "identity"))
        if not all(d.u.left[i] and d.u.right[i] for i in range(1, d.n + 1)):
            failures.append((name, "empty loop"))
        rng = random.Random(name)
        for _ in range(50):
            pi = [rng.randint(1, d.n) for _ in range(rng.randint(0, 4))]
            up, vp, wp = pump(d, pi)
            outs = transduce(m, up)
            if not (is_well_nested(m.alphabet, up) and vp in outs and wp in outs):
                failures.append((name, tuple(pi)))
    coin = load("coin.vpt")
    u = tall(coin, 9)
    u2 = shrink_witness(coin, u)
    shrunk_ok = len(u2) < len(u) and len(transduce(coin, u2)) >= 2
    report(5, not failures and shrunk_ok,
           f"2 fixtures x 50 schemes, failures={failures}; coin h=9 shrunk "
           f"{len(u)} -> {len(u2)} letters (height {height(coin.alphabet, u2)})")


def test_criterion_6_word_combinatorics(report):
    t0 = time.perf_counter()
    problems = []
    ws = list(all_words(8))
    for x in ws:
        if x and primitive_root(x) != naive_root(x):
            problems.append(("root", x))
        if is_primitive(x) != naive_primitive(x):
            problems.append(("primitive", x))
    small = list(all_words(5))
    for x in small:
        rot = {x[i:] + x[:i] for i in range(max(len(x), 1))}
        for y in small:
            if (commute(x, y) is not None) != (x + y == y + x):
                problems.append(("commute", x, y))
            if (conjugacy_witness(x, y) is not None) != (len(x) == len(y) and y in rot):
                problems.append(("conjugate", x, y))
    rng = random.Random(7)
    overlap_bad = sum(not check_overlap(*inst) for inst in overlap_instances(rng, 1000))
    rng = random.Random(11)
    filtered = hk_bad = 0
    while filtered < 1000:
        v, w = hk_candidate(rng)
        if all(hk_equation(v, w, i) for i in range(4)):
            filtered += 1
            hk_bad += not all(hk_equation(v, w, i) for i in range(21))
    shifted_period_prefix()
    period_absorbs_prefix()
    sandwiched_factor()
    dt = time.perf_counter() - t0
    report(6, not problems and not overlap_bad and not hk_bad and dt < 120,
           f"predicates exhaustive mismatches={len(problems)}, overlap failures={overlap_bad}/1000, "
           f"HK counterexamples={hk_bad}/1000, period/prefix properties exhaustive to length 10 ({dt:.1f}s)")


def test_criterion_7_equivalence(report):
    up, lo = load("fig1_upper.vpt"), load("fig1_lower.vpt")
    fig1, noloop = load("fig1.vpt"), load("fig1_noloop.vpt")
    a = check_equiv_functional(up, lo, cap(8))
    b = check_equiv_functional(noloop, fig1, cap(8))
    wb = b.alphabet.spell(b.witness.input) if b.witness else None
    oa, ob = brute_equiv(up, lo, 14), brute_equiv(noloop, fig1, 14)
    ok = (a.equivalent is True and b.equivalent is False and wb == "c1 c2 c3 r3 r2 r1"
          and oa.ok and ob.verdict == "differ" and ob.witness == b.witness.input)
    report(7, ok, f"split: {a.label} (oracle {oa.verdict}); loop-deleted: {b.label} on {wb!r} "
                  f"(oracle {ob.verdict})")


def test_criterion_8_exactness_labels(report):
    bounds = [height_bound(n) for n in (1, 2, 3)]
    a = StructuredAlphabet(("c",), ("r",), ("a",))
    one = Vpt.build(a, ["q"], ["q"], ["q"], ["g"], [("q", "c", "a", "g", "q")],
                    [("q", "r", "", "g", "q")])
    labels = {h: check_functional(one, cap(h)) for h in (1, 7, 8, 9)}
    exact_ok = all(v.functional and v.exact == (h >= 8) for h, v in labels.items())
    full = check_functional(one)
    fig1 = load("fig1.vpt")
    big = check_functional(fig1, CheckOptions(node_budget=1000))
    ok = (bounds == [8, 128, 648] and exact_ok and full.label == "functional" and full.bound == 8
          and big.functional is None and big.label == "inconclusive" and not big.exact)
    report(8, ok, f"height_bound={bounds}; N=1 labels "
                  f"{ {h: v.label for h, v in labels.items()} }; full bound {full.label}; "
                  f"fig1 (N=8) under a 1000-node budget: {big.label}")
