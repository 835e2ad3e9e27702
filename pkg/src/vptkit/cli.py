"""Command-line entry point.  Every subcommand prints one JSON document.

Exit status: 2 for usage errors (including unreadable machine files or
unknown input symbols), 1 for an inconclusive check, 0 otherwise.  Verdicts
live in the document, never in the exit status.  Field names are listed in
docs/FORMAT.md.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import check, fst, oracle, pumping
from .fileformat import ParseError, load_machine, parse_word
from .model import Fst, Vpa, Vpt, height, is_well_nested, validate
from .semantics import accepts, transduce

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load(path: str, kinds=None):
    try:
        m = load_machine(path)
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None
    except ParseError as e:
        raise UsageError(f"{path}: {e}") from None
    if kinds and not isinstance(m, kinds):
        raise UsageError(f"{path}: a {m.kind} file is not accepted here")
    report = validate(m)
    if not report.ok:
        raise UsageError(f"{path}: invalid machine: " + "; ".join(report.violations))
    return m


def _word(m, text: str):
    try:
        return parse_word(m.alphabet, text)
    except KeyError as e:
        raise UsageError(str(e.args[0])) from None


def _opts(args) -> check.CheckOptions:
    kw = {}
    if args.height_cap is not None:
        kw["height_cap"] = args.height_cap
    if args.node_budget is not None:
        kw["node_budget"] = args.node_budget
    try:
        return check.CheckOptions(**kw)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _witness_doc(alphabet, w: Optional[fst.Witness]):
    if w is None:
        return None
    return {"input": alphabet.spell(w.input), "outputs": [w.out1, w.out2]}


def cmd_validate(args):
    try:
        m = load_machine(args.machine)
    except OSError as e:
        raise UsageError(f"{args.machine}: {e.strerror}") from None
    except ParseError as e:
        return {"command": "validate", "valid": False, "violations": [str(e)]}, EXIT_OK
    r = validate(m)
    return {"command": "validate", "kind": m.kind, "valid": r.ok, "violations": list(r.violations)}, EXIT_OK


def cmd_run(args):
    m = _load(args.machine)
    u = _word(m, args.input)
    outs = sorted(transduce(m, u), key=lambda v: (len(v), v)) if not type(m) is Vpa else []
    doc = {
        "command": "run",
        "input": m.alphabet.spell(u),
        "accepted": accepts(m, u),
        "outputs": outs,
    }
    if not isinstance(m, Fst):
        doc["well_nested"] = is_well_nested(m.alphabet, u)
    return doc, EXIT_OK


def cmd_check_functional(args):
    m = _load(args.machine, (Vpt,))
    opts = _opts(args)
    v = check.check_functional(m, opts)
    doc = {
        "command": "check-functional",
        "verdict": v.label,
        "functional": v.functional,
        "exact": v.exact,
        "height_cap": v.bound,
        "height_bound": check.height_bound(max(m.n_states, 1)),
        "explored": v.explored,
        "witness": _witness_doc(m.alphabet, v.witness),
    }
    return doc, EXIT_INCONCLUSIVE if v.inconclusive else EXIT_OK


def cmd_equiv(args):
    a = _load(args.first, (Vpt,))
    b = _load(args.second, (Vpt,))
    try:
        v = check.check_equiv_functional(a, b, _opts(args))
    except check.NotFunctionalError as e:
        doc = {
            "command": "equiv",
            "verdict": "input-not-functional",
            "machine": e.which,
            "witness": _witness_doc((a if e.which == 1 else b).alphabet, e.verdict.witness),
        }
        return doc, EXIT_OK
    w = None
    if v.witness is not None:
        w = {"input": v.alphabet.spell(v.witness.input),
             "output1": v.witness.out1, "output2": v.witness.out2}
    doc = {"command": "equiv", "verdict": v.label, "equivalent": v.equivalent,
           "exact": v.exact, "witness": w}
    return doc, EXIT_INCONCLUSIVE if v.equivalent is None else EXIT_OK


def cmd_domain_equiv(args):
    a = _load(args.first, (Vpa,))
    b = _load(args.second, (Vpa,))
    v = check.domain_equiv(a, b, _opts(args))
    alpha = check.merge_alphabets(a.alphabet, b.alphabet)
    doc = {
        "command": "domain-equiv",
        "verdict": v.label,
        "witness": None if v.witness is None else alpha.spell(v.witness),
        "accepted_by": None if v.in_first is None else (1 if v.in_first else 2),
    }
    return doc, EXIT_INCONCLUSIVE if v.equal is None else EXIT_OK


def cmd_oracle(args):
    a = _load(args.machine, (Vpt,))
    if args.other:
        b = _load(args.other, (Vpt,))
        r = oracle.brute_equiv(a, b, args.max_len)
        alpha = check.merge_alphabets(a.alphabet, b.alphabet)
        doc = {"command": "oracle", "verdict": r.verdict, "bound": r.max_len,
               "checked": r.checked_count,
               "witness": None if r.witness is None else {
                   "input": alpha.spell(r.witness),
                   "outputs1": list(r.outputs1), "outputs2": list(r.outputs2)}}
        return doc, EXIT_OK
    r = oracle.brute_functional(a, args.max_len)
    doc = {"command": "oracle", "verdict": r.verdict, "bound": r.max_len,
           "checked": r.checked_count,
           "witness": None if r.witness is None else {
               "input": a.alphabet.spell(r.witness), "outputs": list(r.outputs1)}}
    return doc, EXIT_OK


def cmd_shrink(args):
    m = _load(args.machine, (Vpt,))
    u = _word(m, args.input)
    try:
        u2 = pumping.reduce_height(m, u) if args.to_bound else pumping.shrink_witness(m, u)
    except pumping.PreconditionError as e:
        raise UsageError(str(e)) from None
    outs = sorted(transduce(m, u2), key=lambda v: (len(v), v))
    doc = {"command": "shrink", "input": m.alphabet.spell(u), "shrunk": m.alphabet.spell(u2),
           "height": height(m.alphabet, u2), "outputs": outs[:2]}
    return doc, EXIT_OK


def cmd_fst_check(args):
    m = _load(args.machine, (Fst,))
    if args.max_len is not None:
        v = fst.fst_functional_bounded(m, args.max_len)
    else:
        v = fst.fst_functional(m)
    doc = {"command": "fst-check", "verdict": v.label, "functional": v.functional,
           "exact": v.exact, "bound": v.bound, "witness": _witness_doc(m.alphabet, v.witness)}
    return doc, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vptkit", description="Visibly pushdown transducer toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def checks(sp):
        sp.add_argument("--height-cap", type=int, default=None,
                        help="nesting-height cap (default: the exact bound 8 N^4)")
        sp.add_argument("--node-budget", type=int, default=None,
                        help="search-size cutoff (default: $VPTKIT_NODE_BUDGET or %d)" % check.DEFAULT_BUDGET)

    sp = sub.add_parser("validate", help="report structural problems")
    sp.add_argument("machine")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("run", help="transduce one input word")
    sp.add_argument("machine")
    sp.add_argument("--input", required=True, help="space-separated input symbols")
    sp.set_defaults(fn=cmd_run)

    sp = sub.add_parser("check-functional", help="decide functionality of a VPT")
    sp.add_argument("machine")
    checks(sp)
    sp.set_defaults(fn=cmd_check_functional)

    sp = sub.add_parser("equiv", help="decide equivalence of two functional VPTs")
    sp.add_argument("first")
    sp.add_argument("second")
    checks(sp)
    sp.set_defaults(fn=cmd_equiv)

    sp = sub.add_parser("domain-equiv", help="compare the domains of two machines")
    sp.add_argument("first")
    sp.add_argument("second")
    checks(sp)
    sp.set_defaults(fn=cmd_domain_equiv)

    sp = sub.add_parser("oracle", help="brute-force functionality (or equivalence) check")
    sp.add_argument("machine")
    sp.add_argument("other", nargs="?")
    sp.add_argument("--max-len", type=int, required=True)
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("shrink", help="shorten a tall non-functionality witness")
    sp.add_argument("machine")
    sp.add_argument("--input", required=True)
    sp.add_argument("--to-bound", action="store_true", help="repeat until height <= 8 N^4")
    sp.set_defaults(fn=cmd_shrink)

    sp = sub.add_parser("fst-check", help="decide functionality of an FST")
    sp.add_argument("machine")
    sp.add_argument("--max-len", type=int, default=None, help="bounded brute search instead")
    sp.set_defaults(fn=cmd_fst_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        doc, code = args.fn(args)
    except UsageError as e:
        print(f"vptkit: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
