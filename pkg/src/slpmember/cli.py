"""Command line: decide, oracle, stats, gen, check.

Exit codes for ``decide`` and ``oracle``: 0 accepted, 1 rejected, 2 error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import classify_pairs, is_inner, nonextendible_lengths, outer_letters
from .automaton import Automaton, check_aut_invariants
from .decider import DEFAULT_CAP, IterationLimit, Options, brute_force_accepts, decide
from .generate import GenParams, gen_instance
from .normalize import InvariantError
from .passes import Trace
from .slp import BudgetExceeded, Grammar, GrammarError, check_slp_invariants
from .textfmt import (ParseError, letter_token, load_instance, parse_automaton_raw,
                      parse_grammar_rules, serialize_instance, split_bundle)
from .unary import AUTO, CYCLES, DEFAULT_DP_THRESHOLD, DENSE, WALK

ACCEPTED, REJECTED, ERROR = 0, 1, 2


def _add_input(sp):
    sp.add_argument("grammar", help="grammar file (.slp), or a combined .inst bundle")
    sp.add_argument("automaton", nargs="?", help="automaton file (.aut); default: <grammar>.aut")


def _load(args, trace=None):
    return load_instance(args.grammar, args.automaton, trace)


def _emit_json(event):
    print(json.dumps(event, default=str), flush=True)


def cmd_decide(args):
    trace = Trace(sink=_emit_json if args.trace else None, keep=False)
    inst = _load(args, trace)
    if args.engine == "naive":
        accepted = brute_force_accepts(inst, args.max_expand)
    else:
        opts = Options(max_iter=args.max_iter, unary_strategy=args.unary_strategy,
                       unary_dp_threshold=args.unary_dp_threshold, max_expand=args.max_expand)
        accepted = decide(inst, opts).accepted
    print("accepted" if accepted else "rejected")
    return ACCEPTED if accepted else REJECTED


def cmd_oracle(args):
    inst = _load(args)
    accepted = brute_force_accepts(inst, args.max_expand)
    print("accepted" if accepted else "rejected")
    return ACCEPTED if accepted else REJECTED


def _tokens(letters):
    return sorted(letter_token(x) for x in letters)


def cmd_stats(args):
    inst = _load(args)
    g = inst.grammar
    rep = outer_letters(g)
    classes = classify_pairs(inst)
    blocks = {}
    for a in sorted(g.letters() - rep.outer, key=lambda x: x.sort_key):
        if is_inner(g, a):
            blocks[letter_token(a)] = sorted(nonextendible_lengths(g, a))
    out = {
        "outer_left": _tokens(rep.left_outer),
        "outer_right": _tokens(rep.right_outer),
        "crossing": sorted([letter_token(x), letter_token(y)] for (x, y) in
                           (c.pair for c in classes if c.crossing)),
        "non_crossing": sorted([letter_token(x), letter_token(y)] for (x, y) in
                               (c.pair for c in classes if not c.crossing)),
        "block_lengths_by_letter": blocks,
    }
    print(json.dumps(out, indent=2 if args.pretty else None, sort_keys=True))
    return 0


def cmd_gen(args):
    p = GenParams(seed=args.seed, n=args.n, alphabet_size=args.alphabet, state_count=args.states,
                  max_rhs_len=args.max_rhs_len, target_eval_len_log2=args.log2_len,
                  deterministic=args.dfa, plant={"yes": True, "no": False}.get(args.plant))
    text = serialize_instance(gen_instance(p))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_check(args):
    """Parse without normalizing and print every invariant violation."""
    path = Path(args.grammar)
    if args.automaton is None and path.suffix == ".inst":
        g_text, a_text = split_bundle(path.read_text(encoding="utf-8"))
    else:
        a_path = Path(args.automaton) if args.automaton else path.with_suffix(".aut")
        g_text, a_text = path.read_text(encoding="utf-8"), a_path.read_text(encoding="utf-8")
    rules, succinct = parse_grammar_rules(g_text)
    states, trans, start, accepts, relaxed = parse_automaton_raw(a_text)
    g = Grammar(rules, succinct_for=succinct, check=False)
    problems = check_slp_invariants(g, g)
    if len(accepts) != 1:
        print(f"Aut: expected exactly one accept state, found {len(accepts)}")
        accept = accepts[0] if accepts else None
    else:
        accept = accepts[0]
    if accept is not None:
        problems += check_aut_invariants(Automaton(states, trans, start, accept, relaxed), g)
    for v in problems:
        print(v)
    if not problems and len(accepts) == 1:
        print("ok")
        return 0
    return 1


def build_parser():
    ap = argparse.ArgumentParser(prog="slpmember", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("decide", help="run the recompression decision procedure")
    _add_input(sp)
    sp.add_argument("--engine", choices=("recompress", "naive"), default="recompress")
    sp.add_argument("--trace", action="store_true", help="stream pass events as JSON lines")
    sp.add_argument("--max-iter", type=int, default=None)
    sp.add_argument("--unary-strategy", choices=(AUTO, DENSE, CYCLES, WALK), default=AUTO)
    sp.add_argument("--unary-dp-threshold", type=int, default=DEFAULT_DP_THRESHOLD)
    sp.add_argument("--max-expand", type=int, default=DEFAULT_CAP,
                    help="decompression budget in letters")
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("oracle", help="decide by full decompression")
    _add_input(sp)
    sp.add_argument("--max-expand", type=int, default=DEFAULT_CAP)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("stats", help="outer letters, pair classes and block lengths as JSON")
    _add_input(sp)
    sp.add_argument("--pretty", action="store_true")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("gen", help="write a seeded random instance bundle")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--alphabet", type=int, default=3)
    sp.add_argument("--states", type=int, default=4)
    sp.add_argument("--max-rhs-len", type=int, default=3)
    sp.add_argument("--log2-len", type=int, default=12)
    sp.add_argument("--dfa", action="store_true", help="deterministic automaton")
    sp.add_argument("--plant", choices=("yes", "no", "seed"), default="seed",
                    help="force an accepting path (default: decided by the seed)")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check", help="report grammar and automaton invariant violations")
    _add_input(sp)
    sp.set_defaults(func=cmd_check)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GrammarError, InvariantError, BudgetExceeded, IterationLimit,
            ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
