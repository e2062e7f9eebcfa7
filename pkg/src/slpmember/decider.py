"""Fully compressed membership: does the automaton accept eval(X_n)?

The main loop alternates compression of inner letters and non-crossing
pairs (to a fixpoint) with a phase that turns each outer letter inner,
compresses its blocks and then the pairs starting with those blocks.  Each
round shrinks eval(X_n) by a constant factor; once it is at most n letters
long it is expanded and checked directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analysis import classify_pairs, is_inner, nonextendible_lengths, outer_letters, pairs_in_eval
from .automaton import Automaton
from .letters import NT, Letter, Power
from .passes import (Instance, Trace, compress_blocks_inner, compress_crossing_pairs,
                     compress_pair_noncrossing, make_inner)
from .slp import BudgetExceeded
from .unary import AUTO, DEFAULT_DP_THRESHOLD

DEFAULT_CAP = 1 << 20


class IterationLimit(RuntimeError):
    """The main loop ran longer than its provable bound; indicates a bug."""


@dataclass
class Options:
    max_iter: int = None  # defaults to 3n + 10
    unary_strategy: str = AUTO
    unary_dp_threshold: int = DEFAULT_DP_THRESHOLD
    max_expand: int = DEFAULT_CAP
    # called as observer(stage, inst) after every pass; used by the test suite
    observer: object = None


@dataclass
class Decision:
    accepted: bool
    iterations: int
    final_len: int
    trace: Trace
    instance: Instance = field(repr=False, default=None)
    lengths: list = field(default_factory=list)  # eval_len(X_n) at each iteration start


def naive_accept(inst: Instance, cap: int = DEFAULT_CAP) -> bool:
    """Expand eval(X_n) and simulate the automaton position by position.

    A nonterminal transition ``X_i`` fires at position t when eval(X_i)
    literally occurs there; a power transition ``x^k`` needs k copies of x.
    """
    g, aut = inst.grammar, inst.automaton
    w = g.decompress(g.n, cap)
    expansions = {}
    for t in aut.transitions:
        if isinstance(t.label, NT) and t.label.index not in expansions:
            i = t.label.index
            if g.eval_len(i) <= len(w):
                expansions[i] = g.decompress(i, cap)
    return simulate(aut, w, expansions)


def simulate(aut: Automaton, w, expansions) -> bool:
    m = len(w)
    reach = [set() for _ in range(m + 1)]
    reach[0].add(aut.start)
    for pos in range(m + 1):
        for p in reach[pos]:
            for t in aut.outgoing(p):
                lab = t.label
                if isinstance(lab, NT):
                    s = expansions.get(lab.index)
                    if s is None or not s:
                        continue
                    end = pos + len(s)
                    if end <= m and all(x is y for x, y in zip(w[pos:end], s)):
                        reach[end].add(t.dst)
                elif isinstance(lab, Power):
                    end = pos + lab.exponent
                    if end <= m and all(x is lab.base for x in w[pos:end]):
                        reach[end].add(t.dst)
                elif pos < m and w[pos] is lab:
                    reach[pos + 1].add(t.dst)
    return aut.accept in reach[m]


def _noncrossing_targets(inst):
    """Non-crossing, non-marker pairs occurring in eval(X_n), canonical order."""
    g = inst.grammar
    wanted = pairs_in_eval(g, g.n)
    out = []
    for pc in classify_pairs(inst):
        if pc.pair in wanted and not pc.crossing and not pc.excluded:
            out.append(pc.pair)
    return out


def _sorted_letters(letters):
    return sorted(letters, key=lambda x: x.sort_key)


def decide(inst: Instance, opts: Options = None) -> Decision:
    opts = opts or Options()
    n = inst.n
    ceiling = opts.max_iter if opts.max_iter is not None else 3 * n + 10
    observe = opts.observer or (lambda stage, _inst: None)
    unary = dict(strategy=opts.unary_strategy, threshold=opts.unary_dp_threshold)
    iterations = 0
    lengths = []

    while inst.grammar.eval_len(n) > n:
        iterations += 1
        if iterations > ceiling:
            raise IterationLimit(f"main loop exceeded {ceiling} iterations")
        lengths.append(inst.grammar.eval_len(n))
        inst.trace.record({"pass": "iteration", "number": iterations, "len": lengths[-1],
                           "states": len(inst.automaton.states), "alphabet": len(inst.alphabet()),
                           "max_rule": max(map(len, inst.grammar.rules))})
        observe("iteration-start", inst)

        # no powers are stored here, so every useful compression shrinks |G|
        while True:
            size_before = inst.grammar.size
            outer = outer_letters(inst.grammar).outer
            for a in _sorted_letters(inst.grammar.letters() - outer):
                if a.is_marker or a not in inst.grammar.letters() or not is_inner(inst.grammar, a):
                    continue
                lengths_a = nonextendible_lengths(inst.grammar, a)
                if not lengths_a or max(lengths_a) < 2:
                    continue  # every run has length 1: compression would only rename
                inst = compress_blocks_inner(inst, a, **unary)
                observe("blocks", inst)
            for a, b in _noncrossing_targets(inst):
                g = inst.grammar
                if a not in g.letters() or b not in g.letters():
                    continue
                inst = compress_pair_noncrossing(inst, a, b)
                observe("pair", inst)
            if inst.grammar.size == size_before:
                break

        todo = [a for a in _sorted_letters(outer_letters(inst.grammar).outer) if not a.is_marker]
        for a in todo:
            if a not in inst.grammar.letters():
                continue
            if not is_inner(inst.grammar, a):
                inst = make_inner(inst, a)
                observe("make_inner", inst)
            before = set(inst.grammar.letters())
            inst = compress_blocks_inner(inst, a, **unary)
            observe("blocks", inst)
            fresh = {x for x in inst.grammar.letters() - before if x.kind == "block" and x.base is a}
            inst = compress_crossing_pairs(inst, fresh)
            observe("crossing", inst)

    accepted = naive_accept(inst, opts.max_expand)
    final_len = inst.grammar.eval_len(n)
    inst.trace.record({"pass": "naive", "len": final_len, "accepted": accepted})
    return Decision(accepted, iterations, final_len, inst.trace, inst, lengths)


def iteration_bound(initial_len: int) -> int:
    """ceil(log_{4/3} L0) + 2."""
    if initial_len <= 1:
        return 2
    return math.ceil(math.log(initial_len) / math.log(4 / 3) - 1e-12) + 2


def state_bound(n: int, initial_states: int, iterations: int) -> int:
    # per round: <= 2 fresh states per nonterminal transition for each of the
    # <= 2n outer letters, plus one per nonterminal transition when popping
    return initial_states + iterations * 6 * n * n


def alphabet_bound(n: int, initial_letters: int, iterations: int) -> int:
    # per round: <= 60n^2 rule letters shrink by compressions (twice), plus
    # 2n|G| block letters and 2n(|G| + 3n) crossing-pair letters, |G| <= 60n^2
    size = 60 * n * n
    return initial_letters + iterations * (120 * n * n + 2 * n * size + 2 * n * (size + 3 * n))


def brute_force_accepts(inst: Instance, cap: int = DEFAULT_CAP) -> bool:
    """Reference answer by full expansion; raises BudgetExceeded past ``cap``."""
    g = inst.grammar
    if g.eval_len(g.n) > cap:
        raise BudgetExceeded(g.eval_len(g.n), cap)
    return naive_accept(inst, cap)
