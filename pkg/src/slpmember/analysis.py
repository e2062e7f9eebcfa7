"""Letter and pair classification over a grammar (and its automaton).

Outer letters are first or last letters of some eval(X_i); a pair of
distinct letters is crossing when some occurrence straddles a rule boundary
(explicit symbol next to a nonterminal) or a junction of two consecutive
transitions where at least one is a nonterminal transition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .automaton import Automaton, label_first, label_last
from .letters import NT, Letter, Power, symbol_first


class PreconditionError(ValueError):
    """An operation was called on an instance it is not defined for."""


@dataclass(frozen=True)
class OuterReport:
    left_outer: frozenset
    right_outer: frozenset

    @property
    def outer(self) -> frozenset:
        return self.left_outer | self.right_outer


@dataclass
class PairClass:
    pair: tuple
    crossing: bool = False
    witnesses: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "crossing" if self.crossing else "non-crossing"

    @property
    def excluded(self) -> bool:
        """Pairs touching $ or # are never compressed."""
        return self.pair[0].is_marker or self.pair[1].is_marker


def outer_letters(g) -> OuterReport:
    left, right = set(), set()
    for i in range(1, g.n + 1):
        f, l = g.first_last(i)
        if f is not None:
            left.add(f)
            right.add(l)
    return OuterReport(frozenset(left), frozenset(right))


def is_inner(g, a: Letter) -> bool:
    return a not in outer_letters(g).outer


def _rule_pairs(g, i):
    """Adjacent-letter pairs read directly off the rule for X_i.

    Yields ``(pair, offset, crossing)``; a pair is crossing when one side
    of the junction is a nonterminal.
    """
    rhs = g.rules[i - 1]
    for k in range(len(rhs) - 1):
        s, t = rhs[k], rhs[k + 1]
        x = g.last(s.index) if isinstance(s, NT) else symbol_first(s)
        y = g.first(t.index) if isinstance(t, NT) else symbol_first(t)
        if x is None or y is None or x is y:
            continue
        yield (x, y), k, isinstance(s, NT) or isinstance(t, NT)


def pairs_per_nonterminal(g) -> list:
    """``out[i - 1]`` is the set of pairs occurring in eval(X_i)."""
    out = []
    for i in range(1, g.n + 1):
        acc = set()
        for s in g.rules[i - 1]:
            if isinstance(s, NT):
                acc |= out[s.index - 1]
        for p, _, _ in _rule_pairs(g, i):
            acc.add(p)
        out.append(acc)
    return out


def pairs_in_evals(g) -> set:
    """All pairs of distinct adjacent letters in any eval(X_i)."""
    out = set()
    for i in range(1, g.n + 1):
        for p, _, _ in _rule_pairs(g, i):
            out.add(p)
    return out


def pairs_in_eval(g, i: int) -> set:
    return pairs_per_nonterminal(g)[i - 1] if g.n else set()


def _automaton_junctions(a: Automaton, g):
    """Pairs straddling a state where a nonterminal transition is involved."""
    for q in sorted(a.states):
        ins, outs = a.incoming(q), a.outgoing(q)
        if not ins or not outs:
            continue
        for t1 in ins:
            for t2 in outs:
                if not (isinstance(t1.label, NT) or isinstance(t2.label, NT)):
                    continue
                x, y = label_last(t1.label, g), label_first(t2.label, g)
                if x is None or y is None or x is y:
                    continue
                yield (x, y), (t1.src, q, t2.dst)


def classify_pairs(inst) -> list:
    """Classify every pair in pairs_in_evals as crossing or non-crossing."""
    g, a = inst.grammar, inst.automaton
    table: dict = {}
    for i in range(1, g.n + 1):
        for p, k, crossing in _rule_pairs(g, i):
            pc = table.setdefault(p, PairClass(p))
            if crossing:
                pc.crossing = True
                pc.witnesses.append(("rule", i, k))
            else:
                pc.witnesses.append(("explicit", i, k))
    for p, where in _automaton_junctions(a, g):
        pc = table.get(p)
        if pc is not None:
            pc.crossing = True
            pc.witnesses.append(("automaton",) + where)
    return [table[p] for p in sorted(table, key=lambda p: (p[0].sort_key, p[1].sort_key))]


def is_crossing(inst, x: Letter, y: Letter) -> bool:
    g, a = inst.grammar, inst.automaton
    for i in range(1, g.n + 1):
        for p, _, crossing in _rule_pairs(g, i):
            if crossing and p == (x, y):
                return True
    return any(p == (x, y) for p, _ in _automaton_junctions(a, g))


def nonextendible_lengths(g, a: Letter) -> set:
    """Lengths of maximal a-runs (letters and powers summed) in the rules.

    Only meaningful for an inner letter: then no run can continue into a
    neighbouring nonterminal.
    """
    if not is_inner(g, a):
        raise PreconditionError(f"{a} is an outer letter")
    out = set()
    for rhs in g.rules:
        run = 0
        for s in rhs:
            if not isinstance(s, NT) and symbol_first(s) is a:
                run += s.exponent if isinstance(s, Power) else 1
            else:
                if run:
                    out.add(run)
                run = 0
        if run:
            out.add(run)
    return out
