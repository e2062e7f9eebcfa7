"""Joint grammar/automaton rewrites that shorten eval(X_n).

Each pass takes an :class:`Instance` and returns a new one accepting
exactly when the old one did.  The string-level effect on every
nonterminal is one of

* pair compression: every ``ab`` (``a != b``) becomes the letter ``<a,b>``;
* block compression: every maximal run ``a^l`` becomes the letter ``<a:l>``;
* ``make_inner``: the a-prefix and a-suffix of each eval(X_i) move out to
  the parent rules and to the automaton;
* ``pop_first_letters``: the first letter of each eval(X_i), i < n, moves out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

from .analysis import PreconditionError, is_crossing, is_inner, pairs_in_eval
from .automaton import Automaton, Transition
from .letters import NT, Letter, Power, block, pair, power, symbol_first
from .slp import Grammar
from .unary import AUTO, DEFAULT_DP_THRESHOLD, UnaryOracle, restrict_to_letter


@dataclass
class Trace:
    """Ordered log of pass applications.

    ``sink`` (if set) receives every event as it is recorded, which is how
    the CLI streams JSON lines.
    """

    events: list = field(default_factory=list)
    sink: Optional[Callable] = None
    keep: bool = True

    def record(self, event: dict):
        if self.keep:
            self.events.append(event)
        if self.sink is not None:
            self.sink(event)

    def dumps(self) -> str:
        return "\n".join(json.dumps(e, default=str) for e in self.events)


@dataclass(frozen=True)
class Instance:
    grammar: Grammar
    automaton: Automaton
    original: Grammar
    trace: Trace = field(default_factory=Trace, compare=False)

    @property
    def n(self) -> int:
        return self.grammar.n

    def evolve(self, grammar=None, automaton=None) -> "Instance":
        return Instance(grammar or self.grammar, automaton or self.automaton, self.original, self.trace)

    def alphabet(self) -> set:
        return self.grammar.letters() | self.automaton.letters()


def _event(inst, before, name, **params):
    ev = {"pass": name, "len_before": before.grammar.eval_len(before.n),
          "len_after": inst.grammar.eval_len(inst.n)}
    ev.update(params)
    inst.trace.record(ev)
    return ev


def _labels(letters):
    return [str(x) for x in letters]


# -- pair compression ---------------------------------------------------------

def replace_pair(rhs, a, b, c):
    """Greedy left-to-right replacement of adjacent letters ``a b`` by ``c``."""
    out = []
    count = 0
    k = 0
    while k < len(rhs):
        s = rhs[k]
        if s is a and k + 1 < len(rhs) and rhs[k + 1] is b:
            out.append(c)
            count += 1
            k += 2
        else:
            out.append(s)
            k += 1
    return out, count


def compress_pair_noncrossing(inst: Instance, a: Letter, b: Letter, check: bool = True) -> Instance:
    """Replace the non-crossing pair ``ab`` by the letter ``<a,b>``."""
    g, aut = inst.grammar, inst.automaton
    if a is b:
        raise PreconditionError("pair compression needs two different letters")
    if a.is_marker or b.is_marker:
        raise PreconditionError("markers are never compressed")
    if g.succinct_for is not None or aut.relaxed_for is not None:
        raise PreconditionError("pair compression on a succinct/relaxed instance")
    if check and is_crossing(inst, a, b):
        raise PreconditionError(f"pair ({a},{b}) is crossing")
    c = pair(a, b)
    rules = []
    total = 0
    for rhs in g.rules:
        new, k = replace_pair(rhs, a, b, c)
        rules.append(new)
        total += k
    added = set()
    for t1 in aut.transitions:
        if t1.label is a:
            for t2 in aut.outgoing(t1.dst):
                if t2.label is b:
                    added.add(Transition(t1.src, c, t2.dst))
    added -= aut.transitions
    out = inst.evolve(g.replace(rules), aut.edit(add=added))
    _event(out, inst, "pair", pair=[str(a), str(b)], letter=str(c), replacements=total,
           shrink=total, transitions_added=len(added))
    return out


# -- block compression --------------------------------------------------------

def _runs(rhs, a):
    """Split a rule into maximal a-runs; yields (is_run, symbols, run_length)."""
    k = 0
    while k < len(rhs):
        s = rhs[k]
        if not isinstance(s, NT) and symbol_first(s) is a:
            j, total = k, 0
            while j < len(rhs) and not isinstance(rhs[j], NT) and symbol_first(rhs[j]) is a:
                total += rhs[j].exponent if isinstance(rhs[j], Power) else 1
                j += 1
            yield True, rhs[k:j], total
            k = j
        else:
            yield False, (s,), 0
            k += 1


def compress_blocks_inner(inst: Instance, a: Letter, strategy: str = AUTO,
                          threshold: int = DEFAULT_DP_THRESHOLD) -> Instance:
    """Replace every maximal run of the inner letter ``a`` by a block letter.

    Works on a-succinct grammars and a-relaxed automata.  Afterwards no
    transition reads ``a`` or a power of it, and both flags are cleared.
    """
    g, aut = inst.grammar, inst.automaton
    if a.is_marker:
        raise PreconditionError("markers are never compressed")
    for flag in (g.succinct_for, aut.relaxed_for):
        if flag is not None and flag is not a:
            raise PreconditionError(f"instance is succinct/relaxed for {flag}, not {a}")
    if not is_inner(g, a):
        raise PreconditionError(f"{a} is an outer letter")
    rules, lengths = [], set()
    replaced = shrink = 0
    for rhs in g.rules:
        new = []
        for is_run, syms, total in _runs(rhs, a):
            if is_run:
                new.append(block(a, total))
                lengths.add(total)
                replaced += 1
                shrink += total - 1
            else:
                new.extend(syms)
        rules.append(new)

    ug = restrict_to_letter(aut, a)
    oracle = UnaryOracle(ug, strategy, threshold)
    added = set()
    if lengths:
        for p in ug.sources():
            for length, targets in oracle.targets(p, lengths).items():
                for q in targets:
                    added.add(Transition(p, block(a, length), q))
    dropped = [t for t in aut.transitions
               if t.label is a or (isinstance(t.label, Power) and t.label.base is a)]
    new_aut = aut.edit(add=added, remove=dropped, relaxed_for=None)
    out = inst.evolve(g.replace(rules, succinct_for=None), new_aut)
    _event(out, inst, "blocks", letter=str(a), lengths=sorted(lengths),
           letters_created=_labels(block(a, l) for l in sorted(lengths)),
           replacements=replaced, shrink=shrink, transitions_added=len(added),
           transitions_removed=len(dropped), oracle_calls=dict(oracle.calls))
    return out


# -- outer letters ------------------------------------------------------------

def make_inner(inst: Instance, a: Letter) -> Instance:
    """Strip the a-prefix and a-suffix from every nonterminal.

    Bottom-up, each ``X_j`` in a rule becomes ``a^l_j X_j a^r_j`` (the
    nonterminal itself dropped if nothing else is left of it), then the
    rule's own leading and trailing a-runs are cut off and remembered.  A
    transition ``p -X_i-> q`` becomes ``p -a^l_i-> p1 -X_i-> q1 -a^r_i-> q``
    with zero-exponent hops elided.  The result is a-succinct and
    a-relaxed.
    """
    g, aut = inst.grammar, inst.automaton
    if a.is_marker:
        raise PreconditionError("markers are never compressed")
    if g.succinct_for is not None or aut.relaxed_for is not None:
        raise PreconditionError("instance already succinct/relaxed")
    n = g.n
    pre, suf, empty = [0] * (n + 1), [0] * (n + 1), [False] * (n + 1)
    rules = []
    for i in range(1, n + 1):
        rhs = []
        for s in g.rules[i - 1]:
            if isinstance(s, NT):
                j = s.index
                rhs.extend(power(a, pre[j]))
                if not empty[j]:
                    rhs.append(s)
                rhs.extend(power(a, suf[j]))
            else:
                rhs.append(s)
        k = 0
        while k < len(rhs) and not isinstance(rhs[k], NT) and symbol_first(rhs[k]) is a:
            pre[i] += rhs[k].exponent if isinstance(rhs[k], Power) else 1
            k += 1
        rhs = rhs[k:]
        k = len(rhs)
        while k > 0 and not isinstance(rhs[k - 1], NT) and symbol_first(rhs[k - 1]) is a:
            suf[i] += rhs[k - 1].exponent if isinstance(rhs[k - 1], Power) else 1
            k -= 1
        rhs = rhs[:k]
        empty[i] = not rhs
        rules.append(rhs)

    add, remove, fresh = [], [], []
    nxt = aut.fresh_state()
    for i in range(1, n + 1):
        for t in aut.nt_transitions(i):
            if pre[i] == 0 and suf[i] == 0:
                continue
            remove.append(t)
            if empty[i]:
                add.extend(Transition(t.src, lab, t.dst) for lab in power(a, pre[i] + suf[i]))
                continue
            p1, q1 = t.src, t.dst
            if pre[i]:
                p1, nxt = nxt, nxt + 1
                fresh.append(p1)
                add.append(Transition(t.src, power(a, pre[i])[0], p1))
            if suf[i]:
                q1, nxt = nxt, nxt + 1
                fresh.append(q1)
                add.append(Transition(q1, power(a, suf[i])[0], t.dst))
            add.append(Transition(p1, t.label, q1))
    out = inst.evolve(Grammar(rules, succinct_for=a),
                      aut.edit(add=add, remove=remove, new_states=fresh, relaxed_for=a))
    _event(out, inst, "make_inner", letter=str(a),
           prefixes={f"X{i}": pre[i] for i in range(1, n + 1) if pre[i]},
           suffixes={f"X{i}": suf[i] for i in range(1, n + 1) if suf[i]},
           states_created=fresh, transitions_added=len(add), transitions_removed=len(remove))
    return out


def pop_first_letters(inst: Instance) -> Instance:
    """Move the first letter of every eval(X_i), i < n, out of X_i.

    X_n keeps its first letter ($), so eval(X_n) is unchanged.
    """
    g, aut = inst.grammar, inst.automaton
    if g.succinct_for is not None or aut.relaxed_for is not None:
        raise PreconditionError("popping needs a non-succinct, non-relaxed instance")
    n = g.n
    first, empty, was_empty = [None] * (n + 1), [False] * (n + 1), [False] * (n + 1)
    rules = []
    for i in range(1, n + 1):
        was_empty[i] = g.is_empty(i)
        rhs = []
        for s in g.rules[i - 1]:
            if isinstance(s, NT):
                rhs.append(first[s.index])
                if not empty[s.index]:
                    rhs.append(s)
            else:
                rhs.append(s)
        if i < n and rhs:
            first[i] = rhs[0]
            rhs = rhs[1:]
        empty[i] = not rhs
        rules.append(rhs)

    add, remove, fresh = [], [], []
    nxt = aut.fresh_state()
    for i in range(1, n):
        if was_empty[i]:
            continue
        for t in aut.nt_transitions(i):
            remove.append(t)
            if empty[i]:
                add.append(Transition(t.src, first[i], t.dst))
            else:
                p1, nxt = nxt, nxt + 1
                fresh.append(p1)
                add.append(Transition(t.src, first[i], p1))
                add.append(Transition(p1, t.label, t.dst))
    out = inst.evolve(g.replace(rules),
                      aut.edit(add=add, remove=remove, new_states=fresh))
    _event(out, inst, "pop", states_created=fresh, transitions_added=len(add),
           transitions_removed=len(remove))
    return out


def compress_crossing_pairs(inst: Instance, blocks) -> Instance:
    """Pop first letters, then compress every ``<a:l> b`` occurring in eval(X_n)."""
    blocks = set(blocks)
    inst = pop_first_letters(inst)
    g = inst.grammar
    todo = sorted(((x, y) for x, y in pairs_in_eval(g, g.n)
                   if x in blocks and not y.is_marker),
                  key=lambda p: (p[0].sort_key, p[1].sort_key))
    for x, y in todo:
        if is_crossing(inst, x, y):
            raise AssertionError(f"pair ({x},{y}) is still crossing after popping")
        inst = compress_pair_noncrossing(inst, x, y, check=False)
    return inst
