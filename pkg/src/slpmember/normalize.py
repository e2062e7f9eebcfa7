"""Turn a raw (grammar, automaton) pair into a well-formed Instance.

A raw grammar is any list of right-hand sides over letters and references
to earlier nonterminals; its last nonterminal generates the input string.
A raw automaton may have several accepting states and may use any
nonterminal (including the root) on any number of transitions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .automaton import Automaton, Transition, check_aut_invariants, transition_key
from .letters import DOLLAR_LETTER, HASH_LETTER, NT, Letter, Power
from .passes import Instance, Trace
from .slp import Grammar, GrammarError, check_slp_invariants

MIN_N = 4


class InvariantError(ValueError):
    def __init__(self, violations):
        super().__init__("; ".join(map(str, violations)))
        self.violations = violations


@dataclass
class RawAutomaton:
    states: set
    transitions: list  # (src, label, dst) with label a Letter or NT
    start: int
    accepts: set = field(default_factory=set)


def _raw_lengths(rules):
    lens = []
    for i, rhs in enumerate(rules, start=1):
        total = 0
        for s in rhs:
            if isinstance(s, NT):
                if not 1 <= s.index < i:
                    raise GrammarError(f"X{i} refers to X{s.index}: references must point to smaller indices")
                total += lens[s.index - 1]
            elif isinstance(s, Power):
                total += s.exponent
            elif isinstance(s, Letter):
                if s.is_marker:
                    raise GrammarError("raw grammars may not use $ or #")
                total += 1
            else:
                raise GrammarError(f"X{i}: unexpected symbol {s!r}")
        lens.append(total)
    return lens


def _reshape(rhs, emit):
    """Split ``rhs`` into rule-shaped pieces; ``emit(rule)`` returns the helper's index."""
    rhs = list(rhs)
    while True:
        nts = [k for k, s in enumerate(rhs) if isinstance(s, NT)]
        if len(nts) <= 1 or (len(nts) == 2 and nts[1] == len(rhs) - 1):
            return rhs
        cut = nts[1] + 1
        helper = emit(rhs[:cut])
        rhs = [NT(helper)] + rhs[cut:]


def _expand_powers(rhs, emit):
    """Replace ``a^k`` by references to doubling helpers (a^2, a^4, ...)."""
    out = []
    for s in rhs:
        if not isinstance(s, Power):
            out.append(s)
            continue
        k, a = s.exponent, s.base
        doubles = []
        while (2 << len(doubles)) <= k:
            prev = [a, a] if not doubles else [NT(doubles[-1]), NT(doubles[-1])]
            doubles.append(emit(prev))
        for bit in range(len(doubles), 0, -1):
            if k >> bit & 1:
                out.append(NT(doubles[bit - 1]))
        if k & 1:
            out.append(a)
    return out


def _eliminate_empty(raw: RawAutomaton, empty: set) -> RawAutomaton:
    eps = defaultdict(set)
    keep = []
    for p, lab, q in raw.transitions:
        if isinstance(lab, NT) and lab.index in empty:
            eps[p].add(q)
        else:
            keep.append((p, lab, q))
    if not eps:
        return raw
    closure = {}
    for p in raw.states:
        seen, stack = {p}, [p]
        while stack:
            for r in eps.get(stack.pop(), ()):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        closure[p] = seen
    out_of = defaultdict(list)
    for t in keep:
        out_of[t[0]].append(t)
    trans = set(keep)
    for p in raw.states:
        for r in closure[p]:
            for _, lab, q in out_of[r]:
                trans.add((p, lab, q))
    accepts = {p for p in raw.states if closure[p] & raw.accepts}
    return RawAutomaton(set(raw.states), sorted(trans, key=lambda t: transition_key(Transition(*t))),
                        raw.start, accepts)


def normalize_input(rules, raw: RawAutomaton, trace: Trace = None) -> Instance:
    """Build an instance satisfying the rule shape, SLP 1-3 and Aut 1-2.

    The root is wrapped as ``X_n -> $ X_{n-1} #``; a fresh start state reads
    ``$`` into the old start, and a single fresh accept state is entered by
    ``#`` (through a funnel state when there were several accepting states).
    Nonterminals labelling several transitions are duplicated, empty
    nonterminals are removed from rules and their transitions eliminated.
    """
    rules = [list(r) for r in rules]
    if not rules:
        raise GrammarError("grammar has no nonterminals")
    lens = _raw_lengths(rules)
    if lens[-1] == 0:
        raise GrammarError("the input string is empty")
    empty = {i for i, l in enumerate(lens, start=1) if l == 0}
    rules = [[s for s in r if not (isinstance(s, NT) and s.index in empty)] for r in rules]
    for p, lab, q in raw.transitions:
        if p not in raw.states or q not in raw.states:
            raise GrammarError(f"transition {p} -> {q} uses an unknown state")
        if isinstance(lab, NT) and not 1 <= lab.index <= len(rules):
            raise GrammarError(f"transition labelled by unknown X{lab.index}")
        if isinstance(lab, Letter) and lab.is_marker:
            raise GrammarError("raw automata may not use $ or #")
    if raw.start not in raw.states:
        raise GrammarError("start is not a state")
    raw = _eliminate_empty(raw, empty)

    # states: raw ids first (sorted), then start, funnel, accept
    ids = {s: k for k, s in enumerate(sorted(raw.states))}
    start = len(ids)
    nxt = start + 1
    trans = [(ids[p], lab, ids[q]) for p, lab, q in raw.transitions]
    accepts = sorted(ids[s] for s in raw.accepts)
    states = set(ids.values()) | {start}
    if len(accepts) == 1:
        final_source = accepts[0]
    else:
        final_source = nxt
        nxt += 1
        states.add(final_source)
        targets = set(accepts)
        trans += [(p, lab, final_source) for p, lab, q in list(trans) if q in targets]
    accept = nxt
    states.add(accept)

    # duplicate nonterminals that label several transitions
    uses = defaultdict(list)
    for k, (p, lab, q) in enumerate(trans):
        if isinstance(lab, NT):
            uses[lab.index].append(k)

    new_rules = []
    index_of = {}

    def emit(rhs):
        new_rules.append(rhs)
        return len(new_rules)

    pad = 0
    relabel = {}
    for i, rhs in enumerate(rules, start=1):
        mapped = [NT(index_of[s.index]) if isinstance(s, NT) else s for s in rhs]
        shaped = _reshape(_expand_powers(mapped, emit), emit)
        copies = uses.get(i, [])[1:]
        for k in copies:
            relabel[k] = emit(list(shaped))
        index_of[i] = emit(shaped)
    top = len(new_rules) + 1
    if top < MIN_N:
        pad = MIN_N - top

    def shift(rhs):
        return [NT(s.index + pad) if isinstance(s, NT) else s for s in rhs]

    final_rules = [[] for _ in range(pad)] + [shift(r) for r in new_rules]
    root = index_of[len(rules)] + pad
    final_rules.append([DOLLAR_LETTER, NT(root), HASH_LETTER])

    out_trans = [Transition(start, DOLLAR_LETTER, ids[raw.start])]
    for k, (p, lab, q) in enumerate(trans):
        if isinstance(lab, NT):
            lab = NT(relabel.get(k, index_of[lab.index]) + pad)
        out_trans.append(Transition(p, lab, q))
    out_trans.append(Transition(final_source, HASH_LETTER, accept))

    g = Grammar(final_rules)
    aut = Automaton(states, out_trans, start, accept)
    inst = Instance(g, aut, g, trace if trace is not None else Trace())
    problems = check_slp_invariants(g, g) + check_aut_invariants(aut, g)
    if problems:
        raise InvariantError(problems)
    return inst
