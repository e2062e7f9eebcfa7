"""NFAs whose transitions carry letters, succinct powers or nonterminals."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, NamedTuple, Optional

from .letters import DOLLAR_LETTER, HASH_LETTER, NT, Letter, Power
from .slp import Grammar, Violation


class Transition(NamedTuple):
    src: int
    label: object  # Letter | Power | NT
    dst: int


def label_key(label):
    """Total order on labels, stable across processes."""
    if isinstance(label, NT):
        return (2, label.index, ())
    if isinstance(label, Power):
        return (1, label.base.sort_key, label.exponent)
    return (0, label.sort_key, 0)


def transition_key(t: Transition):
    return (t.src, label_key(t.label), t.dst)


class Automaton:
    """Single-start, single-accept automaton.

    States are plain ints.  ``relaxed_for`` is the letter whose powers may
    label transitions (the a-relaxed variant).  Instances are immutable;
    :meth:`edit` returns a modified copy.
    """

    def __init__(self, states: Iterable[int], transitions: Iterable, start: int, accept: int,
                 relaxed_for: Optional[Letter] = None):
        self.states = frozenset(states)
        self.transitions = frozenset(Transition(*t) for t in transitions)
        self.start = start
        self.accept = accept
        self.relaxed_for = relaxed_for
        self._out = None
        self._in = None
        self._by_nt = None

    def _index(self):
        if self._out is not None:
            return
        out, inc, by_nt = defaultdict(list), defaultdict(list), defaultdict(list)
        for t in sorted(self.transitions, key=transition_key):
            out[t.src].append(t)
            inc[t.dst].append(t)
            if isinstance(t.label, NT):
                by_nt[t.label.index].append(t)
        self._out, self._in, self._by_nt = out, inc, by_nt

    def outgoing(self, p: int) -> list:
        self._index()
        return self._out.get(p, [])

    def incoming(self, q: int) -> list:
        self._index()
        return self._in.get(q, [])

    def nt_transition(self, i: int) -> Optional[Transition]:
        """The transition labelled ``X_i``, if any (unique by Aut 1)."""
        self._index()
        found = self._by_nt.get(i)
        return found[0] if found else None

    def nt_transitions(self, i: int) -> list:
        self._index()
        return list(self._by_nt.get(i, []))

    def letters(self) -> set:
        out = set()
        for t in self.transitions:
            if isinstance(t.label, Letter):
                out.add(t.label)
            elif isinstance(t.label, Power):
                out.add(t.label.base)
        return out

    def fresh_state(self, taken=()) -> int:
        return max(max(self.states, default=-1), max(taken, default=-1)) + 1

    def edit(self, add=(), remove=(), new_states=(), relaxed_for=...) -> "Automaton":
        drop = set(remove)
        trans = [t for t in self.transitions if t not in drop]
        trans.extend(add)
        return Automaton(self.states | set(new_states), trans, self.start, self.accept,
                         self.relaxed_for if relaxed_for is ... else relaxed_for)

    @property
    def size(self) -> int:
        return len(self.states) + len(self.transitions)

    def __eq__(self, other):
        return (isinstance(other, Automaton) and self.states == other.states
                and self.transitions == other.transitions and self.start == other.start
                and self.accept == other.accept and self.relaxed_for is other.relaxed_for)

    def __hash__(self):
        return hash((self.states, self.transitions, self.start, self.accept))

    def __repr__(self):
        return f"Automaton({len(self.states)} states, {len(self.transitions)} transitions)"


def check_aut_invariants(a: Automaton, g: Optional[Grammar] = None) -> list:
    """Report violations of Aut 1 and Aut 2 (respecting ``a.relaxed_for``).

    With a grammar, nonterminal labels are also checked against it: they
    must exist, must not be ``X_n`` and must not define the empty string.
    """
    out = []
    seen_nt = defaultdict(int)
    for t in sorted(a.transitions, key=transition_key):
        if t.src not in a.states or t.dst not in a.states:
            out.append(Violation("Aut-1", t, "endpoint is not a state"))
        lab = t.label
        if isinstance(lab, NT):
            seen_nt[lab.index] += 1
            if g is not None:
                if not 1 <= lab.index <= g.n:
                    out.append(Violation("Aut-1", t, f"X{lab.index} does not exist"))
                elif lab.index == g.n:
                    out.append(Violation("Aut-1", t, "transition labelled X_n"))
                elif g.is_empty(lab.index):
                    out.append(Violation("Aut-1", t, f"X{lab.index} defines the empty string"))
        elif isinstance(lab, Power):
            if a.relaxed_for is None or lab.base is not a.relaxed_for:
                out.append(Violation("Aut-1", t, f"power label {lab} on a non-relaxed automaton"))
            elif g is not None and lab.exponent > (1 << g.n):
                out.append(Violation("Aut-1", t, "power exponent above 2^n"))
            if lab.exponent < 2:
                out.append(Violation("Aut-1", t, "power exponent below 2"))
        elif not isinstance(lab, Letter):
            out.append(Violation("Aut-1", t, f"bad label {lab!r}"))
    for i, k in sorted(seen_nt.items()):
        if k > 1:
            out.append(Violation("Aut-1", f"X{i}", f"labels {k} transitions"))

    s, f = a.start, a.accept
    if s not in a.states or f not in a.states:
        out.append(Violation("Aut-2", None, "start or accept is not a state"))
    if s == f:
        out.append(Violation("Aut-2", s, "start and accept coincide"))
    s_out = a.outgoing(s)
    if len(s_out) != 1 or s_out[0].label is not DOLLAR_LETTER:
        out.append(Violation("Aut-2", s, "start needs exactly one outgoing transition, by $"))
    if a.incoming(s):
        out.append(Violation("Aut-2", s, "start has incoming transitions"))
    f_in = a.incoming(f)
    if len(f_in) != 1 or f_in[0].label is not HASH_LETTER:
        out.append(Violation("Aut-2", f, "accept needs exactly one incoming transition, by #"))
    if a.outgoing(f):
        out.append(Violation("Aut-2", f, "accept has outgoing transitions"))
    for t in a.transitions:
        if t.label is DOLLAR_LETTER and t.src != s:
            out.append(Violation("Aut-2", t, "extra $ transition"))
        if t.label is HASH_LETTER and t.dst != f:
            out.append(Violation("Aut-2", t, "extra # transition"))
    return out


def label_first(label, g: Grammar) -> Optional[Letter]:
    if isinstance(label, NT):
        return g.first(label.index)
    if isinstance(label, Power):
        return label.base
    return label


def label_last(label, g: Grammar) -> Optional[Letter]:
    if isinstance(label, NT):
        return g.last(label.index)
    if isinstance(label, Power):
        return label.base
    return label


def is_deterministic(a: Automaton, g: Grammar) -> bool:
    """No state has two outgoing transitions whose labels start with the same letter."""
    for p in a.states:
        firsts = set()
        for t in a.outgoing(p):
            x = label_first(t.label, g)
            if x in firsts:
                return False
            firsts.add(x)
    return True


def letter_path_exists(a: Automaton, p: int, w, q: int) -> bool:
    """Is there a path p -> q over letter transitions spelling ``w``?"""
    current = {p}
    for x in w:
        current = {t.dst for s in current for t in a.outgoing(s) if t.label is x}
        if not current:
            return False
    return q in current


def letter_successors(a: Automaton, p: int, x: Letter) -> list:
    return [t.dst for t in a.outgoing(p) if t.label is x]
