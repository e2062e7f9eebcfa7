"""Seeded random instances and hand-constructed families."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .letters import NT, Power, letter
from .normalize import InvariantError, RawAutomaton, normalize_input
from .passes import Instance, Trace

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    n: int = 6
    alphabet_size: int = 3
    state_count: int = 4
    max_rhs_len: int = 3
    target_eval_len_log2: int = 12
    deterministic: bool = False
    plant: Optional[bool] = None  # None: decided by the seed
    nonterminal_edges: int = 2
    max_power: int = 64

    def __post_init__(self):
        if self.n < 4:
            raise ValueError("n must be at least 4")
        if not 1 <= self.alphabet_size <= len(ALPHABET):
            raise ValueError("alphabet_size out of range")
        if self.state_count < 1 or self.max_rhs_len < 1:
            raise ValueError("state_count and max_rhs_len must be positive")


def _length(rhs, lens):
    return sum(lens[s.index - 1] if isinstance(s, NT) else s.exponent if isinstance(s, Power) else 1
               for s in rhs)


def _raw_grammar(rng, p: GenParams, limit):
    letters = [letter(c) for c in ALPHABET[:p.alphabet_size]]
    m = p.n - 1
    rules, lens = [], []

    def explicit():
        k = rng.randint(0, p.max_rhs_len)
        if rng.random() < 0.15:
            # a long run, stored as a power and expanded during normalization
            return [Power(rng.choice(letters), rng.randint(2, max(2, min(p.max_power, limit // 4))))]
        if rng.random() < 0.3 and k:
            return [rng.choice(letters)] * k
        return [rng.choice(letters) for _ in range(k)]

    for i in range(1, m + 1):
        rhs = None
        if i > 1:
            shape = rng.choice((2, 2, 2, 1, 0)) if i < m else rng.choice((2, 2, 1))
            for _ in range(8):
                # lean on the most recent (longest) nonterminals so lengths grow
                kids = [i - 1 if rng.random() < 0.5 else rng.randint(max(1, i - 3), i - 1)
                        for _ in range(shape)]
                u, v = explicit(), explicit()
                cand = u + [NT(kids[0])] + v + [NT(kids[1])] if shape == 2 else \
                    (u + [NT(kids[0])] + v if shape == 1 else u)
                total = _length(cand, lens)
                if 0 < total <= limit:
                    rhs = cand
                    break
        if rhs is None:
            rhs = explicit() or [rng.choice(letters)]
        rules.append(rhs)
        lens.append(_length(rhs, lens))
    return rules, lens, letters


def _expand(rules, i, memo):
    if i not in memo:
        out = []
        for s in rules[i - 1]:
            if isinstance(s, NT):
                out.extend(_expand(rules, s.index, memo))
            else:
                out.extend([s.base] * s.exponent if isinstance(s, Power) else [s])
        memo[i] = out
    return memo[i]


def gen_instance(p: GenParams, trace: Trace = None) -> Instance:
    """Random normalized instance; same params give the same instance.

    Lengths are capped at 2^target_eval_len_log2.  The normalized grammar
    has more nonterminals than ``p.n``, so the 2^n length bound usually
    allows this; when it does not, the cap is halved and we try again.
    """
    for log2 in range(p.target_eval_len_log2, 0, -1):
        try:
            return _gen(p, (1 << log2) - 2, trace)  # room for $ and #
        except InvariantError as e:
            if any(v.code != "length-bound" for v in e.violations):
                raise
    raise AssertionError("unreachable: a length-2 string always fits")


def _gen(p: GenParams, limit, trace):
    rng = random.Random(p.seed)
    rules, lens, letters = _raw_grammar(rng, p, limit)
    m = len(rules)
    memo = {}
    states = list(range(p.state_count))
    edges = set()
    firsts = {}  # state -> set of first letters (deterministic mode)

    def can_add(src, first):
        return not p.deterministic or first not in firsts.setdefault(src, set())

    def add(src, lab, dst, first):
        if can_add(src, first):
            edges.add((src, lab, dst))
            firsts.setdefault(src, set()).add(first)

    for _ in range(rng.randint(p.state_count, 2 * p.state_count * p.alphabet_size // 2 + 1)):
        x = rng.choice(letters)
        add(rng.choice(states), x, rng.choice(states), x)
    for _ in range(p.nonterminal_edges):
        j = rng.randint(1, m)
        add(rng.choice(states), NT(j), rng.choice(states), _expand(rules, j, memo)[0])
    if p.deterministic:
        accepts = {rng.choice(states)}
    else:
        accepts = set(rng.sample(states, rng.randint(1, min(2, len(states)))))

    plant = p.plant if p.plant is not None else rng.random() < 0.5
    if plant:
        w = _expand(rules, m, memo)
        current = {0}
        for x in w:
            nxt = {d for s, lab, d in edges if s in current and lab is x}
            if not nxt:
                src = rng.choice(sorted(current))
                dst = rng.choice(states)
                if p.deterministic:
                    # a nonterminal edge starting with x would clash; drop it
                    for e in [e for e in edges if e[0] == src and isinstance(e[1], NT)
                              and _expand(rules, e[1].index, memo)[0] is x]:
                        edges.discard(e)
                        firsts[src].discard(x)
                add(src, x, dst, x)
                nxt = {dst}
            current = nxt
        if not current & accepts:
            pick = rng.choice(sorted(current))
            accepts = {pick} if p.deterministic else accepts | {pick}
    raw = RawAutomaton(set(states), sorted(edges, key=lambda e: (e[0], str(e[1]), e[2])), 0, accepts)
    return normalize_input(rules, raw, trace)


def ab_power_instance(log2_reps: int, pattern: str = "ab", trace: Trace = None) -> Instance:
    """eval(X_n) = $ (ab)^(2^log2_reps) #, against the two-state DFA for (pattern)*."""
    a, b = letter("a"), letter("b")
    rules = [[a, b]] + [[NT(i), NT(i)] for i in range(1, log2_reps + 1)]
    x, y = letter(pattern[0]), letter(pattern[1])
    raw = RawAutomaton({0, 1}, [(0, x, 1), (1, y, 0)], 0, {0})
    return normalize_input(rules, raw, trace)
