"""Small builders and string-level reference implementations for the tests."""

import random
from collections import defaultdict

from slpmember.automaton import Automaton
from slpmember.letters import Letter, Power, block, pair
from slpmember.passes import Instance, Trace
from slpmember.slp import Grammar
from slpmember.textfmt import parse_symbol


def rhs(text):
    return [parse_symbol(tok) for tok in text.split()]


def G(*rules, succinct_for=None, check=True):
    """G("a b", "X1 X1") -> grammar with X1 -> a b, X2 -> X1 X1."""
    return Grammar([rhs(r) for r in rules], succinct_for=succinct_for, check=check)


def A(trans, start, accept, states=None, relaxed_for=None):
    """trans: list of (src, token, dst) with tokens as in the text format."""
    ts = [(p, parse_symbol(t) if isinstance(t, str) else t, q) for p, t, q in trans]
    if states is None:
        states = {start, accept} | {p for p, _, _ in ts} | {q for _, _, q in ts}
    return Automaton(states, ts, start, accept, relaxed_for)


def inst(g, a):
    return Instance(g, a, g, Trace())


def word(g, i):
    return g.decompress(i, 1 << 22)


def names(w):
    return " ".join(str(x) for x in w)


# -- string-level operations --------------------------------------------------

def pc(w, a, b):
    c = pair(a, b)
    out, k = [], 0
    while k < len(w):
        if w[k] is a and k + 1 < len(w) and w[k + 1] is b:
            out.append(c)
            k += 2
        else:
            out.append(w[k])
            k += 1
    return out


def runs(w):
    """Maximal runs as (letter, length)."""
    out = []
    for x in w:
        if out and out[-1][0] is x:
            out[-1][1] += 1
        else:
            out.append([x, 1])
    return [(x, l) for x, l in out]


def ac(w, a):
    out = []
    for x, l in runs(w):
        out.extend([block(a, l)] if x is a else [x] * l)
    return out


def strip(w, a):
    i, j = 0, len(w)
    while i < j and w[i] is a:
        i += 1
    while j > i and w[j - 1] is a:
        j -= 1
    return w[i:j]


def adjacent_pairs(w):
    return {(x, y) for x, y in zip(w, w[1:]) if x is not y}


def run_lengths(w, a):
    """Lengths of runs of a with a non-a letter on both sides."""
    rs = runs(w)
    return {l for k, (x, l) in enumerate(rs) if x is a and 0 < k < len(rs) - 1}


# -- unary reference ----------------------------------------------------------

def bfs_weights(edges, p, max_len):
    """All (state, weight) pairs reachable from p with weight <= max_len."""
    out = defaultdict(list)
    for u, w, v in edges:
        out[u].append((w, v))
    seen = {(p, 0)}
    frontier = [(p, 0)]
    while frontier:
        nxt = []
        for u, t in frontier:
            for w, v in out[u]:
                s = (v, t + w)
                if t + w <= max_len and s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return seen


def random_unary_graph(rng: random.Random, max_states=8, max_weight=50, deterministic=False):
    k = rng.randint(1, max_states)
    states = list(range(k))
    edges = set()
    if deterministic:
        for u in states:
            if rng.random() < 0.85:
                edges.add((u, rng.randint(1, max_weight), rng.choice(states)))
    else:
        for _ in range(rng.randint(0, 2 * k)):
            edges.add((rng.choice(states), rng.randint(1, max_weight), rng.choice(states)))
    return states, edges


def reach_masks(edges, p, max_len):
    """Worklist fixpoint over per-state weight bitmasks: bit t of masks[q]
    is set iff a walk p -> q of weight exactly t <= max_len exists."""
    out = defaultdict(list)
    for u, w, v in edges:
        out[u].append((w, v))
    full = (1 << (max_len + 1)) - 1
    masks = defaultdict(int)
    masks[p] = 1
    todo = [p]
    while todo:
        u = todo.pop()
        for w, v in out[u]:
            grown = masks[v] | ((masks[u] << w) & full)
            if grown != masks[v]:
                masks[v] = grown
                todo.append(v)
    return masks
