"""Exact-length reachability in graphs whose edges read powers of one letter.

The question "is there a walk p -> q reading exactly a^l" is NP-hard for
NFAs, so no polynomial method is expected.  Three exact strategies are
offered:

* ``walk``: when every state has at most one outgoing edge the walk from p
  is unique; it becomes periodic within ``|states|`` steps and the answer
  is arithmetic on the prefix and cycle weights.
* ``dense-dp``: a table over (partial weight, state) up to l.
* ``cycle-search``: a walk decomposes into a simple path plus simple
  cycles connected to it, and conversely any such connected multiset is
  traversable by an Euler-trail argument.  For each simple path and each
  connected set of cycles it remains to decide whether the leftover weight
  is a nonnegative combination of the cycle weights.
"""

from __future__ import annotations

import heapq
import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import networkx as nx

from .letters import Letter, Power

AUTO = "auto"
DENSE = "dense-dp"
CYCLES = "cycle-search"
WALK = "walk"
STRATEGIES = (AUTO, DENSE, CYCLES, WALK)

DEFAULT_DP_THRESHOLD = 1 << 20
# residue tables larger than this fall back to bounded enumeration
_RESIDUE_LIMIT = 1 << 18


@dataclass(frozen=True)
class UnaryGraph:
    states: frozenset
    edges: frozenset  # (src, weight, dst)
    _out: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        out = defaultdict(list)
        for u, w, v in sorted(self.edges):
            if w < 1:
                raise ValueError("edge weights must be positive")
            out[u].append((w, v))
        object.__setattr__(self, "_out", dict(out))

    def out(self, u):
        return self._out.get(u, ())

    @property
    def deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self._out.values())

    def sources(self):
        return sorted(self._out)


def restrict_to_letter(a, x: Letter) -> UnaryGraph:
    """Keep only transitions labelled ``x`` (weight 1) or ``x^k`` (weight k)."""
    edges = set()
    for t in a.transitions:
        if t.label is x:
            edges.add((t.src, 1, t.dst))
        elif isinstance(t.label, Power) and t.label.base is x:
            edges.add((t.src, t.label.exponent, t.dst))
    return UnaryGraph(frozenset(a.states), frozenset(edges))


# -- strategies ---------------------------------------------------------------

def walk_targets(ug: UnaryGraph, p, length: int) -> set:
    """Deterministic graphs only: where the unique walk from p sits after weight ``length``."""
    seen = {}
    order = []
    node, total = p, 0
    while node not in seen:
        seen[node] = len(order)
        order.append((node, total))
        nxt = ug.out(node)
        if not nxt:
            break
        w, node = nxt[0]
        total += w
    else:
        # closed a cycle back at node
        j = seen[node]
        cycle = total - order[j][1]
        out = set()
        for k, (s, wk) in enumerate(order):
            if k < j:
                if wk == length:
                    out.add(s)
            elif length >= wk and (length - wk) % cycle == 0:
                out.add(s)
        return out
    return {s for s, wk in order if wk == length}


def dense_table(ug: UnaryGraph, p, max_len: int) -> list:
    """``table[t]`` is the bitmask of states reachable from p with weight exactly t."""
    index = {s: k for k, s in enumerate(sorted(ug.states))}
    by_weight = defaultdict(list)
    for u, w, v in ug.edges:
        by_weight[w].append((1 << index[u], 1 << index[v]))
    groups = sorted(by_weight.items())
    table = [0] * (max_len + 1)
    table[0] = 1 << index[p]
    for t in range(1, max_len + 1):
        acc = 0
        for w, pairs in groups:
            if w > t:
                break
            prev = table[t - w]
            if prev:
                for ub, vb in pairs:
                    if prev & ub:
                        acc |= vb
        table[t] = acc
    return table


def _decode(ug, mask) -> set:
    states = sorted(ug.states)
    return {states[k] for k in range(len(states)) if mask >> k & 1}


@lru_cache(maxsize=4096)
def _residue_table(weights: tuple) -> list:
    # shortest representable total in each residue class mod the smallest weight
    m = weights[0]
    dist = [None] * m
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, r = heapq.heappop(heap)
        if d != dist[r]:
            continue
        for w in weights[1:]:
            r2, d2 = (r + w) % m, d + w
            if dist[r2] is None or d2 < dist[r2]:
                dist[r2] = d2
                heapq.heappush(heap, (d2, r2))
    return dist


def representable(total: int, weights) -> bool:
    """Is ``total`` a nonnegative integer combination of ``weights``?"""
    if total == 0:
        return True
    ws = sorted(set(weights))
    if not ws or total < 0:
        return False
    g = math.gcd(*ws)
    if total % g:
        return False
    ws = [w // g for w in ws]
    total //= g
    if ws[0] == 1:
        return True
    if ws[0] <= _RESIDUE_LIMIT:
        best = _residue_table(tuple(ws))[total % ws[0]]
        return best is not None and best <= total
    return _bounded_search(total, ws[0], ws[1:])


def _bounded_search(total, smallest, others) -> bool:
    # any solution can be rewritten so each other weight w is used fewer
    # than smallest/gcd(smallest, w) times
    if not others:
        return total % smallest == 0
    w, rest = others[-1], others[:-1]
    limit = min(total // w, smallest // math.gcd(smallest, w) - 1)
    sub_g = math.gcd(smallest, *rest) if rest else smallest
    for c in range(limit, -1, -1):
        r = total - c * w
        if r % sub_g == 0 and _bounded_search(r, smallest, rest):
            return True
    return False


class _CycleIndex:
    """Simple cycles and paths of a unary graph, with parallel edges expanded."""

    def __init__(self, ug: UnaryGraph):
        self.ug = ug
        self.digraph = nx.DiGraph()
        self.digraph.add_nodes_from(ug.states)
        self.weights = defaultdict(set)
        for u, w, v in ug.edges:
            self.digraph.add_edge(u, v)
            self.weights[(u, v)].add(w)
        cycles = []
        for nodes in nx.simple_cycles(self.digraph):
            hops = [(nodes[k], nodes[(k + 1) % len(nodes)]) for k in range(len(nodes))]
            for choice in product(*(sorted(self.weights[h]) for h in hops)):
                cycles.append((frozenset(nodes), sum(choice)))
        self.cycles = sorted(set(cycles), key=lambda c: (c[1], sorted(c[0])))

    def paths(self, p, q):
        if p == q:
            yield frozenset([p]), 0
        else:
            for nodes in nx.all_simple_paths(self.digraph, p, q):
                hops = list(zip(nodes, nodes[1:]))
                for choice in set(map(sum, product(*(sorted(self.weights[h]) for h in hops)))):
                    yield frozenset(nodes), choice

    def exists(self, p, q, length: int) -> bool:
        for verts, base in self.paths(p, q):
            if base > length:
                continue
            if base == length and base > 0:
                return True
            if self._extend(verts, length - base):
                return True
        return False

    def _extend(self, verts, budget) -> bool:
        # grow connected cycle sets; each chosen cycle is taken at least once
        cycles = [c for c in self.cycles if c[1] <= budget]
        seen = set()
        stack = [(frozenset(), verts, budget)]
        while stack:
            chosen, reach, left = stack.pop()
            if chosen and representable(left, [cycles[k][1] for k in chosen]):
                return True
            for k, (cv, w) in enumerate(cycles):
                if k in chosen or w > left or not (cv & reach):
                    continue
                nxt = chosen | {k}
                if nxt in seen:
                    continue
                seen.add(nxt)
                stack.append((nxt, reach | cv, left - w))
        return False


_index_cache: dict = {}


def _cycle_index(ug):
    got = _index_cache.get(ug)
    if got is None:
        if len(_index_cache) > 256:
            _index_cache.clear()
        got = _index_cache[ug] = _CycleIndex(ug)
    return got


def a_path_exists(ug: UnaryGraph, p, q, length: int, strategy: str = AUTO,
                  threshold: int = DEFAULT_DP_THRESHOLD) -> bool:
    """Exact: is there a walk p -> q whose weights sum to ``length``?"""
    if length < 1:
        raise ValueError("length must be positive")
    if strategy == AUTO:
        strategy = choose_strategy(ug, length, threshold)
    if strategy == WALK:
        if not ug.deterministic:
            raise ValueError("walk strategy needs at most one edge per state")
        return q in walk_targets(ug, p, length)
    if strategy == DENSE:
        return q in _decode(ug, dense_table(ug, p, length)[length])
    if strategy == CYCLES:
        if p not in ug.states or q not in ug.states:
            return False
        return _cycle_index(ug).exists(p, q, length)
    raise ValueError(f"unknown strategy {strategy!r}")


def choose_strategy(ug, length, threshold=DEFAULT_DP_THRESHOLD) -> str:
    if ug.deterministic:
        return WALK
    return DENSE if length <= threshold else CYCLES


class UnaryOracle:
    """Batched queries against one unary graph, counting calls per strategy."""

    def __init__(self, ug: UnaryGraph, strategy: str = AUTO, threshold: int = DEFAULT_DP_THRESHOLD):
        self.ug = ug
        self.strategy = strategy
        self.threshold = threshold
        self.calls = defaultdict(int)

    def targets(self, p, lengths) -> dict:
        """Map each length to the set of states reachable from p with that exact weight."""
        out = {}
        lengths = sorted(set(lengths))
        ug = self.ug
        if not ug.out(p):
            return {l: set() for l in lengths}
        picks = {l: (self.strategy if self.strategy != AUTO else choose_strategy(ug, l, self.threshold))
                 for l in lengths}
        dense = [l for l in lengths if picks[l] == DENSE]
        if dense:
            table = dense_table(ug, p, max(dense))
            for l in dense:
                out[l] = _decode(ug, table[l])
                self.calls[DENSE] += 1
        for l in lengths:
            if picks[l] == WALK:
                out[l] = walk_targets(ug, p, l)
                self.calls[WALK] += 1
            elif picks[l] == CYCLES:
                index = _cycle_index(ug)
                ends = {v for _, _, v in ug.edges}
                out[l] = {q for q in sorted(ends) if index.exists(p, q, l)}
                self.calls[CYCLES] += 1
        return out
