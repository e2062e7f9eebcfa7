"""Straight-line programs in the restricted rule shape used by recompression.

Every nonterminal ``X_i`` (1-based) has one right-hand side of the shape
``u X_j v X_k``, ``u X_j v`` or ``u`` with ``j, k < i``, where ``u`` and
``v`` are explicit strings of letters (and, in a-succinct form, powers of a
single letter a).  Grammars are immutable; passes build new ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .letters import DOLLAR_LETTER, HASH_LETTER, NT, Letter, Power, Symbol, symbol_first, symbol_length


class GrammarError(ValueError):
    """Malformed grammar: bad reference, cycle, wrong rule shape."""


class BudgetExceeded(Exception):
    """Decompression would exceed the caller's length cap."""

    def __init__(self, length: int, cap: int):
        super().__init__(f"expansion of length {length} exceeds cap {cap}")
        self.length = length
        self.cap = cap


class Grammar:
    """An SLP with nonterminals ``X_1 .. X_n``.

    ``rules[i - 1]`` is the right-hand side of ``X_i`` as a tuple of
    symbols.  ``succinct_for`` names the letter whose powers may appear as
    :class:`Power` symbols.
    """

    __slots__ = ("rules", "succinct_for", "_lens", "_firsts", "_lasts")

    def __init__(self, rules: Sequence[Iterable[Symbol]], succinct_for: Optional[Letter] = None,
                 check: bool = True):
        self.rules = tuple(tuple(r) for r in rules)
        self.succinct_for = succinct_for
        self._lens = None
        self._firsts = None
        self._lasts = None
        if not check:
            return
        for i, rhs in enumerate(self.rules, start=1):
            for sym in rhs:
                if isinstance(sym, NT):
                    if not 1 <= sym.index < i:
                        raise GrammarError(f"X{i} refers to X{sym.index}: references must point to smaller indices")
                elif not isinstance(sym, (Letter, Power)):
                    raise GrammarError(f"X{i}: unexpected symbol {sym!r}")

    @property
    def n(self) -> int:
        return len(self.rules)

    def rhs(self, i: int) -> tuple:
        self._check_index(i)
        return self.rules[i - 1]

    def _check_index(self, i):
        if not isinstance(i, int) or not 1 <= i <= len(self.rules):
            raise IndexError(f"no nonterminal X{i} (n={len(self.rules)})")

    def replace(self, rules=None, succinct_for=...) -> "Grammar":
        return Grammar(self.rules if rules is None else rules,
                       self.succinct_for if succinct_for is ... else succinct_for)

    # -- bottom-up summaries -------------------------------------------------

    def _summaries(self):
        if self._lens is not None:
            return
        lens, firsts, lasts = [], [], []
        for rhs in self.rules:
            total = 0
            first = last = None
            for sym in rhs:
                if isinstance(sym, NT):
                    k = sym.index - 1
                    if not 0 <= k < len(lens):
                        continue  # only reachable with check=False
                    total += lens[k]
                    f, l = firsts[k], lasts[k]
                else:
                    total += symbol_length(sym)
                    f = l = symbol_first(sym)
                if f is not None:
                    if first is None:
                        first = f
                    last = l
            lens.append(total)
            firsts.append(first)
            lasts.append(last)
        self._lens, self._firsts, self._lasts = lens, firsts, lasts

    def eval_len(self, i: int) -> int:
        self._check_index(i)
        self._summaries()
        return self._lens[i - 1]

    def first_last(self, i: int) -> tuple[Optional[Letter], Optional[Letter]]:
        self._check_index(i)
        self._summaries()
        return self._firsts[i - 1], self._lasts[i - 1]

    def first(self, i: int) -> Optional[Letter]:
        return self.first_last(i)[0]

    def last(self, i: int) -> Optional[Letter]:
        return self.first_last(i)[1]

    def is_empty(self, i: int) -> bool:
        return self.eval_len(i) == 0

    @property
    def size(self) -> int:
        """Total stored symbols; a succinct power counts as one."""
        return sum(len(r) for r in self.rules)

    def letters(self) -> set:
        out = set()
        for rhs in self.rules:
            for sym in rhs:
                if not isinstance(sym, NT):
                    out.add(symbol_first(sym))
        return out

    def decompress(self, i: int, cap: int = 1 << 20) -> list:
        """Expand ``X_i`` into a flat list of letters.

        Raises :class:`BudgetExceeded` (carrying the exact length) when the
        expansion would be longer than ``cap``.
        """
        length = self.eval_len(i)
        if length > cap:
            raise BudgetExceeded(length, cap)
        memo: dict[int, list] = {}

        def expand(k):
            got = memo.get(k)
            if got is not None:
                return got
            out = []
            for sym in self.rules[k - 1]:
                if isinstance(sym, NT):
                    out.extend(expand(sym.index))
                elif isinstance(sym, Power):
                    out.extend([sym.base] * sym.exponent)
                else:
                    out.append(sym)
            memo[k] = out
            return out

        # children before parents keeps the recursion shallow
        for k in range(1, i):
            if self._lens[k - 1] <= cap:
                expand(k)
        return list(expand(i))

    def __eq__(self, other):
        return (isinstance(other, Grammar) and self.rules == other.rules
                and self.succinct_for is other.succinct_for)

    def __hash__(self):
        return hash(self.rules)

    def __repr__(self):
        body = "; ".join(f"X{i} -> {' '.join(map(str, r))}" for i, r in enumerate(self.rules, 1))
        return f"Grammar({body})"


def nonterminals_of(rhs) -> list:
    return [s.index for s in rhs if isinstance(s, NT)]


@dataclass(frozen=True)
class Violation:
    """One broken invariant: ``code`` names it, ``index`` locates it."""

    code: str
    index: object
    detail: str = ""

    def __str__(self):
        return f"{self.code} at {self.index}: {self.detail}" if self.detail else f"{self.code} at {self.index}"


def _is_subsequence(small, big) -> bool:
    it = iter(big)
    return all(any(x == y for y in it) for x in small)


def check_slp_invariants(g: Grammar, original: Optional[Grammar] = None) -> list:
    """Report every violation of the rule shape and of SLP 1-3.

    Violations are returned, never raised.  ``original`` is the baseline
    instance; without it the order-preservation check (SLP 2) is skipped.
    """
    out = []
    n = g.n
    if original is not None and original.n != n:
        out.append(Violation("SLP-1", None, f"n changed from {original.n} to {n}"))
    g._summaries()
    for i, rhs in enumerate(g.rules, start=1):
        nts = [k for k, s in enumerate(rhs) if isinstance(s, NT)]
        if len(nts) > 2:
            out.append(Violation("form-1b", i, "more than two nonterminals"))
        elif len(nts) == 2 and nts[1] != len(rhs) - 1:
            out.append(Violation("form-1b", i, "letters after the second nonterminal"))
        for k in nts:
            j = rhs[k].index
            if not 1 <= j < i:
                out.append(Violation("form-1b", i, f"X{j} is not smaller than X{i}"))
            elif g._lens[j - 1] == 0:
                out.append(Violation("form-1c", i, f"X{j} defines the empty string"))
        for k, sym in enumerate(rhs):
            if isinstance(sym, Power):
                if g.succinct_for is None or sym.base is not g.succinct_for:
                    out.append(Violation("succinct", i, f"power {sym} outside {g.succinct_for}-succinct form"))
                if sym.exponent < 2:
                    out.append(Violation("succinct", i, f"power {sym} has exponent below 2"))
            base = symbol_first(sym) if not isinstance(sym, NT) else None
            if base is not None and base.is_marker:
                at_edge = (i == n and ((k == 0 and base.kind == "dollar")
                                       or (k == len(rhs) - 1 and base.kind == "hash")))
                if not at_edge:
                    out.append(Violation("SLP-3", i, f"marker {base} at offset {k}"))
        if g._lens[i - 1] > (1 << n):
            out.append(Violation("length-bound", i, "eval longer than 2^n"))
        if original is not None and i <= original.n:
            if not _is_subsequence(nonterminals_of(rhs), nonterminals_of(original.rules[i - 1])):
                out.append(Violation("SLP-2", i, "nonterminals not a subsequence of the original rule"))
    if n == 0:
        out.append(Violation("SLP-3", None, "grammar has no nonterminals"))
    else:
        top = g.rules[n - 1]
        if len(top) < 2 or top[0] is not DOLLAR_LETTER or top[-1] is not HASH_LETTER:
            out.append(Violation("SLP-3", n, "X_n must be $ ... #"))
        if any(s.index != n - 1 for s in top if isinstance(s, NT)):
            out.append(Violation("SLP-3", n, "X_n may refer only to X_{n-1}"))
    return out

