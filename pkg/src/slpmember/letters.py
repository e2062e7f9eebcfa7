"""Alphabet symbols and the right-hand-side tokens built from them.

Letters are hash-consed: asking twice for the same pair or block letter
returns the very same object, so identity comparison is canonical.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from typing import Union

ORIGINAL = "original"
DOLLAR = "dollar"
HASH = "hash"
PAIR = "pair"
BLOCK = "block"

_lock = threading.Lock()
_table: dict[tuple, "Letter"] = {}


class Letter:
    """One alphabet symbol.

    ``kind`` is one of original, dollar, hash, pair or block.  Compound
    letters remember how they were made (``left``/``right`` for pairs,
    ``base``/``exponent`` for blocks).  ``digest`` is a process-independent
    fingerprint used for stable ordering; ``uid`` is a cheap per-process id.
    """

    __slots__ = ("kind", "name", "left", "right", "base", "exponent", "uid", "digest", "size")

    def __init__(self, kind, name=None, left=None, right=None, base=None, exponent=None):
        self.kind = kind
        self.name = name
        self.left = left
        self.right = right
        self.base = base
        self.exponent = exponent
        self.uid = len(_table)
        h = hashlib.blake2b(digest_size=12)
        if kind == PAIR:
            h.update(b"P" + left.digest.encode() + right.digest.encode())
            self.size = left.size + right.size
        elif kind == BLOCK:
            h.update(b"B" + base.digest.encode() + str(exponent).encode())
            self.size = base.size + 1
        else:
            h.update(b"L" + kind.encode() + b":" + (name or "").encode())
            self.size = 1
        self.digest = h.hexdigest()

    def __setattr__(self, key, value):
        if hasattr(self, "digest"):
            raise AttributeError("Letter is immutable")
        object.__setattr__(self, key, value)

    def __repr__(self):
        return f"Letter({self})"

    def __str__(self):
        if self.kind == ORIGINAL:
            return self.name
        if self.kind == DOLLAR:
            return "$"
        if self.kind == HASH:
            return "#"
        if self.size > 8:
            return f"<~{self.digest[:10]}>"
        if self.kind == PAIR:
            return f"<{self.left},{self.right}>"
        return f"<{self.base}:{self.exponent}>"

    def __reduce__(self):
        # rebuild through the intern table so identity survives pickling
        if self.kind == ORIGINAL:
            return (letter, (self.name,))
        if self.kind == DOLLAR:
            return (_marker, ("$",))
        if self.kind == HASH:
            return (_marker, ("#",))
        if self.kind == PAIR:
            return (pair, (self.left, self.right))
        return (block, (self.base, self.exponent))

    @property
    def is_marker(self) -> bool:
        return self.kind in (DOLLAR, HASH)

    @property
    def sort_key(self):
        # original letters sort by name, ahead of anything freshly created
        if self.kind == ORIGINAL:
            return (1, self.name)
        if self.kind == DOLLAR:
            return (0, "$")
        if self.kind == HASH:
            return (0, "#")
        return (2, self.digest)


def _intern(key, **fields) -> Letter:
    with _lock:
        found = _table.get(key)
        if found is None:
            found = Letter(**fields)
            _table[key] = found
        return found


def letter(name: str) -> Letter:
    if name in ("$", "#"):
        return _marker(name)
    return _intern((ORIGINAL, name), kind=ORIGINAL, name=name)


def _marker(sym: str) -> Letter:
    kind = DOLLAR if sym == "$" else HASH
    return _intern((kind,), kind=kind)


DOLLAR_LETTER = _marker("$")
HASH_LETTER = _marker("#")


def pair(left: Letter, right: Letter) -> Letter:
    if left.is_marker or right.is_marker:
        raise ValueError("markers never take part in a pair letter")
    return _intern((PAIR, left.uid, right.uid), kind=PAIR, left=left, right=right)


def block(base: Letter, exponent: int) -> Letter:
    if base.is_marker:
        raise ValueError("markers never form block letters")
    if exponent < 1:
        raise ValueError("block exponent must be positive")
    return _intern((BLOCK, base.uid, exponent), kind=BLOCK, base=base, exponent=exponent)


@dataclass(frozen=True)
class Power:
    """A succinct run ``base^exponent``; stored only with exponent >= 2."""

    base: Letter
    exponent: int

    def __str__(self):
        return f"{self.base}^{self.exponent}"


@dataclass(frozen=True)
class NT:
    """Reference to nonterminal ``X_index``."""

    index: int

    def __str__(self):
        return f"X{self.index}"


Symbol = Union[Letter, Power, NT]


def power(base: Letter, exponent: int) -> list:
    """Symbols spelling ``base^exponent``: empty, a plain letter, or a Power."""
    if exponent <= 0:
        return []
    if exponent == 1:
        return [base]
    return [Power(base, exponent)]


def symbol_first(sym) -> Letter:
    return sym.base if isinstance(sym, Power) else sym


def symbol_length(sym) -> int:
    return sym.exponent if isinstance(sym, Power) else 1
