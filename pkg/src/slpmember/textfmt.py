"""Line-oriented text formats for grammars, automata and instance bundles.

Grammar::

    slp n=4
    X1 -> a b
    X2 -> X1 X1
    X3 -> c X2 a X1
    X4 -> $ X3 #

Automaton::

    states 0 1 2 3
    start 0
    accept 3
    trans 0 $ 1
    trans 1 X2 2
    trans 2 # 3

Comments start with ``;`` (``#`` is a letter).  Compound letters created
during a run are written ``<l,r>`` (pair) and ``<l:k>`` (block).  A bundle
(``.inst``) is a grammar, a line ``---``, and an automaton.
"""

from __future__ import annotations

import re
from pathlib import Path

from .automaton import Automaton, Transition, check_aut_invariants, transition_key
from .letters import NT, Letter, Power, block, letter, pair
from .normalize import InvariantError, RawAutomaton, normalize_input
from .passes import Instance, Trace
from .slp import Grammar, GrammarError, check_slp_invariants

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NT = re.compile(r"X([0-9]+)")


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + msg)
        self.line = line
        self.col = col


def _lines(text):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split(";", 1)[0].rstrip()
        if body.strip():
            yield no, raw, body


def _col(raw, tok, start=0):
    return raw.find(tok, start) + 1


class _LetterReader:
    def __init__(self, text, line, col):
        self.text, self.pos, self.line, self.col = text, 0, line, col

    def fail(self, msg):
        raise ParseError(msg, self.line, self.col + self.pos)

    def letter(self):
        t = self.text
        if self.pos >= len(t):
            self.fail("expected a letter")
        ch = t[self.pos]
        if ch in "$#":
            self.pos += 1
            return letter(ch)
        if ch == "<":
            self.pos += 1
            left = self.letter()
            if self.pos >= len(t) or t[self.pos] not in ",:":
                self.fail("expected ',' or ':' in compound letter")
            sep = t[self.pos]
            self.pos += 1
            if sep == ",":
                right = self.letter()
                made = pair(left, right)
            else:
                m = re.compile(r"[0-9]+").match(t, self.pos)
                if not m:
                    self.fail("expected block exponent")
                self.pos = m.end()
                made = block(left, int(m.group()))
            if self.pos >= len(t) or t[self.pos] != ">":
                self.fail("expected '>'")
            self.pos += 1
            return made
        m = _NAME.match(t, self.pos)
        if not m:
            self.fail(f"bad letter {t[self.pos:]!r}")
        if _NT.fullmatch(m.group()):
            self.fail(f"{m.group()} is a nonterminal name, not a letter")
        self.pos = m.end()
        return letter(m.group())


def parse_symbol(tok: str, line=None, col=None):
    m = _NT.fullmatch(tok)
    if m:
        return NT(int(m.group(1)))
    r = _LetterReader(tok, line, col or 1)
    base = r.letter()
    if r.pos == len(tok):
        return base
    if tok[r.pos] != "^":
        r.fail(f"unexpected {tok[r.pos:]!r}")
    exp = tok[r.pos + 1:]
    if not exp.isdigit():
        r.fail("power exponent must be a decimal number")
    k = int(exp)
    if k == 0:
        r.fail("power exponent must be positive")
    return base if k == 1 else Power(base, k)


def letter_token(x: Letter) -> str:
    # iterative so deeply nested letters do not hit the recursion limit
    out = []
    stack = [x]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif item.kind == "pair":
            stack.extend([">", item.right, ",", item.left, "<"])
        elif item.kind == "block":
            stack.extend([f":{item.exponent}>", item.base, "<"])
        else:
            out.append(str(item))
    return "".join(out)


def symbol_token(s) -> str:
    if isinstance(s, NT):
        return f"X{s.index}"
    if isinstance(s, Power):
        return f"{letter_token(s.base)}^{s.exponent}"
    return letter_token(s)


# -- grammar -----------------------------------------------------------------

def parse_grammar_rules(text: str):
    """Parse grammar text into (rules, succinct letter or None) without semantic checks."""
    n = None
    succinct = None
    rules = {}
    for no, raw, body in _lines(text):
        toks = body.split()
        if n is None:
            if toks[0] != "slp":
                raise ParseError("grammar must start with 'slp n=<int>'", no, 1)
            for tok in toks[1:]:
                key, _, val = tok.partition("=")
                if key == "n" and val.isdigit():
                    n = int(val)
                elif key == "succinct":
                    succinct = parse_symbol(val, no, _col(raw, tok))
                else:
                    raise ParseError(f"unknown header field {tok!r}", no, _col(raw, tok))
            if n is None:
                raise ParseError("header lacks n=<int>", no, 1)
            continue
        m = _NT.fullmatch(toks[0])
        if not m or len(toks) < 2 or toks[1] != "->":
            raise ParseError("expected 'X<i> -> ...'", no, 1)
        i = int(m.group(1))
        if not 1 <= i <= n:
            raise ParseError(f"X{i} outside 1..{n}", no, 1)
        if i in rules:
            raise ParseError(f"second production for X{i}", no, 1)
        rhs = []
        pos = raw.find("->") + 2
        for tok in toks[2:]:
            col = _col(raw, tok, pos)
            pos = col + len(tok) - 1
            sym = parse_symbol(tok, no, col)
            if isinstance(sym, NT) and not 1 <= sym.index < i:
                raise ParseError(f"X{i} refers forward to X{sym.index}", no, col)
            rhs.append(sym)
        rules[i] = rhs
    if n is None:
        raise ParseError("empty grammar")
    missing = [i for i in range(1, n + 1) if i not in rules]
    if missing:
        raise ParseError(f"no production for X{missing[0]}")
    return [rules[i] for i in range(1, n + 1)], succinct


def parse_grammar(text: str) -> Grammar:
    rules, succinct = parse_grammar_rules(text)
    return Grammar(rules, succinct_for=succinct)


def serialize_grammar(g: Grammar) -> str:
    head = f"slp n={g.n}"
    if g.succinct_for is not None:
        head += f" succinct={letter_token(g.succinct_for)}"
    lines = [head]
    for i, rhs in enumerate(g.rules, start=1):
        body = " ".join(symbol_token(s) for s in rhs)
        lines.append(f"X{i} -> {body}" if body else f"X{i} ->")
    return "\n".join(lines) + "\n"


# -- automaton ---------------------------------------------------------------

def _state(tok, no, raw):
    if not tok.isdigit():
        raise ParseError(f"state ids are nonnegative integers, got {tok!r}", no, _col(raw, tok))
    return int(tok)


def parse_automaton_raw(text: str):
    """Returns (states, transitions, start, accepts, relaxed letter)."""
    states, trans, start, accepts, relaxed = None, [], None, [], None
    for no, raw, body in _lines(text):
        toks = body.split()
        head = toks[0]
        if head == "states":
            states = [_state(t, no, raw) for t in toks[1:]]
        elif head == "start":
            if len(toks) != 2:
                raise ParseError("start takes one state", no, 1)
            start = _state(toks[1], no, raw)
        elif head == "accept":
            accepts += [_state(t, no, raw) for t in toks[1:]]
        elif head == "relaxed":
            relaxed = parse_symbol(toks[1], no, _col(raw, toks[1]))
        elif head == "trans":
            if len(toks) != 4:
                raise ParseError("expected 'trans <src> <label> <dst>'", no, 1)
            lab = parse_symbol(toks[2], no, _col(raw, toks[2], 5))
            trans.append((_state(toks[1], no, raw), lab, _state(toks[3], no, raw)))
        else:
            raise ParseError(f"unknown directive {head!r}", no, 1)
    if states is None or start is None:
        raise ParseError("automaton needs 'states' and 'start' lines")
    return states, trans, start, accepts, relaxed


def serialize_automaton(a: Automaton) -> str:
    lines = ["states " + " ".join(str(s) for s in sorted(a.states)),
             f"start {a.start}", f"accept {a.accept}"]
    if a.relaxed_for is not None:
        lines.append(f"relaxed {letter_token(a.relaxed_for)}")
    for t in sorted(a.transitions, key=transition_key):
        lines.append(f"trans {t.src} {symbol_token(t.label)} {t.dst}")
    return "\n".join(lines) + "\n"


# -- instances ---------------------------------------------------------------

def _uses_markers(rules, trans) -> bool:
    syms = [s for r in rules for s in r] + [t[1] for t in trans]
    return any(isinstance(s, Letter) and s.is_marker for s in syms)


def parse_instance(grammar_text: str, automaton_text: str, trace: Trace = None) -> Instance:
    """Parse and validate an instance.

    Texts mentioning ``$``/``#`` must already be normalized and are only
    checked; anything else is treated as raw input and normalized.
    """
    rules, succinct = parse_grammar_rules(grammar_text)
    states, trans, start, accepts, relaxed = parse_automaton_raw(automaton_text)
    trace = trace if trace is not None else Trace()
    if _uses_markers(rules, trans):
        if len(accepts) != 1:
            raise ParseError("a normalized automaton has exactly one accept state")
        g = Grammar(rules, succinct_for=succinct)
        a = Automaton(states, trans, start, accepts[0], relaxed)
        problems = check_slp_invariants(g, g) + check_aut_invariants(a, g)
        if problems:
            raise InvariantError(problems)
        return Instance(g, a, g, trace)
    if succinct is not None or relaxed is not None:
        raise ParseError("raw input cannot be succinct or relaxed")
    return normalize_input(rules, RawAutomaton(set(states), trans, start, set(accepts)), trace)


def serialize_instance(inst: Instance) -> str:
    return serialize_grammar(inst.grammar) + "---\n" + serialize_automaton(inst.automaton)


def split_bundle(text: str):
    parts = re.split(r"^---[ \t]*$\n?", text, maxsplit=1, flags=re.M)
    if len(parts) != 2:
        raise ParseError("bundle needs a '---' separator line")
    return parts[0], parts[1]


def load_instance(path, automaton_path=None, trace: Trace = None) -> Instance:
    """Load ``foo.inst``, or ``foo.slp`` with ``foo.aut`` next to it."""
    path = Path(path)
    if automaton_path is None and path.suffix == ".inst":
        g_text, a_text = split_bundle(path.read_text(encoding="utf-8"))
        return parse_instance(g_text, a_text, trace)
    if automaton_path is None:
        automaton_path = path.with_suffix(".aut")
    return parse_instance(path.read_text(encoding="utf-8"),
                          Path(automaton_path).read_text(encoding="utf-8"), trace)
