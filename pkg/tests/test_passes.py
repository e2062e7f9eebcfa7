import pytest

from helpers import A, G, ac, inst, names, pc, rhs, strip, word
from slpmember.analysis import PreconditionError, classify_pairs, is_inner, outer_letters, pairs_in_eval
from slpmember.automaton import check_aut_invariants
from slpmember.decider import brute_force_accepts
from slpmember.letters import NT, Power, block, letter, pair
from slpmember.passes import (Trace, compress_blocks_inner, compress_crossing_pairs,
                              compress_pair_noncrossing, make_inner, pop_first_letters, replace_pair)
from slpmember.slp import check_slp_invariants

a, b, c, d = (letter(x) for x in "abcd")


def chain(*tokens):
    """Automaton reading exactly the given tokens, framed by $ and #."""
    toks = ["$", *tokens, "#"]
    return A([(k, t, k + 1) for k, t in enumerate(toks)], 0, len(toks))


def test_replace_pair_is_greedy_left_to_right():
    ab = pair(a, b)
    assert replace_pair(rhs("a b a b"), a, b, ab) == ([ab, ab], 2)
    assert replace_pair(rhs("a a b"), a, b, ab) == ([a, ab], 1)


def test_pair_compression_rules_and_automaton():
    g = G("a b a b", "c", "a a b", "$ X1 X3 #")
    i = inst(g, chain("a", "b", "X2"))
    out = compress_pair_noncrossing(i, a, b)
    ab = pair(a, b)
    assert out.grammar.rhs(1) == (ab, ab)
    assert out.grammar.rhs(3) == (a, ab)
    assert (1, ab, 3) in out.automaton.transitions
    assert out.trace.events[-1]["replacements"] == 3


def test_pair_compression_refuses_crossing_and_markers():
    i = inst(G("a b", "c X1", "d", "$ X2 #"), chain("a"))
    with pytest.raises(PreconditionError):
        compress_pair_noncrossing(i, c, a)
    with pytest.raises(PreconditionError):
        compress_pair_noncrossing(i, a, a)
    with pytest.raises(PreconditionError):
        compress_pair_noncrossing(i, letter("$"), c)


def test_block_compression_examples():
    g = G("b a a a b", "c", "d", "$ X1 #")
    out = compress_blocks_inner(inst(g, chain("a")), a)
    assert names(out.grammar.rhs(1)) == "b <a:3> b"

    g = G("b a^5 a c", "c", "d", "$ X1 #", succinct_for=a)
    out = compress_blocks_inner(inst(g, A([(0, "$", 1), (1, "#", 2)], 0, 2, relaxed_for=a)), a)
    assert names(out.grammar.rhs(1)) == "b <a:6> c"
    assert out.grammar.succinct_for is None and out.automaton.relaxed_for is None


def test_block_compression_adds_oracle_edges_and_drops_a_edges():
    g = G("b a a a b", "c", "d", "$ X1 #")
    aut = A([(0, "$", 1), (1, "b", 2), (2, "a", 3), (3, "a", 4), (4, "a", 5), (5, "b", 6), (6, "#", 7)], 0, 7)
    out = compress_blocks_inner(inst(g, aut), a)
    assert (2, block(a, 3), 5) in out.automaton.transitions
    assert a not in out.automaton.letters()
    assert brute_force_accepts(out)


def test_block_compression_needs_inner_letter():
    with pytest.raises(PreconditionError):
        compress_blocks_inner(inst(G("a b", "c", "d", "$ X1 #"), chain("a")), a)


def test_make_inner_example():
    g = G("a a b a", "d", "c X1", "$ X3 #")
    aut = A([(0, "$", 1), (1, "X1", 2), (2, "#", 3)], 0, 3)
    out = make_inner(inst(g, aut), a)
    assert out.grammar.rhs(1) == (b,)
    # X3's own trailing a is its suffix and moves up into the root
    assert out.grammar.rhs(3) == (c, Power(a, 2), NT(1))
    assert out.grammar.rhs(4) == (letter("$"), NT(3), a, letter("#"))
    ev = out.trace.events[-1]
    assert ev["prefixes"] == {"X1": 2} and ev["suffixes"] == {"X1": 1, "X3": 1}
    p1, q1 = ev["states_created"]
    t = set(out.automaton.transitions)
    assert {(1, Power(a, 2), p1), (p1, NT(1), q1), (q1, a, 2)} <= t
    assert is_inner(out.grammar, a)
    assert check_aut_invariants(out.automaton, out.grammar) == []
    assert check_slp_invariants(out.grammar, g) == []


def test_make_inner_pure_power():
    g = G("a a a a a", "b X1 c", "d", "$ X2 #")
    aut = A([(0, "$", 1), (1, "X1", 2), (2, "#", 3)], 0, 3)
    out = make_inner(inst(g, aut), a)
    assert out.grammar.rhs(1) == ()
    assert out.grammar.rhs(2) == (b, Power(a, 5), c)
    assert (1, Power(a, 5), 2) in out.automaton.transitions
    assert out.automaton.nt_transition(1) is None


def test_make_inner_strips_evals():
    g = G("a b a", "a X1 c a", "X2 a X1", "$ X3 #")
    out = make_inner(inst(g, chain("a")), a)
    for i in range(1, 4):
        assert word(out.grammar, i) == strip(word(g, i), a)
    assert word(out.grammar, 4) == word(g, 4)


def test_pop_example():
    g = G("a b", "c X1", "d", "$ X2 #")
    out = pop_first_letters(inst(g, chain("d")))
    assert out.grammar.rhs(1) == (b,)
    assert out.grammar.rhs(2) == (a, NT(1))
    assert word(out.grammar, 4) == word(g, 4)


def test_pop_single_letter_nonterminal():
    g = G("a", "c X1", "d", "$ X2 #")
    aut = A([(0, "$", 1), (1, "X1", 2), (2, "#", 3)], 0, 3)
    out = pop_first_letters(inst(g, aut))
    assert out.grammar.rhs(1) == ()
    assert out.grammar.rhs(2) == (a,)
    assert (1, a, 2) in out.automaton.transitions
    assert out.automaton.nt_transition(1) is None


def test_pop_makes_block_pairs_noncrossing():
    a2 = block(a, 2)
    g = G("b d", "c <a:2> X1", "X2 d X1", "$ X3 #")
    aut = A([(0, "$", 1), (1, "<a:2>", 2), (2, "X1", 3), (3, "#", 4)], 0, 4)
    before = {p.pair: p.crossing for p in classify_pairs(inst(g, aut))}
    assert before[(a2, b)]
    out = pop_first_letters(inst(g, aut))
    for pc_ in classify_pairs(out):
        if pc_.pair[0] is a2 and pc_.pair in pairs_in_eval(out.grammar, 4):
            assert not pc_.crossing


def test_crossing_pairs_single_pair():
    a2 = block(a, 2)
    g = G("c <a:2> b", "c X1 c", "d", "$ X2 #")
    out = compress_crossing_pairs(inst(g, chain("c", "c", "<a:2>", "b", "c")), {a2})
    assert pair(a2, b) in out.grammar.letters()
    assert [e["pass"] for e in out.trace.events] == ["pop", "pair"]
    assert brute_force_accepts(out)


def test_crossing_pairs_without_block_pairs_only_pops():
    g = G("c b", "c X1 c", "d", "$ X2 #")
    out = compress_crossing_pairs(inst(g, chain("c")), {block(a, 2)})
    assert [e["pass"] for e in out.trace.events] == ["pop"]


def test_eval_commutation_on_handmade_instance():
    g = G("b a c a a b", "d X1 a a c", "c a X2 b X1", "$ X3 #")
    i = inst(g, chain("c"))
    out = compress_blocks_inner(i, a)
    for k in range(1, 5):
        assert word(out.grammar, k) == ac(word(g, k), a)
    out2 = compress_pair_noncrossing(out, c, d) if (c, d) in pairs_in_eval(out.grammar, 4) else out
    for k in range(1, 5):
        assert word(out2.grammar, k) == pc(word(out.grammar, k), c, d)


def test_trace_sink_streams_events():
    seen = []
    g = G("b a a b", "c", "d", "$ X1 #")
    i = inst(g, chain("b")).evolve()
    i = type(i)(i.grammar, i.automaton, i.original, Trace(sink=seen.append, keep=False))
    compress_blocks_inner(i, a)
    assert seen and seen[0]["pass"] == "blocks" and i.trace.events == []
