import pytest

from helpers import G, names, rhs
from slpmember.letters import DOLLAR_LETTER, HASH_LETTER, NT, letter
from slpmember.slp import BudgetExceeded, Grammar, GrammarError, check_slp_invariants

a, b, c = letter("a"), letter("b"), letter("c")


def codes(report):
    return {(v.code, v.index) for v in report}


def test_eval_len_examples():
    assert G("a b").eval_len(1) == 2
    assert G("a b", "X1 X1").eval_len(2) == 4
    assert G("a^12 b").eval_len(1) == 13


def test_eval_len_is_exact_for_huge_grammars():
    g = Grammar([[a, b]] + [[NT(i), NT(i)] for i in range(1, 101)])
    assert g.eval_len(101) == 2 ** 101


def test_first_last():
    assert G("a b").first_last(1) == (a, b)
    assert G("a b", "X1 c").first_last(2) == (a, c)
    assert G("").first_last(1) == (None, None)
    assert G("a^3 b", "c X1").first_last(2) == (c, b)


def test_bad_index():
    with pytest.raises(IndexError):
        G("a").eval_len(2)


def test_decompress():
    assert names(G("a b", "X1 X1").decompress(2, 16)) == "a b a b"
    assert names(G("a^3 b").decompress(1, 16)) == "a a a b"


def test_decompress_budget():
    g = Grammar([[a]] + [[NT(i), NT(i)] for i in range(1, 31)])
    with pytest.raises(BudgetExceeded) as e:
        g.decompress(31, 4096)
    assert e.value.length == 2 ** 30


def test_forward_reference_rejected_by_constructor():
    with pytest.raises(GrammarError):
        G("a", "X3 X1", "b")


def test_checker_on_valid_instance_grammar():
    g = G("a b", "X1 c", "a", "$ X3 #")
    assert check_slp_invariants(g, g) == []


def test_checker_forward_reference():
    g = G("a", "X3 X1", "b", "$ X3 #", check=False)
    assert ("form-1b", 2) in codes(check_slp_invariants(g))


def test_checker_marker_leak():
    g = G("a", "$ X1", "b", "$ X3 #")
    assert ("SLP-3", 2) in codes(check_slp_invariants(g))


def test_checker_root_shape():
    g = G("a", "b", "c", "X3 a")
    assert ("SLP-3", 4) in codes(check_slp_invariants(g))


def test_checker_letters_after_second_nonterminal():
    g = G("a", "b", "X1 X2 c", "$ X3 #")
    assert ("form-1b", 3) in codes(check_slp_invariants(g))


def test_checker_empty_referenced():
    g = G("", "X1 a", "b", "$ X3 #")
    assert ("form-1c", 2) in codes(check_slp_invariants(g))


def test_checker_slp2_subsequence():
    orig = G("a", "X1 b", "c", "$ X3 #")
    ok = G("a", "b", "c", "$ X3 #")
    assert check_slp_invariants(ok, orig) == []
    bad = G("a", "X1 b X1", "c", "$ X3 #")
    assert ("SLP-2", 2) in codes(check_slp_invariants(bad, orig))


def test_checker_succinct_powers():
    g = G("a^3 b", "c", "a", "$ X3 #")
    assert ("succinct", 1) in codes(check_slp_invariants(g))
    g = G("a^3 b", "c", "a", "$ X3 #", succinct_for=a)
    assert check_slp_invariants(g) == []


def test_checker_length_bound():
    g = G("a^40 b", "c", "a", "$ X3 #", succinct_for=a)
    assert ("length-bound", 1) in codes(check_slp_invariants(g))


def test_replace_keeps_flags_unless_overridden():
    g = G("a^3 b", succinct_for=a)
    assert g.replace([rhs("b")]).succinct_for is a
    assert g.replace(succinct_for=None).succinct_for is None


def test_markers_roundtrip_through_symbols():
    g = G("a", "b", "c", "$ X3 #")
    assert g.rhs(4) == (DOLLAR_LETTER, NT(3), HASH_LETTER)
    assert g.letters() == {a, b, c, DOLLAR_LETTER, HASH_LETTER}
