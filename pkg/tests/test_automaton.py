from helpers import A, G
from slpmember.automaton import check_aut_invariants, is_deterministic, letter_path_exists
from slpmember.letters import letter

a = letter("a")


def normalized():
    g = G("a b", "c", "a", "$ X3 #")
    aut = A([(0, "$", 1), (1, "X1", 2), (2, "X2", 1), (1, "a", 3), (3, "#", 4)], 0, 4)
    return g, aut


def codes(report):
    return {v.code for v in report}


def test_normalized_instance_passes():
    g, aut = normalized()
    assert check_aut_invariants(aut, g) == []


def test_nonterminal_on_two_transitions():
    g, aut = normalized()
    bad = aut.edit(add=[(2, aut.nt_transition(1).label, 3)])
    assert "Aut-1" in codes(check_aut_invariants(bad, g))


def test_root_nonterminal_forbidden():
    g, aut = normalized()
    bad = A([(0, "$", 1), (1, "X4", 3), (3, "#", 4)], 0, 4)
    assert "Aut-1" in codes(check_aut_invariants(bad, g))


def test_second_dollar_transition():
    g, aut = normalized()
    bad = aut.edit(add=[(2, letter("$"), 3)])
    assert "Aut-2" in codes(check_aut_invariants(bad, g))


def test_start_with_incoming_edge():
    g, aut = normalized()
    bad = aut.edit(add=[(2, a, 0)])
    assert "Aut-2" in codes(check_aut_invariants(bad, g))


def test_power_labels_need_relaxed_flag():
    g, aut = normalized()
    bad = A([(0, "$", 1), (1, "a^3", 1), (1, "#", 2)], 0, 2)
    assert "Aut-1" in codes(check_aut_invariants(bad, g))
    ok = A([(0, "$", 1), (1, "a^3", 1), (1, "#", 2)], 0, 2, relaxed_for=a)
    assert check_aut_invariants(ok, g) == []


def test_determinism():
    g = G("a b", "b")
    assert is_deterministic(A([(0, "a", 1), (0, "b", 1)], 0, 1), g)
    assert not is_deterministic(A([(0, "a", 1), (0, "X1", 1)], 0, 1), g)
    assert is_deterministic(A([(0, "a", 1), (0, "X2", 1)], 0, 1), g)
    assert not is_deterministic(A([(0, "a", 1), (0, "a^3", 2)], 0, 2, relaxed_for=a), g)


def test_letter_path_exists():
    ab = [letter("a"), letter("b")]
    assert letter_path_exists(A([(0, "a", 1), (1, "b", 2)], 0, 2), 0, ab, 2)
    assert not letter_path_exists(A([(0, "a", 1), (3, "b", 2)], 0, 2), 0, ab, 2)
    assert not letter_path_exists(A([(0, "a", 1), (1, "c", 2)], 0, 2), 0, ab, 2)


def test_fresh_state_and_edit():
    _, aut = normalized()
    s = aut.fresh_state()
    assert s not in aut.states
    edited = aut.edit(add=[(s, a, 4)], new_states=[s])
    assert s in edited.states and s not in aut.states
