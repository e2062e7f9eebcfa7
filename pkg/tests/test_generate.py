import pytest

from slpmember.automaton import check_aut_invariants, is_deterministic
from slpmember.decider import brute_force_accepts
from slpmember.generate import GenParams, ab_power_instance, gen_instance
from slpmember.slp import check_slp_invariants
from slpmember.textfmt import serialize_instance


def test_same_seed_same_instance():
    p = GenParams(seed=42, n=7, alphabet_size=4)
    assert serialize_instance(gen_instance(p)) == serialize_instance(gen_instance(p))


def test_planted_instances_accept():
    for seed in range(30):
        assert brute_force_accepts(gen_instance(GenParams(seed=seed, plant=True)))


def test_generated_instances_are_valid():
    for seed in range(50):
        i = gen_instance(GenParams(seed=seed, n=4 + seed % 5, deterministic=seed % 2 == 0))
        assert check_slp_invariants(i.grammar, i.original) == []
        assert check_aut_invariants(i.automaton, i.grammar) == []
        if seed % 2 == 0:
            assert is_deterministic(i.automaton, i.grammar)


def test_corpus_has_both_outcomes():
    answers = {brute_force_accepts(gen_instance(GenParams(seed=s))) for s in range(60)}
    assert answers == {True, False}


def test_param_validation():
    with pytest.raises(ValueError):
        GenParams(n=3)


def test_ab_power_instance_length():
    i = ab_power_instance(29)
    assert i.grammar.eval_len(i.n) == 2 ** 30 + 2
