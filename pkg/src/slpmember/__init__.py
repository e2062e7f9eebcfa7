"""Membership of SLP-compressed strings in automata with compressed transitions."""

from .analysis import (OuterReport, PairClass, PreconditionError, classify_pairs, is_inner,
                       nonextendible_lengths, outer_letters, pairs_in_evals)
from .automaton import Automaton, Transition, check_aut_invariants, is_deterministic
from .decider import (Decision, IterationLimit, Options, brute_force_accepts, decide,
                      iteration_bound, naive_accept)
from .generate import GenParams, ab_power_instance, gen_instance
from .letters import NT, Letter, Power, block, letter, pair
from .normalize import InvariantError, RawAutomaton, normalize_input
from .passes import (Instance, Trace, compress_blocks_inner, compress_crossing_pairs,
                     compress_pair_noncrossing, make_inner, pop_first_letters)
from .slp import BudgetExceeded, Grammar, GrammarError, Violation, check_slp_invariants
from .textfmt import ParseError, load_instance, parse_instance, serialize_instance
from .unary import UnaryGraph, UnaryOracle, a_path_exists, restrict_to_letter

__version__ = "0.1.0"
