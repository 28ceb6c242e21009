"""Finite automata on infinite words: acceptance conditions, lasso-word
membership, complementation, determinization, alternation removal,
simulation games, loop structure and LTL translation."""

from .core import (
    Acceptance, Automaton, LassoWord, OmegaError, SymbolAlphabet, accepts_lasso, all_lassos,
    check_backward_deterministic, count_accepting_runs, equivalence_witness, equivalent,
    includes, inclusion_counterexample, is_empty,
)
from .io import (
    ParseError, parse_alternating, parse_automaton, parse_game, parse_lasso,
    print_alternating, print_automaton, print_game, print_lasso,
)

__version__ = "0.1.0"

__all__ = [
    "Acceptance", "Automaton", "LassoWord", "OmegaError", "SymbolAlphabet", "accepts_lasso",
    "all_lassos", "check_backward_deterministic", "count_accepting_runs", "equivalence_witness",
    "equivalent", "includes", "inclusion_counterexample", "is_empty", "ParseError",
    "parse_alternating", "parse_automaton", "parse_game", "parse_lasso", "print_alternating",
    "print_automaton", "print_game", "print_lasso",
]
