"""Algebraic invariants of regular languages at desk scale.

Exact computation of quotient-union lattices, syntactic monoids, boolean
representations, dependency relations, and the two nondeterministic
complexity measures (state complexity and its subatomic restriction).
"""

from .lang import (Alphabet, Context, Dfa, LanguageHandle, Nfa,
                   BudgetExceeded, minimize, nfa_from_regex, parse_regex,
                   reverse, rsc)

__all__ = [
    "Alphabet", "Context", "Dfa", "LanguageHandle", "Nfa", "BudgetExceeded",
    "minimize", "nfa_from_regex", "parse_regex", "reverse", "rsc",
]
