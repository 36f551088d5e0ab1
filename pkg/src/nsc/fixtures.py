"""The built-in example corpus.

Each fixture is embedded data validated on load: languages come with the
acceptors and minimal automata they are documented to have, and loading
fails loudly if any transcription drifts from the computed objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .lang import Alphabet, Context, Dfa, LanguageHandle, Nfa, minimize, \
    parse_regex, reverse, rsc
from .monoid import transformation_closure


@dataclass(frozen=True)
class Fixture:
    name: str
    ctx: Context = field(repr=False)
    lang: LanguageHandle = field(repr=False)
    nfa: Nfa = None                  # a distinguished nondeterministic acceptor
    min_dfa: Dfa = None              # transcribed minimal dfa, original numbering
    min_dfa_rev: Dfa = None
    note: str = ""


def _aa() -> Fixture:
    ctx = Context(Alphabet.of("a"))
    lang = ctx.from_regex("a+aa")
    assert lang.dfa.n == 4
    return Fixture("F_AA", ctx, lang, note="the two-word language {a, aa}")


def _ln(n: int) -> Fixture:
    ctx = Context(Alphabet.of("0", "1"))
    lang = ctx.from_regex("(0+1)*1" + "(0+1)" * n)
    assert lang.dfa.n == 2 ** (n + 1)
    return Fixture(f"F_LN{n}", ctx, lang,
                   note=f"words whose {n + 1}-th letter from the end is 1")


def _m3() -> Fixture:
    ctx = Context(Alphabet.of("a1", "a2", "a3"))
    lang = ctx.from_regex("a1(a2+a3)+a2(a1+a3)+a3(a1+a2)")
    assert lang.dfa.n == 6
    return Fixture("F_M3", ctx, lang,
                   note="two-letter words with distinct letters; the "
                        "derivative semilattice contains a diamond")


# Acceptor separating the subatomic from the atomic measure: four states,
# single initial state 0, single final state 2.  Validated on load against
# the transcribed minimal dfas of the language and its reverse.
F_SUB_TRIPLES = None          # filled below
F_SUB_MIN_DFA = None
F_SUB_MIN_DFA_REV = None


def _sub() -> Fixture:
    ctx = Context(Alphabet.of("a", "b"))
    nfa = Nfa.from_triples(4, 2, F_SUB_TRIPLES, [0], [2])
    lang = ctx.handle(nfa)
    assert lang.dfa.n == 9
    assert ctx.handle(F_SUB_MIN_DFA) == lang
    assert minimize(F_SUB_MIN_DFA).n == 9
    rev = ctx.reverse_lang(lang)
    assert rev.dfa.n == 6
    assert ctx.handle(F_SUB_MIN_DFA_REV) == rev
    assert minimize(F_SUB_MIN_DFA_REV).n == 6
    assert len(transformation_closure(F_SUB_MIN_DFA_REV)[0]) == 22
    return Fixture("F_SUB", ctx, lang, nfa, F_SUB_MIN_DFA, F_SUB_MIN_DFA_REV,
                   note="four-state subatomic acceptor of a language with "
                        "no four-state atomic acceptor")


def _u5() -> Fixture:
    ctx = Context(Alphabet.of("a"))
    lang = ctx.from_regex("@+a+aa+aaa+aaaa+aaaaaaa*")
    assert lang.dfa.n == 7
    assert all(lang.accepts((0,) * k) == (k != 5) for k in range(20))
    # five-state acceptor: two initial states, three final states
    nfa = Nfa.from_triples(
        5, 1,
        [(0, 0, 2), (1, 0, 4), (2, 0, 3), (3, 0, 0), (3, 0, 4), (4, 0, 1)],
        [0, 1], [0, 1, 2])
    assert ctx.handle(nfa) == lang
    return Fixture("F_U5", ctx, lang, nfa,
                   note="all unary word lengths except five")


_BUILDERS = {
    "F_AA": _aa,
    "F_M3": _m3,
    "F_SUB": _sub,
    "F_U5": _u5,
    **{f"F_LN{n}": (lambda n=n: _ln(n)) for n in range(5)},
}


def fixture_names():
    return sorted(_BUILDERS)


@lru_cache(maxsize=None)
def fixture(name: str) -> Fixture:
    """Fixture by name; F_LN(n) and F_LNn are both accepted."""
    key = name.strip().replace("(", "").replace(")", "").upper()
    if key not in _BUILDERS:
        raise KeyError(f"unknown fixture {name!r}; "
                       f"choose from {', '.join(fixture_names())}")
    return _BUILDERS[key]()
