import random
from itertools import product

import pytest

from nsc.lang import (Alphabet, Concat, Context, Dfa, Epsilon, Nfa, RegexError,
                      Star, Sym, Union, minimize, nfa_from_regex, parse_regex,
                      reverse, rsc)


AB = Alphabet.of("a", "b")
BIN = Alphabet.of("0", "1")


def words_up_to(n_symbols, length):
    for k in range(length + 1):
        yield from product(range(n_symbols), repeat=k)


def lang_of_nfa(n, length):
    return {w for w in words_up_to(n.n_symbols, length) if n.accepts(w)}


def lang_of_dfa(d, length):
    return {w for w in words_up_to(d.n_symbols, length) if d.accepts(w)}


def random_nfa(rng, max_states=5, n_symbols=2, density=0.25):
    n = rng.randint(0, max_states)
    rows = tuple(tuple(sum(1 << t for t in range(n) if rng.random() < density)
                       for _ in range(n)) for _ in range(n_symbols))
    full = (1 << n) - 1
    return Nfa(n, n_symbols, rows, rng.getrandbits(n) & full if n else 0,
               rng.getrandbits(n) & full if n else 0)


def moore_minimize_size(d):
    """Independent Moore-refinement oracle for the minimal size."""
    # restrict to reachable
    reach = {d.initial}
    frontier = [d.initial]
    while frontier:
        q = frontier.pop()
        for sym in range(d.n_symbols):
            t = d.trans[sym][q]
            if t not in reach:
                reach.add(t)
                frontier.append(t)
    cls = {q: bool(d.final >> q & 1) for q in reach}
    while True:
        sig = {q: (cls[q],) + tuple(cls[d.trans[sym][q]]
                                    for sym in range(d.n_symbols))
               for q in reach}
        fresh = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        new_cls = {q: fresh[sig[q]] for q in reach}
        if len(set(new_cls.values())) == len(set(cls.values())):
            return len(set(new_cls.values()))
        cls = new_cls


# --- regex parsing ----------------------------------------------------------

def test_parse_ln_shape():
    ast = parse_regex("(0+1)*1(0+1)", BIN)
    assert ast == Concat(Concat(Star(Union(Sym(0), Sym(1))), Sym(1)),
                         Union(Sym(0), Sym(1)))


def test_parse_epsilon_and_empty():
    assert parse_regex("@", AB) == Epsilon()
    assert parse_regex("#", AB) == Epsilon() or parse_regex("#", AB)  # parses
    ctx = Context(AB)
    assert ctx.from_regex("@").has_epsilon()
    assert ctx.from_regex("#").is_empty()


def test_parse_multichar_symbols():
    a3 = Alphabet.of("a1", "a2", "a3")
    ast = parse_regex("a1(a2+a3)", a3)
    assert ast == Concat(Sym(0), Union(Sym(1), Sym(2)))


def test_parse_errors_carry_position():
    with pytest.raises(RegexError):
        parse_regex("(a+b", AB)
    with pytest.raises(RegexError):
        parse_regex("a+*", AB)
    with pytest.raises(RegexError):
        parse_regex("ac", AB)


# --- nfa construction -------------------------------------------------------

def test_nfa_from_regex_trivial():
    assert nfa_from_regex(parse_regex("#", AB), 2).n == 0
    sym = nfa_from_regex(parse_regex("a", AB), 2)
    assert sym.n == 2
    assert lang_of_nfa(sym, 3) == {(0,)}


def test_nfa_from_regex_vs_hand_built_l1():
    # minimal complete DFA for (0+1)*1(0+1): track the last two symbols
    d = Dfa(4, 2,
            ((0, 2, 0, 2),   # on 0: states 00,01,10,11 -> 00,10,00,10
             (1, 3, 1, 3)),  # on 1
            0, 0b1100)
    n = nfa_from_regex(parse_regex("(0+1)*1(0+1)", BIN), 2)
    assert lang_of_nfa(n, 7) == lang_of_dfa(d, 7)
    ctx = Context(BIN)
    assert ctx.handle(n) == ctx.handle(d)


def test_regex_language_oracle_small():
    ctx = Context(AB)
    h = ctx.from_regex("(a+b)*abb")
    expected = {w for w in words_up_to(2, 6) if len(w) >= 3 and w[-3:] == (0, 1, 1)}
    assert {w for w in words_up_to(2, 6) if h.accepts(w)} == expected


# --- reverse ----------------------------------------------------------------

def test_reverse_zero_state():
    z = Nfa(0, 1, ((),), 0, 0)
    assert reverse(z) == z


def test_reverse_single_word():
    ctx = Context(AB)
    n = nfa_from_regex(parse_regex("ab", AB), 2)
    r = reverse(n)
    assert lang_of_nfa(r, 4) == {(1, 0)}
    assert reverse(r) == n  # structural involution


def test_reverse_language_matches_wordwise():
    rng = random.Random(7)
    for _ in range(60):
        n = random_nfa(rng)
        r = reverse(n)
        fwd = lang_of_nfa(n, 5)
        assert lang_of_nfa(r, 5) == {tuple(reversed(w)) for w in fwd}


# --- rsc --------------------------------------------------------------------

def test_rsc_on_deterministic_input_is_isomorphic():
    d = Dfa(3, 2, ((1, 2, 0), (0, 0, 0)), 0, 0b100)
    n = d.as_nfa()
    out = rsc(n)
    assert out.n == 3
    assert lang_of_dfa(out, 6) == lang_of_dfa(d, 6)


def test_rsc_language_preserved_random():
    rng = random.Random(11)
    for _ in range(80):
        n = random_nfa(rng)
        d = rsc(n)
        bound = min(2 * d.n, 8)
        assert lang_of_dfa(d, bound) == lang_of_nfa(n, bound)


# --- minimize ---------------------------------------------------------------

def test_minimize_idempotent_and_matches_moore():
    rng = random.Random(13)
    for _ in range(80):
        n = random_nfa(rng, max_states=4)
        d = rsc(n)
        m = minimize(d)
        assert m.n <= d.n
        assert minimize(m) == m
        assert lang_of_dfa(m, 2 * d.n if d.n < 5 else 8) == \
            lang_of_dfa(d, 2 * d.n if d.n < 5 else 8)
        assert m.n == moore_minimize_size(d)


def test_minimize_an6_has_seven_states():
    # {a^n : n != 5}: residuals a^0..a^5 plus the all-accepting tail class
    ctx = Context(Alphabet.of("a"))
    h = ctx.from_regex("@+a+aa+aaa+aaaa+aaaaaaa*")
    assert h.dfa.n == 7
    assert all(h.accepts((0,) * k) == (k != 5) for k in range(12))


# --- handles ----------------------------------------------------------------

def test_handle_equality_is_language_equality():
    ctx = Context(AB)
    assert ctx.from_regex("(a+b)") == ctx.from_regex("(b+a)")
    assert ctx.from_regex("(a+b)") is ctx.from_regex("b+a")
    assert ctx.from_regex("#").dfa.n == 1
    assert ctx.from_regex("#").dfa.final == 0


def test_handle_m3_language_has_six_states():
    a3 = Alphabet.of("a1", "a2", "a3")
    ctx = Context(a3)
    h = ctx.from_regex("a1(a2+a3)+a2(a1+a3)+a3(a1+a2)")
    # brute-force residual count over the finite language
    lang = {w for w in words_up_to(3, 4) if h.accepts(w)}
    assert lang == {(i, j) for i in range(3) for j in range(3) if i != j}
    residuals = set()
    for u in words_up_to(3, 3):
        residuals.add(frozenset(w for w in words_up_to(3, 3)
                                if h.accepts(u + w)))
    assert len(residuals) == 6
    assert h.dfa.n == 6


def test_derivatives_of_a_aa():
    ctx = Context(Alphabet.of("a"))
    h = ctx.from_regex("a+aa")
    da = ctx.derivative(h, (0,), "left")
    assert da == ctx.from_regex("@+a")
    assert ctx.derivative(h, (), "left") == h
    assert ctx.derivative(h, (0,), "right") == ctx.from_regex("@+a")
    derivs = ctx.derivative_set(h)
    assert len(derivs) == 4
    assert set(derivs) == {h, ctx.from_regex("@+a"), ctx.from_regex("@"),
                           ctx.from_regex("#")}


def test_derivative_set_counts():
    ctx = Context(Alphabet.of("a"))
    assert len(ctx.derivative_set(ctx.empty())) == 1
    h = ctx.from_regex("@+a+aa+aaa+aaaa+aaaaaaa*")
    assert len(ctx.derivative_set(h)) == 7


def test_derivative_composition_law():
    rng = random.Random(3)
    ctx = Context(AB)
    for _ in range(40):
        h = ctx.handle(rsc(random_nfa(rng, max_states=4)))
        u = tuple(rng.randrange(2) for _ in range(rng.randrange(3)))
        v = tuple(rng.randrange(2) for _ in range(rng.randrange(3)))
        assert ctx.derivative(ctx.derivative(h, u, "left"), v, "left") == \
            ctx.derivative(h, u + v, "left")
        assert ctx.derivative(ctx.derivative(h, v, "right"), u, "right") == \
            ctx.derivative(h, u + v, "right")


def test_boolean_identities():
    rng = random.Random(5)
    ctx = Context(AB)
    for _ in range(30):
        a = ctx.handle(rsc(random_nfa(rng, max_states=3)))
        b = ctx.handle(rsc(random_nfa(rng, max_states=3)))
        c = ctx.handle(rsc(random_nfa(rng, max_states=3)))
        assert ctx.union(a, ctx.empty()) == a
        assert ctx.complement(ctx.complement(a)) == a
        # De Morgan
        assert ctx.complement(ctx.union(a, b)) == \
            ctx.intersect(ctx.complement(a), ctx.complement(b))
        # distributivity
        assert ctx.intersect(a, ctx.union(b, c)) == \
            ctx.union(ctx.intersect(a, b), ctx.intersect(a, c))


def test_union_of_derivative_with_l_for_a_aa():
    ctx = Context(Alphabet.of("a"))
    h = ctx.from_regex("a+aa")
    da = ctx.derivative(h, (0,), "left")
    assert ctx.union(da, h) == ctx.from_regex("@+a+aa")


def test_left_quotient_by_set():
    ctx = Context(AB)
    lang = ctx.from_regex("ab+aab+b")
    u = ctx.from_regex("a+aa")
    got = ctx.left_quotient_by_set(u, lang)
    expected = ctx.union(ctx.derivative(lang, (0,), "left"),
                         ctx.derivative(lang, (0, 0), "left"))
    assert got == expected


def test_subset_and_disjoint():
    ctx = Context(AB)
    a = ctx.from_regex("ab")
    b = ctx.from_regex("ab+ba")
    assert ctx.is_subset(a, b)
    assert not ctx.is_subset(b, a)
    assert ctx.is_disjoint(a, ctx.from_regex("ba"))
    assert not ctx.is_disjoint(a, b)


def test_reverse_lang_handle():
    ctx = Context(AB)
    h = ctx.from_regex("ab+aab")
    assert ctx.reverse_lang(h) == ctx.from_regex("ba+baa")
    rng = random.Random(17)
    for _ in range(25):
        h = ctx.handle(rsc(random_nfa(rng, max_states=4)))
        assert ctx.reverse_lang(ctx.reverse_lang(h)) == h
