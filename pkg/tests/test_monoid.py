import random
from itertools import product as iproduct

import pytest

from nsc.jsl import minimal_jsl
from nsc.lang import Alphabet, Context, Dfa, Nfa, rsc
from nsc.monoid import (EquivariantMap, canonical_representation, degree,
                        is_cyclic_group, lift_to_unary,
                        monoid_quotient_compare, syntactic_monoid,
                        transition_monoid)


A1 = Alphabet.of("a")
AB = Alphabet.of("a", "b")


def random_nfa(rng, max_states=4, n_symbols=2, density=0.3):
    n = rng.randint(1, max_states)
    rows = tuple(tuple(sum(1 << t for t in range(n) if rng.random() < density)
                       for _ in range(n)) for _ in range(n_symbols))
    full = (1 << n) - 1
    return Nfa(n, n_symbols, rows, rng.getrandbits(n) & full or 1,
               rng.getrandbits(n) & full)


def words_up_to(n_symbols, length):
    for k in range(length + 1):
        yield from iproduct(range(n_symbols), repeat=k)


def test_trivial_monoid():
    d = Dfa(1, 2, ((0,), (0,)), 0, 1)
    m, view = transition_monoid(d)
    assert m.n == 1
    assert m.check()
    ctx = Context(AB)
    assert ctx.handle(view.dfa) == ctx.handle(d)


def test_transition_monoid_accepts_language():
    rng = random.Random(1)
    ctx = Context(AB)
    for _ in range(25):
        d = rsc(random_nfa(rng))
        m, view = transition_monoid(d)
        assert m.check()
        assert ctx.handle(view.dfa) == ctx.handle(d)


def test_word_class_is_morphism():
    rng = random.Random(2)
    ctx = Context(AB)
    for _ in range(15):
        d = rsc(random_nfa(rng, max_states=3))
        m, _ = transition_monoid(d)
        for _ in range(20):
            v = tuple(rng.randrange(2) for _ in range(rng.randrange(4)))
            w = tuple(rng.randrange(2) for _ in range(rng.randrange(4)))
            assert m.word_class(v + w) == m.mul[m.word_class(v)][m.word_class(w)]


def test_syntactic_congruence_definitional():
    # class equality must agree with the two-sided context test, whose
    # contexts need only range over the minimal dfa's state space
    rng = random.Random(3)
    ctx = Context(AB)
    for _ in range(8):
        h = ctx.handle(rsc(random_nfa(rng, max_states=3)))
        m, _ = syntactic_monoid(h)
        bound = h.dfa.n
        words = list(words_up_to(2, 3))
        contexts = list(words_up_to(2, min(4, 2 * bound)))
        for _ in range(40):
            v = rng.choice(words)
            w = rng.choice(words)
            same_class = m.word_class(v) == m.word_class(w)
            definitional = all(h.accepts(x + v + y) == h.accepts(x + w + y)
                               for x in contexts for y in contexts)
            assert same_class == definitional


def test_syntactic_monoid_sigma_star_and_aa_star():
    ctx1 = Context(A1)
    star, _ = syntactic_monoid(ctx1.from_regex("a*"))
    assert star.n == 1
    even, _ = syntactic_monoid(ctx1.from_regex("(aa)*"))
    assert even.n == 2
    ok, gen_word = is_cyclic_group(even)
    assert ok and gen_word == (0,)


def test_is_cyclic_group_cases():
    ctx = Context(A1)
    trivial, _ = syntactic_monoid(ctx.from_regex("a*"))
    assert is_cyclic_group(trivial)[0]
    # {a, aa}: has a zero element, not a group
    m, _ = syntactic_monoid(ctx.from_regex("a+aa"))
    assert not is_cyclic_group(m)[0]


def test_monoid_quotient_compare_iso_and_cover():
    ctx = Context(AB)
    h = ctx.from_regex("(a+b)*a")
    m1 = syntactic_monoid(h)[1]
    m2 = syntactic_monoid(h)[1]
    assert monoid_quotient_compare(m1, m2) == "iso"
    # transition monoid of a redundant dfa covers the syntactic monoid
    d = h.dfa
    doubled = Dfa(d.n * 2, 2,
                  tuple(tuple(d.trans[sym][q % d.n] + (d.n if q < d.n else 0)
                              for q in range(2 * d.n))
                        for sym in range(2)),
                  d.initial, sum(1 << q for q in range(2 * d.n)
                                 if d.final >> (q % d.n) & 1))
    big = transition_monoid(doubled)[1]
    rel = monoid_quotient_compare(big, syntactic_monoid(h)[1])
    assert rel in ("m1_covers_m2", "iso")
    if big.monoid.n != syntactic_monoid(h)[0].n:
        assert rel == "m1_covers_m2"


def test_monoid_quotient_compare_incomparable():
    ctx = Context(AB)
    m1 = syntactic_monoid(ctx.from_regex("a"))[1]
    m2 = syntactic_monoid(ctx.from_regex("(a+b)(a+b)"))[1]
    assert monoid_quotient_compare(m1, m2) == "incomparable"


def test_canonical_representation_unit_and_degree():
    ctx = Context(A1)
    h = ctx.from_regex("a+aa")
    rep = canonical_representation(ctx, h)
    assert rep.action(rep.monoid.unit) == tuple(range(rep.carrier.n))
    assert degree(rep) == 3
    # action composes along the automaton convention: first v, then w
    for v in words_up_to(1, 3):
        for w in words_up_to(1, 3):
            tv, tw = rep.word_action(v), rep.word_action(w)
            assert rep.word_action(v + w) == tuple(tw[x] for x in tv)


def test_canonical_representation_well_defined_on_classes():
    rng = random.Random(5)
    ctx = Context(AB)
    for _ in range(8):
        h = ctx.handle(rsc(random_nfa(rng, max_states=3)))
        rep = canonical_representation(ctx, h)
        m = rep.monoid
        for v in words_up_to(2, 3):
            assert rep.word_action(v) == rep.action(m.word_class(v))


def test_identity_is_equivariant():
    ctx = Context(A1)
    rep = canonical_representation(ctx, ctx.from_regex("a+aa"))
    f = EquivariantMap(rep, rep, tuple(range(rep.carrier.n)))
    assert f.is_valid()


def test_lift_to_unary_unary_identity():
    ctx = Context(A1)
    h = ctx.from_regex("(aa)*")
    lift = lift_to_unary(ctx, h, (0,))
    assert lift.iso.is_bijective()
    assert lift.lang0.dfa.n == h.dfa.n
    # the lifted language is the same up to renaming the letter
    for k in range(8):
        assert lift.lang0.accepts((0,) * k) == h.accepts((0,) * k)


def test_lift_to_unary_ab_star():
    ctx = Context(AB)
    h = ctx.from_regex("(ab)*")
    m, _ = syntactic_monoid(h)
    ok, w0 = is_cyclic_group(m)
    if not ok:
        pytest.skip("syntactic monoid of (ab)* is not a group here")
    lift = lift_to_unary(ctx, h, w0)
    assert lift.iso.is_valid() and lift.iso.is_bijective()


def test_lift_to_unary_even_length_words():
    ctx = Context(AB)
    h = ctx.from_regex("((a+b)(a+b))*")
    m, _ = syntactic_monoid(h)
    ok, w0 = is_cyclic_group(m)
    assert ok and m.n == 2
    lift = lift_to_unary(ctx, h, w0)
    assert lift.iso.is_valid() and lift.iso.is_bijective()
    # lifted language is the even powers of the fresh letter
    for k in range(8):
        assert lift.lang0.accepts((0,) * k) == (k % 2 == 0)


def test_lift_to_unary_rejects_non_groups():
    ctx = Context(A1)
    with pytest.raises(ValueError):
        lift_to_unary(ctx, ctx.from_regex("a+aa"), (0,))


def test_degree_of_chain_and_powerset_carriers():
    from nsc.semilattice import chain, powerset_lattice
    from nsc.monoid import BooleanRepresentation, FiniteMonoid
    one = FiniteMonoid(1, ((0,),), 0, (0,), ((),))
    for h in (1, 3, 5):
        rep = BooleanRepresentation(one, chain(h + 1),
                                    (tuple(range(h + 1)),))
        assert degree(rep) == h
    for k in (1, 2, 4):
        rep = BooleanRepresentation(one, powerset_lattice(k),
                                    (tuple(range(2 ** k)),))
        assert degree(rep) == k
