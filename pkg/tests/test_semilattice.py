import random
from itertools import combinations

import pytest

from nsc.lang import BudgetExceeded, bits
from nsc.semilattice import (FiniteSemilattice, JslMorphism, adjoint, chain,
                             dual, from_union_closure, identity, iso_search,
                             join_irreducibles, meet_irreducibles,
                             powerset_lattice, predicates, prime_filters,
                             product)


M3_GENERATORS = [0b011, 0b101, 0b110]  # pairwise-union closure gives M_3


def m3():
    return from_union_closure(M3_GENERATORS)


def random_subsemilattice(rng, ground=4, n_gens=3):
    gens = [rng.getrandbits(ground) for _ in range(n_gens)]
    return from_union_closure(gens)


def brute_force_irreducibles(s):
    """j is irreducible iff no subset X avoiding j joins to j (incl. empty)."""
    out = []
    for j in range(s.n):
        others = [x for x in range(s.n) if x != j]
        reducible = False
        for r in range(len(others) + 1):
            for sub in combinations(others, r):
                if s.join_all(sub) == j:
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            out.append(j)
    return tuple(out)


def test_from_union_closure_empty():
    s = from_union_closure([])
    assert s.n == 1
    assert s.check()


def test_from_union_closure_m3():
    s = m3()
    assert s.n == 5
    assert s.check()
    assert s.labels == (0, 0b011, 0b101, 0b110, 0b111)
    assert len(s.irreducibles) == 3


def test_union_closure_of_a_aa_derivative_sets():
    # the four derivative bitsets of {a, aa} over ground set {eps, a, aa}
    # encoded as words present: L={a,aa}=0b110, {eps,a}=0b011, {eps}=0b001, {}
    s = from_union_closure([0b110, 0b011, 0b001, 0])
    assert s.n == 5


def test_union_closure_budget():
    with pytest.raises(BudgetExceeded):
        from_union_closure([1 << i for i in range(12)], budget=100)


def test_join_irreducibles_chain_and_boolean():
    assert join_irreducibles(chain(2)) == (1,)
    b3 = powerset_lattice(3)
    irr = join_irreducibles(b3)
    assert len(irr) == 3
    assert all(b3.labels[j].bit_count() == 1 for j in irr)


def test_join_irreducibles_match_brute_force():
    rng = random.Random(2)
    for _ in range(40):
        s = random_subsemilattice(rng)
        assert s.irreducibles == brute_force_irreducibles(s)


def test_q_of_a_aa_has_three_irreducibles():
    s = from_union_closure([0b110, 0b011, 0b001, 0])
    assert len(s.irreducibles) == 3
    assert len(meet_irreducibles(s)) == 3


def test_meet_irreducibles_mirror():
    assert len(meet_irreducibles(chain(2))) == 1
    assert len(meet_irreducibles(chain(4))) == 3
    assert len(meet_irreducibles(powerset_lattice(3))) == 3


def test_dual_involution_and_chain():
    c = chain(3)
    d = dual(c)
    assert d.bottom == c.top and d.top == c.bottom
    dd = dual(d)
    assert dd.up == c.up and dd.join == c.join and dd.bottom == c.bottom
    rng = random.Random(3)
    for _ in range(25):
        s = random_subsemilattice(rng)
        ds = dual(s)
        assert ds.check()
        dds = dual(ds)
        assert dds.up == s.up and dds.join == s.join


def test_dual_of_boolean_is_isomorphic():
    b = powerset_lattice(3)
    assert iso_search(b, dual(b)) is not None


def test_dual_of_m3_is_isomorphic_to_itself():
    s = m3()
    assert iso_search(s, dual(s)) is not None


def test_irreducibles_of_dual_are_meet_irreducibles():
    rng = random.Random(5)
    for _ in range(20):
        s = random_subsemilattice(rng)
        assert dual(s).irreducibles == meet_irreducibles(s)


def test_element_is_join_of_irreducibles_below():
    rng = random.Random(7)
    for _ in range(30):
        s = random_subsemilattice(rng)
        for x in range(s.n):
            assert s.join_all(s.irreducibles_below(x)) == x


def test_adjoint_identity_and_law():
    s = m3()
    assert adjoint(identity(s)).map == identity(dual(s)).map
    # f: 2 -> 2^2 sending 1 to the top {1,2}
    two = chain(2)
    b2 = powerset_lattice(2)
    f = JslMorphism(two, b2, (b2.bottom, b2.top))
    assert f.is_valid()
    g = adjoint(f)
    # adjointness: f(s) <= t iff s <= g(t), read in the original orders
    for sv in range(two.n):
        for tv in range(b2.n):
            assert b2.leq(f(sv), tv) == two.leq(sv, g(tv))


def enumerate_morphisms(a, b, limit=4000):
    """All join-preserving maps a -> b (brute force, tiny inputs only)."""
    from itertools import product as iproduct
    out = []
    assert b.n ** a.n <= limit
    for m in iproduct(range(b.n), repeat=a.n):
        f = JslMorphism(a, b, m)
        if f.is_valid():
            out.append(f)
    return out


def test_adjoint_involution_on_random_morphisms():
    rng = random.Random(11)
    pairs = 0
    while pairs < 12:
        a = random_subsemilattice(rng, ground=3, n_gens=2)
        b = random_subsemilattice(rng, ground=3, n_gens=2)
        if a.n > 4 or b.n > 4:
            continue
        for f in enumerate_morphisms(a, b):
            g = adjoint(adjoint(f))
            assert g.map == f.map
            # adjointness table
            for sv in range(a.n):
                for tv in range(b.n):
                    assert b.leq(f(sv), tv) == a.leq(sv, adjoint(f)(tv))
        pairs += 1


def test_adjoint_reverses_composition():
    rng = random.Random(13)
    done = 0
    while done < 8:
        a = random_subsemilattice(rng, ground=2, n_gens=2)
        b = random_subsemilattice(rng, ground=2, n_gens=2)
        c = random_subsemilattice(rng, ground=2, n_gens=2)
        fs = enumerate_morphisms(a, b)
        gs = enumerate_morphisms(b, c)
        for f in fs[:4]:
            for g in gs[:4]:
                lhs = adjoint(g.compose(f))
                rhs = adjoint(f).compose(adjoint(g))
                assert lhs.map == rhs.map
        done += 1


def test_prime_filters_small():
    one = from_union_closure([])
    assert prime_filters(one) == [(0, 0)]
    two = chain(2)
    filters = dict((s0, mask) for mask, s0 in prime_filters(two))
    assert filters[two.top] == 0
    assert filters[two.bottom] == 1 << two.top


def brute_force_prime_filters(s):
    """Upward-closed, join-prime subsets, enumerated directly."""
    out = set()
    for mask in range(1 << s.n):
        if any(s.up[x] & ~mask for x in bits(mask)):  # not upward closed
            continue
        # join-prime: join of any subset inside the filter must meet it;
        # equivalently join(X) in F implies X ∩ F nonempty, for every X
        prime = True
        others = list(range(s.n))
        for r in range(len(others) + 1):
            for sub in combinations(others, r):
                if (mask >> s.join_all(sub)) & 1 and \
                        not any(mask >> x & 1 for x in sub):
                    prime = False
                    break
            if not prime:
                break
        if prime:
            out.add(mask)
    return out


def test_prime_filters_are_exactly_the_copoint_sets():
    b2 = powerset_lattice(2)
    got = {mask for mask, _ in prime_filters(b2)}
    assert len(got) == 4
    assert got == brute_force_prime_filters(b2)
    s = m3()
    got = {mask for mask, _ in prime_filters(s)}
    assert got == brute_force_prime_filters(s)


def test_predicates_boolean_cube():
    p = predicates(powerset_lattice(3))
    assert p == {"is_distributive": True, "is_boolean": True,
                 "length": 3, "is_extremal": True}


def test_predicates_m3_not_distributive():
    p = predicates(m3())
    assert not p["is_distributive"]
    assert not p["is_boolean"]
    assert p["length"] == 2
    assert not p["is_extremal"]


def test_predicates_chain():
    for k in (1, 2, 5):
        p = predicates(chain(k))
        assert p["is_distributive"]
        assert p["length"] == k - 1
        assert p["is_extremal"]
        assert len(chain(k).irreducibles) == k - 1


def test_length_bounded_by_irreducibles():
    rng = random.Random(17)
    for _ in range(30):
        s = random_subsemilattice(rng)
        p = predicates(s)
        assert p["length"] <= len(s.irreducibles)
        assert p["is_extremal"] == (p["length"] == len(s.irreducibles))


def test_iso_search_identity_and_mismatch():
    s = m3()
    f = iso_search(s, s)
    assert f is not None and f.is_valid() and f.is_bijective()
    assert iso_search(powerset_lattice(2), chain(4)) is None


def test_iso_search_product_m3():
    two = chain(2)
    prod = product(two, m3(), two)
    assert prod.n == 20
    assert prod.check()
    # a relabeled copy must be found isomorphic
    other = product(two, from_union_closure([0b110, 0b011, 0b101]), two)
    f = iso_search(prod, other)
    assert f is not None and f.is_valid() and f.is_bijective()


def test_iso_search_respects_structure():
    rng = random.Random(23)
    for _ in range(20):
        s = random_subsemilattice(rng)
        f = iso_search(s, dual(dual(s)))
        assert f is not None
        for x in range(s.n):
            for y in range(s.n):
                assert s.leq(x, y) == s.leq(f(x), f(y))
