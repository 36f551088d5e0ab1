"""Transition monoids, syntactic monoids, and boolean representations.

Monoid elements are the extended transition maps of a dfa, deduplicated by
table.  The multiplication convention matches the automaton reading order:
``mul[i][j]`` applies i first, then j, so the class of a word uv is
``mul[class(u)][class(v)]``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .lang import BudgetExceeded, Context, Dfa, LanguageHandle, Word


def transformation_closure(d: Dfa, budget: int = 1 << 16):
    """All distinct maps delta_w of a dfa, in BFS order from the identity,
    with a shortest witness word per map."""
    ident = tuple(range(d.n))
    gens = [tuple(d.trans[sym][q] for q in range(d.n))
            for sym in range(d.n_symbols)]
    tables = [ident]
    witnesses = [()]
    index = {ident: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for sym, g in enumerate(gens):
            h = tuple(g[x] for x in tables[i])  # read witness, then sym
            if h not in index:
                if len(tables) >= budget:
                    raise BudgetExceeded(
                        f"transition monoid exceeds budget {budget}")
                index[h] = len(tables)
                tables.append(h)
                witnesses.append(witnesses[i] + (sym,))
                queue.append(index[h])
    return tables, witnesses


@dataclass(frozen=True)
class FiniteMonoid:
    n: int
    mul: tuple                     # mul[i][j]: i first, then j
    unit: int
    gen: tuple                     # image of each alphabet symbol
    witnesses: tuple               # shortest word mapping to each element

    def word_class(self, word: Word) -> int:
        m = self.unit
        for a in word:
            m = self.mul[m][self.gen[a]]
        return m

    def power(self, x: int, k: int) -> int:
        out = self.unit
        for _ in range(k):
            out = self.mul[out][x]
        return out

    def check(self) -> bool:
        for i in range(self.n):
            assert self.mul[self.unit][i] == i == self.mul[i][self.unit]
        for i in range(self.n):
            for j in range(self.n):
                for k in range(self.n):
                    assert self.mul[self.mul[i][j]][k] == \
                        self.mul[i][self.mul[j][k]]
        for i in range(self.n):
            assert self.word_class(self.witnesses[i]) == i
        return True


@dataclass(frozen=True)
class MonoidAsDfa:
    """A monoid viewed as a dfa: unit initial, right multiplication by the
    generators as transitions, a chosen accepting subset."""

    monoid: FiniteMonoid
    dfa: Dfa = field(repr=False)

    def with_finals(self, accepting_mask: int) -> Dfa:
        d = self.dfa
        return Dfa(d.n, d.n_symbols, d.trans, d.initial, accepting_mask)


def transition_monoid(d: Dfa, budget: int = 1 << 16):
    """The transition monoid of ``d`` plus its dfa view accepting L(d)."""
    tables, witnesses = transformation_closure(d, budget)
    index = {t: i for i, t in enumerate(tables)}
    n = len(tables)
    mul = tuple(tuple(index[tuple(tables[j][x] for x in tables[i])]
                      for j in range(n)) for i in range(n))
    gen = tuple(index[tuple(d.trans[sym][q] for q in range(d.n))]
                for sym in range(d.n_symbols))
    monoid = FiniteMonoid(n, mul, index[tuple(range(d.n))], gen,
                          tuple(witnesses))
    rows = tuple(tuple(mul[m][gen[sym]] for m in range(n))
                 for sym in range(d.n_symbols))
    accepting = sum(1 << m for m in range(n)
                    if d.final >> tables[m][d.initial] & 1)
    view = MonoidAsDfa(monoid, Dfa(n, d.n_symbols, rows, monoid.unit,
                                   accepting))
    return monoid, view


def syntactic_monoid(lang: LanguageHandle, budget: int = 1 << 16):
    """Syn(L): the transition monoid of the minimal dfa, with its dfa view."""
    return transition_monoid(lang.dfa, budget)


def _forced_quotient_map(src: FiniteMonoid, dst: FiniteMonoid):
    """The unique generator-compatible map src -> dst, or None.

    Both monoids must be generated over the same alphabet; the map sends the
    class of each word in src to its class in dst and exists iff src's
    congruence refines dst's.
    """
    assert len(src.gen) == len(dst.gen)
    out = [None] * src.n
    out[src.unit] = dst.unit
    queue = deque([src.unit])
    while queue:
        x = queue.popleft()
        for a in range(len(src.gen)):
            nxt = src.mul[x][src.gen[a]]
            img = dst.mul[out[x]][dst.gen[a]]
            if out[nxt] is None:
                out[nxt] = img
                queue.append(nxt)
            elif out[nxt] != img:
                return None
    assert all(v is not None for v in out)  # src is generated
    return tuple(out)


def monoid_quotient_compare(m1: MonoidAsDfa, m2: MonoidAsDfa) -> str:
    """Compare two recognizing monoids through their canonical surjections.

    Returns "iso", "m1_covers_m2", "m2_covers_m1", or "incomparable"; an
    isomorphism is declared when the forced map exists and the sizes agree
    (surjectivity onto a set of equal size).
    """
    a, b = m1.monoid, m2.monoid
    fwd = _forced_quotient_map(a, b)
    if fwd is not None and not _accepting_compatible(m1, m2, fwd):
        fwd = None
    bwd = _forced_quotient_map(b, a)
    if bwd is not None and not _accepting_compatible(m2, m1, bwd):
        bwd = None
    if fwd is not None and a.n == b.n:
        return "iso"
    if bwd is not None and a.n == b.n:
        return "iso"
    if fwd is not None:
        return "m1_covers_m2"
    if bwd is not None:
        return "m2_covers_m1"
    return "incomparable"


def _accepting_compatible(src: MonoidAsDfa, dst: MonoidAsDfa, mapping) -> bool:
    for x in range(src.monoid.n):
        if bool(src.dfa.final >> x & 1) != bool(dst.dfa.final >> mapping[x] & 1):
            return False
    return True


def is_cyclic_group(m: FiniteMonoid):
    """(is it a cyclic group, a witness word whose class generates)."""
    invertible = all(any(m.mul[x][y] == m.unit and m.mul[y][x] == m.unit
                         for y in range(m.n)) for x in range(m.n))
    if not invertible:
        return False, None
    for x in range(m.n):
        seen = set()
        p = m.unit
        while p not in seen:
            seen.add(p)
            p = m.mul[p][x]
        if len(seen) == m.n:
            return True, m.witnesses[x]
    return False, None


# --- boolean representations ---------------------------------------------------

@dataclass(frozen=True)
class BooleanRepresentation:
    """A monoid acting on a finite semilattice by join-preserving maps.

    Actions are stored on the alphabet generators; the action of a monoid
    element is the fold of its witness word (verified well-defined on
    construction for the canonical representation)."""

    monoid: FiniteMonoid
    carrier: object                  # FiniteSemilattice
    gen_action: tuple                # per symbol: endomorphism table

    def word_action(self, word: Word) -> tuple:
        table = tuple(range(self.carrier.n))
        for a in word:
            g = self.gen_action[a]
            table = tuple(g[x] for x in table)
        return table

    def action(self, m: int) -> tuple:
        return self.word_action(self.monoid.witnesses[m])

    @property
    def degree(self) -> int:
        return len(self.carrier.irreducibles)


def degree(rep: BooleanRepresentation) -> int:
    return rep.degree


@dataclass(frozen=True)
class EquivariantMap:
    """A semilattice morphism commuting with two representations of the same
    monoid; equivariance is checked on the alphabet generators, which
    generate the monoid."""

    rep1: BooleanRepresentation
    rep2: BooleanRepresentation
    map: tuple

    def is_valid(self) -> bool:
        from .semilattice import JslMorphism
        f = JslMorphism(self.rep1.carrier, self.rep2.carrier, self.map)
        if not f.is_valid():
            return False
        for a in range(len(self.rep1.gen_action)):
            g1, g2 = self.rep1.gen_action[a], self.rep2.gen_action[a]
            for x in range(self.rep1.carrier.n):
                if self.map[g1[x]] != g2[self.map[x]]:
                    return False
        return True


def canonical_representation(ctx: Context, lang: LanguageHandle,
                             budget: int = 1 << 16) -> BooleanRepresentation:
    """The syntactic monoid acting on the union-of-derivatives semilattice by
    K -> w^{-1}K.  Well-definedness (congruent words act equally) is verified
    during the closure walk."""
    from .jsl import minimal_jsl
    monoid, _ = syntactic_monoid(lang, budget)
    auto = minimal_jsl(ctx, lang)
    rep = BooleanRepresentation(monoid, auto.s, auto.delta)
    # walk the generator graph; any revisit must agree with the stored table
    tables = {monoid.unit: tuple(range(auto.s.n))}
    queue = deque([monoid.unit])
    while queue:
        m = queue.popleft()
        for a, g in enumerate(auto.delta):
            nxt = monoid.mul[m][monoid.gen[a]]
            table = tuple(g[x] for x in tables[m])
            if nxt in tables:
                assert tables[nxt] == table, \
                    "congruent words must induce the same endomorphism"
            else:
                tables[nxt] = table
                queue.append(nxt)
    return rep


def canonical_free(ctx: Context, lang: LanguageHandle) -> BooleanRepresentation:
    """Word-indexed access to the canonical representation (the action of a
    word is the fold of the per-symbol derivative maps)."""
    return canonical_representation(ctx, lang)


@dataclass(frozen=True)
class UnaryLift:
    lang0: LanguageHandle            # over a fresh unary alphabet
    ctx0: Context
    iso: object                      # JslMorphism Q(L0) -> Q(L)
    generator_word: Word
    letter_powers: tuple             # n_a per original symbol


def lift_to_unary(ctx: Context, lang: LanguageHandle, w0: Word) -> UnaryLift:
    """Transport a language with cyclic-group syntactic monoid to a unary
    language with the same derivative semilattice, via the generator w0."""
    from .lang import Alphabet
    from .jsl import minimal_jsl
    from .semilattice import JslMorphism

    monoid, view = syntactic_monoid(lang)
    ok, _ = is_cyclic_group(monoid)
    if not ok:
        raise ValueError("syntactic monoid is not a cyclic group")
    g0 = monoid.word_class(w0)
    powers = []
    p = monoid.unit
    while True:
        powers.append(p)
        p = monoid.mul[p][g0]
        if p == monoid.unit:
            break
    if len(set(powers)) != monoid.n:
        raise ValueError("the class of w0 does not generate the "
                         "syntactic group")
    d = len(powers)
    ctx0 = Context(Alphabet.of("a0"))
    cycle = Dfa(d, 1, (tuple((k + 1) % d for k in range(d)),), 0,
                sum(1 << k for k in range(d)
                    if view.dfa.final >> powers[k] & 1))
    lang0 = ctx0.handle(cycle)

    q0 = minimal_jsl(ctx0, lang0)
    q = minimal_jsl(ctx, lang)
    # match the derivative (a0^k)^{-1}L0 with (w0^k)^{-1}L, then extend by joins
    elem_of_label = {h: i for i, h in enumerate(q.lang_labels)}
    target = []
    word = ()
    for k in range(lang0.dfa.n):
        shifted = ctx0.derivative(lang0, (0,) * k, "left")
        src = q0.lang_labels.index(shifted)
        tgt = elem_of_label[ctx.derivative(lang, word, "left")]
        target.append((src, tgt))
        word = word + tuple(w0)
    mapping = [None] * q0.s.n
    for x in range(q0.s.n):
        below = [tgt for src, tgt in target if q0.s.leq(src, x)]
        mapping[x] = q.s.join_all(below)
    iso = JslMorphism(q0.s, q.s, tuple(mapping))
    assert iso.is_valid() and iso.is_bijective(), "lift must be an isomorphism"

    # square 1: the unary letter acts as w0 does
    w0_action = _fold_action(q.delta, w0)
    for x in range(q0.s.n):
        assert mapping[q0.delta[0][x]] == w0_action[mapping[x]]
    # square 2: each original letter acts as some power of the unary letter
    letter_powers = []
    for a in range(len(ctx.alphabet)):
        n_a = next(k for k in range(d)
                   if monoid.gen[a] == powers[k])
        letter_powers.append(n_a)
        for x in range(q0.s.n):
            lhs = x
            for _ in range(n_a):
                lhs = q0.delta[0][lhs]
            assert mapping[lhs] == q.delta[a][mapping[x]]
    return UnaryLift(lang0, ctx0, iso, tuple(w0), tuple(letter_powers))


def _fold_action(delta, word):
    n = len(delta[0]) if delta else 0
    table = tuple(range(n))
    for a in word:
        g = delta[a]
        table = tuple(g[x] for x in table)
    return table
