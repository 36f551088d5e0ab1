"""Deterministic automata over finite join-semilattices.

A ``JslDfa`` is a semilattice of states, one join-preserving transition
endomorphism per symbol, an initial element, and final states given by the
prime filter {x : x not<= cofinal}.  The minimal acceptor of a language L has
as states all finite unions of left derivatives of L; the boolean closures of
left and two-sided derivatives are materialized as powersets of their atoms.

Fragments of the (infinite) automaton of all languages are always represented
as finitely labeled objects: every "simple" automaton here carries a language
handle per state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .lang import BudgetExceeded, Context, Dfa, LanguageHandle, Nfa, bits, \
    reverse
from .monoid import transformation_closure
from .semilattice import FiniteSemilattice, JslMorphism, adjoint, dual, \
    from_union_closure, powerset_lattice


@dataclass(frozen=True)
class JslDfa:
    s: FiniteSemilattice
    delta: tuple               # per symbol: tuple mapping element -> element
    init: int
    cofinal: int
    ctx: Context = field(default=None, repr=False, compare=False)
    lang_labels: tuple = field(default=None, compare=False)  # handle per state

    @property
    def n_symbols(self) -> int:
        return len(self.delta)

    def finals_mask(self) -> int:
        return ((1 << self.s.n) - 1) & ~self.s.down[self.cofinal]

    def is_final(self, x: int) -> bool:
        return not self.s.leq(x, self.cofinal)

    def step(self, x: int, sym: int) -> int:
        return self.delta[sym][x]

    def run(self, word, start=None) -> int:
        x = self.init if start is None else start
        for a in word:
            x = self.delta[a][x]
        return x

    def accepts(self, word) -> bool:
        return self.is_final(self.run(word))

    def as_dfa(self, start=None, finals=None) -> Dfa:
        return Dfa(self.s.n, self.n_symbols, self.delta,
                   self.init if start is None else start,
                   self.finals_mask() if finals is None else finals)

    def check(self) -> bool:
        """Transition morphisms preserve joins and the bottom; the stored
        cofinal is the largest non-final element."""
        s = self.s
        for row in self.delta:
            assert row[s.bottom] == s.bottom
            for x in range(s.n):
                for y in range(x, s.n):
                    assert row[s.join[x][y]] == s.join[row[x]][row[y]]
        non_final = [x for x in range(s.n) if s.leq(x, self.cofinal)]
        assert s.join_all(non_final) == self.cofinal
        return True


@dataclass(frozen=True)
class JslDfaMorphism:
    dom: JslDfa = field(repr=False)
    cod: JslDfa = field(repr=False)
    map: tuple

    def __call__(self, x):
        return self.map[x]

    def underlying(self) -> JslMorphism:
        return JslMorphism(self.dom.s, self.cod.s, self.map)

    def is_valid(self) -> bool:
        if not self.underlying().is_valid():
            return False
        if self.map[self.dom.init] != self.cod.init:
            return False
        for x in range(self.dom.s.n):
            if self.dom.is_final(x) != self.cod.is_final(self.map[x]):
                return False
        for sym in range(self.dom.n_symbols):
            for x in range(self.dom.s.n):
                if self.map[self.dom.delta[sym][x]] != \
                        self.cod.delta[sym][self.map[x]]:
                    return False
        return True

    def is_iso(self) -> bool:
        return self.is_valid() and self.dom.s.n == self.cod.s.n and \
            len(set(self.map)) == self.dom.s.n


def _cofinal_of(s: FiniteSemilattice, final_pred) -> int:
    """Largest non-final element; valid because finals form a prime filter."""
    return s.join_all([x for x in range(s.n) if not final_pred(x)])


# --- the powerset lift -------------------------------------------------------

def powerset(n: Nfa, ctx: Context = None, budget: int = 1 << 20) -> JslDfa:
    """Subset construction as a JSL-dfa on the full powerset of n's states."""
    if 1 << n.n > budget:
        raise BudgetExceeded(f"powerset of {n.n} states exceeds budget {budget}")
    sl = powerset_lattice(n.n) if n.n else from_union_closure([])
    index = {label: i for i, label in enumerate(sl.labels)}
    delta = tuple(tuple(index[n.step(sl.labels[e], sym)] for e in range(sl.n))
                  for sym in range(n.n_symbols))
    full = (1 << n.n) - 1
    return JslDfa(sl, delta, index[n.initial], index[full & ~n.final], ctx)


def irreducible_nfa(a: JslDfa) -> Nfa:
    """The equivalent nfa on the join-irreducibles of the state semilattice."""
    irr = a.s.irreducibles
    pos = {j: i for i, j in enumerate(irr)}
    rows = []
    for sym in range(a.n_symbols):
        row = [0] * len(irr)
        for i, src in enumerate(irr):
            image = a.delta[sym][src]
            for j, tgt in enumerate(irr):
                if a.s.leq(tgt, image):
                    row[i] |= 1 << j
        rows.append(tuple(row))
    initial = sum(1 << i for i, j in enumerate(irr) if a.s.leq(j, a.init))
    final = sum(1 << i for i, j in enumerate(irr) if a.is_final(j))
    return Nfa(len(irr), a.n_symbols, tuple(rows), initial, final)


def state_language(a: JslDfa, x: int) -> LanguageHandle:
    """The exact language accepted from element x."""
    assert a.ctx is not None, "state languages need an analysis context"
    if a.lang_labels is not None:
        return a.lang_labels[x]
    return a.ctx.handle(a.as_dfa(start=x))


def jsl_language(a: JslDfa) -> LanguageHandle:
    return state_language(a, a.init)


def dual_state_language(a: JslDfa, x: int) -> LanguageHandle:
    """Language of state x in the dual automaton, computed on a's own data:
    the words w with delta_{reverse(w)}(init) not below x."""
    finals = sum(1 << y for y in range(a.s.n) if not a.s.leq(y, x))
    fwd = Dfa(a.s.n, a.n_symbols, a.delta, a.init, finals)
    return a.ctx.handle(reverse(fwd.as_nfa()))


# --- the minimal JSL-dfa ------------------------------------------------------

@dataclass(frozen=True)
class AtomVector:
    """Shared atom bookkeeping for algebras whose elements are atom unions.

    ``dfa`` recognizes atom membership: each atom is the set of words sent to
    one dfa state by the profile map; ``atom_of_word`` and per-atom language
    handles connect masks back to languages.
    """

    ctx: Context = field(repr=False)
    dfa: Dfa = field(repr=False)          # states index the atoms
    reversed_reading: bool                # True: words are read reversed
    witnesses: tuple                      # one member word per atom
    epsilon_atom: int

    @property
    def n_atoms(self) -> int:
        return self.dfa.n

    def atom_of_word(self, word) -> int:
        return self.dfa.run(tuple(reversed(word)) if self.reversed_reading
                            else word)

    def mask_language(self, mask: int) -> LanguageHandle:
        """The union of the atoms in ``mask`` as a language handle."""
        d = Dfa(self.dfa.n, self.dfa.n_symbols, self.dfa.trans,
                self.dfa.initial, mask)
        if self.reversed_reading:
            return self.ctx.handle(reverse(d.as_nfa()))
        return self.ctx.handle(d)

    def mask_of_language(self, lang: LanguageHandle) -> int:
        """Atoms whose witness lies in ``lang`` (the atom set of ``lang``
        whenever ``lang`` is a union of atoms)."""
        return sum(1 << t for t, w in enumerate(self.witnesses)
                   if lang.accepts(w))

    def contains(self, lang: LanguageHandle) -> bool:
        """Exact membership of ``lang`` in the algebra of atom unions."""
        return self.mask_language(self.mask_of_language(lang)) == lang


def blq_atoms(ctx: Context, lang: LanguageHandle) -> AtomVector:
    """Atoms of the boolean closure of the left derivatives of ``lang``:
    one per state of the minimal dfa of the reverse language."""
    rev_handle = ctx.reverse_lang(lang)
    rd = rev_handle.dfa
    rev_witnesses = ctx.derivative_witnesses(rev_handle)
    witnesses = tuple(tuple(reversed(v)) for v in rev_witnesses)
    return AtomVector(ctx, rd, True, witnesses, rd.initial)


def blrq_atoms(ctx: Context, lang: LanguageHandle) -> AtomVector:
    """Atoms of the boolean closure of the two-sided derivatives of ``lang``:
    the syntactic congruence classes, one per syntactic monoid element."""
    tables, witnesses = transformation_closure(lang.dfa)
    index = {t: i for i, t in enumerate(tables)}
    gen = [index[tuple(lang.dfa.trans[sym][q] for q in range(lang.dfa.n))]
           for sym in range(lang.dfa.n_symbols)]
    # right-multiplication dfa over the monoid elements: m -a-> m . gen_a
    rows = tuple(tuple(index[tuple(tables[gen[sym]][q] for q in tables[m])]
                       for m in range(len(tables)))
                 for sym in range(lang.dfa.n_symbols))
    unit = index[tuple(range(lang.dfa.n))]
    d = Dfa(len(tables), lang.dfa.n_symbols, rows, unit, 0)
    return AtomVector(ctx, d, False, tuple(witnesses), unit)


def _atoms_jsldfa(atoms: AtomVector, init_mask: int, deriv_preimage,
                  budget: int, with_labels: bool) -> JslDfa:
    """Powerset-of-atoms JSL-dfa with K -> a^{-1}K transitions."""
    m = atoms.n_atoms
    if 1 << m > budget:
        raise BudgetExceeded(
            f"boolean algebra on {m} atoms exceeds budget {budget}")
    sl = powerset_lattice(m)
    index = {label: i for i, label in enumerate(sl.labels)}
    delta = tuple(tuple(index[deriv_preimage(sym, sl.labels[e])]
                        for e in range(sl.n))
                  for sym in range(atoms.dfa.n_symbols))
    full = (1 << m) - 1
    cofinal = index[full & ~(1 << atoms.epsilon_atom)]
    labels = None
    if with_labels:
        labels = tuple(atoms.mask_language(label) for label in sl.labels)
    return JslDfa(sl, delta, index[init_mask], cofinal, atoms.ctx, labels)


def blq(ctx: Context, lang: LanguageHandle, budget: int = 1 << 12,
        with_labels: bool = True) -> JslDfa:
    """The boolean closure of the left derivatives, as a JSL-dfa."""
    atoms = blq_atoms(ctx, lang)
    rd = atoms.dfa

    def preimage(sym, mask):
        return sum(1 << q for q in range(rd.n) if mask >> rd.trans[sym][q] & 1)

    out = _atoms_jsldfa(atoms, rd.final, preimage, budget, with_labels)
    if with_labels:
        assert out.lang_labels[out.init] == lang
    return out


def blrq(ctx: Context, lang: LanguageHandle, budget: int = 1 << 12,
         with_labels: bool = True) -> JslDfa:
    """The boolean closure of the two-sided derivatives, as a JSL-dfa."""
    atoms = blrq_atoms(ctx, lang)
    md = atoms.dfa
    accepting = sum(1 << i for i, w in enumerate(atoms.witnesses)
                    if lang.accepts(w))
    # a^{-1}(class union T) = preimage of T under left multiplication
    tables, _ = transformation_closure(lang.dfa)
    index = {t: i for i, t in enumerate(tables)}
    left_mult = []
    for sym in range(md.n_symbols):
        gen = md.trans[sym][md.initial]  # class of the one-letter word
        left_mult.append(tuple(index[tuple(tables[m][q] for q in tables[gen])]
                               for m in range(md.n)))

    def preimage(sym, mask):
        return sum(1 << q for q in range(md.n)
                   if mask >> left_mult[sym][q] & 1)

    out = _atoms_jsldfa(atoms, accepting, preimage, budget, with_labels)
    if with_labels:
        assert out.lang_labels[out.init] == lang
    return out


def minimal_jsl(ctx: Context, lang: LanguageHandle,
                budget: int = 1 << 20) -> JslDfa:
    """The minimal JSL-dfa of ``lang``: all finite unions of left derivatives,
    with K -> a^{-1}K transitions, initial state ``lang``, finals the K
    containing the empty word."""
    atoms = blq_atoms(ctx, lang)
    rd = atoms.dfa
    d = lang.dfa
    masks = []
    for q in range(d.n):
        masks.append(sum(1 << t for t, w in enumerate(atoms.witnesses)
                         if d.accepts(w, start=q)))
    sl = from_union_closure(masks, budget)
    index = {label: i for i, label in enumerate(sl.labels)}
    delta = []
    for sym in range(d.n_symbols):
        row = []
        for e in range(sl.n):
            pre = sum(1 << q for q in range(rd.n)
                      if sl.labels[e] >> rd.trans[sym][q] & 1)
            row.append(index[pre])
        delta.append(tuple(row))
    init = index[masks[d.initial]]
    eps_bit = 1 << atoms.epsilon_atom
    cofinal = sl.join_all([e for e in range(sl.n)
                           if not sl.labels[e] & eps_bit])
    labels = tuple(atoms.mask_language(label) for label in sl.labels)
    out = JslDfa(sl, tuple(delta), init, cofinal, ctx, labels)
    assert labels[init] == lang and labels[sl.bottom].is_empty()
    return out


# --- reachability, simplicity, duality ----------------------------------------

def reachable_part(a: JslDfa):
    """Smallest subautomaton: all joins of transition images of the initial
    element.  Returns (part, embedding)."""
    seen = {a.init}
    queue = deque([a.init])
    while queue:
        x = queue.popleft()
        for sym in range(a.n_symbols):
            t = a.delta[sym][x]
            if t not in seen:
                seen.add(t)
                queue.append(t)
    # close under joins; the empty join (the bottom) always belongs
    closed = set(seen) | {a.s.bottom}
    frontier = list(closed)
    while frontier:
        x = frontier.pop()
        for y in list(closed):
            j = a.s.join[x][y]
            if j not in closed:
                closed.add(j)
                frontier.append(j)
    keep = sorted(closed)
    remap = {old: i for i, old in enumerate(keep)}
    n = len(keep)
    up = tuple(sum(1 << remap[j] for j in bits(a.s.up[i]) if j in remap)
               for i in keep)
    join = tuple(tuple(remap[a.s.join[i][j]] for j in keep) for i in keep)
    labels = None
    if a.s.labels is not None:
        labels = tuple(a.s.labels[i] for i in keep)
    sl = FiniteSemilattice(n, up, join, remap[a.s.bottom], labels)
    delta = tuple(tuple(remap[a.delta[sym][i]] for i in keep)
                  for sym in range(a.n_symbols))
    cofinal = _cofinal_of(sl, lambda x: not a.s.leq(keep[x], a.cofinal))
    lang_labels = None
    if a.lang_labels is not None:
        lang_labels = tuple(a.lang_labels[i] for i in keep)
    part = JslDfa(sl, delta, remap[a.init], cofinal, a.ctx, lang_labels)
    embedding = JslDfaMorphism(part, a, tuple(keep))
    return part, embedding


def simplification(a: JslDfa):
    """Smallest quotient: states become their accepted languages.
    Returns (simple, quotient)."""
    assert a.ctx is not None
    langs = [state_language(a, x) if a.lang_labels is None else a.lang_labels[x]
             for x in range(a.s.n)]
    distinct = sorted(set(langs), key=lambda h: h.sort_key())
    index = {h: i for i, h in enumerate(distinct)}
    cls = [index[h] for h in langs]
    rep = {}
    for x in range(a.s.n):
        rep.setdefault(cls[x], x)
    n = len(distinct)
    join = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            join[i][j] = cls[a.s.join[rep[i]][rep[j]]]
    up = [0] * n
    for i in range(n):
        for j in range(n):
            if join[i][j] == j:
                up[i] |= 1 << j
    bottom = cls[a.s.bottom]
    sl = FiniteSemilattice(n, tuple(up), tuple(tuple(r) for r in join),
                           bottom, None)
    delta = []
    for sym in range(a.n_symbols):
        row = [None] * n
        for x in range(a.s.n):
            image = cls[a.delta[sym][x]]
            assert row[cls[x]] in (None, image), \
                "transitions must be well-defined on language classes"
            row[cls[x]] = image
        delta.append(tuple(row))
    cofinal = cls[a.cofinal]
    simple = JslDfa(sl, tuple(delta), cls[a.init], cofinal, a.ctx,
                    tuple(distinct))
    quotient = JslDfaMorphism(a, simple, tuple(cls))
    return simple, quotient


def dual_auto(a: JslDfa) -> JslDfa:
    """The dual automaton: order reversed, transitions replaced by adjoints,
    initial and cofinal swapped.  Accepts the reverse language."""
    sl = dual(a.s)
    delta = []
    for sym in range(a.n_symbols):
        f = JslMorphism(a.s, a.s, a.delta[sym])
        delta.append(adjoint(f).map)
    return JslDfa(sl, tuple(delta), a.cofinal, a.init, a.ctx)


def dual_powerset_fast(n: Nfa, ctx: Context = None,
                       budget: int = 1 << 20) -> JslDfa:
    """Fast dual of powerset(n): the powerset of the reversed nfa, which is
    isomorphic to the generic dual via elementwise complement."""
    return powerset(reverse(n), ctx, budget)


def powerset_complement_map(a_dual: JslDfa, b: JslDfa) -> JslDfaMorphism:
    """The complement bijection from dual_auto(powerset(N)) to
    powerset(reverse(N)), in explicit element indices."""
    assert a_dual.s.n == b.s.n
    labels = b.s.labels
    full = max(labels)
    index = {label: i for i, label in enumerate(labels)}
    return JslDfaMorphism(a_dual, b,
                          tuple(index[full & ~labels[x]]
                                for x in range(a_dual.s.n)))


# --- transition semiring and right-derivative closure --------------------------

@dataclass(frozen=True)
class TransitionSemiring:
    auto: JslDfa
    tables: tuple          # endomorphism table per element
    unit: int

    def mult(self, i: int, j: int) -> int:
        """Semiring product: apply i, then j."""
        ti, tj = self.tables[i], self.tables[j]
        return self.tables.index(tuple(tj[x] for x in ti))


def semiring_closure(a: JslDfa, budget: int = 1 << 11):
    """All pointwise joins of extended transition morphisms of ``a``,
    as endomorphism tables (deterministically ordered, identity first)."""
    s = a.s
    ident = tuple(range(s.n))
    gens = [a.delta[sym] for sym in range(a.n_symbols)]
    monoid = {ident}
    queue = deque([ident])
    while queue:
        f = queue.popleft()
        for g in gens:
            h = tuple(g[x] for x in f)   # f then g
            if h not in monoid:
                if len(monoid) >= budget:
                    raise BudgetExceeded("transition monoid exceeds budget")
                monoid.add(h)
                queue.append(h)
    zero = tuple(s.bottom for _ in range(s.n))
    closure = set(monoid) | {zero}
    queue = deque(closure)
    base = sorted(monoid)
    while queue:
        f = queue.popleft()
        for g in base:
            h = tuple(s.join[fx][gx] for fx, gx in zip(f, g))
            if h not in closure:
                if len(closure) >= budget:
                    raise BudgetExceeded("transition semiring exceeds budget")
                closure.add(h)
                queue.append(h)
    tables = sorted(closure)
    return tables, tables.index(ident)


def transition_semiring(a: JslDfa, budget: int = 1 << 11) -> TransitionSemiring:
    """The transition semiring of ``a`` as a reachable JSL-dfa whose elements
    are the joins of extended transition morphisms."""
    s = a.s
    tables, unit = semiring_closure(a, budget)
    n = len(tables)
    index = {t: i for i, t in enumerate(tables)}
    up = [0] * n
    for i, f in enumerate(tables):
        for j, g in enumerate(tables):
            if all(s.leq(fx, gx) for fx, gx in zip(f, g)):
                up[i] |= 1 << j
    join = tuple(tuple(index[tuple(s.join[fx][gx] for fx, gx in zip(f, g))]
                       for g in tables) for f in tables)
    bottom = index[tuple(s.bottom for _ in range(s.n))]
    sl = FiniteSemilattice(n, tuple(up), join, bottom, None)
    delta = tuple(tuple(index[tuple(a.delta[sym][fx] for fx in f)]
                        for f in tables)
                  for sym in range(a.n_symbols))
    final = {i for i, f in enumerate(tables) if a.is_final(f[a.init])}
    cofinal = sl.join_all([i for i in range(n) if i not in final])
    auto = JslDfa(sl, delta, unit, cofinal, a.ctx)
    return TransitionSemiring(auto, tuple(tables), unit)


def right_derivative_closure(a: JslDfa, budget: int = 1 << 11) -> JslDfa:
    """Close a simple automaton's state languages under right derivatives
    (and the unions a subautomaton requires); states stay language-labeled."""
    assert a.ctx is not None
    ctx = a.ctx
    base = [state_language(a, x) if a.lang_labels is None else a.lang_labels[x]
            for x in range(a.s.n)]
    assert len(set(base)) == a.s.n, "right-derivative closure needs a simple automaton"
    langs = set(base)
    queue = deque(langs)
    while queue:
        k = queue.popleft()
        new = [ctx.right_derivative(k, (sym,)) for sym in range(a.n_symbols)]
        new.extend(ctx.union(k, other) for other in list(langs))
        for h in new:
            if h not in langs:
                if len(langs) >= budget:
                    raise BudgetExceeded("right-derivative closure exceeds budget")
                langs.add(h)
                queue.append(h)
    handles = sorted(langs, key=lambda h: h.sort_key())
    index = {h: i for i, h in enumerate(handles)}
    n = len(handles)
    up = [0] * n
    for i, hi in enumerate(handles):
        for j, hj in enumerate(handles):
            if ctx.is_subset(hi, hj):
                up[i] |= 1 << j
    join = tuple(tuple(index[ctx.union(hi, hj)] for hj in handles)
                 for hi in handles)
    bottom = index[ctx.empty()]
    sl = FiniteSemilattice(n, tuple(up), join, bottom, None)
    delta = tuple(tuple(index[ctx.left_derivative(h, (sym,))] for h in handles)
                  for sym in range(a.n_symbols))
    cofinal = _cofinal_of(sl, lambda x: handles[x].has_epsilon())
    return JslDfa(sl, delta, index[base[a.init]], cofinal, ctx, tuple(handles))
