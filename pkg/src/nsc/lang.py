"""Regular-language values: regexes, automata, and canonical interned languages.

States of automata are integers; sets of states are bitmasks (Python ints),
which keeps the search kernels in other modules fast without numpy.  Words are
tuples of symbol indices.  A ``Context`` interns every language it sees as a
minimal complete DFA in canonical (BFS) numbering, so language equality is
plain object identity on handles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product


MAX_ALPHABET = 26

Word = tuple  # tuple of symbol indices

EPSILON: Word = ()


def bits(mask: int):
    """Yield the set bit positions of a mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class RegexError(ValueError):
    """Raised for malformed regex input; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(self.symbols) > MAX_ALPHABET:
            raise ValueError(f"alphabet capped at {MAX_ALPHABET} symbols")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    @staticmethod
    def of(*symbols) -> "Alphabet":
        return Alphabet(tuple(str(s) for s in symbols))

    def __len__(self):
        return len(self.symbols)

    def index(self, symbol) -> int:
        return self.symbols.index(symbol)

    def word(self, text) -> Word:
        """Encode a symbol sequence (string or iterable of names) as indices.

        For string input, symbols are matched longest-first so multi-character
        names like ``a1`` work.
        """
        if not isinstance(text, str):
            return tuple(self.index(s) for s in text)
        by_length = sorted(range(len(self.symbols)),
                           key=lambda i: -len(self.symbols[i]))
        out = []
        pos = 0
        while pos < len(text):
            for i in by_length:
                sym = self.symbols[i]
                if text.startswith(sym, pos):
                    out.append(i)
                    pos += len(sym)
                    break
            else:
                raise ValueError(f"cannot decode {text!r} at {pos} over {self.symbols}")
        return tuple(out)

    def decode(self, word: Word) -> str:
        return "".join(self.symbols[i] for i in word)


# --- regex ASTs ------------------------------------------------------------

@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Epsilon:
    pass


@dataclass(frozen=True)
class Sym:
    index: int


@dataclass(frozen=True)
class Union:
    left: object
    right: object


@dataclass(frozen=True)
class Concat:
    left: object
    right: object


@dataclass(frozen=True)
class Star:
    inner: object


RegexAst = object  # one of the node classes above


def parse_regex(text: str, alphabet: Alphabet) -> RegexAst:
    """Parse ``text`` over ``alphabet``.

    Grammar: ``+`` union, juxtaposition concatenation, ``*`` star, ``@``
    epsilon, ``#`` empty, parentheses.  Symbol names are matched
    longest-first against the declared alphabet.
    """
    syms = sorted(range(len(alphabet)), key=lambda i: -len(alphabet.symbols[i]))
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def peek():
        skip_ws()
        return text[pos] if pos < n else None

    def parse_union():
        node = parse_concat()
        while peek() == "+":
            nonlocal pos
            pos += 1
            node = Union(node, parse_concat())
        return node

    def parse_concat():
        node = parse_star()
        while True:
            c = peek()
            if c is None or c in "+)*":
                return node
            node = Concat(node, parse_star())

    def parse_star():
        node = parse_atom()
        while peek() == "*":
            nonlocal pos
            pos += 1
            node = Star(node)
        return node

    def parse_atom():
        nonlocal pos
        c = peek()
        if c is None:
            raise RegexError("unexpected end of input", pos)
        if c == "(":
            pos += 1
            node = parse_union()
            if peek() != ")":
                raise RegexError("expected ')'", pos)
            pos += 1
            return node
        if c == "@":
            pos += 1
            return Epsilon()
        if c == "#":
            pos += 1
            return Empty()
        if c in ")*+":
            raise RegexError(f"unexpected {c!r}", pos)
        for i in syms:
            name = alphabet.symbols[i]
            if text.startswith(name, pos):
                pos += len(name)
                return Sym(i)
        raise RegexError(f"unknown symbol starting at {text[pos:pos + 8]!r}", pos)

    node = parse_union()
    skip_ws()
    if pos != n:
        raise RegexError(f"trailing input {text[pos:]!r}", pos)
    return node


# --- automata ---------------------------------------------------------------

@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton; multiple initial states are allowed.

    ``trans[a][q]`` is the successor bitmask of state q on symbol a;
    ``initial`` and ``final`` are state bitmasks.  ``n == 0`` is legal and
    denotes the empty language.
    """

    n: int
    n_symbols: int
    trans: tuple  # per symbol: tuple of successor masks, one per state
    initial: int
    final: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        assert len(self.trans) == self.n_symbols
        assert self.initial & ~full == 0 and self.final & ~full == 0
        for rows in self.trans:
            assert len(rows) == self.n
            assert all(r & ~full == 0 for r in rows)

    @staticmethod
    def from_triples(n, n_symbols, triples, initial, final) -> "Nfa":
        """Build from (src, symbol, dst) triples and initial/final iterables."""
        rows = [[0] * n for _ in range(n_symbols)]
        for src, sym, dst in triples:
            rows[sym][src] |= 1 << dst
        return Nfa(n, n_symbols,
                   tuple(tuple(r) for r in rows),
                   sum(1 << q for q in set(initial)),
                   sum(1 << q for q in set(final)))

    def triples(self):
        for sym, rows in enumerate(self.trans):
            for src, mask in enumerate(rows):
                for dst in bits(mask):
                    yield src, sym, dst

    def step(self, mask: int, sym: int) -> int:
        out = 0
        rows = self.trans[sym]
        for q in bits(mask):
            out |= rows[q]
        return out

    def run(self, word: Word) -> int:
        mask = self.initial
        for a in word:
            mask = self.step(mask, a)
        return mask

    def accepts(self, word: Word) -> bool:
        return bool(self.run(word) & self.final)


@dataclass(frozen=True)
class Dfa:
    """Complete deterministic automaton: ``trans[a][q]`` is a single state."""

    n: int
    n_symbols: int
    trans: tuple
    initial: int
    final: int  # bitmask

    def __post_init__(self):
        assert self.n >= 1
        assert 0 <= self.initial < self.n
        for rows in self.trans:
            assert len(rows) == self.n
            assert all(0 <= t < self.n for t in rows)

    def step(self, state: int, sym: int) -> int:
        return self.trans[sym][state]

    def run(self, word: Word, start=None) -> int:
        state = self.initial if start is None else start
        for a in word:
            state = self.trans[a][state]
        return state

    def accepts(self, word: Word, start=None) -> bool:
        return bool(self.final >> self.run(word, start) & 1)

    def as_nfa(self) -> Nfa:
        rows = tuple(tuple(1 << t for t in sym_row) for sym_row in self.trans)
        return Nfa(self.n, self.n_symbols, rows, 1 << self.initial, self.final)

    def key(self):
        """Structural identity key; canonical DFAs with equal keys are equal."""
        return (self.n, self.n_symbols, self.trans, self.initial, self.final)


def nfa_from_regex(ast: RegexAst, n_symbols: int) -> Nfa:
    """Position (Glushkov) construction: no epsilon transitions."""
    positions = []  # symbol index per position

    def walk(node):
        # returns (nullable, first, last, follow-updates applied in place)
        if isinstance(node, Empty):
            return False, 0, 0
        if isinstance(node, Epsilon):
            return True, 0, 0
        if isinstance(node, Sym):
            p = len(positions)
            positions.append(node.index)
            return False, 1 << p, 1 << p
        if isinstance(node, Union):
            ln, lf, ll = walk(node.left)
            rn, rf, rl = walk(node.right)
            return ln or rn, lf | rf, ll | rl
        if isinstance(node, Concat):
            ln, lf, ll = walk(node.left)
            rn, rf, rl = walk(node.right)
            for p in bits(ll):
                follow[p] |= rf
            return ln and rn, lf | (rf if ln else 0), rl | (ll if rn else 0)
        if isinstance(node, Star):
            inn, inf_, inl = walk(node.inner)
            for p in bits(inl):
                follow[p] |= inf_
            return True, inf_, inl
        raise TypeError(f"not a regex node: {node!r}")

    class _FollowDict(dict):
        def __missing__(self, key):
            self[key] = 0
            return 0

    follow = _FollowDict()
    nullable, first, last = walk(ast)
    m = len(positions)
    if m == 0:
        if nullable:
            return Nfa(1, n_symbols, tuple((0,) for _ in range(n_symbols)), 1, 1)
        return Nfa(0, n_symbols, tuple(() for _ in range(n_symbols)), 0, 0)
    # state 0 is the start; positions shift up by one
    n = m + 1
    rows = [[0] * n for _ in range(n_symbols)]
    for p in bits(first):
        rows[positions[p]][0] |= 1 << (p + 1)
    for p in range(m):
        for q in bits(follow[p]):
            rows[positions[q]][p + 1] |= 1 << (q + 1)
    final = (last << 1) | (1 if nullable else 0)
    return Nfa(n, n_symbols, tuple(tuple(r) for r in rows), 1, final)


def reverse(n: Nfa) -> Nfa:
    """Flip all transitions and swap initial and final state sets."""
    rows = []
    for sym_row in n.trans:
        flipped = [0] * n.n
        for src, mask in enumerate(sym_row):
            for dst in bits(mask):
                flipped[dst] |= 1 << src
        rows.append(tuple(flipped))
    return Nfa(n.n, n.n_symbols, tuple(rows), n.final, n.initial)


def rsc(n: Nfa) -> Dfa:
    """Reachable subset construction; state 0 is the initial subset."""
    index = {n.initial: 0}
    order = [n.initial]
    rows = [[] for _ in range(n.n_symbols)]
    queue = deque([n.initial])
    while queue:
        mask = queue.popleft()
        for sym in range(n.n_symbols):
            nxt = n.step(mask, sym)
            if nxt not in index:
                index[nxt] = len(order)
                order.append(nxt)
                queue.append(nxt)
            rows[sym].append(index[nxt])
    final = sum(1 << i for i, mask in enumerate(order) if mask & n.final)
    return Dfa(len(order), n.n_symbols, tuple(tuple(r) for r in rows), 0, final)


def subset_languages(d: Dfa, n: Nfa):
    """For rsc output ``d``, the NFA subset (mask over n's states) per state."""
    masks = [None] * d.n
    masks[d.initial] = n.initial
    queue = deque([d.initial])
    seen = {d.initial}
    while queue:
        s = queue.popleft()
        for sym in range(d.n_symbols):
            t = d.trans[sym][s]
            if t not in seen:
                masks[t] = n.step(masks[s], sym)
                seen.add(t)
                queue.append(t)
    return masks


def _reachable_part(d: Dfa) -> Dfa:
    seen = 1 << d.initial
    queue = deque([d.initial])
    order = [d.initial]
    while queue:
        s = queue.popleft()
        for sym in range(d.n_symbols):
            t = d.trans[sym][s]
            if not seen >> t & 1:
                seen |= 1 << t
                order.append(t)
                queue.append(t)
    if len(order) == d.n:
        return d
    remap = {old: i for i, old in enumerate(order)}
    rows = tuple(tuple(remap[d.trans[sym][old]] for old in order)
                 for sym in range(d.n_symbols))
    final = sum(1 << remap[q] for q in bits(d.final) if q in remap)
    return Dfa(len(order), d.n_symbols, rows, remap[d.initial], final)


def _canonical_renumber(d: Dfa) -> Dfa:
    """BFS renumbering from the initial state, exploring symbols in order."""
    remap = {d.initial: 0}
    order = [d.initial]
    queue = deque([d.initial])
    while queue:
        s = queue.popleft()
        for sym in range(d.n_symbols):
            t = d.trans[sym][s]
            if t not in remap:
                remap[t] = len(order)
                order.append(t)
                queue.append(t)
    assert len(order) == d.n, "canonical renumbering requires a reachable DFA"
    rows = tuple(tuple(remap[d.trans[sym][old]] for old in order)
                 for sym in range(d.n_symbols))
    final = sum(1 << remap[q] for q in bits(d.final))
    return Dfa(d.n, d.n_symbols, rows, 0, final)


def minimize(d: Dfa) -> Dfa:
    """Minimal complete DFA in canonical numbering (Hopcroft refinement)."""
    d = _reachable_part(d)
    finals = set(bits(d.final))
    nonfinals = set(range(d.n)) - finals
    partition = [s for s in (finals, nonfinals) if s]
    worklist = [s for s in (finals, nonfinals) if s]
    preimage = [[[] for _ in range(d.n)] for _ in range(d.n_symbols)]
    for sym in range(d.n_symbols):
        for q in range(d.n):
            preimage[sym][d.trans[sym][q]].append(q)
    while worklist:
        splitter = worklist.pop()
        for sym in range(d.n_symbols):
            x = set()
            for q in splitter:
                x.update(preimage[sym][q])
            new_partition = []
            for block in partition:
                inter = block & x
                diff = block - x
                if inter and diff:
                    new_partition.append(inter)
                    new_partition.append(diff)
                    if block in worklist:
                        worklist.remove(block)
                        worklist.append(inter)
                        worklist.append(diff)
                    else:
                        worklist.append(inter if len(inter) <= len(diff) else diff)
                else:
                    new_partition.append(block)
            partition = new_partition
    block_of = [0] * d.n
    for i, block in enumerate(partition):
        for q in block:
            block_of[q] = i
    rows = tuple(tuple(block_of[d.trans[sym][min(block)]] for block in partition)
                 for sym in range(d.n_symbols))
    final = sum(1 << i for i, block in enumerate(partition) if block & finals)
    quotient = Dfa(len(partition), d.n_symbols, rows, block_of[d.initial], final)
    return _canonical_renumber(quotient)


# --- interned language handles ----------------------------------------------

class BudgetExceeded(RuntimeError):
    """A closure or search exceeded its declared budget."""


@dataclass(frozen=True)
class LanguageHandle:
    """Canonical interned regular language over a fixed analysis context.

    Two handles from the same context are equal iff they denote the same
    language; the carrier DFA is minimal, complete, and BFS-numbered.
    """

    ctx: "Context" = field(repr=False, compare=False)
    id: int = field(compare=True)
    dfa: Dfa = field(repr=False, compare=False)

    def __hash__(self):
        return hash((id(self.ctx), self.id))

    def __eq__(self, other):
        return isinstance(other, LanguageHandle) and self.ctx is other.ctx \
            and self.id == other.id

    # ordering key used for deterministic set output; structural, not id-based
    def sort_key(self):
        return self.dfa.key()[0:1] + self.dfa.key()[2:]

    @property
    def alphabet(self) -> Alphabet:
        return self.ctx.alphabet

    def accepts(self, word: Word) -> bool:
        return self.dfa.accepts(word)

    def is_empty(self) -> bool:
        return self.final_mask == 0

    @property
    def final_mask(self) -> int:
        return self.dfa.final

    def has_epsilon(self) -> bool:
        return bool(self.dfa.final >> self.dfa.initial & 1)

    def words_up_to(self, length: int):
        """All accepted words of length at most ``length``, shortlex order."""
        for k in range(length + 1):
            for w in product(range(self.dfa.n_symbols), repeat=k):
                if self.dfa.accepts(w):
                    yield w


class Context:
    """Analysis context: one alphabet plus an intern cache of languages.

    The cache is append-only and keyed by the canonical DFA, so sharing a
    context across threads is safe apart from benign duplicate inserts; use
    one context per analysis when in doubt.
    """

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._intern = {}

    def _intern_min_dfa(self, d: Dfa) -> LanguageHandle:
        key = d.key()
        got = self._intern.get(key)
        if got is None:
            got = LanguageHandle(self, len(self._intern), d)
            self._intern[key] = got
        return got

    def handle(self, x) -> LanguageHandle:
        """Canonical handle of a regex AST, Nfa, Dfa, or handle."""
        if isinstance(x, LanguageHandle):
            assert x.ctx is self
            return x
        if isinstance(x, Dfa):
            assert x.n_symbols == len(self.alphabet)
            return self._intern_min_dfa(minimize(x))
        if isinstance(x, Nfa):
            assert x.n_symbols == len(self.alphabet)
            return self._intern_min_dfa(minimize(rsc(x)))
        return self.handle(nfa_from_regex(x, len(self.alphabet)))

    def from_regex(self, text: str) -> LanguageHandle:
        return self.handle(parse_regex(text, self.alphabet))

    def empty(self) -> LanguageHandle:
        return self.handle(parse_regex("#", self.alphabet))

    def epsilon(self) -> LanguageHandle:
        return self.handle(parse_regex("@", self.alphabet))

    def full(self) -> LanguageHandle:
        return self.complement(self.empty())

    # --- derivatives ---------------------------------------------------

    def left_derivative(self, lang: LanguageHandle, word: Word) -> LanguageHandle:
        d = lang.dfa
        start = d.run(word)
        return self._intern_min_dfa(minimize(
            Dfa(d.n, d.n_symbols, d.trans, start, d.final)))

    def right_derivative(self, lang: LanguageHandle, word: Word) -> LanguageHandle:
        d = lang.dfa
        final = d.final
        for a in reversed(word):
            final = sum(1 << q for q in range(d.n)
                        if final >> d.trans[a][q] & 1)
        return self._intern_min_dfa(minimize(
            Dfa(d.n, d.n_symbols, d.trans, d.initial, final)))

    def derivative(self, lang, word, side="left", right_word=None):
        """u^{-1}L, Lv^{-1}, or u^{-1}Lv^{-1} (side = left | right | two_sided)."""
        if side == "left":
            return self.left_derivative(lang, word)
        if side == "right":
            return self.right_derivative(lang, word)
        if side == "two_sided":
            return self.right_derivative(self.left_derivative(lang, word),
                                         right_word)
        raise ValueError(f"unknown side {side!r}")

    def derivative_set(self, lang: LanguageHandle):
        """Left derivatives of ``lang``, one per canonical minimal-DFA state."""
        d = lang.dfa
        out = []
        for q in range(d.n):
            out.append(self._intern_min_dfa(minimize(
                Dfa(d.n, d.n_symbols, d.trans, q, d.final))))
        assert len(set(out)) == d.n
        return out

    def derivative_witnesses(self, lang: LanguageHandle):
        """Shortest word reaching each canonical minimal-DFA state (BFS)."""
        d = lang.dfa
        words = [None] * d.n
        words[d.initial] = ()
        queue = deque([d.initial])
        while queue:
            q = queue.popleft()
            for sym in range(d.n_symbols):
                t = d.trans[sym][q]
                if words[t] is None:
                    words[t] = words[q] + (sym,)
                    queue.append(t)
        return words

    # --- boolean combinations ------------------------------------------

    def _product(self, a: Dfa, b: Dfa, final_rule) -> Dfa:
        index = {(a.initial, b.initial): 0}
        order = [(a.initial, b.initial)]
        rows = [[] for _ in range(a.n_symbols)]
        queue = deque(order)
        while queue:
            pa, pb = queue.popleft()
            for sym in range(a.n_symbols):
                nxt = (a.trans[sym][pa], b.trans[sym][pb])
                if nxt not in index:
                    index[nxt] = len(order)
                    order.append(nxt)
                    queue.append(nxt)
                rows[sym].append(index[nxt])
        final = sum(1 << i for i, (pa, pb) in enumerate(order)
                    if final_rule(a.final >> pa & 1, b.final >> pb & 1))
        return Dfa(len(order), a.n_symbols, tuple(tuple(r) for r in rows), 0, final)

    def union(self, a: LanguageHandle, b: LanguageHandle) -> LanguageHandle:
        assert a.ctx is self and b.ctx is self
        return self._intern_min_dfa(minimize(
            self._product(a.dfa, b.dfa, lambda x, y: x or y)))

    def intersect(self, a: LanguageHandle, b: LanguageHandle) -> LanguageHandle:
        assert a.ctx is self and b.ctx is self
        return self._intern_min_dfa(minimize(
            self._product(a.dfa, b.dfa, lambda x, y: x and y)))

    def complement(self, a: LanguageHandle) -> LanguageHandle:
        d = a.dfa
        full = (1 << d.n) - 1
        return self._intern_min_dfa(minimize(
            Dfa(d.n, d.n_symbols, d.trans, d.initial, full & ~d.final)))

    def left_quotient_by_set(self, u: LanguageHandle, lang: LanguageHandle
                             ) -> LanguageHandle:
        """U^{-1}L: union of u^{-1}L over all u in U."""
        du, dl = u.dfa, lang.dfa
        seen = {(du.initial, dl.initial)}
        queue = deque(seen)
        starts = set()
        while queue:
            pu, pl = queue.popleft()
            if du.final >> pu & 1:
                starts.add(pl)
            for sym in range(du.n_symbols):
                nxt = (du.trans[sym][pu], dl.trans[sym][pl])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        rows = tuple(tuple(1 << t for t in sym_row) for sym_row in dl.trans)
        nfa = Nfa(dl.n, dl.n_symbols, rows,
                  sum(1 << q for q in starts), dl.final)
        return self.handle(nfa)

    def combine(self, op, *args):
        ops = {"union": self.union, "intersect": self.intersect,
               "complement": self.complement,
               "left_quotient_by_set": self.left_quotient_by_set}
        return ops[op](*args)

    def reverse_lang(self, a: LanguageHandle) -> LanguageHandle:
        return self.handle(reverse(a.dfa.as_nfa()))

    # --- decision procedures --------------------------------------------

    def is_subset(self, a: LanguageHandle, b: LanguageHandle) -> bool:
        """a ⊆ b by product reachability (no bad pair final-a/non-final-b)."""
        da, db = a.dfa, b.dfa
        seen = {(da.initial, db.initial)}
        queue = deque(seen)
        while queue:
            pa, pb = queue.popleft()
            if da.final >> pa & 1 and not db.final >> pb & 1:
                return False
            for sym in range(da.n_symbols):
                nxt = (da.trans[sym][pa], db.trans[sym][pb])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return True

    def is_disjoint(self, a: LanguageHandle, b: LanguageHandle) -> bool:
        da, db = a.dfa, b.dfa
        seen = {(da.initial, db.initial)}
        queue = deque(seen)
        while queue:
            pa, pb = queue.popleft()
            if da.final >> pa & 1 and db.final >> pb & 1:
                return False
            for sym in range(da.n_symbols):
                nxt = (da.trans[sym][pa], db.trans[sym][pb])
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return True

    def union_all(self, handles) -> LanguageHandle:
        out = self.empty()
        for h in handles:
            out = self.union(out, h)
        return out
