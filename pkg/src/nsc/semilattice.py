"""Finite join-semilattices with explicit order and join tables.

Elements are dense indices 0..n-1.  The order is stored as bitmask rows
(``up[i]`` holds the upset of i), joins as an n-by-n table.  Every structure
carries a bottom (the empty join); meets exist by finiteness and are computed
on demand.  Optional ``labels`` attach a bitset over some ground set to each
element, satisfying label(x v y) = label(x) | label(y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .lang import BudgetExceeded, bits


@dataclass(frozen=True)
class FiniteSemilattice:
    n: int
    up: tuple          # up[i] = bitmask of j with i <= j
    join: tuple        # join[i][j] = index of i v j
    bottom: int
    labels: tuple = None  # optional bitsets over a ground set

    def leq(self, i, j) -> bool:
        return bool(self.up[i] >> j & 1)

    @cached_property
    def down(self):
        rows = [0] * self.n
        for i in range(self.n):
            u = self.up[i]
            for j in bits(u):
                rows[j] |= 1 << i
        return tuple(rows)

    @cached_property
    def top(self) -> int:
        t = self.bottom
        for i in range(self.n):
            t = self.join[t][i]
        return t

    def join_all(self, elements) -> int:
        out = self.bottom
        for e in elements:
            out = self.join[out][e]
        return out

    def join_mask(self, mask: int) -> int:
        out = self.bottom
        for e in bits(mask):
            out = self.join[out][e]
        return out

    @cached_property
    def meet_table(self):
        rows = []
        for x in range(self.n):
            row = []
            for y in range(self.n):
                row.append(self.join_mask(self.down[x] & self.down[y]))
            rows.append(tuple(row))
        return tuple(rows)

    def meet(self, x, y) -> int:
        return self.meet_table[x][y]

    @cached_property
    def irreducibles(self):
        """Join-irreducible elements: not the bottom, not the join of the
        elements strictly below."""
        out = []
        for j in range(self.n):
            if j == self.bottom:
                continue
            if self.join_mask(self.down[j] & ~(1 << j)) != j:
                out.append(j)
        return tuple(out)

    def irreducibles_below(self, x) -> tuple:
        return tuple(j for j in self.irreducibles if self.leq(j, x))

    @cached_property
    def covers(self):
        """covers[y] = bitmask of x covered by y (x < y, nothing between)."""
        strict_down = [self.down[y] & ~(1 << y) for y in range(self.n)]
        out = []
        for y in range(self.n):
            row = 0
            for x in bits(strict_down[y]):
                between = self.up[x] & strict_down[y] & ~(1 << x)
                if between == 0:
                    row |= 1 << x
            out.append(row)
        return tuple(out)

    def check(self):
        """Validate the order/join axioms (meant for tests and small inputs)."""
        for i in range(self.n):
            assert self.leq(i, i)
            assert self.leq(self.bottom, i)
        for i in range(self.n):
            for j in range(self.n):
                if self.leq(i, j) and self.leq(j, i):
                    assert i == j
                if self.leq(i, j):
                    assert self.up[j] & ~self.up[i] == 0  # transitivity
                v = self.join[i][j]
                assert self.leq(i, v) and self.leq(j, v)
                # least among upper bounds
                ubs = self.up[i] & self.up[j]
                for u in bits(ubs):
                    assert self.leq(v, u)
        if self.labels is not None:
            assert self.labels[self.bottom] == 0
            for i in range(self.n):
                for j in range(self.n):
                    assert self.labels[self.join[i][j]] == \
                        self.labels[i] | self.labels[j]
        return True


def from_union_closure(generators, budget=1 << 20) -> FiniteSemilattice:
    """Union closure of bitset generators, including the empty union.

    Elements are sorted by (popcount, value); labels are the bitsets.
    """
    closed = {0}
    queue = [g for g in dict.fromkeys(generators) if g]
    for g in queue:
        closed.add(g)
    frontier = list(closed)
    while frontier:
        x = frontier.pop()
        for g in queue:
            u = x | g
            if u not in closed:
                if len(closed) >= budget:
                    raise BudgetExceeded(
                        f"union closure exceeds budget {budget}")
                closed.add(u)
                frontier.append(u)
    elems = sorted(closed, key=lambda m: (m.bit_count(), m))
    index = {m: i for i, m in enumerate(elems)}
    n = len(elems)
    up = [0] * n
    for i, mi in enumerate(elems):
        for j, mj in enumerate(elems):
            if mi & ~mj == 0:
                up[i] |= 1 << j
    join = tuple(tuple(index[mi | mj] for mj in elems) for mi in elems)
    return FiniteSemilattice(n, tuple(up), join, index[0], tuple(elems))


def join_irreducibles(s: FiniteSemilattice):
    return s.irreducibles


def meet_irreducibles(s: FiniteSemilattice):
    """Elements that are join-irreducible in the dual order."""
    return dual(s).irreducibles


def dual(s: FiniteSemilattice) -> FiniteSemilattice:
    """Reverse the order; joins become meets.  Indices are preserved."""
    n = s.n
    up = s.down
    join = s.meet_table
    return FiniteSemilattice(n, up, join, s.top, None)


@dataclass(frozen=True)
class JslMorphism:
    dom: FiniteSemilattice = field(repr=False)
    cod: FiniteSemilattice = field(repr=False)
    map: tuple

    def __call__(self, x: int) -> int:
        return self.map[x]

    def is_valid(self) -> bool:
        if self.map[self.dom.bottom] != self.cod.bottom:
            return False
        for x in range(self.dom.n):
            for y in range(x, self.dom.n):
                if self.map[self.dom.join[x][y]] != \
                        self.cod.join[self.map[x]][self.map[y]]:
                    return False
        return True

    def is_bijective(self) -> bool:
        return self.dom.n == self.cod.n and len(set(self.map)) == self.dom.n

    def compose(self, other: "JslMorphism") -> "JslMorphism":
        """self after other (other first)."""
        assert other.cod is self.dom or other.cod == self.dom
        return JslMorphism(other.dom, self.cod,
                           tuple(self.map[other.map[x]]
                                 for x in range(other.dom.n)))


def identity(s: FiniteSemilattice) -> JslMorphism:
    return JslMorphism(s, s, tuple(range(s.n)))


def adjoint(f: JslMorphism) -> JslMorphism:
    """dual(cod f) -> dual(dom f), t |-> the largest s with f(s) <= t."""
    s, t = f.dom, f.cod
    out = []
    for tv in range(t.n):
        candidates = 0
        for sv in range(s.n):
            if t.leq(f.map[sv], tv):
                candidates |= 1 << sv
        out.append(s.join_mask(candidates))
    return JslMorphism(dual(t), dual(s), tuple(out))


def prime_filters(s: FiniteSemilattice):
    """One filter per co-point s0: the set {x : x not<= s0} (empty at top)."""
    out = []
    for s0 in range(s.n):
        full = (1 << s.n) - 1
        filt = full & ~s.down[s0]
        out.append((filt, s0))
    return out


def predicates(s: FiniteSemilattice) -> dict:
    """Order-theoretic classification of the induced lattice."""
    distributive = True
    for j in s.irreducibles:
        for x in range(s.n):
            if not distributive:
                break
            for y in range(x, s.n):
                if s.leq(j, s.join[x][y]) and not (s.leq(j, x) or s.leq(j, y)):
                    distributive = False
                    break
    boolean = distributive
    if boolean:
        for x in range(s.n):
            if not any(s.join[x][y] == s.top and s.meet(x, y) == s.bottom
                       for y in range(s.n)):
                boolean = False
                break
    # longest chain, counted in steps, via the cover DAG
    order = sorted(range(s.n), key=lambda x: s.down[x].bit_count())
    height = [0] * s.n
    for y in order:
        for x in bits(s.covers[y]):
            height[y] = max(height[y], height[x] + 1)
    length = max(height) if s.n else 0
    return {
        "is_distributive": distributive,
        "is_boolean": boolean,
        "length": length,
        "is_extremal": length == len(s.irreducibles),
    }


def product(*factors) -> FiniteSemilattice:
    """Direct product with componentwise order; element index is mixed-radix
    with the last factor varying fastest."""
    assert factors
    n = 1
    for f in factors:
        n *= f.n
    radices = [f.n for f in factors]

    def unpack(i):
        out = []
        for r in reversed(radices):
            out.append(i % r)
            i //= r
        return tuple(reversed(out))

    def pack(t):
        i = 0
        for r, v in zip(radices, t):
            i = i * r + v
        return i

    up = [0] * n
    all_t = [unpack(i) for i in range(n)]
    for i, ti in enumerate(all_t):
        for j, tj in enumerate(all_t):
            if all(f.leq(a, b) for f, a, b in zip(factors, ti, tj)):
                up[i] |= 1 << j
    join = tuple(tuple(pack(tuple(f.join[a][b]
                                  for f, a, b in zip(factors, ti, tj)))
                       for tj in all_t) for ti in all_t)
    bottom = pack(tuple(f.bottom for f in factors))
    return FiniteSemilattice(n, tuple(up), join, bottom, None)


def chain(k: int) -> FiniteSemilattice:
    """The k-element chain 0 < 1 < ... < k-1."""
    up = tuple(((1 << k) - 1) & ~((1 << i) - 1) for i in range(k))
    join = tuple(tuple(max(i, j) for j in range(k)) for i in range(k))
    return FiniteSemilattice(k, up, join, 0, None)


def powerset_lattice(k: int) -> FiniteSemilattice:
    """The boolean lattice 2^k via union closure of the singletons."""
    return from_union_closure([1 << i for i in range(k)])


def _invariant_profile(s: FiniteSemilattice, x: int):
    return (s.down[x].bit_count(), s.up[x].bit_count(),
            s.covers[x].bit_count(), x in s.irreducibles)


def iso_search(a: FiniteSemilattice, b: FiniteSemilattice,
               budget: int = 10 ** 7):
    """A join-preserving bijection a -> b, or None.

    Backtracks over assignments of a's join-irreducibles to b's (every
    bijective morphism is determined by them), pruning by local order
    invariants; the candidate map is then extended by joins and verified.
    """
    if a.n != b.n or len(a.irreducibles) != len(b.irreducibles):
        return None
    if sorted(_invariant_profile(a, x) for x in range(a.n)) != \
            sorted(_invariant_profile(b, x) for x in range(b.n)):
        return None
    ja, jb = a.irreducibles, b.irreducibles
    k = len(ja)
    nodes = 0

    def extend(assign):
        # assign: tuple of b-irreducible indices matched to ja
        image = {}
        for x in range(a.n):
            mask = 0
            for pos, j in enumerate(ja):
                if a.leq(j, x):
                    mask |= 1 << jb[assign[pos]]
            image[x] = b.join_mask(mask)
        if len(set(image.values())) != a.n:
            return None
        for x in range(a.n):
            for y in range(a.n):
                if a.leq(x, y) != b.leq(image[x], image[y]):
                    return None
        return JslMorphism(a, b, tuple(image[x] for x in range(a.n)))

    def backtrack(pos, used, assign):
        nonlocal nodes
        if pos == k:
            return extend(tuple(assign))
        pa = _invariant_profile(a, ja[pos])
        for cand in range(k):
            if used >> cand & 1:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"iso search exceeded {budget} nodes")
            jb_cand = jb[cand]
            if _invariant_profile(b, jb_cand) != pa:
                continue
            # order among already-assigned irreducibles must match
            ok = True
            for prev in range(pos):
                if a.leq(ja[prev], ja[pos]) != b.leq(jb[assign[prev]], jb_cand) \
                        or a.leq(ja[pos], ja[prev]) != b.leq(jb_cand, jb[assign[prev]]):
                    ok = False
                    break
            if not ok:
                continue
            assign.append(cand)
            got = backtrack(pos + 1, used | 1 << cand, assign)
            if got is not None:
                return got
            assign.pop()
        return None

    return backtrack(0, 0, [])
