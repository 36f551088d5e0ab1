"""Exact search kernels for nondeterministic state minimality.

Three engines, all deterministic at a fixed budget:

* ``enumerate_nfa`` walks every k-state acceptor structure (transitions and
  finals; initial sets are implied by maximality), pruned to lexicographic
  representatives under state permutation.  Exhaustive for the minimal k
  when no smaller acceptor exists, which is how callers use it.

* ``pool_search`` decides whether k state languages drawn from a finite
  boolean algebra of atoms can be wired into an acceptor.  A set of masks
  works iff the accepted language and every single-letter derivative of a
  chosen mask is an exact union of chosen masks; this is equivalent to the
  existence of the acceptor because state languages of any nfa satisfy
  a^{-1}K_q = union of successor languages, and maximal transitions realize
  any family with that property.

* ``cyclic_cycle_cover`` finds the smallest disjoint union of cycles whose
  periods divide the period of a cyclic unary language and that jointly
  accept it; state-minimal acceptors of cyclic unary languages have exactly
  this shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .lang import BudgetExceeded, Context, LanguageHandle, Nfa, bits


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 16
    max_nodes: int = 10 ** 7
    time_limit_s: float = None

    def __post_init__(self):
        assert self.max_states > 0 and self.max_nodes > 0
        assert self.time_limit_s is None or self.time_limit_s > 0


class _NodeCounter:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit):
        self.nodes = 0
        self.limit = limit

    def tick(self, amount=1):
        self.nodes += amount
        if self.nodes > self.limit:
            raise BudgetExceeded(f"search exceeded {self.limit} nodes")


def _mask_permute_tables(k):
    perms = list(permutations(range(k)))
    tables = []
    for p in perms:
        tbl = [0] * (1 << k)
        for m in range(1 << k):
            out = 0
            mm = m
            while mm:
                low = mm & -mm
                out |= 1 << p[low.bit_length() - 1]
                mm ^= low
            tbl[m] = tbl[m] | out
        tables.append(tbl)
    return perms, tables


def enumerate_nfa(ctx: Context, lang: LanguageHandle, k: int,
                  budget: SearchBudget, state_filter=None):
    """Search for a k-state nfa accepting ``lang``; None if none exists.

    ``state_filter(handle) -> bool``, when given, must hold for every state
    language (used to restrict to atomic or subatomic acceptors).  Candidates
    with a dead or unreachable state are skipped, so the result is exhaustive
    only when no acceptor with fewer states exists; run k in ascending order.
    """
    assert not lang.is_empty() and k >= 1
    dl = lang.dfa
    n_symbols = dl.n_symbols
    full = (1 << k) - 1
    counter = _NodeCounter(budget.max_nodes)
    perms, mask_tables = _mask_permute_tables(k)
    state_rows = list(product(range(1 << k), repeat=n_symbols))
    # per permutation: how a whole state-row index transforms
    row_index = {r: i for i, r in enumerate(state_rows)}
    perm_row = [tuple(row_index[tuple(tbl[m] for m in r)] for r in state_rows)
                for tbl in mask_tables]
    nontrivial = [pi for pi, p in enumerate(perms) if p != tuple(range(k))]

    for trans_idx in product(range(len(state_rows)), repeat=k):
        counter.tick()
        # keep only the lexicographically least relabeling
        stabilizer = []
        canonical = True
        for pi in nontrivial:
            p, prow = perms[pi], perm_row[pi]
            permuted = [0] * k
            for q in range(k):
                permuted[p[q]] = prow[trans_idx[q]]
            tp = tuple(permuted)
            if tp < trans_idx:
                canonical = False
                break
            if tp == trans_idx:
                stabilizer.append(mask_tables[pi])
        if not canonical:
            continue
        trans = tuple(state_rows[i] for i in trans_idx)
        rows_by_sym = tuple(tuple(trans[q][sym] for q in range(k))
                            for sym in range(n_symbols))
        union_out = [0] * k
        for q in range(k):
            out = 0
            for sym in range(n_symbols):
                out |= rows_by_sym[sym][q]
            union_out[q] = out
        for finals in range(1, 1 << k):
            if any(tbl[finals] < finals for tbl in stabilizer):
                continue
            # every state must reach a final state
            reach = finals
            changed = True
            while changed:
                changed = False
                for q in range(k):
                    if not reach >> q & 1 and union_out[q] & reach:
                        reach |= 1 << q
                        changed = True
            if reach != full:
                continue
            imax = 0
            for q in range(k):
                if _state_language_subset(rows_by_sym, finals, q, dl, k):
                    imax |= 1 << q
            if imax == 0:
                continue
            # every state must be reachable from the maximal initial set
            fwd = imax
            changed = True
            while changed:
                changed = False
                nxt = fwd
                for sym in range(n_symbols):
                    row = rows_by_sym[sym]
                    for q in bits(fwd):
                        nxt |= row[q]
                if nxt != fwd:
                    fwd = nxt
                    changed = True
            if fwd != full:
                continue
            if not _accepts_exactly(rows_by_sym, finals, imax, dl, k):
                continue
            witness = Nfa(k, n_symbols, rows_by_sym, imax, finals)
            if state_filter is not None:
                if not all(state_filter(ctx.handle(
                        Nfa(k, n_symbols, rows_by_sym, 1 << q, finals)))
                        for q in range(k)):
                    continue
            assert ctx.handle(witness) == lang
            return witness
    return None


def _state_language_subset(rows_by_sym, finals, q, dl, k):
    """K_q subseteq L via product reachability over (nfa state, dfa state)."""
    start = q * dl.n + dl.initial
    visited = 1 << start
    stack = [(q, dl.initial)]
    while stack:
        p, s = stack.pop()
        if finals >> p & 1 and not dl.final >> s & 1:
            return False
        for sym in range(dl.n_symbols):
            t = dl.trans[sym][s]
            for p2 in bits(rows_by_sym[sym][p]):
                code = p2 * dl.n + t
                if not visited >> code & 1:
                    visited |= 1 << code
                    stack.append((p2, t))
    return True


def _accepts_exactly(rows_by_sym, finals, initial, dl, k):
    """L(N) == L via determinized product, checking the biconditional at
    every reachable (subset, dfa state) pair."""
    start = (initial, dl.initial)
    visited = {start}
    stack = [start]
    while stack:
        mask, s = stack.pop()
        if bool(mask & finals) != bool(dl.final >> s & 1):
            return False
        for sym in range(dl.n_symbols):
            row = rows_by_sym[sym]
            nm = 0
            for q in bits(mask):
                nm |= row[q]
            nxt = (nm, dl.trans[sym][s])
            if nxt not in visited:
                visited.add(nxt)
                stack.append(nxt)
    return True


# --- pool search over a boolean algebra of atoms --------------------------------

def atom_preimage_tables(succ_tables, n_atoms):
    """Per symbol: for each atom t, the mask of atoms s with succ[s] = t."""
    out = []
    for succ in succ_tables:
        tbl = [0] * n_atoms
        for s, t in enumerate(succ):
            tbl[t] |= 1 << s
        out.append(tuple(tbl))
    return tuple(out)


def pool_search(succ_tables, lang_mask: int, k: int, budget: SearchBudget):
    """Minimal-width wiring search over atom masks; None if no k-mask pool
    exists.

    ``succ_tables`` give, per symbol, the deterministic successor atom of
    each atom; the single-letter derivative of a mask is its preimage.  The
    search maintains the forced targets (the accepted mask and derivatives
    of every chosen mask) and branches on the candidates covering the lowest
    missing atom of an unexpressed target.
    """
    n_atoms = max(len(t) for t in succ_tables) if succ_tables else 0
    pre = atom_preimage_tables(succ_tables, n_atoms)
    counter = _NodeCounter(budget.max_nodes)

    def derivative(sym, mask):
        out = 0
        for t in bits(mask):
            out |= pre[sym][t]
        return out

    # targets forced regardless of the pool: the derivative closure of the
    # accepted mask (these are the left derivatives of the language)
    seeds = {lang_mask}
    queue = [lang_mask]
    while queue:
        m = queue.pop()
        for sym in range(len(succ_tables)):
            d = derivative(sym, m)
            if d not in seeds:
                seeds.add(d)
                queue.append(d)

    # any feasible pool generates a union-closed family containing every
    # seed, with at most 2^k elements and no strict chain of more than k
    # nonzero members; both give cheap exhaustive refutations
    cap = 1 << k
    closure = {0} | seeds
    frontier = list(closure)
    too_big = False
    while frontier and not too_big:
        x = frontier.pop()
        for s in seeds:
            u = x | s
            if u not in closure:
                closure.add(u)
                if len(closure) > cap:
                    too_big = True
                    break
                frontier.append(u)
    if too_big:
        return None
    nonzero = sorted(closure - {0}, key=lambda m: (m.bit_count(), m))
    height = {}
    for m in nonzero:
        height[m] = 1 + max((height[p] for p in nonzero
                             if p != m and p & ~m == 0), default=0)
        if height[m] > k:
            return None

    def unexpressed(targets, pool):
        best = None
        for t in targets:
            got = 0
            for c in pool:
                if c & ~t == 0:
                    got |= c
            if got != t and (best is None or
                             (t.bit_count(), t) < (best[0].bit_count(), best[0])):
                best = (t, got)
        return best

    def dfs(pool, targets):
        counter.tick()
        missing = unexpressed(targets, pool)
        if missing is None:
            return tuple(sorted(pool))
        if len(pool) >= k:
            return None
        t, got = missing
        alpha = (t & ~got) & -(t & ~got)
        rest = t & ~alpha
        # all submasks of t containing alpha, ascending
        candidates = []
        sub = rest
        while True:
            candidates.append(sub | alpha)
            if sub == 0:
                break
            sub = (sub - 1) & rest
        # larger candidates first: they complete targets sooner
        candidates.sort(key=lambda c: (-c.bit_count(), c))
        for c in candidates:
            if c in pool:
                continue
            extra = {derivative(sym, c) for sym in range(len(succ_tables))}
            got2 = dfs(pool | {c}, targets | extra)
            if got2 is not None:
                return got2
        return None

    if lang_mask == 0:
        return ()
    return dfs(frozenset(), frozenset(seeds))


def pool_to_nfa(pool, succ_tables, lang_mask, eps_atom) -> Nfa:
    """The maximal-transition acceptor realizing a feasible pool."""
    n_atoms = max(len(t) for t in succ_tables)
    pre = atom_preimage_tables(succ_tables, n_atoms)
    k = len(pool)
    rows = []
    for sym in range(len(succ_tables)):
        row = [0] * k
        for i, c in enumerate(pool):
            dc = 0
            for t in bits(c):
                dc |= pre[sym][t]
            for j, c2 in enumerate(pool):
                if c2 & ~dc == 0:
                    row[i] |= 1 << j
        rows.append(tuple(row))
    initial = sum(1 << i for i, c in enumerate(pool) if c & ~lang_mask == 0)
    final = sum(1 << i for i, c in enumerate(pool) if c >> eps_atom & 1)
    return Nfa(k, len(succ_tables), tuple(rows), initial, final)


# --- cyclic unary languages -------------------------------------------------------

def cyclic_cycle_cover(period: int, accepted_residues, max_total: int = None):
    """Smallest disjoint union of cycles, periods dividing ``period``, that
    accepts {a^x : x mod period in accepted_residues}.

    Returns (total_states, [(cycle_length, accepting_offsets), ...]).
    """
    r_set = frozenset(accepted_residues)
    divisors = [c for c in range(1, period + 1) if period % c == 0]
    best_finals = {}
    for c in divisors:
        best_finals[c] = frozenset(
            r for r in range(c)
            if all(x in r_set for x in range(r, period, c)))
    cap = period if max_total is None else min(period, max_total)

    def covered(chosen):
        got = set()
        for c in chosen:
            for r in best_finals[c]:
                got.update(range(r, period, c))
        return got == r_set

    from itertools import combinations
    options = sorted(divisors)
    for total in range(0 if not r_set else 1, cap + 1):
        for count in range(0 if total == 0 else 1, len(options) + 1):
            for chosen in combinations(options, count):
                if sum(chosen) == total and covered(chosen):
                    return total, [(c, sorted(best_finals[c]))
                                   for c in chosen]
    raise AssertionError("the one-cycle cover of full period always works")


def cycles_to_nfa(cycles) -> Nfa:
    """Disjoint union of unary cycles, each entered at offset zero."""
    total = sum(c for c, _ in cycles)
    row = [0] * total
    initial = 0
    final = 0
    base = 0
    for c, finals in cycles:
        for i in range(c):
            row[base + i] = 1 << (base + (i + 1) % c)
        initial |= 1 << base
        for r in finals:
            final |= 1 << (base + r)
        base += c
    return Nfa(total, 1, (tuple(row),), initial, final)
