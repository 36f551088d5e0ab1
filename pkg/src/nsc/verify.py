"""The example-corpus claim suite.

Runs every documented numeric or structural fact about the built-in corpus
and reports one pass/fail record per claim.  The long unary k=5 subatomic
refutation only runs when ``extended`` is requested.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .complexity import (atomic_search, bipartite_dimension, canonical_residual,
                         classify, dependency, is_atomic, is_subatomic,
                         ns_search, nsyn_search, subatomic_search)
from .jsl import blq, blrq, jsl_language, minimal_jsl
from .lang import BudgetExceeded, reverse, rsc, minimize
from .monoid import (canonical_representation, monoid_quotient_compare,
                     syntactic_monoid, transition_monoid)
from .search import SearchBudget
from .semilattice import chain, from_union_closure, iso_search, predicates, \
    product
from .fixtures import fixture


@dataclass(frozen=True)
class ClaimResult:
    claim: str
    ok: bool
    details: str
    seconds: float


def _claim(results, name, fn):
    start = time.perf_counter()
    try:
        ok, details = fn()
    except BudgetExceeded as exc:
        ok, details = False, f"budget exceeded: {exc}"
    except AssertionError as exc:
        ok, details = False, f"assertion failed: {exc}"
    results.append(ClaimResult(name, bool(ok), str(details),
                               time.perf_counter() - start))


def run_claims(extended: bool = False, budget: SearchBudget = None):
    budget = budget or SearchBudget()
    out = []

    def ln_degrees():
        got = []
        for n in range(4):
            f = fixture(f"F_LN{n}")
            rep = canonical_representation(f.ctx, f.lang)
            got.append(rep.degree)
        return got == [n + 2 for n in range(4)], f"degrees {got}"

    _claim(out, "shift-family representation degree is n+2", ln_degrees)

    def ln_ns():
        got = []
        for n in range(3):
            f = fixture(f"F_LN{n}")
            bound, _ = ns_search(f.ctx, f.lang, budget)
            if not bound.exact:
                return False, f"inexact at n={n}"
            got.append(bound.value)
        return got == [2, 3, 4], f"values {got}"

    _claim(out, "shift-family least acceptor size is n+2", ln_ns)

    def m3_degree():
        f = fixture("F_M3")
        rep = canonical_representation(f.ctx, f.lang)
        return rep.degree == 5, f"degree {rep.degree}"

    _claim(out, "diamond example has representation degree 5", m3_degree)

    def m3_product():
        f = fixture("F_M3")
        q = minimal_jsl(f.ctx, f.lang)
        two = chain(2)
        m3 = from_union_closure([0b011, 0b101, 0b110])
        prod = product(two, m3, two)
        iso = iso_search(q.s, prod)
        return iso is not None, f"|Q| = {q.s.n}, product size {prod.n}"

    _claim(out, "diamond example lattice is the 2 x M3 x 2 product",
           m3_product)

    def m3_classify():
        f = fixture("F_M3")
        flags = classify(f.ctx, f.lang)
        return not flags["topological"], f"flags {flags}"

    _claim(out, "diamond example is not topological", m3_classify)

    def sub_sizes():
        f = fixture("F_SUB")
        rev = f.ctx.reverse_lang(f.lang)
        return (f.lang.dfa.n, rev.dfa.n) == (9, 6), \
            f"sizes {(f.lang.dfa.n, rev.dfa.n)}"

    _claim(out, "separating example needs 9 forward and 6 reverse states",
           sub_sizes)

    def sub_monoids():
        f = fixture("F_SUB")
        tm_view = transition_monoid(rsc(reverse(f.nfa)))[1]
        syn_view = syntactic_monoid(f.ctx.reverse_lang(f.lang))[1]
        sizes = (tm_view.monoid.n, syn_view.monoid.n)
        rel = monoid_quotient_compare(tm_view, syn_view)
        return sizes == (22, 22) and rel == "iso", f"sizes {sizes}, {rel}"

    _claim(out, "both recognizing monoids have 22 elements and agree",
           sub_monoids)

    def sub_subatomic():
        f = fixture("F_SUB")
        sub = is_subatomic(f.nfa, f.ctx).value
        atom = is_atomic(f.nfa, f.ctx).value
        return sub and not atom, f"subatomic {sub}, atomic {atom}"

    _claim(out, "four-state acceptor is subatomic but not atomic",
           sub_subatomic)

    def sub_no_atomic_four():
        f = fixture("F_SUB")
        found = atomic_search(f.ctx, f.lang, 4, budget)
        return found is None, ("exhaustive pool search over the 64-element "
                               "left-derivative algebra")

    _claim(out, "no atomic acceptor with four states exists",
           sub_no_atomic_four)

    def sub_nsyn():
        f = fixture("F_SUB")
        ns_bound, _ = ns_search(f.ctx, f.lang, budget, hints=[f.nfa])
        nsyn_bound, _ = nsyn_search(f.ctx, f.lang, budget, hints=[f.nfa],
                                    ns_bound=ns_bound)
        return nsyn_bound.exact and nsyn_bound.value == 4, \
            f"nsyn {nsyn_bound.lower}..{nsyn_bound.upper}"

    _claim(out, "subatomic measure of the separating example is 4", sub_nsyn)

    def u5_nfa():
        f = fixture("F_U5")
        ok = f.ctx.handle(f.nfa) == f.lang and f.nfa.n == 5
        sub = is_subatomic(f.nfa, f.ctx).value
        return ok and not sub, f"accepts {ok}, subatomic {sub}"

    _claim(out, "five-state unary acceptor works but is not subatomic",
           u5_nfa)

    def u5_ns():
        f = fixture("F_U5")
        bound, prov = ns_search(f.ctx, f.lang, budget, hints=[f.nfa])
        return bound.exact and bound.value == 5, \
            f"ns {bound.lower}..{bound.upper} ({prov[-1][1]})"

    _claim(out, "unary example needs exactly five states", u5_ns)

    def u5_residual():
        f = fixture("F_U5")
        res = canonical_residual(f.ctx, f.lang)
        return res.n == 6 and is_subatomic(res, f.ctx).value, \
            f"residual states {res.n}"

    _claim(out, "residual acceptor gives a six-state subatomic witness",
           u5_residual)

    def u5_nsyn():
        f = fixture("F_U5")
        ns_bound, _ = ns_search(f.ctx, f.lang, budget, hints=[f.nfa])
        nsyn_bound, _ = nsyn_search(f.ctx, f.lang, budget, ns_bound=ns_bound)
        if extended:
            return nsyn_bound.exact and nsyn_bound.value == 6, \
                f"nsyn {nsyn_bound.lower}..{nsyn_bound.upper}"
        return (nsyn_bound.lower, nsyn_bound.upper) in ((5, 6), (6, 6)), \
            f"nsyn {nsyn_bound.lower}..{nsyn_bound.upper}"

    _claim(out, "unary subatomic measure is six"
                + ("" if extended else " (bounds only without the "
                                       "extended refutation)"), u5_nsyn)

    if extended:
        def u5_k5_refutation():
            f = fixture("F_U5")
            wide = SearchBudget(max_states=budget.max_states,
                                max_nodes=max(budget.max_nodes, 10 ** 7))
            found = subatomic_search(f.ctx, f.lang, 5, wide)
            return found is None, "pool refutation over the 128-element " \
                                  "derivative algebra"

        _claim(out, "no subatomic acceptor with five states exists",
               u5_k5_refutation)

    def aa_lattice():
        f = fixture("F_AA")
        q = minimal_jsl(f.ctx, f.lang)
        res = canonical_residual(f.ctx, f.lang)
        return (q.s.n, len(q.s.irreducibles), res.n) == (5, 3, 3), \
            f"(|Q|, |J|, residual) = {(q.s.n, len(q.s.irreducibles), res.n)}"

    _claim(out, "two-word example has the five-element lattice", aa_lattice)

    def unary_blrq_is_blq():
        f = fixture("F_U5")
        left = blq(f.ctx, f.lang)
        both = blrq(f.ctx, f.lang)
        return set(left.lang_labels) == set(both.lang_labels), \
            f"sizes {left.s.n} vs {both.s.n}"

    _claim(out, "unary two-sided closure equals the one-sided closure",
           unary_blrq_is_blq)

    def dim_u5():
        f = fixture("F_U5")
        dep = dependency(f.ctx, f.lang)
        dim, _ = bipartite_dimension(dep.rows, budget)
        return dim <= 5 and dep.shape == (7, 7), f"dim {dim}, {dep.shape}"

    _claim(out, "dependency dimension of the unary example stays below "
                "its acceptor size", dim_u5)

    return out
