"""Command-line interface.

Reports go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 analysis failure (a claim mismatch under verify-paper), 2 input error,
3 budget exhaustion (partial bounds are still printed).
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys

from . import aut_io
from .complexity import (bipartite_dimension, canonical_residual,
                         chrobak_normal_form, chrobak_to_atomic, classify,
                         dependency, is_atomic, is_chrobak, is_subatomic,
                         ns_search, nsyn_search, reduced_dependency)
from .fixtures import fixture, fixture_names
from .jsl import dual_auto, minimal_jsl
from .lang import Alphabet, BudgetExceeded, Context, parse_regex
from .monoid import syntactic_monoid
from .search import SearchBudget
from .semilattice import predicates
from .verify import run_claims


def _expand_repetition(text: str) -> str:
    """Expand bounded repetition (group{3} or group^3) before parsing."""
    pattern = re.compile(r"(\([^()]*\)|[A-Za-z0-9@#])\s*(?:\{(\d+)\}|\^(\d+))")
    while True:
        m = pattern.search(text)
        if m is None:
            return text
        unit = m.group(1)
        count = int(m.group(2) or m.group(3))
        text = text[:m.start()] + (unit * count if count else "@") + text[m.end():]


def _input_language(args):
    """Returns (ctx, lang, nfa-or-None) from --fixture/--regex/--aut."""
    given = [x for x in (args.fixture, args.regex, args.aut) if x]
    if len(given) != 1:
        raise ValueError("provide exactly one of --fixture, --regex, --aut")
    if args.fixture:
        f = fixture(args.fixture)
        return f.ctx, f.lang, f.nfa
    if args.regex:
        text = _expand_repetition(args.regex)
        if args.alphabet:
            alphabet = Alphabet(tuple(s for s in args.alphabet.split(",") if s))
        else:
            letters = sorted(set(c for c in text if c.isalnum()))
            if not letters:
                letters = ["a"]
            alphabet = Alphabet(tuple(letters))
        ctx = Context(alphabet)
        lang = ctx.handle(parse_regex(text, alphabet))
        return ctx, lang, None
    with open(args.aut) as fh:
        alphabet, nfa = aut_io.parse_aut(fh.read())
    ctx = Context(alphabet)
    return ctx, ctx.handle(nfa), nfa


def _budget(args) -> SearchBudget:
    return SearchBudget(max_states=args.budget_states,
                        max_nodes=args.budget_nodes,
                        time_limit_s=args.timeout_s)


def _emit(args, payload: dict, text_lines):
    if args.format == "json":
        sys.stdout.write(aut_io.dumps(payload))
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


def _witness_block(ctx, bound):
    if bound.witness is None:
        return None
    return aut_io.write_aut(bound.witness, ctx.alphabet)


def _measure_payload(ctx, bound, provenance):
    out = {"lower": bound.lower, "upper": bound.upper, "exact": bound.exact}
    w = _witness_block(ctx, bound)
    if w is not None:
        out["witness_aut"] = w
    out["provenance"] = [f"{kind}: {how}" for kind, how in provenance]
    return out


def run(argv) -> int:
    parser = argparse.ArgumentParser(
        prog="nsc",
        description="exact nondeterministic state and syntactic complexity "
                    "of regular languages, with their algebraic invariants")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--regex")
        p.add_argument("--aut")
        p.add_argument("--fixture",
                       help=f"one of {', '.join(fixture_names())}")
        p.add_argument("--alphabet", help="comma separated symbol names")
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--budget-states", type=int, default=16)
        p.add_argument("--budget-nodes", type=int, default=10 ** 7)
        p.add_argument("--timeout-s", type=float, default=None)
        p.add_argument("--extended", action="store_true")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timings", action="store_true",
                       help="include wall-clock timings in reports")
        return p

    for name, help_text in [
            ("min-dfa", "canonical minimal dfa of the language"),
            ("monoid", "syntactic monoid"),
            ("lattice", "semilattice of unions of left derivatives"),
            ("dependency", "dependency relation between derivatives"),
            ("dim", "exact bipartite dimension of the dependency relation"),
            ("ns", "least acceptor size"),
            ("nsyn", "least subatomic acceptor size"),
            ("residual", "canonical residual acceptor"),
            ("chrobak", "normal form of a unary acceptor"),
            ("check-atomic", "is the given acceptor atomic"),
            ("check-subatomic", "is the given acceptor subatomic"),
            ("dualize", "dual of the minimal semilattice acceptor"),
            ("classify", "structural language classes"),
            ("verify-paper", "run the documented example-corpus claims"),
            ("selftest", argparse.SUPPRESS)]:
        add(name, help_text)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command

    if cmd == "verify-paper":
        results = run_claims(extended=args.extended, budget=_budget(args))
        payload = {"claims": [
            {"claim": r.claim, "ok": r.ok, "details": r.details,
             **({"seconds": round(r.seconds, 3)} if args.timings else {})}
            for r in results]}
        lines = [("PASS " if r.ok else "FAIL ") + r.claim
                 + (f" [{r.details}]" if not r.ok else "")
                 + (f" ({r.seconds:.2f}s)" if args.timings else "")
                 for r in results]
        lines.append(f"{sum(r.ok for r in results)}/{len(results)} claims hold")
        _emit(args, payload, lines)
        return 0 if all(r.ok for r in results) else 1

    if cmd == "selftest":
        rng = random.Random(args.seed)
        from .lang import Nfa, rsc
        from .jsl import powerset, jsl_language
        ctx = Context(Alphabet.of("a", "b"))
        checked = 0
        for _ in range(50):
            n = rng.randint(1, 4)
            rows = tuple(tuple(sum(1 << t for t in range(n)
                                   if rng.random() < 0.3)
                               for _ in range(n)) for _ in range(2))
            full = (1 << n) - 1
            nfa = Nfa(n, 2, rows, rng.getrandbits(n) & full or 1,
                      rng.getrandbits(n) & full)
            assert ctx.handle(nfa) == jsl_language(powerset(nfa, ctx))
            checked += 1
        _emit(args, {"checked": checked, "seed": args.seed},
              [f"selftest passed on {checked} samples (seed {args.seed})"])
        return 0

    ctx, lang, nfa = _input_language(args)
    budget = _budget(args)

    if cmd == "min-dfa":
        payload = {"states": lang.dfa.n,
                   "aut": aut_io.write_aut(lang.dfa.as_nfa(), ctx.alphabet)}
        _emit(args, payload, [payload["aut"].rstrip("\n")])
        return 0

    if cmd == "monoid":
        monoid, _ = syntactic_monoid(lang, budget.max_nodes)
        payload = aut_io.monoid_json(monoid)
        _emit(args, payload,
              [f"syntactic monoid size {monoid.n}",
               "witnesses: " + " ".join(
                   ctx.alphabet.decode(w) or "@" for w in monoid.witnesses)])
        return 0

    if cmd == "lattice":
        q = minimal_jsl(ctx, lang)
        payload = aut_io.jsldfa_json(q)
        payload["predicates"] = predicates(q.s)
        _emit(args, payload,
              [f"{q.s.n} elements, {len(q.s.irreducibles)} irreducible",
               f"predicates: {predicates(q.s)}"])
        return 0

    if cmd == "dependency":
        dep = dependency(ctx, lang)
        red = reduced_dependency(ctx, lang, dep)
        payload = {
            "rows": len(dep.rows), "cols": len(dep.col_handles),
            "matrix": [f"{r:0{len(dep.col_handles)}b}"[::-1]
                       for r in dep.rows],
            "reduced_rows": list(red.row_idx),
            "reduced_cols": list(red.col_idx),
        }
        _emit(args, payload,
              [f"{len(dep.rows)} x {len(dep.col_handles)} relation"]
              + payload["matrix"])
        return 0

    if cmd == "dim":
        dep = dependency(ctx, lang)
        dim, cover = bipartite_dimension(dep.rows, budget)
        payload = {"dim": dim,
                   "cover": [{"rows": f"{r:b}", "cols": f"{c:b}"}
                             for r, c in cover.pairs]}
        _emit(args, payload, [f"bipartite dimension {dim}"])
        return 0

    if cmd in ("ns", "nsyn"):
        hints = [nfa] if nfa is not None else []
        ns_bound, ns_prov = ns_search(ctx, lang, budget, hints=hints)
        if cmd == "ns":
            payload = {"ns": _measure_payload(ctx, ns_bound, ns_prov)}
            bound = ns_bound
        else:
            nsyn_bound, prov = nsyn_search(ctx, lang, budget, hints=hints,
                                           ns_bound=ns_bound)
            payload = {"nsyn": _measure_payload(ctx, nsyn_bound, prov)}
            bound = nsyn_bound
        word = "exactly" if bound.exact else "between"
        desc = (f"{cmd} is {word} {bound.upper}" if bound.exact else
                f"{cmd} is between {bound.lower} and {bound.upper}")
        _emit(args, payload, [desc])
        return 0 if bound.exact else 3

    if cmd == "residual":
        res = canonical_residual(ctx, lang)
        payload = {"states": res.n,
                   "aut": aut_io.write_aut(res, ctx.alphabet)}
        _emit(args, payload, [payload["aut"].rstrip("\n")])
        return 0

    if cmd == "chrobak":
        if nfa is None:
            nfa = lang.dfa.as_nfa()
        cnf = chrobak_normal_form(nfa, budget)
        atomic = chrobak_to_atomic(cnf, ctx)
        payload = {"input_states": nfa.n, "cnf_states": cnf.n,
                   "atomic_states": atomic.n,
                   "cnf_aut": aut_io.write_aut(cnf, ctx.alphabet),
                   "atomic_aut": aut_io.write_aut(atomic, ctx.alphabet)}
        _emit(args, payload,
              [f"normal form with {cnf.n} states; "
               f"atomic replacement with {atomic.n} states"])
        return 0

    if cmd in ("check-atomic", "check-subatomic"):
        if nfa is None:
            nfa = lang.dfa.as_nfa()
        report = (is_atomic if cmd == "check-atomic" else is_subatomic)(nfa, ctx)
        payload = {"value": report.value,
                   "by_state_languages": report.by_state_languages,
                   "by_dual_construction": report.by_dual_construction}
        _emit(args, payload,
              [f"{cmd.split('-')[1]}: {report.value} "
               f"(both routes agree)"])
        return 0

    if cmd == "dualize":
        q = minimal_jsl(ctx, lang)
        d = dual_auto(q)
        payload = aut_io.jsldfa_json(d)
        _emit(args, payload,
              [f"dual acceptor on {d.s.n} elements "
               f"(accepts the reverse language)"])
        return 0

    if cmd == "classify":
        flags = classify(ctx, lang, budget)
        payload = {"flags": flags}
        _emit(args, payload,
              [f"{name}: {value}" for name, value in flags.items()])
        return 0

    raise ValueError(f"unhandled command {cmd!r}")


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
