"""Text and JSON serialization.

The ``.aut`` format is line based: ``alphabet a b``, ``states N``,
``initial i j ...``, ``final i j ...``, then one transition per line as
``src sym dst [dst ...]``; ``#`` starts a comment.  A file describes a DFA
exactly when each (state, symbol) pair has one target and a single initial
state is listed.
"""

from __future__ import annotations

import json

from .lang import Alphabet, Dfa, Nfa, bits


def write_aut(n: Nfa, alphabet: Alphabet) -> str:
    lines = [f"alphabet {' '.join(alphabet.symbols)}", f"states {n.n}"]
    lines.append("initial " + " ".join(str(q) for q in bits(n.initial)))
    lines.append("final " + " ".join(str(q) for q in bits(n.final)))
    for sym in range(n.n_symbols):
        for src in range(n.n):
            mask = n.trans[sym][src]
            if mask:
                dsts = " ".join(str(t) for t in bits(mask))
                lines.append(f"{src} {alphabet.symbols[sym]} {dsts}")
    return "\n".join(lines) + "\n"


def parse_aut(text: str):
    """Returns (alphabet, nfa); raises ValueError on malformed input."""
    alphabet = None
    n_states = None
    initial = []
    final = []
    triples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        head = parts[0]
        try:
            if head == "alphabet":
                alphabet = Alphabet(tuple(parts[1:]))
            elif head == "states":
                n_states = int(parts[1])
            elif head == "initial":
                initial = [int(x) for x in parts[1:]]
            elif head == "final":
                final = [int(x) for x in parts[1:]]
            else:
                src = int(parts[0])
                sym = parts[1]
                dsts = [int(x) for x in parts[2:]]
                if not dsts:
                    raise ValueError("transition without targets")
                triples.extend((src, sym, d) for d in dsts)
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad .aut line {lineno}: {raw!r} ({exc})")
    if alphabet is None or n_states is None:
        raise ValueError("missing alphabet or states line")
    coded = []
    for src, sym, dst in triples:
        if sym not in alphabet.symbols:
            raise ValueError(f"unknown symbol {sym!r}")
        if not (0 <= src < n_states and 0 <= dst < n_states):
            raise ValueError(f"state out of range in {src} {sym} {dst}")
        coded.append((src, alphabet.index(sym), dst))
    for q in initial + final:
        if not 0 <= q < n_states:
            raise ValueError(f"state {q} out of range")
    return alphabet, Nfa.from_triples(n_states, len(alphabet), coded,
                                      initial, final)


def as_dfa(n: Nfa):
    """The same automaton as a DFA when it is one, else None."""
    if n.initial.bit_count() != 1:
        return None
    rows = []
    for sym in range(n.n_symbols):
        row = []
        for q in range(n.n):
            mask = n.trans[sym][q]
            if mask.bit_count() != 1:
                return None
            row.append(mask.bit_length() - 1)
        rows.append(tuple(row))
    return Dfa(n.n, n.n_symbols, tuple(rows), n.initial.bit_length() - 1,
               n.final)


def semilattice_json(s) -> dict:
    bits_rowmajor = "".join("1" if s.leq(i, j) else "0"
                            for i in range(s.n) for j in range(s.n))
    out = {"n": s.n, "leq": bits_rowmajor,
           "irreducibles": list(s.irreducibles)}
    if s.labels is not None:
        out["labels"] = [f"{label:b}" for label in s.labels]
    return out


def jsldfa_json(a) -> dict:
    out = {"semilattice": semilattice_json(a.s),
           "delta": [list(row) for row in a.delta],
           "init": a.init, "cofinal": a.cofinal}
    if a.lang_labels is not None:
        out["labels"] = [lang_json(h) for h in a.lang_labels]
    return out


def monoid_json(m) -> dict:
    return {"size": m.n,
            "mul": [x for row in m.mul for x in row],
            "unit": m.unit,
            "gens": list(m.gen),
            "witnesses": ["".join(str(a) for a in w) for w in m.witnesses]}


def lang_json(h) -> dict:
    d = h.dfa
    return {"states": d.n, "initial": d.initial,
            "final": [q for q in bits(d.final)],
            "trans": [list(row) for row in d.trans]}


def dumps(obj, deterministic=True) -> str:
    return json.dumps(obj, sort_keys=deterministic, indent=2) + "\n"
