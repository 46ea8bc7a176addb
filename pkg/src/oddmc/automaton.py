"""Finite automata over explicit finite support alphabets.

Symbols are arbitrary hashable objects (tokens, tuples of tokens,
layers, tuples of layers); supports may be plain frozensets or any
set-like object implementing ``&``, ``|``, ``issubset`` and
``__contains__`` (see relations.TrackSupport for the product form used
by relation automata, which is never enumerated).

The empty string is not a member of any language here: all languages
live in support+, matching the convention that an automaton accepts via
at least one transition.

Boolean operations, determinization, emptiness and counting are routed
through int-encoded kernels; the compiled backend is selected at import
time in `oddmc._backend`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Hashable, Iterable, Sequence

from . import _backend
from .errors import ResourceLimitError

State = Hashable
Symbol = Hashable


def canon_key(x: Any):
    """A total order key over the heterogeneous values used as states and
    symbols; drives every deterministic iteration order."""
    if isinstance(x, bool):
        return (0, x)
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, tuple):
        return (3, tuple(canon_key(c) for c in x))
    if isinstance(x, frozenset):
        return (4, tuple(sorted(canon_key(c) for c in x)))
    key = getattr(x, "canon_key", None)
    if key is not None:
        return (5, key)
    return (6, repr(x))


@dataclass(frozen=True, eq=False)
class Nfa:
    """A nondeterministic finite automaton; immutable after construction."""

    states: frozenset
    support: Any
    transitions: frozenset
    initial: frozenset
    final: frozenset

    @cached_property
    def delta(self) -> dict:
        """src -> sym -> tuple of destinations (sorted)."""
        adj: dict = {}
        for src, sym, dst in self.transitions:
            adj.setdefault(src, {}).setdefault(sym, []).append(dst)
        return {
            src: {sym: tuple(sorted(d, key=canon_key)) for sym, d in row.items()}
            for src, row in adj.items()
        }

    @cached_property
    def occurring_symbols(self) -> frozenset:
        return frozenset(sym for _s, sym, _d in self.transitions)


def make_nfa(support, transitions, initial, final, states=None) -> Nfa:
    """Validating constructor: every transition must reference declared
    states and a support symbol."""
    transitions = frozenset(transitions)
    initial = frozenset(initial)
    final = frozenset(final)
    inferred = {q for q, _s, _d in transitions} | {d for _q, _s, d in transitions}
    inferred |= initial | final
    if states is None:
        states = frozenset(inferred)
    else:
        states = frozenset(states)
        if not inferred <= states:
            raise ValueError("transition or marker references an undeclared state")
    for _src, sym, _dst in transitions:
        if sym not in support:
            raise ValueError(f"transition symbol {sym!r} is not in the support")
    return Nfa(states, support, transitions, initial, final)


@dataclass(frozen=True, eq=False)
class Dfa:
    """Deterministic and total over its support.

    Edges into the designated sink are kept implicit: `step` resolves
    any missing (state, symbol) pair to `sink`.
    """

    states: frozenset
    support: Any
    rows: dict
    initial_state: State
    final: frozenset
    sink: State

    def step(self, state: State, sym: Symbol) -> State:
        return self.rows.get(state, {}).get(sym, self.sink)

    def accepts(self, word: Sequence[Symbol]) -> bool:
        if len(word) == 0:
            return False
        q = self.initial_state
        for sym in word:
            q = self.step(q, sym)
        return q in self.final

    @cached_property
    def transitions(self) -> frozenset:
        """Explicit (non-sink) transition view."""
        return frozenset(
            (src, sym, dst)
            for src, row in self.rows.items()
            for sym, dst in row.items()
        )

    def as_nfa(self) -> Nfa:
        """Language-preserving NFA view (sink edges dropped)."""
        return Nfa(
            self.states,
            self.support,
            self.transitions,
            frozenset({self.initial_state}),
            self.final,
        )


# ---------------------------------------------------------------------------
# int encoding


def _symbol_table(*nfas: Nfa) -> dict:
    syms = set()
    for a in nfas:
        for _s, sym, _d in a.transitions:
            syms.add(sym)
    return {sym: i for i, sym in enumerate(sorted(syms, key=canon_key))}


def _encode(a: Nfa, symtab: dict):
    states = sorted(a.states, key=canon_key)
    stab = {q: i for i, q in enumerate(states)}
    trans = sorted(
        (stab[src], symtab[sym], stab[dst]) for src, sym, dst in a.transitions
    )
    init = sorted(stab[q] for q in a.initial)
    fin = sorted(stab[q] for q in a.final)
    return trans, init, fin, states


# ---------------------------------------------------------------------------
# operations


def fa_accepts(a: Nfa, word: Sequence[Symbol]) -> bool:
    """Membership; the empty string is always rejected, as are words with
    symbols outside the support."""
    if len(word) == 0:
        return False
    current = a.initial
    delta = a.delta
    for sym in word:
        nxt: set = set()
        for q in current:
            nxt.update(delta.get(q, {}).get(sym, ()))
        if not nxt:
            return False
        current = frozenset(nxt)
    return bool(current & a.final)


def fa_intersect(a: Nfa, b: Nfa) -> Nfa:
    """Product automaton for L(a) & L(b); only reachable pairs are built."""
    symtab = _symbol_table(a, b)
    syms = sorted(symtab, key=symtab.get)
    ta, ia, fa, _ = _encode(a, symtab)
    tb, ib, fb, _ = _encode(b, symtab)
    n, trans, init, fin = _backend.intersect(ta, ia, fa, tb, ib, fb)
    return Nfa(
        frozenset(range(n)),
        a.support & b.support,
        frozenset((s, syms[y], d) for s, y, d in trans),
        frozenset(init),
        frozenset(fin),
    )


def fa_union(a: Nfa, b: Nfa) -> Nfa:
    """Disjoint-union automaton for L(a) | L(b)."""
    sa = sorted(a.states, key=canon_key)
    sb = sorted(b.states, key=canon_key)
    ra = {q: i for i, q in enumerate(sa)}
    rb = {q: i + len(sa) for i, q in enumerate(sb)}
    trans = {(ra[s], y, ra[d]) for s, y, d in a.transitions}
    trans |= {(rb[s], y, rb[d]) for s, y, d in b.transitions}
    return Nfa(
        frozenset(range(len(sa) + len(sb))),
        a.support | b.support,
        frozenset(trans),
        frozenset({ra[q] for q in a.initial} | {rb[q] for q in b.initial}),
        frozenset({ra[q] for q in a.final} | {rb[q] for q in b.final}),
    )


def fa_determinize(a: Nfa) -> Dfa:
    """Subset construction; the result is total over the support through
    its implicit sink edges."""
    symtab = _symbol_table(a)
    syms = sorted(symtab, key=symtab.get)
    ta, ia, fa, _ = _encode(a, symtab)
    n, rows, finals, sink = _backend.determinize(ta, ia, fa)
    drows = {
        i: {syms[y]: dst for y, dst in row}
        for i, row in enumerate(rows)
        if row
    }
    return Dfa(
        frozenset(range(n)),
        a.support,
        drows,
        0,
        frozenset(finals),
        sink,
    )


def _support_issubset(sa, sb) -> bool:
    if hasattr(sa, "issubset"):
        try:
            return sa.issubset(sb)
        except TypeError:
            pass
    return all(sym in sb for sym in sa)


def fa_difference(universe: Nfa, a: Nfa) -> Nfa:
    """L(universe) minus L(a).

    The complement of `a` is taken relative to support(universe), but is
    never materialized: `a` is determinized on the fly along the symbols
    occurring in `universe`, which is what makes astronomically large
    supports workable.
    """
    if not _support_issubset(a.support, universe.support):
        raise ValueError("support of the subtrahend must be within the universe support")
    symtab = _symbol_table(universe, a)
    syms = sorted(symtab, key=symtab.get)
    tu, iu, fu, _ = _encode(universe, symtab)
    tb, ib, fb, _ = _encode(a, symtab)
    n, trans, init, fin = _backend.difference(tu, iu, fu, tb, ib, fb)
    return Nfa(
        frozenset(range(n)),
        universe.support,
        frozenset((s, syms[y], d) for s, y, d in trans),
        frozenset(init),
        frozenset(fin),
    )


def fa_is_empty(a: Nfa) -> tuple[bool, tuple | None]:
    """(True, None) when L(a) is empty, else (False, shortest witness).

    The witness is the shortest accepted string found by BFS with ties
    broken by the fixed total order on symbols.
    """
    symtab = _symbol_table(a)
    syms = sorted(symtab, key=symtab.get)
    ta, ia, fa, _ = _encode(a, symtab)
    word = _backend.shortest_accepted(ta, ia, fa)
    if word is None:
        return True, None
    return False, tuple(syms[y] for y in word)


def fa_count_exact_length(d: Dfa, length: int) -> int:
    """|L(d) & support^length| by dynamic programming over levels, with
    exact big-integer arithmetic."""
    if length < 1:
        raise ValueError("length must be positive")
    states = sorted(d.states, key=canon_key)
    stab = {q: i for i, q in enumerate(states)}
    # Symbol identities are irrelevant to the path count; edge
    # multiplicity is what matters, so the list must keep duplicates.
    trans = [
        (stab[src], 0, stab[dst])
        for src, row in d.rows.items()
        for _sym, dst in row.items()
        if dst != d.sink
    ]
    return _backend.count_paths(
        len(states),
        sorted(trans),
        [stab[d.initial_state]],
        sorted(stab[q] for q in d.final),
        length,
    )


def fa_product_dfa(d: Dfa, a: Nfa) -> Dfa:
    """Product of a DFA with a per-(state,symbol)-deterministic NFA,
    yielding a DFA for the intersection (used by the counting pipeline,
    where the second operand is the leveled assignment automaton)."""
    if len(a.initial) != 1:
        raise ValueError("second operand must have a single initial state")
    (qa0,) = a.initial
    delta = a.delta
    sink = "sink"
    start = (d.initial_state, qa0)
    ids = {start: 0}
    order = [start]
    rows: dict = {}
    final = set()
    i = 0
    while i < len(order):
        qd, qa = order[i]
        if qd in d.final and qa in a.final:
            final.add(i)
        row = {}
        for sym, dsts in sorted(delta.get(qa, {}).items(), key=lambda kv: canon_key(kv[0])):
            if len(dsts) > 1:
                raise ValueError("second operand is not deterministic")
            nd = d.step(qd, sym)
            if nd == d.sink:
                continue
            key = (nd, dsts[0])
            j = ids.get(key)
            if j is None:
                j = len(order)
                ids[key] = j
                order.append(key)
            row[sym] = j
        if row:
            rows[i] = row
        i += 1
    return Dfa(
        frozenset(range(len(order))) | {sink},
        d.support & a.support,
        rows,
        0,
        frozenset(final),
        sink,
    )


def minimize_dfa(d: Dfa) -> Dfa:
    """Partition-refinement minimization (optional; no operation applies
    it by default)."""
    states = sorted(d.states, key=canon_key)
    block = {q: (q in d.final) for q in states}
    while True:
        # The sink's block id lets implicit edges stay implicit: pairs
        # leading to the sink's block are omitted from signatures.
        sink_block = block[d.sink]
        sigs = {}
        for q in states:
            sig = tuple(
                sorted(
                    ((canon_key(sym), block[dst]) for sym, dst in d.rows.get(q, {}).items()
                     if block[dst] != sink_block),
                )
            )
            sigs[q] = (block[q], sig)
        labels = {}
        new_block = {}
        for q in states:
            new_block[q] = labels.setdefault(sigs[q], len(labels))
        if len(set(new_block.values())) == len(set(block.values())):
            block = new_block
            break
        block = new_block
    reps: dict = {}
    for q in states:
        reps.setdefault(block[q], q)
    rows: dict = {}
    for q, row in d.rows.items():
        if reps[block[q]] != q:
            continue
        out = {
            sym: block[dst]
            for sym, dst in row.items()
            if block[dst] != block[d.sink]
        }
        if out:
            rows[block[q]] = out
    return Dfa(
        frozenset(set(block.values())),
        d.support,
        rows,
        block[d.initial_state],
        frozenset({block[q] for q in d.final}),
        block[d.sink],
    )


def enumerate_language_upto(a: Nfa, max_len: int, limit: int | None = None) -> set[tuple]:
    """All accepted strings of length <= max_len, as symbol tuples.

    Exponential in max_len by nature; intended for oracle-scale automata
    only, hence the optional result-count guard.
    """
    out: set[tuple] = set()
    delta = a.delta

    def walk(stateset: frozenset, prefix: tuple):
        if len(prefix) >= 1 and stateset & a.final:
            out.add(prefix)
            if limit is not None and len(out) > limit:
                raise ResourceLimitError(f"more than {limit} strings of length <= {max_len}")
        if len(prefix) == max_len:
            return
        next_syms: dict = {}
        for q in stateset:
            for sym, dsts in delta.get(q, {}).items():
                next_syms.setdefault(sym, set()).update(dsts)
        for sym in sorted(next_syms, key=canon_key):
            walk(frozenset(next_syms[sym]), prefix + (sym,))

    walk(a.initial, ())
    return out
