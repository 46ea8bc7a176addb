"""Synchronized regular relations over padded convolutions.

A relation automaton is an NFA whose symbols are k-tuples, one component
per track.  String tracks carry (possibly grouped) base symbols; layer
tracks carry whole ODD layers.  Supports are kept in product form
(TrackSupport) because layer alphabets are far too large to enumerate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .alphabet import PAD, group_symbols, is_pad, pad_symbol, split_symbol
from .automaton import (
    Nfa,
    canon_key,
    enumerate_language_upto,
    fa_difference,
    fa_intersect,
    fa_is_empty,
    fa_union,
)
from .errors import MalformedConvolutionError


@dataclass(frozen=True)
class TrackSpec:
    """Shape of one track: its base alphabet plus either a tensor power
    (string tracks) or the layer arity and width bound (layer tracks)."""

    kind: str  # "string" | "layer"
    alphabet: frozenset
    arity: int
    width: int | None = None

    def __post_init__(self):
        if self.kind not in ("string", "layer"):
            raise ValueError(f"unknown track kind {self.kind!r}")
        if self.arity < 1:
            raise ValueError("track arity must be positive")
        if self.kind == "layer" and self.width is None:
            raise ValueError("layer tracks carry a width bound")

    @property
    def pad(self):
        return PAD if self.kind == "layer" else pad_symbol(self.arity)


def string_track_symbols(alphabet: Iterable[str], arity: int) -> frozenset:
    """All padded symbols of a string track, the track pad included."""
    letters = sorted(alphabet) + [PAD]
    if arity == 1:
        return frozenset(letters)
    out = [()]
    for _ in range(arity):
        out = [t + (c,) for t in out for c in letters]
    return frozenset(out)


@dataclass(frozen=True)
class TrackSupport:
    """Product-form support: one symbol set per track (track pad
    included); a combined symbol belongs to the support when every
    component is in its track set and not all components are pads."""

    tracks: tuple

    def __contains__(self, sym) -> bool:
        if not isinstance(sym, tuple) or len(sym) != len(self.tracks):
            return False
        if all(is_pad(c) for c in sym):
            return False
        return all(c in track for c, track in zip(sym, self.tracks))

    def __and__(self, other: "TrackSupport") -> "TrackSupport":
        self._check(other)
        return TrackSupport(tuple(a & b for a, b in zip(self.tracks, other.tracks)))

    def __or__(self, other: "TrackSupport") -> "TrackSupport":
        self._check(other)
        return TrackSupport(tuple(a | b for a, b in zip(self.tracks, other.tracks)))

    def issubset(self, other: "TrackSupport") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.tracks, other.tracks))

    def _check(self, other):
        if not isinstance(other, TrackSupport) or len(other.tracks) != len(self.tracks):
            raise TypeError("support operands must share the track layout")

    def __iter__(self):
        combos = [()]
        for track in self.tracks:
            members = sorted(track, key=canon_key)
            combos = [t + (c,) for t in combos for c in members]
        return iter(t for t in combos if not all(is_pad(c) for c in t))

    def __len__(self) -> int:
        total = 1
        all_pads = 1
        for track in self.tracks:
            total *= len(track)
            all_pads *= int(any(is_pad(c) for c in track))
        return total - all_pads


@dataclass(frozen=True, eq=False)
class RelationAutomaton:
    nfa: Nfa
    tracks: tuple

    @property
    def arity(self) -> int:
        return len(self.tracks)

    @property
    def support(self) -> TrackSupport:
        return self.nfa.support


def track_pad(spec: TrackSpec):
    return spec.pad


# ---------------------------------------------------------------------------
# the fused product at the heart of every multi-relation construction


def joined_product(rels: Sequence[RelationAutomaton],
                   equalities: Iterable[tuple[int, int]] = ()) -> RelationAutomaton:
    """Product realizing the direct sum of `rels`, with the listed pairs
    of global (1-based) track indices constrained to carry equal symbols
    column by column.

    Each factor is padded out with a dedicated absorbing state entered
    from its final states, and a phase bit recording whether the factor
    has consumed a symbol yet.  This realizes exactly the convolutions of
    member tuples: pad self-loops placed directly on final states (the
    naive construction) would also accept pad columns interleaved with
    proper ones, and factor-level empty strings.
    """
    specs: list[TrackSpec] = []
    offsets = []
    for r in rels:
        offsets.append(len(specs))
        specs.extend(r.tracks)

    # union-find over global track positions (0-based internally)
    parent = list(range(len(specs)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in equalities:
        a, b = find(i - 1), find(j - 1)
        if a != b:
            parent[a] = b
    groups = [find(x) for x in range(len(specs))]

    # Per factor: local track positions with their group ids.
    local_groups = []
    for ri, r in enumerate(rels):
        off = offsets[ri]
        local_groups.append([(t, groups[off + t]) for t in range(len(r.tracks))])

    pads = [tuple(spec.pad for spec in r.tracks) for r in rels]
    DONE = ("#done",)

    def extended_out(ri: int, state):
        """Sorted [(symbol_tuple, next_state)] of factor ri in the padded
        state space ((q, phase) or DONE)."""
        r = rels[ri]
        if state == DONE:
            return [(pads[ri], DONE)]
        q, phase = state
        out = []
        for sym, dsts in r.nfa.delta.get(q, {}).items():
            for d in dsts:
                out.append((sym, (d, 1)))
        if phase == 1 and q in r.nfa.final:
            out.append((pads[ri], DONE))
        out.sort(key=lambda e: (canon_key(e[0]), canon_key(e[1])))
        return out

    def side_final(ri: int, state) -> bool:
        if state == DONE:
            return True
        q, phase = state
        return phase == 1 and q in rels[ri].nfa.final

    initial_tuples = [()]
    for r in rels:
        inits = sorted(r.nfa.initial, key=canon_key)
        initial_tuples = [t + ((q, 0),) for t in initial_tuples for q in inits]

    ids = {}
    order = []
    for t in initial_tuples:
        if t not in ids:
            ids[t] = len(order)
            order.append(t)
    trans = set()
    final = set()
    i = 0
    while i < len(order):
        joint = order[i]
        if all(side_final(ri, s) for ri, s in enumerate(joint)):
            final.add(i)
        outs = [extended_out(ri, s) for ri, s in enumerate(joint)]

        def expand(ri, sym_parts, dst_parts, assigned):
            if ri == len(rels):
                sym = tuple(c for part in sym_parts for c in part)
                if all(is_pad(c) for c in sym):
                    return
                key = tuple(dst_parts)
                j = ids.get(key)
                if j is None:
                    j2 = len(order)
                    ids[key] = j2
                    order.append(key)
                    j = j2
                trans.add((i, sym, j))
                return
            for sym, dst in outs[ri]:
                new_assigned = assigned
                ok = True
                for t, g in local_groups[ri]:
                    c = sym[t]
                    prev = new_assigned.get(g)
                    if prev is None:
                        if new_assigned is assigned:
                            new_assigned = dict(assigned)
                        new_assigned[g] = c
                    elif prev != c:
                        ok = False
                        break
                if ok:
                    expand(ri + 1, sym_parts + [sym], dst_parts + [dst], new_assigned)

        expand(0, [], [], {})
        i += 1

    support = TrackSupport(tuple(
        track for r in rels for track in r.nfa.support.tracks
    ))
    nfa = Nfa(
        frozenset(range(len(order))),
        support,
        frozenset(trans),
        frozenset(ids[t] for t in initial_tuples),
        frozenset(final),
    )
    return RelationAutomaton(nfa, tuple(specs))


# ---------------------------------------------------------------------------
# the operation set


def rel_perm(r: RelationAutomaton, p: Sequence[int]) -> RelationAutomaton:
    """Permute tracks: result track i carries input track p[i] (1-based)."""
    k = r.arity
    if sorted(p) != list(range(1, k + 1)):
        raise ValueError(f"{tuple(p)} is not a permutation of 1..{k}")
    idx = [q - 1 for q in p]
    nfa = r.nfa
    support = TrackSupport(tuple(nfa.support.tracks[i] for i in idx))
    return RelationAutomaton(
        Nfa(
            nfa.states,
            support,
            frozenset((s, tuple(sym[i] for i in idx), d) for s, sym, d in nfa.transitions),
            nfa.initial,
            nfa.final,
        ),
        tuple(r.tracks[i] for i in idx),
    )


def rel_proj(r: RelationAutomaton, drop: Iterable[int]) -> RelationAutomaton:
    """Remove the given (1-based) tracks, then restore convolution
    validity: states reaching a final state through all-pad columns
    become final and the all-pad transitions are deleted."""
    drop = set(drop)
    if not drop:
        return r
    k = r.arity
    if not drop <= set(range(1, k + 1)):
        raise ValueError("projection indices out of range")
    if len(drop) == k:
        raise ValueError("cannot project away every track")
    keep = [i for i in range(k) if (i + 1) not in drop]
    nfa = r.nfa
    projected = [
        (s, tuple(sym[i] for i in keep), d) for s, sym, d in nfa.transitions
    ]
    pad_edges: dict = {}
    proper = []
    for s, sym, d in projected:
        if all(is_pad(c) for c in sym):
            pad_edges.setdefault(d, set()).add(s)
        else:
            proper.append((s, sym, d))
    final = set(nfa.final)
    stack = list(final)
    while stack:
        q = stack.pop()
        for p in pad_edges.get(q, ()):
            if p not in final:
                final.add(p)
                stack.append(p)
    support = TrackSupport(tuple(nfa.support.tracks[i] for i in keep))
    return RelationAutomaton(
        Nfa(nfa.states, support, frozenset(proper), nfa.initial, frozenset(final)),
        tuple(r.tracks[i] for i in keep),
    )


def rel_identify(r: RelationAutomaton, pairs: Iterable[tuple[int, int]]) -> RelationAutomaton:
    """Keep only tuples whose i-th and j-th components are equal, for
    every (i, j) listed; equal strings pad identically, so columnwise
    symbol equality is exactly string equality."""
    pairs = list(pairs)
    if not pairs:
        return r
    k = r.arity
    for i, j in pairs:
        if not (1 <= i <= k and 1 <= j <= k):
            raise ValueError(f"identify pair ({i}, {j}) out of range")
    nfa = r.nfa
    kept = frozenset(
        (s, sym, d)
        for s, sym, d in nfa.transitions
        if all(sym[i - 1] == sym[j - 1] for i, j in pairs)
    )
    return RelationAutomaton(
        Nfa(nfa.states, nfa.support, kept, nfa.initial, nfa.final),
        r.tracks,
    )


def rel_fold(r: RelationAutomaton, i: int, j: int) -> RelationAutomaton:
    """Regroup string tracks i..j (1-based, i <= j) into one track over
    the tensor-power alphabet."""
    k = r.arity
    if not (1 <= i <= j <= k):
        raise ValueError("fold range out of bounds")
    span = range(i - 1, j)
    base = None
    for t in span:
        spec = r.tracks[t]
        if spec.kind != "string":
            raise ValueError("fold applies to string tracks only")
        if base is None:
            base = spec.alphabet
        elif spec.alphabet != base:
            raise ValueError("folded tracks must share a base alphabet")
    arity = sum(r.tracks[t].arity for t in span)
    folded_spec = TrackSpec("string", base, arity)
    tracks = r.tracks[: i - 1] + (folded_spec,) + r.tracks[j:]

    def fold_sym(sym):
        return sym[: i - 1] + (group_symbols(sym[i - 1 : j]),) + sym[j:]

    nfa = r.nfa
    support = TrackSupport(
        nfa.support.tracks[: i - 1]
        + (string_track_symbols(base, arity),)
        + nfa.support.tracks[j:]
    )
    return RelationAutomaton(
        Nfa(
            nfa.states,
            support,
            frozenset((s, fold_sym(sym), d) for s, sym, d in nfa.transitions),
            nfa.initial,
            nfa.final,
        ),
        tracks,
    )


def rel_unfold(r: RelationAutomaton, i: int) -> RelationAutomaton:
    """Split the grouped string track i into its single-symbol tracks
    (the inverse of a fold of singles)."""
    k = r.arity
    if not (1 <= i <= k):
        raise ValueError("unfold index out of range")
    spec = r.tracks[i - 1]
    if spec.kind != "string" or spec.arity < 2:
        raise ValueError("unfold needs a grouped string track")
    m = spec.arity
    singles = tuple(TrackSpec("string", spec.alphabet, 1) for _ in range(m))
    tracks = r.tracks[: i - 1] + singles + r.tracks[i:]

    def unfold_sym(sym):
        parts = split_symbol(sym[i - 1], (1,) * m)
        return sym[: i - 1] + parts + sym[i:]

    nfa = r.nfa
    single_set = string_track_symbols(spec.alphabet, 1)
    support = TrackSupport(
        nfa.support.tracks[: i - 1]
        + (single_set,) * m
        + nfa.support.tracks[i:]
    )
    return RelationAutomaton(
        Nfa(
            nfa.states,
            support,
            frozenset((s, unfold_sym(sym), d) for s, sym, d in nfa.transitions),
            nfa.initial,
            nfa.final,
        ),
        tracks,
    )


def rel_is_empty(r: RelationAutomaton) -> bool:
    return fa_is_empty(r.nfa)[0]


def rel_direct_sum(r1: RelationAutomaton, r2: RelationAutomaton) -> RelationAutomaton:
    """All concatenations of a member of r1 with a member of r2, shorter
    side padded; the direct sum with an empty relation is the other
    relation unchanged."""
    if rel_is_empty(r2):
        return r1
    if rel_is_empty(r1):
        return r2
    return joined_product([r1, r2])


def rel_union(r1: RelationAutomaton, r2: RelationAutomaton) -> RelationAutomaton:
    _check_compatible(r1, r2)
    return RelationAutomaton(fa_union(r1.nfa, r2.nfa), r1.tracks)


def rel_intersect(r1: RelationAutomaton, r2: RelationAutomaton) -> RelationAutomaton:
    _check_compatible(r1, r2)
    return RelationAutomaton(fa_intersect(r1.nfa, r2.nfa), r1.tracks)


def rel_complement_within(universe: RelationAutomaton, r: RelationAutomaton) -> RelationAutomaton:
    _check_compatible(universe, r)
    return RelationAutomaton(fa_difference(universe.nfa, r.nfa), universe.tracks)


def rel_bool(op: str, *args: RelationAutomaton) -> RelationAutomaton:
    if op == "union":
        return rel_union(*args)
    if op == "intersect":
        return rel_intersect(*args)
    if op == "complement_within":
        return rel_complement_within(*args)
    raise ValueError(f"unknown boolean operation {op!r}")


def _check_compatible(r1: RelationAutomaton, r2: RelationAutomaton):
    if r1.tracks != r2.tracks:
        raise ValueError("relation operands must share arity and track specs")


def decode_convolution(word: Sequence[tuple], tracks: Sequence[TrackSpec]) -> tuple:
    """Split an accepted string into per-track strings, stripping each
    track's pad suffix; rejects non-convolutions."""
    k = len(tracks)
    out = []
    for col in word:
        if not isinstance(col, tuple) or len(col) != k:
            raise MalformedConvolutionError(f"column {col!r} does not have {k} tracks")
        if all(is_pad(c) for c in col):
            raise MalformedConvolutionError("all-pad column")
    for t, spec in enumerate(tracks):
        seen_pad = False
        comp = []
        for pos, col in enumerate(word):
            c = col[t]
            if is_pad(c):
                if spec.kind == "string" and spec.arity > 1 and c == PAD:
                    raise MalformedConvolutionError(
                        f"track {t + 1}: bare pad on a grouped track at column {pos + 1}"
                    )
                seen_pad = True
            elif seen_pad:
                raise MalformedConvolutionError(
                    f"track {t + 1}: pad before proper symbol at column {pos + 1}"
                )
            else:
                comp.append(c)
        if not comp:
            raise MalformedConvolutionError(f"track {t + 1} is empty")
        out.append(tuple(comp))
    return tuple(out)


def enumerate_tuples(r: RelationAutomaton, max_len: int, limit: int | None = None) -> set:
    """All member tuples whose convolution has length <= max_len; the
    independent-oracle hook behind the differential test suites."""
    words = enumerate_language_upto(r.nfa, max_len, limit)
    return {decode_convolution(w, r.tracks) for w in words}


def rel_from_tuples(tuples: Iterable[tuple], tracks: Sequence[TrackSpec],
                    extra_layer_symbols: dict | None = None) -> RelationAutomaton:
    """Relation automaton accepting exactly the given tuples (each a
    tuple of per-track symbol strings); one branch per tuple."""
    tracks = tuple(tracks)
    tuples = sorted(set(tuples), key=canon_key)
    trans = set()
    initial = set()
    final = set()
    per_track_syms: list[set] = [set() for _ in tracks]
    for spec, bucket in zip(tracks, per_track_syms):
        if spec.kind == "string":
            bucket.update(string_track_symbols(spec.alphabet, spec.arity))
        else:
            bucket.add(PAD)
    if extra_layer_symbols:
        for t, syms in extra_layer_symbols.items():
            per_track_syms[t].update(syms)
    for n, tup in enumerate(tuples):
        if len(tup) != len(tracks):
            raise ValueError("tuple arity does not match the track specs")
        length = max(len(comp) for comp in tup)
        initial.add((n, 0))
        final.add((n, length))
        for pos in range(length):
            col = tuple(
                comp[pos] if pos < len(comp) else spec.pad
                for comp, spec in zip(tup, tracks)
            )
            for c, bucket in zip(col, per_track_syms):
                bucket.add(c)
            trans.add(((n, pos), col, (n, pos + 1)))
    support = TrackSupport(tuple(frozenset(b) for b in per_track_syms))
    states = {q for q, _s, _d in trans} | {d for _q, _s, d in trans} | initial | final
    nfa = Nfa(frozenset(states), support, frozenset(trans),
              frozenset(initial), frozenset(final))
    return RelationAutomaton(nfa, tracks)
