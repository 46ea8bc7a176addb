"""Vocabularies, structural tuples, class automata, and the core
relation automata grounding every construction over explicit per-track
supports.

A structural tuple packs one domain ODD plus one ODD per relation
symbol, all of one length; its derived structure has the domain ODD's
language as universe.  Class automata read the columnwise convolution of
those ODDs: one layer tuple per position.

Every automaton here is materialized only over the layers occurring in
the query (the support), never over the full layer alphabet, which has
size exponential in |alphabet| * width^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .alphabet import PAD, is_pad
from .automaton import Nfa, canon_key, fa_difference, fa_is_empty
from .errors import StructuralValidationError
from .odd import Layer, Odd, odd_to_nfa, validate_odd
from .relations import (
    RelationAutomaton,
    TrackSpec,
    TrackSupport,
    joined_product,
    rel_complement_within,
    rel_proj,
    string_track_symbols,
)


@dataclass(frozen=True)
class Vocabulary:
    relations: tuple

    def __post_init__(self):
        names = [name for name, _a in self.relations]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be distinct")
        for name, arity in self.relations:
            if arity < 1:
                raise ValueError(f"relation {name} must have positive arity")

    @property
    def rho(self) -> int:
        return len(self.relations)

    def arity(self, name: str) -> int:
        for n, a in self.relations:
            if n == name:
                return a
        raise KeyError(name)

    def index(self, name: str) -> int:
        """1-based position of a relation symbol."""
        for i, (n, _a) in enumerate(self.relations, start=1):
            if n == name:
                return i
        raise KeyError(name)


def vocabulary(*relations: tuple) -> Vocabulary:
    return Vocabulary(tuple(relations))


@dataclass(frozen=True)
class StructuralTuple:
    domain: Odd
    rels: tuple
    vocabulary: Vocabulary
    width: int

    @property
    def length(self) -> int:
        return self.domain.length

    @property
    def alphabet(self) -> frozenset:
        return self.domain.alphabet

    @property
    def odds(self) -> tuple:
        return (self.domain,) + self.rels


@dataclass(frozen=True)
class Support:
    """Per-track layer sets extracted from the query."""

    d0: frozenset
    rels: tuple


def support_from_tuple(t: StructuralTuple) -> Support:
    return Support(
        frozenset(t.domain.layers),
        tuple(frozenset(d.layers) for d in t.rels),
    )


@dataclass(frozen=True, eq=False)
class ClassAutomaton:
    """NFA over (rho+1)-tuples of layers presenting a class of
    structures."""

    nfa: Nfa
    alphabet: frozenset
    width: int
    vocabulary: Vocabulary


def support_from_class(ca: ClassAutomaton) -> Support:
    rho = ca.vocabulary.rho
    per_track: list[set] = [set() for _ in range(rho + 1)]
    for _s, sym, _d in ca.nfa.transitions:
        for t in range(rho + 1):
            if not is_pad(sym[t]):
                per_track[t].add(sym[t])
    return Support(frozenset(per_track[0]), tuple(frozenset(s) for s in per_track[1:]))


# ---------------------------------------------------------------------------
# encoding between tuples and layer-tuple strings


def tuple_to_string(t: StructuralTuple) -> tuple:
    """Positionwise zip of the component ODDs into a layer-tuple string."""
    odds = t.odds
    lengths = {d.length for d in odds}
    if len(lengths) != 1:
        raise ValueError("component ODDs must share one length")
    return tuple(
        tuple(d.layers[i] for d in odds) for i in range(t.length)
    )


def string_to_tuple(s: Sequence[tuple], alphabet: Iterable[str], width: int,
                    vocab: Vocabulary) -> StructuralTuple:
    """Unzip a layer-tuple string and validate each track as an ODD; the
    structural conditions proper are validate_structural's job."""
    alphabet = frozenset(alphabet)
    if not s:
        raise ValueError("empty layer-tuple string")
    rho = vocab.rho
    odds = []
    for t in range(rho + 1):
        layers = tuple(col[t] for col in s)
        odds.append(validate_odd(Odd(layers, alphabet)))
    return StructuralTuple(odds[0], tuple(odds[1:]), vocab, width)


# ---------------------------------------------------------------------------
# validation


def _closure_power(d0: Odd, arity: int) -> Nfa:
    """NFA for the tensor power of L(d0): all convolutions of `arity`
    member strings, over bare track symbols."""
    base = RelationAutomaton(
        _bare_to_rel_nfa(odd_to_nfa(d0), d0),
        (TrackSpec("string", d0.alphabet, 1),),
    )
    powered = joined_product([base] * arity)
    nfa = powered.nfa
    # collapse the arity-tuples of singles into bare grouped symbols
    def regroup(sym):
        flat = tuple(sym)
        return flat[0] if arity == 1 else flat

    support = frozenset(
        t for t in string_track_symbols(d0.alphabet, arity) if not is_pad(t)
    )
    return Nfa(
        nfa.states,
        support,
        frozenset((s, regroup(sym), d) for s, sym, d in nfa.transitions),
        nfa.initial,
        nfa.final,
    )


def _bare_to_rel_nfa(nfa: Nfa, d: Odd) -> Nfa:
    """Wrap a bare-symbol NFA as a 1-track relation NFA."""
    support = TrackSupport((frozenset(d.proper_symbols | {d.pad}),))
    return Nfa(
        nfa.states,
        support,
        frozenset((s, (sym,), dst) for s, sym, dst in nfa.transitions),
        nfa.initial,
        nfa.final,
    )


def validate_structural(t: StructuralTuple) -> StructuralTuple:
    """Check the structural-tuple conditions: component shapes, shared
    length, width bound, relation languages inside the tensored domain
    language, and a nonempty domain."""
    vocab = t.vocabulary
    if len(t.rels) != vocab.rho:
        raise StructuralValidationError("shape", "one relation ODD per vocabulary symbol")
    for d in t.odds:
        validate_odd(d)
        if d.alphabet != t.alphabet:
            raise StructuralValidationError("alphabet", "component ODDs share the base alphabet")
    if t.domain.arity != 1:
        raise StructuralValidationError("arity", "the domain ODD must have arity 1")
    for (name, a), d in zip(vocab.relations, t.rels):
        if d.arity != a:
            raise StructuralValidationError(
                "arity", f"ODD for {name} has arity {d.arity}, expected {a}"
            )
    lengths = {d.length for d in t.odds}
    if len(lengths) != 1:
        raise StructuralValidationError("length", "component ODDs must share one length")
    for d in t.odds:
        if d.width > t.width:
            raise StructuralValidationError(
                "width", f"component width {d.width} exceeds the bound {t.width}"
            )
        for layer in d.layers:
            if layer.width != t.width:
                raise StructuralValidationError(
                    "width", "layers must carry the tuple's width bound"
                )
    empty, _ = fa_is_empty(odd_to_nfa(t.domain))
    if empty:
        raise StructuralValidationError("empty-domain", "the domain language is empty")
    for (name, a), d in zip(vocab.relations, t.rels):
        closure = _closure_power(t.domain, a)
        leak = fa_difference(odd_to_nfa(d), closure)
        bad, witness = fa_is_empty(leak)
        if not bad:
            raise StructuralValidationError(
                "containment",
                f"{name} accepts {witness!r}, which is not a convolution of domain members",
            )
    return t


def is_structural(t: StructuralTuple) -> bool:
    try:
        validate_structural(t)
        return True
    except Exception:
        return False


# ---------------------------------------------------------------------------
# core automata (all support-grounded)


def _fit(layers: Iterable[Layer], arity: int, width: int) -> list[Layer]:
    out = [b for b in layers if b.arity == arity and b.width == width]
    return sorted(out, key=lambda b: b.canon_key)


def universe_odds(alphabet, width: int, arity: int, support: Iterable[Layer]) -> Nfa:
    """NFA over bare layer symbols accepting exactly the valid ODD
    strings over the support: one state per layer plus a start state;
    consecutive layers must chain frontiers and place flags correctly."""
    layers = _fit(support, arity, width)
    trans = set()
    for b in layers:
        if b.iflag:
            trans.add((("i",), b, ("q", b)))
    for b_prev in layers:
        if b_prev.fflag:
            continue
        for b in layers:
            if not b.iflag and b.left == b_prev.right:
                trans.add(((("q", b_prev)), b, ("q", b)))
    states = {("i",)} | {("q", b) for b in layers}
    return Nfa(
        frozenset(states),
        frozenset(layers),
        frozenset(trans),
        frozenset({("i",)}),
        frozenset(("q", b) for b in layers if b.fflag),
    )


def universe_rel(alphabet, width: int, arity: int, support: Iterable[Layer]) -> RelationAutomaton:
    """universe_odds wrapped as a 1-track layer relation."""
    nfa = universe_odds(alphabet, width, arity, support)
    track = TrackSupport((frozenset(set(_fit(support, arity, width)) | {PAD}),))
    wrapped = Nfa(
        nfa.states,
        track,
        frozenset((s, (sym,), d) for s, sym, d in nfa.transitions),
        nfa.initial,
        nfa.final,
    )
    return RelationAutomaton(
        wrapped, (TrackSpec("layer", frozenset(alphabet), arity, width),)
    )


def membership_rel(alphabet, width: int, arity: int, support: Iterable[Layer]) -> RelationAutomaton:
    """The fundamental membership relation: pairs (D, s) with D a valid
    ODD over the support and s a member of L(D).

    States remember the layer and the transition being simulated.  Two
    constraints absent from the naive construction are required for the
    language to consist of valid convolutions only: the first string
    symbol must be proper (members are nonempty), and a padded position
    can only be followed by padded positions.
    """
    alphabet = frozenset(alphabet)
    layers = _fit(support, arity, width)
    states = {("i",)}
    trans = set()
    finals = set()
    by_layer = {b: sorted(b.transitions, key=canon_key) for b in layers}
    for b in layers:
        for (l, sym, r) in by_layer[b]:
            states.add(("t", b, l, sym, r))
            if b.fflag and r in b.final:
                finals.add(("t", b, l, sym, r))
    for b in layers:
        if not b.iflag:
            continue
        for (l, sym, r) in by_layer[b]:
            if l in b.initial and not is_pad(sym):
                trans.add((("i",), (b, sym), ("t", b, l, sym, r)))
    for b_prev in layers:
        if b_prev.fflag:
            continue
        for b in layers:
            if b.iflag or b.left != b_prev.right:
                continue
            for (l0, sym0, r0) in by_layer[b_prev]:
                for (l, sym, r) in by_layer[b]:
                    if l != r0:
                        continue
                    if is_pad(sym0) and not is_pad(sym):
                        continue
                    trans.add(
                        (("t", b_prev, l0, sym0, r0), (b, sym), ("t", b, l, sym, r))
                    )
    support_t = TrackSupport((
        frozenset(set(layers) | {PAD}),
        string_track_symbols(alphabet, arity),
    ))
    nfa = Nfa(frozenset(states), support_t, frozenset(trans),
              frozenset({("i",)}), frozenset(finals))
    return RelationAutomaton(
        nfa,
        (TrackSpec("layer", alphabet, arity, width),
         TrackSpec("string", alphabet, arity)),
    )


def multi_membership(alphabet, width: int, n: int, support: Iterable[Layer]) -> RelationAutomaton:
    """(D, s_1, ..., s_n) with every s_i a member of L(D): n membership
    copies joined on their D tracks, duplicates projected away."""
    if n < 1:
        raise ValueError("multi_membership needs n >= 1")
    m = membership_rel(alphabet, width, 1, support)
    joined = joined_product([m] * n, [(2 * i + 1, 2 * i + 3) for i in range(n - 1)])
    return rel_proj(joined, {2 * i + 1 for i in range(1, n)})


def bounded_strings(alphabet, width: int, n: int, support: Iterable[Layer]) -> RelationAutomaton:
    """(D, s_1, ..., s_n) with D a valid ODD over the support and each
    s_i any nonempty string of length at most |D|; the explicit
    padding-monotone automaton."""
    if n < 1:
        raise ValueError("bounded_strings needs n >= 1")
    alphabet = frozenset(alphabet)
    layers = _fit(support, 1, width)
    letters = sorted(alphabet)
    padded = letters + [PAD]

    def tuples(source):
        out = [()]
        for _ in range(n):
            out = [t + (c,) for t in out for c in source]
        return out

    trans = set()
    states = {("i",)}
    finals = set()
    for b in layers:
        for beta in tuples(padded):
            states.add(("s", b, beta))
            if b.fflag:
                finals.add(("s", b, beta))
    for b in layers:
        if not b.iflag:
            continue
        for sigma in tuples(letters):
            trans.add(((("i",)), (b,) + sigma, ("s", b, sigma)))
    for b_prev in layers:
        if b_prev.fflag:
            continue
        for b in layers:
            if b.iflag or b.left != b_prev.right:
                continue
            for beta in tuples(padded):
                for sigma in tuples(padded):
                    if any(bc == PAD and sc != PAD for bc, sc in zip(beta, sigma)):
                        continue
                    trans.add((("s", b_prev, beta), (b,) + sigma, ("s", b, sigma)))
    support_t = TrackSupport(
        (frozenset(set(layers) | {PAD}),)
        + (frozenset(padded),) * n
    )
    nfa = Nfa(frozenset(states), support_t, frozenset(trans),
              frozenset({("i",)}), frozenset(finals))
    return RelationAutomaton(
        nfa,
        (TrackSpec("layer", alphabet, 1, width),)
        + tuple(TrackSpec("string", alphabet, 1) for _ in range(n)),
    )


def non_membership(alphabet, width: int, n: int, support: Iterable[Layer]) -> RelationAutomaton:
    """(D, s_1, ..., s_n) with some s_i outside L(D): the bounded-strings
    relation minus the all-members relation."""
    if n < 1:
        raise ValueError("non_membership needs n >= 1")
    return rel_complement_within(
        bounded_strings(alphabet, width, n, support),
        multi_membership(alphabet, width, n, support),
    )


def odd_pair(alphabet_a, arity_a: int, support_a: Iterable[Layer],
             alphabet_b, arity_b: int, support_b: Iterable[Layer],
             width: int) -> RelationAutomaton:
    """All pairs of valid ODD strings over the two supports."""
    return joined_product([
        universe_rel(alphabet_a, width, arity_a, support_a),
        universe_rel(alphabet_b, width, arity_b, support_b),
    ])


def all_strings_rel(alphabet, arity: int) -> RelationAutomaton:
    """Every nonempty string over the (padded-tuple) track alphabet; a
    single looping state."""
    alphabet = frozenset(alphabet)
    syms = sorted(
        (t for t in string_track_symbols(alphabet, arity) if not is_pad(t)),
        key=canon_key,
    )
    nfa = Nfa(
        frozenset({0}),
        TrackSupport((string_track_symbols(alphabet, arity),)),
        frozenset((0, (sym,), 0) for sym in syms),
        frozenset({0}),
        frozenset({0}),
    )
    return RelationAutomaton(nfa, (TrackSpec("string", alphabet, arity),))


def subset_rel(alphabet, width: int, arity: int,
               support_dom: Iterable[Layer],
               support_rel: Iterable[Layer]) -> RelationAutomaton:
    """(D, D') with both valid and L(D') inside the tensor power of
    L(D).

    Shape: pair minus the projection of an identified product of a
    non-membership witness relation with the membership relation of D'.
    The witness side must range over *all* strings of the tensor-power
    track, not only convolutions of bounded length: members of L(D')
    that are no convolution at all, or have components longer than |D|,
    also break the inclusion.
    """
    from .relations import rel_fold  # local import keeps module order simple

    alphabet = frozenset(alphabet)
    members = rel_fold(
        multi_membership(alphabet, width, arity, support_dom), 2, arity + 1
    ) if arity > 1 else multi_membership(alphabet, width, 1, support_dom)
    u2 = joined_product([
        universe_rel(alphabet, width, 1, support_dom),
        all_strings_rel(alphabet, arity),
    ])
    not_in = rel_complement_within(u2, members)
    t = joined_product(
        [not_in, membership_rel(alphabet, width, arity, support_rel)],
        [(2, 4)],
    )
    bad = rel_proj(t, {2, 4})
    pair = odd_pair(alphabet, 1, support_dom, alphabet, arity, support_rel, width)
    return rel_complement_within(pair, bad)


def structural_universe(alphabet, width: int, vocab: Vocabulary, n: int,
                        support: Support) -> RelationAutomaton:
    """(D_0, ..., D_rho, v_1, ..., v_n): the ODD part is a structural
    tuple over the support and every v_j is a domain member.

    Built as the join of one subset factor per relation symbol with the
    multi-membership factor, chained on their domain-ODD tracks, the
    duplicates projected away.  n = 0 is the n = 1 relation with its
    variable track projected, which also enforces the nonempty domain
    that a bare tuple-of-ODDs relation would miss.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    alphabet = frozenset(alphabet)
    if n == 0:
        return rel_proj(
            structural_universe(alphabet, width, vocab, 1, support),
            {vocab.rho + 2},
        )
    factors = []
    for i, (_name, a) in enumerate(vocab.relations):
        factors.append(subset_rel(alphabet, width, a, support.d0, support.rels[i]))
    factors.append(multi_membership(alphabet, width, n, support.d0))
    rho = vocab.rho
    equalities = [(2 * i + 1, 2 * i + 3) for i in range(rho)]
    joined = joined_product(factors, equalities)
    return rel_proj(joined, {2 * i + 1 for i in range(1, rho + 1)})


# ---------------------------------------------------------------------------
# hypercube fixtures


def _hc_d0_layers(k: int) -> list[Layer]:
    bits = ("0", "1")
    loop = frozenset((0, b, 0) for b in bits)
    zero = frozenset({0})
    if k == 1:
        return [Layer(zero, zero, loop, zero, zero, True, True, 1, 2)]
    first = Layer(zero, zero, loop, zero, frozenset(), True, False, 1, 2)
    mid = Layer(zero, zero, loop, frozenset(), frozenset(), False, False, 1, 2)
    last = Layer(zero, zero, loop, frozenset(), zero, False, True, 1, 2)
    return [first] + [mid] * (k - 2) + [last]


def _hc_d1_layers(k: int) -> list[Layer]:
    bits = ("0", "1")
    eq = [(b, b) for b in bits]
    ne = [(b, "1" if b == "0" else "0") for b in bits]
    zero = frozenset({0})
    both = frozenset({0, 1})
    start = frozenset(
        [(0, s, 0) for s in eq] + [(0, s, 1) for s in ne]
    )
    full = frozenset(
        [(0, s, 0) for s in eq] + [(0, s, 1) for s in ne] + [(1, s, 1) for s in eq]
    )
    if k == 1:
        return [Layer(zero, both, start, zero, frozenset({1}), True, True, 2, 2)]
    first = Layer(zero, both, start, zero, frozenset(), True, False, 2, 2)
    mid = Layer(both, both, full, frozenset(), frozenset(), False, False, 2, 2)
    last = Layer(both, both, full, frozenset(), frozenset({1}), False, True, 2, 2)
    return [first] + [mid] * (k - 2) + [last]


HYPERCUBE_VOCABULARY = Vocabulary((("E", 2),))


def hypercube_tuple(k: int) -> StructuralTuple:
    """The k-dimensional directed hypercube: all k-bit strings, edges
    between strings differing in exactly one position."""
    if k < 1:
        raise ValueError("k must be at least 1")
    bits = frozenset("01")
    d0 = validate_odd(Odd(tuple(_hc_d0_layers(k)), bits))
    d1 = validate_odd(Odd(tuple(_hc_d1_layers(k)), bits))
    return StructuralTuple(d0, (d1,), HYPERCUBE_VOCABULARY, 2)


def hypercube_class() -> ClassAutomaton:
    """Class automaton accepting, for every k, exactly the layer-tuple
    string of hypercube_tuple(k)."""
    f0, m0, l0 = _hc_d0_layers(3)
    f1, m1, l1 = _hc_d1_layers(3)
    (o0,) = _hc_d0_layers(1)
    (o1,) = _hc_d1_layers(1)
    sym_first = (f0, f1)
    sym_mid = (m0, m1)
    sym_last = (l0, l1)
    sym_only = (o0, o1)
    trans = frozenset({
        ("q0", sym_only, "q2"),
        ("q0", sym_first, "q1"),
        ("q1", sym_mid, "q1"),
        ("q1", sym_last, "q2"),
    })
    support = TrackSupport((
        frozenset({f0, m0, l0, o0, PAD}),
        frozenset({f1, m1, l1, o1, PAD}),
    ))
    nfa = Nfa(
        frozenset({"q0", "q1", "q2"}),
        support,
        trans,
        frozenset({"q0"}),
        frozenset({"q2"}),
    )
    return ClassAutomaton(nfa, frozenset("01"), 2, HYPERCUBE_VOCABULARY)
