"""Layers and ordered decision diagrams.

An ODD is a string of layers: each layer carries a left and a right
frontier of states drawn from {0..w-1}, transitions labeled with padded
symbols, initial/final sets and two boolean flags.  The diagram accepts
strings of length at most its layer count; shorter strings consume pad
transitions for the remaining positions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .alphabet import PAD, TrackSymbol, is_pad, pad_symbol, symbol_arity
from .automaton import Nfa, canon_key
from .errors import OddValidationError, ResourceLimitError

DEFAULT_ENUM_LIMIT = 10**6


def enum_limit() -> int:
    """Enumeration bound; overridable via ODDMC_ENUM_LIMIT."""
    raw = os.environ.get("ODDMC_ENUM_LIMIT")
    return int(raw) if raw else DEFAULT_ENUM_LIMIT


@dataclass(frozen=True)
class Layer:
    left: frozenset
    right: frozenset
    transitions: frozenset
    initial: frozenset
    final: frozenset
    iflag: bool
    fflag: bool
    arity: int
    width: int

    def __post_init__(self):
        object.__setattr__(
            self,
            "_hash",
            hash((self.left, self.right, self.transitions, self.initial,
                  self.final, self.iflag, self.fflag, self.arity, self.width)),
        )

    def __hash__(self):
        return self._hash

    @cached_property
    def canon_key(self):
        return (
            self.arity,
            self.width,
            tuple(sorted(self.left)),
            tuple(sorted(self.right)),
            tuple(sorted(((l, canon_key(s), r) for l, s, r in self.transitions))),
            tuple(sorted(self.initial)),
            tuple(sorted(self.final)),
            self.iflag,
            self.fflag,
        )


def make_layer(left, right, transitions, initial, final, iflag, fflag,
               arity: int, width: int) -> Layer:
    """Validating layer constructor."""
    layer = Layer(
        frozenset(left), frozenset(right), frozenset(transitions),
        frozenset(initial), frozenset(final), bool(iflag), bool(fflag),
        arity, width,
    )
    problem = _layer_problem(layer)
    if problem:
        raise OddValidationError(problem[0], 0, problem[1])
    return layer


def _layer_problem(layer: Layer) -> tuple[str, str] | None:
    if layer.arity < 1 or layer.width < 1:
        return "layer-shape", "arity and width must be positive"
    universe = range(layer.width)
    for side, name in ((layer.left, "left"), (layer.right, "right")):
        for q in side:
            if not isinstance(q, int) or q not in universe:
                return "state-range", f"{name} state {q!r} outside 0..{layer.width - 1}"
    if not layer.initial <= layer.left:
        return "marker-subset", "initial states must be left states"
    if not layer.final <= layer.right:
        return "marker-subset", "final states must be right states"
    if not layer.iflag and layer.initial:
        return "flag-coherence", "initial set must be empty when iflag is false"
    if not layer.fflag and layer.final:
        return "flag-coherence", "final set must be empty when fflag is false"
    for l, sym, r in layer.transitions:
        if l not in layer.left or r not in layer.right:
            return "transition-frontier", f"transition ({l}, {sym!r}, {r}) leaves the frontiers"
        if symbol_arity(sym) != layer.arity:
            return "symbol-arity", f"transition symbol {sym!r} does not have arity {layer.arity}"
    return None


@dataclass(frozen=True)
class Odd:
    """A sequence of layers over a base alphabet; see validate_odd."""

    layers: tuple
    alphabet: frozenset

    @property
    def length(self) -> int:
        return len(self.layers)

    @property
    def arity(self) -> int:
        return self.layers[0].arity

    @property
    def width_bound(self) -> int:
        return self.layers[0].width

    @property
    def width(self) -> int:
        frontiers = [len(b.left) for b in self.layers] + [len(self.layers[-1].right)]
        return max(frontiers)

    @cached_property
    def proper_symbols(self) -> frozenset:
        """The full proper track alphabet (Sigma+pad)^arity minus all-pad."""
        letters = sorted(self.alphabet) + [PAD]
        if self.arity == 1:
            return frozenset(sorted(self.alphabet))
        out = [()]
        for _ in range(self.arity):
            out = [t + (c,) for t in out for c in letters]
        return frozenset(t for t in out if any(c != PAD for c in t))

    @property
    def pad(self) -> TrackSymbol:
        return pad_symbol(self.arity)


def make_odd(layers: Iterable[Layer], alphabet: Iterable[str]) -> Odd:
    return validate_odd(Odd(tuple(layers), frozenset(alphabet)))


def validate_odd(candidate: Odd) -> Odd:
    """Check the layer-sequence conditions; the diagnostic names the first
    violated condition and the 1-based layer index."""
    layers = candidate.layers
    if not layers:
        raise OddValidationError("nonempty", 0, "an ODD needs at least one layer")
    arity = layers[0].arity
    width = layers[0].width
    proper = None
    for i, layer in enumerate(layers, start=1):
        if layer.arity != arity or layer.width != width:
            raise OddValidationError("shared-shape", i, "layers must share arity and width bound")
        problem = _layer_problem(layer)
        if problem:
            raise OddValidationError(problem[0], i, problem[1])
        for _l, sym, _r in layer.transitions:
            if is_pad(sym):
                continue
            if proper is None:
                proper = candidate.proper_symbols
            if sym not in proper:
                raise OddValidationError(
                    "symbol-alphabet", i, f"symbol {sym!r} is not over the base alphabet"
                )
        if (i == 1) != layer.iflag:
            raise OddValidationError(
                "iflag-placement", i, "iflag must be set exactly on the first layer"
            )
        if (i == len(layers)) != layer.fflag:
            raise OddValidationError(
                "fflag-placement", i, "fflag must be set exactly on the last layer"
            )
        if i > 1 and layer.left != layers[i - 2].right:
            raise OddValidationError(
                "frontier-match", i, "left frontier must equal the previous right frontier"
            )
    return candidate


def _pad_reach_final(d: Odd) -> list[frozenset]:
    """reach[i] = states on frontier i (the right frontier of layer i,
    0 = before the first layer) from which an all-pad path through the
    remaining layers ends in a final state of the last layer."""
    k = d.length
    reach: list[frozenset] = [frozenset()] * (k + 1)
    reach[k] = frozenset(d.layers[-1].final)
    for i in range(k - 1, -1, -1):
        layer = d.layers[i]
        reach[i] = frozenset(
            l for (l, sym, r) in layer.transitions if is_pad(sym) and r in reach[i + 1]
        )
    return reach


def odd_accepts(d: Odd, s: Sequence[TrackSymbol]) -> bool:
    """True iff an accepting sequence exists for `s`: positions beyond
    |s| consume the padding symbol.  The empty string is never accepted."""
    k = d.length
    if len(s) > k:
        raise ValueError(f"string of length {len(s)} exceeds the ODD length {k}")
    if len(s) == 0:
        return False
    current = set(d.layers[0].initial)
    for i in range(k):
        want = s[i] if i < len(s) else d.pad
        layer = d.layers[i]
        nxt = {r for (l, sym, r) in layer.transitions if l in current and sym == want}
        if not nxt:
            return False
        current = nxt
    return bool(current & set(d.layers[-1].final))


def enumerate_language(d: Odd, limit: int | None = None) -> set[tuple]:
    """L(d) as a set of symbol tuples, via forward reachability over
    (position, state) pairs rather than naive string enumeration."""
    bound = enum_limit() if limit is None else limit
    per_symbol = len(d.proper_symbols)
    if per_symbol ** d.length > bound:
        raise ResourceLimitError(
            f"potential language size {per_symbol}^{d.length} exceeds the bound {bound}"
        )
    reach_final = _pad_reach_final(d)
    out: set[tuple] = set()
    # strings[q] = proper-prefix strings reaching state q using no pads
    strings: dict = {q: {()} for q in d.layers[0].initial}
    for i in range(d.length):
        layer = d.layers[i]
        nxt: dict = {}
        for (l, sym, r) in layer.transitions:
            if is_pad(sym) or l not in strings:
                continue
            bucket = nxt.setdefault(r, set())
            for prefix in strings[l]:
                bucket.add(prefix + (sym,))
        total = sum(len(v) for v in nxt.values())
        if total > bound:
            raise ResourceLimitError(f"language enumeration exceeded {bound} strings")
        for q, prefixes in nxt.items():
            if q in reach_final[i + 1]:
                out |= prefixes
        if len(out) > bound:
            raise ResourceLimitError(f"language enumeration exceeded {bound} strings")
        strings = nxt
    return out


def pad_to_length(d: Odd, k2: int) -> Odd:
    """Length padding: same language, length k2 >= length(d).

    The old last layer loses its finals; a bridge layer forwards them to
    a single pass-through state 0 that consumes pads to the new end.
    The bridge keeps the full previous right frontier (restricting to
    the final states would break the frontier-matching condition), with
    transitions leaving only from the old finals.
    """
    k = d.length
    if k2 < k:
        raise ValueError(f"target length {k2} is below the current length {k}")
    if k2 == k:
        return d
    w = d.width_bound
    old_last = d.layers[-1]
    layers = list(d.layers[:-1])
    layers.append(
        Layer(old_last.left, old_last.right, old_last.transitions,
              old_last.initial, frozenset(), old_last.iflag, False,
              d.arity, w)
    )
    pad = d.pad
    bridge_final = k2 == k + 1
    layers.append(
        Layer(old_last.right, frozenset({0}),
              frozenset((q, pad, 0) for q in old_last.final),
              frozenset(), frozenset({0}) if bridge_final else frozenset(),
              False, bridge_final, d.arity, w)
    )
    for j in range(k + 2, k2 + 1):
        last = j == k2
        layers.append(
            Layer(frozenset({0}), frozenset({0}),
                  frozenset({(0, pad, 0)}),
                  frozenset(), frozenset({0}) if last else frozenset(),
                  False, last, d.arity, w)
        )
    return validate_odd(Odd(tuple(layers), d.alphabet))


def default_binary_encoding(alphabet: Iterable[str]) -> dict:
    """Binary block code for a base alphabet: position in the sorted
    alphabet, written with max(1, ceil(log2 |alphabet|)) bits; the pad
    maps to an all-pad block."""
    letters = sorted(alphabet)
    bits = max(1, (len(letters) - 1).bit_length()) if letters else 1
    enc = {PAD: (PAD,) * bits}
    for i, a in enumerate(letters):
        enc[a] = tuple(format(i, f"0{bits}b"))
    return enc


def binarize_odd(d: Odd, encoding: dict | None = None) -> Odd:
    """Re-encode over the binary alphabet: each original position turns
    into a block of alpha positions carrying one bit per track.

    Intermediate frontiers remember the (symbol, target) of the original
    transition being spelled out; merging transitions that share symbol
    and target keeps the frontier count within w^2 * |alphabet|^arity
    (indexing frontiers by whole transitions can overshoot it).
    """
    if encoding is None:
        encoding = default_binary_encoding(d.alphabet)
    alphas = {len(v) for v in encoding.values()}
    if len(alphas) != 1:
        raise ValueError("encoding blocks must share one length")
    alpha = alphas.pop()
    if PAD not in encoding or any(c != PAD for c in encoding[PAD]):
        raise ValueError("encoding must send the pad to an all-pad block")
    proper_items = [(a, v) for a, v in encoding.items() if a != PAD]
    if len({v for _a, v in proper_items}) != len(proper_items):
        raise ValueError("encoding must be injective on the base alphabet")
    for a in d.alphabet:
        if a not in encoding:
            raise ValueError(f"encoding misses base symbol {a!r}")

    a_in = d.arity
    w = d.width_bound
    # Declared bound: the nominal w^2 * |alphabet|^arity, stretched when a
    # degenerate layer genuinely needs more intermediate states (possible
    # for very dense layers over tiny alphabets with high arity).
    needed = max(
        (len({(sym, r) for (_l, sym, r) in layer.transitions}) for layer in d.layers),
        default=1,
    )
    new_width = max(w * w * (max(len(d.alphabet), 1) ** a_in), needed, w)

    def bits_of(sym: TrackSymbol, h: int) -> TrackSymbol:
        comps = sym if isinstance(sym, tuple) else (sym,)
        picked = tuple(encoding[c][h] for c in comps)
        return picked[0] if a_in == 1 else picked

    out_layers: list[Layer] = []
    k = d.length
    for g, layer in enumerate(d.layers):
        if alpha == 1:
            out_layers.append(
                Layer(layer.left, layer.right,
                      frozenset((l, bits_of(sym, 0), r) for (l, sym, r) in layer.transitions),
                      layer.initial, layer.final, layer.iflag, layer.fflag,
                      a_in, new_width)
            )
            continue
        mids = sorted({(sym, r) for (_l, sym, r) in layer.transitions},
                      key=lambda p: (canon_key(p[0]), p[1]))
        mid_id = {p: i for i, p in enumerate(mids)}
        mid_front = frozenset(range(len(mids)))
        for h in range(alpha):
            first, last = h == 0, h == alpha - 1
            left = layer.left if first else mid_front
            right = layer.right if last else mid_front
            if first:
                trans = frozenset(
                    (l, bits_of(sym, 0), mid_id[(sym, r)])
                    for (l, sym, r) in layer.transitions
                )
            elif last:
                trans = frozenset(
                    (mid_id[(sym, r)], bits_of(sym, h), r)
                    for (_l, sym, r) in layer.transitions
                )
            else:
                trans = frozenset(
                    (mid_id[(sym, r)], bits_of(sym, h), mid_id[(sym, r)])
                    for (_l, sym, r) in layer.transitions
                )
            out_layers.append(
                Layer(left, right, trans,
                      layer.initial if (g == 0 and first) else frozenset(),
                      layer.final if (g == k - 1 and last) else frozenset(),
                      g == 0 and first, g == k - 1 and last,
                      a_in, new_width)
            )
    return validate_odd(Odd(tuple(out_layers), frozenset("01")))


def odd_with_width(d: Odd, width: int) -> Odd:
    """Re-stamp every layer with a (not smaller) width bound."""
    if width < d.width:
        raise ValueError(f"width {width} is below the actual width {d.width}")
    layers = tuple(
        Layer(b.left, b.right, b.transitions, b.initial, b.final,
              b.iflag, b.fflag, b.arity, width)
        for b in d.layers
    )
    return validate_odd(Odd(layers, d.alphabet))


def encode_word(word: Sequence[TrackSymbol], encoding: dict, arity: int) -> tuple:
    """Blockwise image of an ODD string under a binarization encoding."""
    out = []
    alpha = len(next(iter(encoding.values())))
    for sym in word:
        comps = sym if isinstance(sym, tuple) else (sym,)
        for h in range(alpha):
            picked = tuple(encoding[c][h] for c in comps)
            out.append(picked[0] if arity == 1 else picked)
    return tuple(out)


def odd_to_nfa(d: Odd) -> Nfa:
    """The ODD as an NFA with states (position, frontier state);
    fa_accepts(result, s) iff odd_accepts(d, s)."""
    reach_final = _pad_reach_final(d)
    trans = set()
    for i, layer in enumerate(d.layers):
        for (l, sym, r) in layer.transitions:
            if is_pad(sym):
                continue
            trans.add(((i, l), sym, (i + 1, r)))
    final = {
        (i, q)
        for i in range(1, d.length + 1)
        for q in reach_final[i]
    }
    states = {(0, q) for q in d.layers[0].initial} | final
    for (src, _sym, dst) in trans:
        states.add(src)
        states.add(dst)
    return Nfa(
        frozenset(states),
        d.proper_symbols,
        frozenset(trans),
        frozenset((0, q) for q in d.layers[0].initial),
        frozenset(final),
    )


def odd_from_words(words: Iterable[tuple], length: int, alphabet: Iterable[str],
                   arity: int, width: int | None = None) -> Odd:
    """Trie-shaped ODD accepting exactly the given words (each of length
    <= `length`); frontier size equals the number of distinct padded
    prefixes per position."""
    alphabet = frozenset(alphabet)
    pad = pad_symbol(arity)
    padded = sorted(
        (tuple(wd) + (pad,) * (length - len(wd)) for wd in words),
        key=canon_key,
    )
    for wd in padded:
        if len(wd) != length:
            raise ValueError("word longer than the requested ODD length")
    layers = []
    if not padded:
        w = width if width is not None else 1
        for i in range(length):
            first, last = i == 0, i == length - 1
            layers.append(
                Layer(frozenset({0}), frozenset({0}), frozenset(),
                      frozenset(), frozenset(),
                      first, last, arity, w)
            )
        return validate_odd(Odd(tuple(layers), alphabet))
    prefixes: list[dict] = [{(): 0}]
    for i in range(length):
        nxt: dict = {}
        for wd in padded:
            p = wd[: i + 1]
            if p not in nxt:
                nxt[p] = len(nxt)
        prefixes.append(nxt)
    w = width if width is not None else max(len(level) for level in prefixes)
    for i in range(length):
        first, last = i == 0, i == length - 1
        trans = frozenset(
            (prefixes[i][p[:i]], p[i], prefixes[i + 1][p])
            for p in prefixes[i + 1]
        )
        layers.append(
            Layer(frozenset(prefixes[i].values()),
                  frozenset(prefixes[i + 1].values()),
                  trans,
                  frozenset({0}) if first else frozenset(),
                  frozenset(prefixes[i + 1].values()) if last else frozenset(),
                  first, last, arity, w)
        )
    return validate_odd(Odd(tuple(layers), alphabet))
