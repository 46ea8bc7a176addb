"""Bit-exact textual formats.

All formats are line-oriented UTF-8; `#` starts a comment line and blank
lines are ignored.  Serialization is deterministic (sorted sets, canon
symbol order), so identical values produce identical bytes.

.odd        header lines (alphabet/arity/width/length), then one
            LAYER..END block per layer.
.struct     STRUCTURE, a vocabulary line, then rho+1 .odd blocks for
            D0, D1, ..., D_rho.
.classnfa   CLASS-AUTOMATON, vocabulary/alphabet/width headers, a named
            LAYERS..ENDLAYERS table, then STATES/INITIAL/FINAL/TRANS.
.lam        LAMBDA-STRING: like .classnfa but with a STRING line giving
            one layer-tuple per position.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .alphabet import PAD, TrackSymbol
from .automaton import Nfa, canon_key
from .errors import FormatError
from .odd import Layer, Odd, validate_odd
from .relations import TrackSupport
from .structural import ClassAutomaton, StructuralTuple, Vocabulary


def format_symbol(sym: TrackSymbol) -> str:
    if isinstance(sym, tuple):
        return "(" + ",".join(sym) + ")"
    return sym


def parse_symbol(text: str) -> TrackSymbol:
    if text.startswith("(") and text.endswith(")"):
        parts = text[1:-1].split(",")
        if len(parts) == 1:
            return parts[0]
        return tuple(parts)
    return text


class _Lines:
    def __init__(self, text: str):
        self.lines = []
        for ln, raw in enumerate(text.splitlines(), start=1):
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue
            self.lines.append((ln, stripped))
        self.i = 0

    def peek(self) -> str | None:
        return self.lines[self.i][1] if self.i < len(self.lines) else None

    def next(self, what: str = "line") -> str:
        if self.i >= len(self.lines):
            raise FormatError(f"unexpected end of input, expected {what}")
        ln, line = self.lines[self.i]
        self.i += 1
        return line

    def expect(self, literal: str):
        line = self.next(literal)
        if line != literal:
            raise FormatError(f"expected {literal!r}, found {line!r}")

    def header(self, key: str) -> str:
        line = self.next(f"{key}: ...")
        if not line.startswith(key + ":"):
            raise FormatError(f"expected header {key!r}, found {line!r}")
        return line[len(key) + 1 :].strip()

    def at_end(self) -> bool:
        return self.i >= len(self.lines)


def _int_set(text: str) -> frozenset:
    return frozenset(int(tok) for tok in text.split())


def _fmt_int_set(s: Iterable[int]) -> str:
    return " ".join(str(q) for q in sorted(s))


def _bool(text: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise FormatError(f"expected true or false, found {text!r}")


# ---------------------------------------------------------------------------
# layers


def _serialize_layer_body(layer: Layer) -> list[str]:
    lines = [
        f"left: {_fmt_int_set(layer.left)}",
        f"right: {_fmt_int_set(layer.right)}",
        f"initial: {_fmt_int_set(layer.initial)}",
        f"final: {_fmt_int_set(layer.final)}",
        f"iflag: {'true' if layer.iflag else 'false'}",
        f"fflag: {'true' if layer.fflag else 'false'}",
    ]
    for l, sym, r in sorted(layer.transitions, key=lambda t: (t[0], canon_key(t[1]), t[2])):
        lines.append(f"trans: {l} {format_symbol(sym)} {r}")
    lines.append("END")
    return lines


def _parse_layer_body(lines: _Lines, arity: int, width: int) -> Layer:
    left = _int_set(lines.header("left"))
    right = _int_set(lines.header("right"))
    initial = _int_set(lines.header("initial"))
    final = _int_set(lines.header("final"))
    iflag = _bool(lines.header("iflag"))
    fflag = _bool(lines.header("fflag"))
    trans = set()
    while True:
        line = lines.next("trans or END")
        if line == "END":
            break
        if not line.startswith("trans:"):
            raise FormatError(f"expected a trans line or END, found {line!r}")
        parts = line[len("trans:"):].split()
        if len(parts) != 3:
            raise FormatError(f"malformed transition line {line!r}")
        trans.add((int(parts[0]), parse_symbol(parts[1]), int(parts[2])))
    return Layer(left, right, frozenset(trans), initial, final,
                 iflag, fflag, arity, width)


# ---------------------------------------------------------------------------
# .odd


def serialize_odd(d: Odd) -> str:
    lines = [
        f"alphabet: {' '.join(sorted(d.alphabet))}",
        f"arity: {d.arity}",
        f"width: {d.width_bound}",
        f"length: {d.length}",
    ]
    for layer in d.layers:
        lines.append("LAYER")
        lines.extend(_serialize_layer_body(layer))
    return "\n".join(lines) + "\n"


def parse_odd_block(lines: _Lines) -> Odd:
    alphabet = frozenset(lines.header("alphabet").split())
    arity = int(lines.header("arity"))
    width = int(lines.header("width"))
    length = int(lines.header("length"))
    layers = []
    for i in range(length):
        lines.expect("LAYER")
        layers.append(
            _parse_layer_body(lines, arity, width)
        )
    return validate_odd(Odd(tuple(layers), alphabet))


def parse_odd(text: str) -> Odd:
    lines = _Lines(text)
    d = parse_odd_block(lines)
    if not lines.at_end():
        raise FormatError(f"trailing input: {lines.peek()!r}")
    return d


# ---------------------------------------------------------------------------
# .struct


def _fmt_vocabulary(vocab: Vocabulary) -> str:
    return " ".join(f"{name}/{arity}" for name, arity in vocab.relations)


def _parse_vocabulary(text: str) -> Vocabulary:
    rels = []
    for tok in text.split():
        if "/" not in tok:
            raise FormatError(f"vocabulary entries look like Name/arity, found {tok!r}")
        name, _, arity = tok.partition("/")
        rels.append((name, int(arity)))
    return Vocabulary(tuple(rels))


def serialize_struct(t: StructuralTuple) -> str:
    parts = [
        "STRUCTURE",
        f"vocabulary: {_fmt_vocabulary(t.vocabulary)}",
    ]
    for d in t.odds:
        parts.append(serialize_odd(d).rstrip("\n"))
    return "\n".join(parts) + "\n"


def parse_struct(text: str) -> StructuralTuple:
    lines = _Lines(text)
    lines.expect("STRUCTURE")
    vocab = _parse_vocabulary(lines.header("vocabulary"))
    odds = [parse_odd_block(lines) for _ in range(vocab.rho + 1)]
    if not lines.at_end():
        raise FormatError(f"trailing input: {lines.peek()!r}")
    widths = {d.width_bound for d in odds}
    if len(widths) != 1:
        raise FormatError("component ODD blocks must declare one shared width")
    return StructuralTuple(odds[0], tuple(odds[1:]), vocab, widths.pop())


# ---------------------------------------------------------------------------
# layer tables (.classnfa, .lam)


def _collect_layers(symbols: Iterable[tuple]) -> list[Layer]:
    seen = set()
    for sym in symbols:
        for comp in sym:
            if isinstance(comp, Layer):
                seen.add(comp)
    return sorted(seen, key=lambda b: b.canon_key)


def _serialize_layer_table(layers: Sequence[Layer]) -> list[str]:
    lines = ["LAYERS"]
    for idx, layer in enumerate(layers):
        lines.append(f"LAYER L{idx} arity {layer.arity}")
        lines.extend(_serialize_layer_body(layer))
    lines.append("ENDLAYERS")
    return lines


def _parse_layer_table(lines: _Lines, width: int) -> dict:
    lines.expect("LAYERS")
    table: dict = {}
    while True:
        line = lines.next("LAYER or ENDLAYERS")
        if line == "ENDLAYERS":
            return table
        parts = line.split()
        if len(parts) != 4 or parts[0] != "LAYER" or parts[2] != "arity":
            raise FormatError(f"expected 'LAYER <name> arity <a>', found {line!r}")
        name = parts[1]
        if name in table:
            raise FormatError(f"duplicate layer name {name!r}")
        table[name] = _parse_layer_body(lines, int(parts[3]), width)


def _parse_layer_tuple(text: str, table: dict, rho: int) -> tuple:
    sym = parse_symbol(text)
    names = sym if isinstance(sym, tuple) else (sym,)
    if len(names) != rho + 1:
        raise FormatError(f"layer tuple {text!r} must have {rho + 1} tracks")
    out = []
    for name in names:
        if name not in table:
            raise FormatError(f"unknown layer name {name!r}")
        out.append(table[name])
    return tuple(out)


# ---------------------------------------------------------------------------
# .classnfa


def serialize_classnfa(ca: ClassAutomaton) -> str:
    layers = _collect_layers(sym for _s, sym, _d in ca.nfa.transitions)
    names = {layer: f"L{idx}" for idx, layer in enumerate(layers)}
    lines = [
        "CLASS-AUTOMATON",
        f"vocabulary: {_fmt_vocabulary(ca.vocabulary)}",
        f"alphabet: {' '.join(sorted(ca.alphabet))}",
        f"width: {ca.width}",
    ]
    lines.extend(_serialize_layer_table(layers))
    states = sorted(ca.nfa.states, key=canon_key)
    state_names = {q: f"s{idx}" if not isinstance(q, str) else q
                   for idx, q in enumerate(states)}
    if len(set(state_names.values())) != len(states):
        state_names = {q: f"s{idx}" for idx, q in enumerate(states)}
    lines.append(f"STATES: {' '.join(state_names[q] for q in states)}")
    lines.append(f"INITIAL: {' '.join(sorted(state_names[q] for q in ca.nfa.initial))}")
    lines.append(f"FINAL: {' '.join(sorted(state_names[q] for q in ca.nfa.final))}")
    for src, sym, dst in sorted(
        ca.nfa.transitions,
        key=lambda t: (state_names[t[0]], canon_key(t[1]), state_names[t[2]]),
    ):
        tup = "(" + ",".join(names[c] for c in sym) + ")"
        lines.append(f"TRANS: {state_names[src]} {tup} {state_names[dst]}")
    return "\n".join(lines) + "\n"


def parse_classnfa(text: str) -> ClassAutomaton:
    lines = _Lines(text)
    lines.expect("CLASS-AUTOMATON")
    vocab = _parse_vocabulary(lines.header("vocabulary"))
    alphabet = frozenset(lines.header("alphabet").split())
    width = int(lines.header("width"))
    table = _parse_layer_table(lines, width)
    states = lines.header("STATES").split()
    if len(set(states)) != len(states):
        raise FormatError("duplicate state names")
    initial = lines.header("INITIAL").split()
    final = lines.header("FINAL").split()
    known = set(states)
    for q in initial + final:
        if q not in known:
            raise FormatError(f"unknown state {q!r}")
    trans = set()
    while not lines.at_end():
        line = lines.next("TRANS")
        if not line.startswith("TRANS:"):
            raise FormatError(f"expected a TRANS line, found {line!r}")
        parts = line[len("TRANS:"):].split()
        if len(parts) != 3:
            raise FormatError(f"malformed TRANS line {line!r}")
        src, symtext, dst = parts
        if src not in known or dst not in known:
            raise FormatError(f"TRANS references an unknown state in {line!r}")
        trans.add((src, _parse_layer_tuple(symtext, table, vocab.rho), dst))
    per_track: list[set] = [{PAD} for _ in range(vocab.rho + 1)]
    for _s, sym, _d in trans:
        for t, comp in enumerate(sym):
            per_track[t].add(comp)
    support = TrackSupport(tuple(frozenset(s) for s in per_track))
    nfa = Nfa(frozenset(states), support, frozenset(trans),
              frozenset(initial), frozenset(final))
    return ClassAutomaton(nfa, alphabet, width, vocab)


# ---------------------------------------------------------------------------
# .lam


def serialize_lambda_string(s: Sequence[tuple], vocab: Vocabulary,
                            alphabet, width: int) -> str:
    layers = _collect_layers(s)
    names = {layer: f"L{idx}" for idx, layer in enumerate(layers)}
    lines = [
        "LAMBDA-STRING",
        f"vocabulary: {_fmt_vocabulary(vocab)}",
        f"alphabet: {' '.join(sorted(alphabet))}",
        f"width: {width}",
        f"length: {len(s)}",
    ]
    lines.extend(_serialize_layer_table(layers))
    cols = " ".join("(" + ",".join(names[c] for c in col) + ")" for col in s)
    lines.append(f"STRING: {cols}")
    return "\n".join(lines) + "\n"


def parse_lambda_string(text: str):
    """Returns (columns, vocabulary, alphabet, width)."""
    lines = _Lines(text)
    lines.expect("LAMBDA-STRING")
    vocab = _parse_vocabulary(lines.header("vocabulary"))
    alphabet = frozenset(lines.header("alphabet").split())
    width = int(lines.header("width"))
    length = int(lines.header("length"))
    table = _parse_layer_table(lines, width)
    cols_text = lines.header("STRING").split()
    if len(cols_text) != length:
        raise FormatError(f"STRING has {len(cols_text)} columns, expected {length}")
    cols = tuple(_parse_layer_tuple(tok, table, vocab.rho) for tok in cols_text)
    if not lines.at_end():
        raise FormatError(f"trailing input: {lines.peek()!r}")
    return cols, vocab, alphabet, width


# ---------------------------------------------------------------------------
# .fo


def parse_formula_file(text: str, vocab: Vocabulary | None = None):
    from .fo import parse_formula

    return parse_formula(text, vocab)
