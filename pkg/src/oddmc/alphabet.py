"""Base symbols, padding, tensor-power symbols and string convolution.

Symbols are plain interned strings.  The padding symbol is the reserved
token ``_``, which is never a legal base symbol, so the disjoint union
of an alphabet with its padding symbol needs no wrapper type.  A track
of arity ``a >= 2`` carries tuples of ``a`` padded tokens; the all-pad
tuple plays the role of that track's padding symbol.
"""

from __future__ import annotations

import sys
from typing import Sequence, Union

from .errors import MalformedConvolutionError

PAD = "_"

_RESERVED = set("(),_") | set(" \t\r\n\f\v")

# A symbol on a single track: a token for arity 1, a tuple of padded
# tokens for higher arities.
TrackSymbol = Union[str, tuple]

Word = tuple[str, ...]


def check_token(token: str) -> str:
    """Validate a base-symbol token and return it interned."""
    if not isinstance(token, str) or not token:
        raise ValueError(f"base symbol must be a nonempty string, got {token!r}")
    bad = set(token) & _RESERVED
    if bad:
        raise ValueError(f"base symbol {token!r} contains reserved character {bad.pop()!r}")
    return sys.intern(token)


def pad_symbol(arity: int) -> TrackSymbol:
    """The padding symbol of a track of the given arity."""
    if arity < 1:
        raise ValueError("arity must be positive")
    return PAD if arity == 1 else (PAD,) * arity


def is_pad(symbol: TrackSymbol) -> bool:
    """True for the track-level padding symbol (all components padded)."""
    if isinstance(symbol, tuple):
        return all(c == PAD for c in symbol)
    return symbol == PAD


def symbol_arity(symbol: TrackSymbol) -> int:
    return len(symbol) if isinstance(symbol, tuple) else 1


def group_symbols(components: Sequence[TrackSymbol]) -> TrackSymbol:
    """Flatten track symbols into one symbol over the tensor-power alphabet."""
    flat: list[str] = []
    for c in components:
        if isinstance(c, tuple):
            flat.extend(c)
        else:
            flat.append(c)
    return flat[0] if len(flat) == 1 else tuple(flat)


def split_symbol(symbol: TrackSymbol, arities: Sequence[int]) -> tuple[TrackSymbol, ...]:
    """Inverse of group_symbols for the given arity split."""
    flat = list(symbol) if isinstance(symbol, tuple) else [symbol]
    if len(flat) != sum(arities):
        raise ValueError(f"cannot split arity-{len(flat)} symbol as {tuple(arities)}")
    out = []
    pos = 0
    for a in arities:
        part = flat[pos : pos + a]
        out.append(part[0] if a == 1 else tuple(part))
        pos += a
    return tuple(out)


def tensor_strings(strings: Sequence[Sequence[str]]) -> list[TrackSymbol]:
    """Convolution of base-symbol strings: the columnwise zip padded with
    ``_`` to the longest input.  A single input comes back unchanged (the
    1-fold tensor power of an alphabet is the alphabet itself)."""
    if not strings:
        raise ValueError("tensor_strings needs at least one string")
    words = [tuple(s) for s in strings]
    if any(len(w) == 0 for w in words):
        raise ValueError("tensor_strings arguments must be nonempty strings")
    length = max(len(w) for w in words)
    if len(words) == 1:
        return list(words[0])
    return [
        tuple(w[j] if j < len(w) else PAD for w in words)
        for j in range(length)
    ]


def untensor(conv: Sequence[TrackSymbol]) -> list[Word]:
    """Decode a convolution back into its component strings.

    Strips the maximal pad suffix of every track and rejects strings that
    are not convolutions of nonempty words (a pad followed by a proper
    symbol on the same track, or an all-pad column).
    """
    if not conv:
        raise MalformedConvolutionError("empty convolution")
    n = symbol_arity(conv[0])
    columns = []
    for col in conv:
        parts = tuple(col) if isinstance(col, tuple) else (col,)
        if len(parts) != n:
            raise MalformedConvolutionError(f"column {col!r} does not have {n} tracks")
        columns.append(parts)
    out: list[Word] = []
    for i in range(n):
        track = [col[i] for col in columns]
        ended = False
        word: list[str] = []
        for j, sym in enumerate(track):
            if sym == PAD:
                ended = True
            elif ended:
                raise MalformedConvolutionError(
                    f"track {i + 1}: pad before proper symbol at column {j + 1}"
                )
            else:
                word.append(sym)
        if not word:
            raise MalformedConvolutionError(f"track {i + 1} is empty")
        out.append(tuple(word))
    for j, col in enumerate(columns):
        if all(c == PAD for c in col):
            raise MalformedConvolutionError(f"all-pad column at position {j + 1}")
    return out
