"""Shared generators for the differential suites.

Everything is seeded random.Random: the suites are reproducible, and
shrinking is replaced by printing the failing seed.
"""

from __future__ import annotations

import itertools
import random

import pytest

from oddmc.alphabet import PAD
from oddmc.odd import Layer, Odd, enumerate_language, odd_from_words, validate_odd
from oddmc.relations import TrackSpec, rel_from_tuples
from oddmc.structural import StructuralTuple, Vocabulary


def padded_symbols(alphabet, arity, include_pad=False):
    letters = sorted(alphabet) + [PAD]
    if arity == 1:
        out = list(letters if include_pad else sorted(alphabet))
        return out
    combos = [t for t in itertools.product(letters, repeat=arity)]
    if not include_pad:
        combos = [t for t in combos if any(c != PAD for c in t)]
    return combos


def random_layer(rng: random.Random, alphabet, arity, width, left, right,
                 first, last, density=0.35):
    syms = padded_symbols(alphabet, arity, include_pad=True)
    if arity == 1:
        proper = [s for s in syms if s != PAD]
        syms = proper + [PAD]
    else:
        syms = [s for s in syms if any(c != PAD for c in s)] + [(PAD,) * arity]
    trans = set()
    for l in left:
        for sym in syms:
            for r in right:
                if rng.random() < density:
                    trans.add((l, sym, r))
    initial = frozenset(q for q in left if rng.random() < 0.7) if first else frozenset()
    final = frozenset(q for q in right if rng.random() < 0.7) if last else frozenset()
    return Layer(frozenset(left), frozenset(right), frozenset(trans),
                 initial, final, first, last, arity, width)


def random_odd(rng: random.Random, alphabet, arity, width, length, density=0.35) -> Odd:
    frontiers = [
        frozenset(rng.sample(range(width), rng.randint(1, width)))
        for _ in range(length + 1)
    ]
    layers = tuple(
        random_layer(rng, alphabet, arity, width, frontiers[i], frontiers[i + 1],
                     i == 0, i == length - 1, density)
        for i in range(length)
    )
    return validate_odd(Odd(layers, frozenset(alphabet)))


def random_nonempty_odd(rng, alphabet, arity, width, length, density=0.5) -> Odd:
    for _ in range(200):
        d = random_odd(rng, alphabet, arity, width, length, density)
        if enumerate_language(d):
            return d
    raise AssertionError("could not sample a nonempty ODD")


def random_structural_tuple(rng: random.Random, alphabet=("0", "1"), width=2,
                            max_length=4, vocab=None) -> StructuralTuple:
    """A valid random tuple: random nonempty domain ODD, relations as
    tries over at most `width` tuples drawn from the tensored domain
    language (so their frontiers stay within the width bound)."""
    if vocab is None:
        rho = rng.randint(1, 2)
        names = ["E", "F"][:rho]
        vocab = Vocabulary(tuple((n, rng.randint(1, 2)) for n in names))
    length = rng.randint(1, max_length)
    d0 = random_nonempty_odd(rng, alphabet, 1, width, length)
    domain = sorted(enumerate_language(d0))
    rels = []
    for _name, arity in vocab.relations:
        n_tuples = rng.randint(0, width)
        chosen = set()
        for _ in range(n_tuples):
            tup = tuple(rng.choice(domain) for _ in range(arity))
            chosen.add(tup)
        words = set()
        for tup in chosen:
            padded_len = max(len(c) for c in tup)
            word = tuple(
                tuple(c[j] if j < len(c) else PAD for c in tup) if arity > 1
                else tup[0][j]
                for j in range(padded_len)
            )
            words.add(word)
        rels.append(odd_from_words(words, length, alphabet, arity, width))
    return StructuralTuple(d0, tuple(rels), vocab, width)


def random_string_relation(rng: random.Random, alphabet=("a", "b"), arity=2,
                           max_tuples=6, max_len=3):
    """Explicit random relation over string tracks, as automaton + the
    defining tuple set."""
    tracks = tuple(TrackSpec("string", frozenset(alphabet), 1) for _ in range(arity))
    letters = sorted(alphabet)
    tuples = set()
    for _ in range(rng.randint(0, max_tuples)):
        tuples.add(tuple(
            tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))
            for _ in range(arity)
        ))
    return rel_from_tuples(tuples, tracks), tuples


@pytest.fixture
def rng():
    return random.Random(20240811)
