"""End-to-end procedures: class satisfiability and assignment counting.

check_class intersects a class automaton with the compiled sentence
relation and tests emptiness; count_assignments intersects the
determinized compiled relation with the leveled assignment automaton of
one fixed structural tuple and counts accepting paths, which equals the
accepted-string count because the product is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .alphabet import PAD
from .automaton import Nfa, fa_count_exact_length, fa_determinize, fa_intersect, \
    fa_is_empty, fa_product_dfa
from .errors import OddmcError
from .fo import Formula, compile_formula, free_vars, normalize
from .relations import TrackSupport, string_track_symbols
from .structural import (
    ClassAutomaton,
    StructuralTuple,
    string_to_tuple,
    support_from_class,
    support_from_tuple,
    tuple_to_string,
    validate_structural,
)


@dataclass(frozen=True)
class CheckResult:
    verdict: str  # "SAT" | "UNSAT"
    witness_string: tuple | None = None
    witness: StructuralTuple | None = None

    @property
    def is_sat(self) -> bool:
        return self.verdict == "SAT"


def check_class(ca: ClassAutomaton, sentence: Formula) -> CheckResult:
    """SAT iff some string of the class automaton encodes a structural
    tuple whose derived structure satisfies the sentence; the witness is
    a shortest such string."""
    if free_vars(sentence):
        raise ValueError("check_class needs a sentence (no free variables)")
    compiled = compile_formula(
        normalize(sentence), [], ca.alphabet, ca.width, ca.vocabulary,
        support_from_class(ca),
    )
    product = fa_intersect(ca.nfa, compiled.nfa)
    empty, witness = fa_is_empty(product)
    if empty:
        return CheckResult("UNSAT")
    tup = string_to_tuple(witness, ca.alphabet, ca.width, ca.vocabulary)
    try:
        validate_structural(tup)
    except OddmcError as e:  # pragma: no cover - would indicate a compiler bug
        raise OddmcError(f"internal error: SAT witness fails validation: {e}") from e
    return CheckResult("SAT", witness, tup)


def assignment_automaton(t: StructuralTuple, n: int) -> Nfa:
    """The leveled automaton over t's own layers: accepts exactly the
    convolutions of t's layer-tuple string with any n domain-alphabet
    strings of length <= length(t); deterministic by construction."""
    letters = sorted(t.alphabet)
    padded = letters + [PAD]

    def tuples(source):
        out = [()]
        for _ in range(n):
            out = [v + (c,) for v in out for c in source]
        return out

    all_proper = tuples(letters)
    all_padded = tuples(padded)
    sym_at = tuple_to_string(t)
    start = ("s",)
    states = {start}
    trans = set()
    current: set = set()
    for sigma in all_proper:
        states.add((1, sigma))
        trans.add((start, sym_at[0] + sigma, (1, sigma)))
        current.add(sigma)
    for i in range(1, t.length):
        nxt: set = set()
        for beta in current:
            for sigma in all_padded:
                if any(b == PAD and c != PAD for b, c in zip(beta, sigma)):
                    continue
                states.add((i + 1, sigma))
                trans.add(((i, beta), sym_at[i] + sigma, (i + 1, sigma)))
                nxt.add(sigma)
        current = nxt
    finals = {(t.length, sigma) for sigma in current}
    support = TrackSupport(
        tuple(frozenset(set(d.layers) | {PAD}) for d in t.odds)
        + (frozenset(padded),) * n
    )
    return Nfa(frozenset(states), support, frozenset(trans),
               frozenset({start}), frozenset(finals))


def count_assignments(t: StructuralTuple, f: Formula, ctx: Sequence[str]) -> int:
    """Number of context-variable assignments drawn from the domain that
    satisfy f on the structure derived from t."""
    validate_structural(t)
    ctx = list(ctx)
    if len(set(ctx)) != len(ctx):
        raise ValueError("context variables must be distinct")
    missing = free_vars(f) - set(ctx)
    if missing:
        raise ValueError(f"context misses free variables {sorted(missing)}")
    compiled = compile_formula(
        normalize(f), ctx, t.alphabet, t.width, t.vocabulary,
        support_from_tuple(t),
    )
    det = fa_determinize(compiled.nfa)
    leveled = assignment_automaton(t, len(ctx))
    product = fa_product_dfa(det, leveled)
    return fa_count_exact_length(product, t.length)


def model_check(t: StructuralTuple, sentence: Formula) -> bool:
    """S(t) satisfies the sentence; counting with an empty context yields
    1 or 0."""
    if free_vars(sentence):
        raise ValueError("model_check needs a sentence (no free variables)")
    return count_assignments(t, sentence, []) > 0
