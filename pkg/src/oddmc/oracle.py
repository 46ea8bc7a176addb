"""Brute-force ground truth: explicit structures, naive Tarskian
evaluation, and exhaustive counting.

Deliberately independent of the automata pipeline: nothing here touches
relation automata or the compiler, so differential tests compare two
genuinely separate evaluation routes.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .alphabet import untensor
from .errors import MalformedConvolutionError, ResourceLimitError
from .fo import And, Atom, Eq, Exists, Forall, Formula, Iff, Implies, Not, Or, free_vars
from .odd import Odd, enumerate_language
from .structural import StructuralTuple

DEFAULT_COUNT_LIMIT = 10**7


def count_limit() -> int:
    raw = os.environ.get("ODDMC_ENUM_LIMIT")
    return int(raw) if raw else DEFAULT_COUNT_LIMIT


@dataclass(frozen=True)
class ExplicitStructure:
    domain: frozenset
    relations: dict

    def __post_init__(self):
        if not self.domain:
            raise ValueError("structure domains are nonempty")
        for name, tuples in self.relations.items():
            for tup in tuples:
                if any(v not in self.domain for v in tup):
                    raise ValueError(f"{name} tuple {tup!r} leaves the domain")


def derive_structure(t: StructuralTuple) -> ExplicitStructure:
    """Decode a structural tuple: the domain is the domain ODD's
    language, each relation the decoded language of its ODD."""
    domain = frozenset(enumerate_language(t.domain))
    relations: dict = {}
    for (name, arity), odd in zip(t.vocabulary.relations, t.rels):
        decoded = set()
        for word in enumerate_language(odd):
            try:
                parts = untensor(word)
            except MalformedConvolutionError as e:
                raise MalformedConvolutionError(
                    f"{name} accepts a non-convolution string {word!r}: {e}"
                ) from e
            if len(parts) != arity:
                raise MalformedConvolutionError(
                    f"{name} decoded to {len(parts)} tracks, expected {arity}"
                )
            decoded.add(tuple(parts))
        relations[name] = frozenset(decoded)
    return ExplicitStructure(domain, relations)


def eval_fo(s: ExplicitStructure, f: Formula, assignment: Mapping) -> bool:
    """Standard Tarskian semantics; quantifiers range over the domain."""
    if isinstance(f, Eq):
        return _lookup(assignment, f.left) == _lookup(assignment, f.right)
    if isinstance(f, Atom):
        tup = tuple(_lookup(assignment, v) for v in f.args)
        return tup in s.relations[f.name]
    if isinstance(f, Not):
        return not eval_fo(s, f.body, assignment)
    if isinstance(f, And):
        return eval_fo(s, f.left, assignment) and eval_fo(s, f.right, assignment)
    if isinstance(f, Or):
        return eval_fo(s, f.left, assignment) or eval_fo(s, f.right, assignment)
    if isinstance(f, Implies):
        return (not eval_fo(s, f.left, assignment)) or eval_fo(s, f.right, assignment)
    if isinstance(f, Iff):
        return eval_fo(s, f.left, assignment) == eval_fo(s, f.right, assignment)
    if isinstance(f, Exists):
        return any(
            eval_fo(s, f.body, {**assignment, f.var: v}) for v in s.domain
        )
    if isinstance(f, Forall):
        return all(
            eval_fo(s, f.body, {**assignment, f.var: v}) for v in s.domain
        )
    raise TypeError(f"not a formula node: {f!r}")


def _lookup(assignment: Mapping, var: str):
    if var not in assignment:
        raise ValueError(f"unassigned free variable {var!r}")
    return assignment[var]


def count_brute(s: ExplicitStructure, f: Formula, ctx: Sequence[str]) -> int:
    """Exhaustive count of satisfying assignments over domain^|ctx|."""
    ctx = list(ctx)
    missing = free_vars(f) - set(ctx)
    if missing:
        raise ValueError(f"context misses free variables {sorted(missing)}")
    total = len(s.domain) ** len(ctx)
    if total > count_limit():
        raise ResourceLimitError(
            f"{total} assignments exceed the exhaustive-count bound"
        )
    domain = sorted(s.domain)
    count = 0
    for values in itertools.product(domain, repeat=len(ctx)):
        if eval_fo(s, f, dict(zip(ctx, values))):
            count += 1
    return count


def verify_binarize_iso(t: StructuralTuple, b: StructuralTuple, encoding: dict) -> bool:
    """Check that blockwise decoding is an isomorphism from the derived
    structure of `b` onto that of `t` (the explicit bijection of the
    re-encoding construction, not a general isomorphism search)."""
    alpha = len(next(iter(encoding.values())))
    inverse = {}
    for sym, block in encoding.items():
        if sym == "_":
            continue
        if block in inverse:
            return False
        inverse[block] = sym

    def decode(word: tuple):
        if len(word) % alpha:
            return None
        out = []
        for g in range(len(word) // alpha):
            block = tuple(word[g * alpha : (g + 1) * alpha])
            if block not in inverse:
                return None
            out.append(inverse[block])
        return tuple(out)

    st = derive_structure(t)
    sb = derive_structure(b)
    h = {}
    for v in sb.domain:
        image = decode(v)
        if image is None or image not in st.domain:
            return False
        h[v] = image
    if len(set(h.values())) != len(h) or len(h) != len(st.domain):
        return False
    for name in st.relations:
        mapped = {
            tuple(h[c] for c in tup)
            for tup in sb.relations[name]
        }
        if mapped != st.relations[name]:
            return False
    return True
