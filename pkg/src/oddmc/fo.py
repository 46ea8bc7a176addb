"""First-order formulas: AST, concrete syntax, normalization, and the
inductive compilation into relation automata.

Grammar (quantifier bodies extend maximally right; precedence
! > & > | > -> > <->; -> associates to the right):

    phi := "exists" v "." phi | "forall" v "." phi
         | phi "<->" phi | phi "->" phi | phi "|" phi | phi "&" phi
         | "!" phi | "(" phi ")" | v "=" v | Name "(" v {"," v} ")"

Lines starting with # are comments.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import CompileError, FormulaSyntaxError
from .relations import RelationAutomaton, rel_identify, rel_intersect, rel_proj, \
    rel_complement_within, rel_union, rel_unfold, joined_product
from .structural import Support, Vocabulary, membership_rel, structural_universe


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Eq | Atom | Not | And | Or | Implies | Iff | Exists | Forall


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, Eq):
        return frozenset({f.left, f.right})
    if isinstance(f, Atom):
        return frozenset(f.args)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s+|#[^\n]*"
    r"|(?P<op><->|->|[()&|!=.,])"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
)


def _lex(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup is not None:
            tokens.append((m.group(m.lastgroup), pos, m.lastgroup))
        pos = m.end()
    tokens.append((None, len(text), "eof"))
    return tokens


class _Parser:
    def __init__(self, tokens, vocab: Vocabulary | None):
        self.tokens = tokens
        self.i = 0
        self.vocab = vocab

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][1]

    def take(self, expected=None):
        tok, pos, _kind = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"trailing input {self.peek()!r}", self.pos())
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek() == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("exists", "forall"):
            self.take()
            var = self.name("variable")
            self.take(".")
            body = self.iff()
            return Exists(var, body) if tok == "exists" else Forall(var, body)
        return self.atom()

    def name(self, what: str) -> str:
        tok, pos, kind = self.tokens[self.i]
        if kind != "name" or tok in ("exists", "forall"):
            raise FormulaSyntaxError(f"expected a {what}, found {tok!r}", pos)
        self.i += 1
        return tok

    def atom(self) -> Formula:
        tok, pos, kind = self.tokens[self.i]
        if tok == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if kind != "name" or tok in ("exists", "forall"):
            raise FormulaSyntaxError(f"expected a formula, found {tok!r}", pos)
        first = self.name("variable or relation")
        if self.peek() == "=":
            self.take()
            return Eq(first, self.name("variable"))
        if self.peek() == "(":
            self.take()
            args = [self.name("variable")]
            while self.peek() == ",":
                self.take()
                args.append(self.name("variable"))
            self.take(")")
            if self.vocab is not None:
                try:
                    arity = self.vocab.arity(first)
                except KeyError:
                    raise FormulaSyntaxError(f"unknown relation {first!r}", pos) from None
                if arity != len(args):
                    raise FormulaSyntaxError(
                        f"{first} expects {arity} arguments, found {len(args)}", pos
                    )
            return Atom(first, tuple(args))
        raise FormulaSyntaxError(f"lone variable {first!r} is not a formula", pos)


def parse_formula(text: str, vocab: Vocabulary | None = None) -> Formula:
    return _Parser(_lex(text), vocab).parse()


def formula_to_text(f: Formula) -> str:
    """Concrete syntax for an AST (fully parenthesized where it matters)."""
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Atom):
        return f"{f.name}({', '.join(f.args)})"
    if isinstance(f, Not):
        return f"!({formula_to_text(f.body)})"
    if isinstance(f, And):
        return f"({formula_to_text(f.left)}) & ({formula_to_text(f.right)})"
    if isinstance(f, Or):
        return f"({formula_to_text(f.left)}) | ({formula_to_text(f.right)})"
    if isinstance(f, Implies):
        return f"({formula_to_text(f.left)}) -> ({formula_to_text(f.right)})"
    if isinstance(f, Iff):
        return f"({formula_to_text(f.left)}) <-> ({formula_to_text(f.right)})"
    if isinstance(f, Exists):
        return f"exists {f.var}. {formula_to_text(f.body)}"
    if isinstance(f, Forall):
        return f"forall {f.var}. {formula_to_text(f.body)}"
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# normalization


def normalize(f: Formula) -> Formula:
    """Rewrite to the {=, atoms, !, &, |, exists} fragment the compiler
    handles: a -> b becomes !a | b, a <-> b becomes (!a | b) & (!b | a),
    and forall becomes !exists!."""
    if isinstance(f, (Eq, Atom)):
        return f
    if isinstance(f, Not):
        return Not(normalize(f.body))
    if isinstance(f, And):
        return And(normalize(f.left), normalize(f.right))
    if isinstance(f, Or):
        return Or(normalize(f.left), normalize(f.right))
    if isinstance(f, Implies):
        return Or(Not(normalize(f.left)), normalize(f.right))
    if isinstance(f, Iff):
        a = normalize(f.left)
        b = normalize(f.right)
        return And(Or(Not(a), b), Or(Not(b), a))
    if isinstance(f, Exists):
        return Exists(f.var, normalize(f.body))
    if isinstance(f, Forall):
        return Not(Exists(f.var, Not(normalize(f.body))))
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# compilation


class _Compiler:
    def __init__(self, alphabet, width: int, vocab: Vocabulary, support: Support):
        self.alphabet = frozenset(alphabet)
        self.width = width
        self.vocab = vocab
        self.support = support
        self._universe: dict = {}
        self._membership: dict = {}

    def universe(self, n: int) -> RelationAutomaton:
        if n not in self._universe:
            self._universe[n] = structural_universe(
                self.alphabet, self.width, self.vocab, n, self.support
            )
        return self._universe[n]

    def membership(self, i: int) -> RelationAutomaton:
        """Membership relation for the i-th (1-based) vocabulary symbol,
        its string track already unfolded into singles."""
        if i not in self._membership:
            a = self.vocab.relations[i - 1][1]
            rel = membership_rel(
                self.alphabet, self.width, a, self.support.rels[i - 1]
            )
            self._membership[i] = rel_unfold(rel, 2) if a > 1 else rel
        return self._membership[i]

    def compile(self, f: Formula, ctx: list) -> RelationAutomaton:
        n = len(ctx)
        rho = self.vocab.rho
        if isinstance(f, Eq):
            i = ctx.index(f.left) + 1
            j = ctx.index(f.right) + 1
            return rel_identify(self.universe(n), {(rho + i + 1, rho + j + 1)})
        if isinstance(f, Atom):
            i = self.vocab.index(f.name)
            a = self.vocab.arity(f.name)
            unfolded = self.membership(i)  # tracks: D, b_1..b_a
            equalities = [(1, a + i + 2)]
            for j, arg in enumerate(f.args, start=1):
                c = ctx.index(arg) + 1
                equalities.append((j + 1, a + rho + 2 + c))
            joined = joined_product([unfolded, self.universe(n)], equalities)
            return rel_proj(joined, set(range(1, a + 2)))
        if isinstance(f, Not):
            return rel_complement_within(self.universe(n), self.compile(f.body, ctx))
        if isinstance(f, And):
            return rel_intersect(self.compile(f.left, ctx), self.compile(f.right, ctx))
        if isinstance(f, Or):
            return rel_union(self.compile(f.left, ctx), self.compile(f.right, ctx))
        if isinstance(f, Exists):
            if f.var in ctx:
                raise CompileError(f"quantifier shadows context variable {f.var!r}")
            inner = self.compile(f.body, ctx + [f.var])
            return rel_proj(inner, {rho + n + 2})
        raise CompileError(
            f"{type(f).__name__} nodes must be removed by normalize before compiling"
        )


def compile_formula(f: Formula, ctx, alphabet, width: int, vocab: Vocabulary,
                    support: Support) -> RelationAutomaton:
    """Relation automaton for the tuples (D_0..D_rho, v_1..v_n) whose ODD
    part is structural over the support, whose v_j are domain members,
    and whose derived structure satisfies f under the assignment."""
    ctx = list(ctx)
    if len(set(ctx)) != len(ctx):
        raise CompileError("context variables must be distinct")
    missing = free_vars(f) - set(ctx)
    if missing:
        raise CompileError(f"free variables outside the context: {sorted(missing)}")
    return _Compiler(alphabet, width, vocab, support).compile(f, ctx)
