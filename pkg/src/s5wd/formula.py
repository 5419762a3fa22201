"""Formulas of the multi-agent epistemic language: AST, parser, printer, helpers.

Node kinds: atoms, the boolean connectives, per-agent box/diamond modalities,
the "some agent considers possible" operator S, and the distributed-knowledge
operator D.  Concrete syntax (loosest to tightest): `<->`, `->` (right
associative), `|`, `&`, then the unary prefixes `~`, `[i]`, `<i>`, `S`, `D`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class ParseError(ValueError):
    """Syntax error in the concrete formula syntax; carries the character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class AgentIndexError(ValueError):
    """Agent index outside 1..n."""


class LocalityError(ValueError):
    """An argument required to be i-local is not."""


@dataclass(frozen=True)
class Formula:
    """Base class for formula nodes; instances are immutable and hashable."""

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    """[i]f: agent i knows f."""

    agent: int
    child: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    """<i>f: agent i considers f possible."""

    agent: int
    child: Formula


@dataclass(frozen=True)
class Some(Formula):
    """S f: some agent considers f possible (expands to a disjunction of diamonds)."""

    child: Formula


@dataclass(frozen=True)
class Dist(Formula):
    """D f: f holds at every world related by the intersection of all relations."""

    child: Formula


_BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    i = 0
    length = len(text)
    while i < length:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "~&|[]()>":
            tokens.append((c, None, i))
            i += 1
        elif c == "-":
            if text.startswith("->", i):
                tokens.append(("->", None, i))
                i += 2
            else:
                raise ParseError("expected '->'", i)
        elif c == "<":
            if text.startswith("<->", i):
                tokens.append(("<->", None, i))
                i += 3
            else:
                tokens.append(("<", None, i))
                i += 1
        elif c in ("S", "D"):
            tokens.append((c, None, i))
            i += 1
        elif c.isdigit():
            j = i
            while j < length and text[j].isdigit():
                j += 1
            tokens.append(("nat", int(text[i:j]), i))
            i = j
        elif "a" <= c <= "z":
            j = i
            while j < length and (text[j].isdigit() or text[j] == "_" or "a" <= text[j] <= "z"):
                j += 1
            tokens.append(("atom", text[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", None, length))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, object, int]], n: int, extended: bool):
        self.tokens = tokens
        self.pos = 0
        self.n = n
        self.extended = extended

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, object, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> tuple[str, object, int]:
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        return tok

    def iff(self) -> Formula:
        left = self.implies()
        if self.peek()[0] == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[0] == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def agent_index(self) -> int:
        tok = self.expect("nat")
        i = tok[1]
        assert isinstance(i, int)
        if not 1 <= i <= self.n:
            raise AgentIndexError(f"agent index {i} out of range 1..{self.n}")
        return i

    def unary(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "~":
            return Not(self.unary())
        if kind == "[":
            i = self.agent_index()
            self.expect("]")
            return Box(i, self.unary())
        if kind == "<":
            i = self.agent_index()
            self.expect(">")
            return Diamond(i, self.unary())
        if kind == "S":
            if not self.extended:
                raise ParseError("operator S is not enabled", pos)
            return Some(self.unary())
        if kind == "D":
            if not self.extended:
                raise ParseError("operator D is not enabled", pos)
            return Dist(self.unary())
        if kind == "(":
            f = self.iff()
            self.expect(")")
            return f
        if kind == "atom":
            assert isinstance(value, str)
            return Atom(value)
        raise ParseError(f"unexpected {kind!r}", pos)


def parse(text: str, n: int, *, extended: bool = True) -> Formula:
    """Parse concrete syntax into a Formula; agent indices are checked against n.

    With extended=False the S and D operators are rejected.
    """
    if n < 1:
        raise ValueError("agent count n must be at least 1")
    parser = _Parser(_tokenize(text), n, extended)
    f = parser.iff()
    parser.expect("end")
    return f


# Precedence levels used by the printer; higher binds tighter.
_LEVELS = {Iff: 1, Implies: 2, Or: 3, And: 4}


def _level(f: Formula) -> int:
    return _LEVELS.get(type(f), 5 if not isinstance(f, Atom) else 6)


def _render(f: Formula, min_level: int) -> str:
    if isinstance(f, Atom):
        body = f.name
    elif isinstance(f, Not):
        body = "~" + _render(f.child, 5)
    elif isinstance(f, Box):
        body = f"[{f.agent}]" + _render(f.child, 5)
    elif isinstance(f, Diamond):
        body = f"<{f.agent}>" + _render(f.child, 5)
    elif isinstance(f, Some):
        body = "S " + _render(f.child, 5)
    elif isinstance(f, Dist):
        body = "D " + _render(f.child, 5)
    elif isinstance(f, (And, Or)):
        level = _level(f)
        body = f"{_render(f.left, level)} {_BINARY[type(f)]} {_render(f.right, level + 1)}"
    elif isinstance(f, (Implies, Iff)):
        level = _level(f)
        body = f"{_render(f.left, level + 1)} {_BINARY[type(f)]} {_render(f.right, level)}"
    else:
        raise TypeError(f"not a formula node: {f!r}")
    if _level(f) < min_level:
        return f"({body})"
    return body


def pretty(f: Formula) -> str:
    """Render f with minimal parentheses so that parse(pretty(f), n) == f."""
    return _render(f, 0)


def expand_s(f: Formula, n: int) -> Formula:
    """Replace every S g by the disjunction of <i>g over agents i = 1..n."""
    if n < 1:
        raise ValueError("agent count n must be at least 1")
    if isinstance(f, Atom):
        return f
    if isinstance(f, Not):
        return Not(expand_s(f.child, n))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(expand_s(f.left, n), expand_s(f.right, n))
    if isinstance(f, Box):
        return Box(f.agent, expand_s(f.child, n))
    if isinstance(f, Diamond):
        return Diamond(f.agent, expand_s(f.child, n))
    if isinstance(f, Dist):
        return Dist(expand_s(f.child, n))
    if isinstance(f, Some):
        child = expand_s(f.child, n)
        out: Formula = Diamond(1, child)
        for i in range(2, n + 1):
            out = Or(out, Diamond(i, child))
        return out
    raise TypeError(f"not a formula node: {f!r}")


def children(f: Formula) -> tuple[Formula, ...]:
    """Immediate subformulas of f."""
    if isinstance(f, Atom):
        return ()
    if isinstance(f, (Not, Some, Dist, Box, Diamond)):
        return (f.child,)
    if isinstance(f, (And, Or, Implies, Iff)):
        return (f.left, f.right)
    raise TypeError(f"not a formula node: {f!r}")


def subformulas(f: Formula) -> tuple[Formula, ...]:
    """All distinct subformulas of f, in first-visit preorder."""
    seen: dict[Formula, None] = {}

    def visit(g: Formula) -> None:
        if g in seen:
            return
        seen[g] = None
        for child in children(g):
            visit(child)

    visit(f)
    return tuple(seen)


def negation(f: Formula) -> Formula:
    """The negation of f, collapsing a leading Not instead of stacking two."""
    if isinstance(f, Not):
        return f.child
    return Not(f)


def subformula_closure(f: Formula) -> tuple[Formula, ...]:
    """Subformulas of f together with their negations, deduplicated.

    The formula must be S-free (expand first).  At most one leading Not is
    added, so the closure has at most 2 * formula_size(f) members.
    """
    if has_node(f, Some):
        raise ValueError("formula contains S; expand_s before taking the closure")
    members: dict[Formula, None] = {g: None for g in subformulas(f)}
    for g in tuple(members):
        members.setdefault(negation(g), None)
    return tuple(members)


def formula_size(f: Formula) -> int:
    """Number of distinct subformulas of f (f must be S-free)."""
    if has_node(f, Some):
        raise ValueError("formula contains S; expand_s before taking sizes")
    return len(subformulas(f))


def atoms(f: Formula) -> tuple[str, ...]:
    """Sorted names of the atoms occurring in f."""
    return tuple(sorted({g.name for g in subformulas(f) if isinstance(g, Atom)}))


def has_node(f: Formula, node_type: type) -> bool:
    """True iff some subformula of f is of the given node type."""
    return any(isinstance(g, node_type) for g in subformulas(f))


def modal_depth(f: Formula) -> int:
    """Maximum nesting of modal operators (box, diamond, S, D)."""
    inner = max((modal_depth(g) for g in children(f)), default=0)
    if isinstance(f, (Box, Diamond, Some, Dist)):
        return inner + 1
    return inner


def is_i_local(f: Formula, i: int) -> bool:
    """True iff f is a boolean combination of formulas rooted at [i] or <i>."""
    if isinstance(f, (Box, Diamond)):
        return f.agent == i
    if isinstance(f, Not):
        return is_i_local(f.child, i)
    if isinstance(f, (And, Or, Implies, Iff)):
        return is_i_local(f.left, i) and is_i_local(f.right, i)
    return False


def _conjunction(parts: Iterable[Formula]) -> Formula:
    items = list(parts)
    out = items[0]
    for g in items[1:]:
        out = And(out, g)
    return out


def wd_instance(local_parts: Sequence[Formula]) -> Formula:
    """Build (S f1 & ... & S fn) -> S S (f1 & ... & fn), S left unexpanded.

    local_parts[i-1] must be i-local; otherwise LocalityError names the index.
    """
    if not local_parts:
        raise ValueError("need at least one local formula")
    for idx, g in enumerate(local_parts, start=1):
        if not is_i_local(g, idx):
            raise LocalityError(f"argument {idx} is not {idx}-local: {pretty(g)}")
    antecedent = _conjunction(Some(g) for g in local_parts)
    consequent = Some(Some(_conjunction(local_parts)))
    return Implies(antecedent, consequent)
