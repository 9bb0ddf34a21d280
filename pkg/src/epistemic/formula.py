"""Formula syntax for multi-agent epistemic logic.

Only six constructors are primitive: ``Bottom``, ``Var``, ``Or``, ``And``,
``Imp`` and ``Know``.  Negation, truth, possibility ``L_i`` and belief
``B_i`` are abbreviations that expand into primitives at construction time.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, fields
from typing import Iterable, Optional, Union

__all__ = [
    "Formula", "Bottom", "Var", "Or", "And", "Imp", "Know",
    "BOTTOM", "TOP", "neg", "top", "poss", "bel", "iff",
    "imply", "conjunct", "SchemaName", "instantiate_schema", "match_schema",
    "subformula_closure", "ParseError", "parse", "render",
    "agents_of", "variables_of", "size", "depth",
]


def _node(cls):
    """Frozen dataclass with a memoised structural hash.

    Formulas are compared and hashed constantly by the kernel and the tableau;
    caching the hash keeps set membership O(1) after the first lookup.
    """
    cls = dataclass(frozen=True)(cls)
    names = tuple(f.name for f in fields(cls))

    def __hash__(self):
        try:
            return self._hash
        except AttributeError:
            h = hash((cls.__name__,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_hash", h)
            return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not cls:
            return NotImplemented if not isinstance(other, _NODE_TYPES) else False
        if hash(self) != hash(other):
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    return cls


@_node
class Bottom:
    def __str__(self):
        return render(self)


@_node
class Var:
    name: str

    def __str__(self):
        return render(self)


@_node
class Or:
    lhs: "Formula"
    rhs: "Formula"

    def __str__(self):
        return render(self)


@_node
class And:
    lhs: "Formula"
    rhs: "Formula"

    def __str__(self):
        return render(self)


@_node
class Imp:
    lhs: "Formula"
    rhs: "Formula"

    def __str__(self):
        return render(self)


@_node
class Know:
    agent: int
    body: "Formula"

    def __post_init__(self):
        if not isinstance(self.agent, int) or self.agent < 0:
            raise ValueError(f"agent label must be a natural number, got {self.agent!r}")

    def __str__(self):
        return render(self)


Formula = Union[Bottom, Var, Or, And, Imp, Know]
_NODE_TYPES = (Bottom, Var, Or, And, Imp, Know)

BOTTOM = Bottom()
TOP = Imp(BOTTOM, BOTTOM)


def neg(f: Formula) -> Formula:
    return Imp(f, BOTTOM)


def top() -> Formula:
    return TOP


def poss(agent: int, f: Formula) -> Formula:
    """``L_i f``, i.e. ``~K_i ~f``."""
    return neg(Know(agent, neg(f)))


def bel(agent: int, f: Formula) -> Formula:
    """Belief ``B_i f``, defined as ``~K_i ~K_i f``."""
    return poss(agent, Know(agent, f))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def imply(premises: Iterable[Formula], goal: Formula) -> Formula:
    """Right-nested implication ``p1 -> (p2 -> ... (pk -> goal))``."""
    result = goal
    for p in reversed(list(premises)):
        result = Imp(p, result)
    return result


def conjunct(formulas: Iterable[Formula]) -> Formula:
    """Right-nested conjunction closed off by ``true``; ``conjunct([]) == TOP``."""
    result = TOP
    for f in reversed(list(formulas)):
        result = And(f, result)
    return result


# --------------------------------------------------------------------------
# Structural helpers

def _children(f: Formula) -> tuple:
    if isinstance(f, (Or, And, Imp)):
        return (f.lhs, f.rhs)
    if isinstance(f, Know):
        return (f.body,)
    return ()


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in _children(f))


def depth(f: Formula) -> int:
    kids = _children(f)
    return 0 if not kids else 1 + max(depth(c) for c in kids)


def agents_of(f: Formula) -> list[int]:
    """Sorted agent labels occurring in ``f``."""
    found: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Know):
            found.add(g.agent)
        stack.extend(_children(g))
    return sorted(found)


def variables_of(f: Formula) -> list[str]:
    found: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            found.add(g.name)
        stack.extend(_children(g))
    return sorted(found)


def subformula_closure(f: Formula) -> tuple:
    """All subformulas of ``f`` in post-order, first occurrence wins."""
    seen: dict = {}

    def walk(g):
        for c in _children(g):
            walk(c)
        seen.setdefault(g, None)

    walk(f)
    return tuple(seen)


# --------------------------------------------------------------------------
# Axiom schemas

class SchemaName(enum.Enum):
    AxK = "AXK"
    AxT = "AXT"
    Ax4 = "AX4"
    Ax2 = "AX2"
    AxN = "AXN"
    AxR = "AXR"

    @property
    def binary(self) -> bool:
        return self in (SchemaName.AxK, SchemaName.AxR)

    @property
    def nullary(self) -> bool:
        return self is SchemaName.AxN


def instantiate_schema(name: SchemaName, i: int, phi: Optional[Formula] = None,
                       psi: Optional[Formula] = None) -> Formula:
    """Return the primitive instance of schema ``name`` for agent ``i``.

    ``AxK`` and ``AxR`` take two formula arguments, ``AxN`` takes none and the
    remaining schemas take exactly one.
    """
    if name.nullary:
        if phi is not None or psi is not None:
            raise ValueError(f"{name.name} takes no formula arguments")
    elif phi is None or (psi is not None) != name.binary:
        want = "two" if name.binary else "one"
        raise ValueError(f"{name.name} takes {want} formula argument(s)")
    K = lambda body: Know(i, body)  # noqa: E731
    if name is SchemaName.AxK:
        return Imp(And(K(Imp(phi, psi)), K(phi)), K(psi))
    if name is SchemaName.AxT:
        return Imp(K(phi), phi)
    if name is SchemaName.Ax4:
        return Imp(K(phi), K(K(phi)))
    if name is SchemaName.Ax2:
        return Imp(neg(K(neg(K(phi)))), K(neg(K(neg(phi)))))
    if name is SchemaName.AxN:
        return K(TOP)
    # AxR: the biconditional is spelled as a conjunction of two implications
    both = And(K(phi), K(psi))
    return iff(K(And(phi, psi)), both)


_META_PHI, _META_PSI = Var("?phi"), Var("?psi")
_TEMPLATES = {
    name: instantiate_schema(name, 0, *( () if name.nullary else
                                         (_META_PHI, _META_PSI) if name.binary else
                                         (_META_PHI,)))
    for name in SchemaName
}
_METAS = {_META_PHI, _META_PSI}


def match_schema(name: SchemaName, f: Formula) -> bool:
    """Whether ``f`` is an instance of ``name`` for some agent and formulas."""
    bindings: dict = {}

    def unify(t, g) -> bool:
        if t in _METAS:
            if t in bindings:
                return bindings[t] == g
            bindings[t] = g
            return True
        if type(t) is not type(g):
            return False
        if isinstance(t, Know):
            # every box in a template shares one agent metavariable
            if "agent" in bindings and bindings["agent"] != g.agent:
                return False
            bindings["agent"] = g.agent
            return unify(t.body, g.body)
        if isinstance(t, (Or, And, Imp)):
            return unify(t.lhs, g.lhs) and unify(t.rhs, g.rhs)
        return t == g

    return unify(_TEMPLATES[name], f)


# --------------------------------------------------------------------------
# Concrete syntax

_KEYWORDS = {"true", "false"}
_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<op>[~&|()])
  | (?P<modal>[KLB])\s*(?P<agent>[0-9]*)
  | (?P<ident>[a-z][a-z0-9_]*)
""", re.VERBOSE)


class ParseError(ValueError):
    """Malformed formula text; ``offset`` is a byte offset into the input."""

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        offset = len(text[:pos].encode())
        kind = m.lastgroup
        if kind == "agent" or m.group("modal"):
            if not m.group("agent"):
                raise ParseError(f"agent index missing after {m.group('modal')}",
                                 offset + 1, {"<agent index>"})
            tokens.append(("modal", (m.group("modal"), int(m.group("agent"))), offset))
        elif kind == "ident":
            tokens.append(("ident", m.group("ident"), offset))
        elif kind in ("arrow", "op"):
            tokens.append((m.group(kind), None, offset))
        pos = m.end()
    tokens.append(("eof", None, len(text.encode())))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            raise ParseError(f"unexpected {_describe(tok)}", tok[2], {kind})
        return self.advance()

    def formula(self) -> Formula:
        lhs = self.disjunction()
        if self.peek()[0] == "->":
            self.advance()
            return Imp(lhs, self.formula())
        return lhs

    def disjunction(self) -> Formula:
        result = self.conjunction()
        while self.peek()[0] == "|":
            self.advance()
            result = Or(result, self.conjunction())
        return result

    def conjunction(self) -> Formula:
        result = self.unary()
        while self.peek()[0] == "&":
            self.advance()
            result = And(result, self.unary())
        return result

    def unary(self) -> Formula:
        kind, value, offset = self.peek()
        if kind == "~":
            self.advance()
            return neg(self.unary())
        if kind == "modal":
            self.advance()
            op, agent = value
            body = self.unary()
            return {"K": Know, "L": poss, "B": bel}[op](agent, body)
        return self.atom()

    def atom(self) -> Formula:
        kind, value, offset = self.advance()
        if kind == "ident":
            if value == "true":
                return TOP
            if value == "false":
                return BOTTOM
            return Var(value)
        if kind == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {_describe((kind, value, offset))}", offset,
                         {"~", "(", "<identifier>", "true", "false", "K<n>", "L<n>", "B<n>"})


def _describe(tok) -> str:
    kind, value, _ = tok
    if kind == "eof":
        return "end of input"
    if kind == "ident":
        return f"identifier {value!r}"
    if kind == "modal":
        return f"modality {value[0]}{value[1]}"
    return f"token {kind!r}"


def parse(text: str) -> Formula:
    """Parse ASCII formula syntax into a primitive AST.

    >>> parse("K1 p -> p")
    Imp(lhs=Know(agent=1, body=Var(name='p')), rhs=Var(name='p'))
    """
    p = _Parser(text)
    result = p.formula()
    tok = p.peek()
    if tok[0] != "eof":
        raise ParseError(f"unexpected {_describe(tok)}", tok[2], {"->", "|", "&", "<end of input>"})
    return result


# precedence levels: higher binds tighter
_IMP, _OR, _AND, _UNARY = 1, 2, 3, 4


def _level(f: Formula) -> int:
    if isinstance(f, Imp) and f.rhs != BOTTOM:
        return _IMP
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    return _UNARY


def render(f: Formula) -> str:
    """Print ``f`` with minimal parentheses; ``parse(render(f)) == f``."""

    def wrap(g: Formula, min_level: int) -> str:
        s = render(g)
        return f"({s})" if _level(g) < min_level else s

    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Var):
        return f.name
    if f == TOP:
        return "true"
    if isinstance(f, Imp) and f.rhs == BOTTOM:
        return "~" + wrap(f.lhs, _UNARY)
    if isinstance(f, Know):
        return f"K{f.agent} " + wrap(f.body, _UNARY)
    if isinstance(f, Imp):
        return f"{wrap(f.lhs, _OR)} -> {wrap(f.rhs, _IMP)}"
    if isinstance(f, Or):
        return f"{wrap(f.lhs, _OR)} | {wrap(f.rhs, _AND)}"
    if isinstance(f, And):
        return f"{wrap(f.lhs, _AND)} & {wrap(f.rhs, _UNARY)}"
    raise TypeError(f"not a formula: {f!r}")

