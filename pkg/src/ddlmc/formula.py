"""Object language for conditional obligation: AST, parser, printer, expansion.

The language has atoms, metavariables (written ``?x``, placeholders for axiom
schemata), the Boolean connectives, a global necessity modality ``[]``, dyadic
obligation ``O(psi / phi)`` ("psi is obligatory, given phi") and permission
``P(psi / phi)``, and preference comparisons between formulas (``>=``, ``>``)
defined from permission and obligation in the usual way.

Core constructors are Atom, MetaVar, Top, Not, Or, Box and Oblig; everything
else is definable and :func:`expand` rewrites a formula into core form.

Concrete syntax (whitespace-insensitive)::

    formula  := pref
    pref     := iff ( (">=" | ">") iff )?      # non-associative
    iff      := impl ("<->" impl)*             # right-associative
    impl     := or ("->" or)*                  # right-associative
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "~" unary | "[]" unary | "<>" unary | atomlike
    atomlike := "T" | "F" | IDENT | "?" IDENT
              | "O(" formula "/" formula ")" | "P(" formula "/" formula ")"
              | "(" formula ")"

``T`` and ``F`` are the constant true and false and cannot be used as atom
names.  ``O`` and ``P`` act as operators only when followed by ``(``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class Formula:
    """Base class for formula AST nodes.  Instances are immutable."""

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class MetaVar(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
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
    child: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    child: Formula


@dataclass(frozen=True)
class Oblig(Formula):
    """O(consequent / antecedent): consequent obligatory given antecedent."""

    consequent: Formula
    antecedent: Formula


@dataclass(frozen=True)
class Perm(Formula):
    """P(consequent / antecedent), short for ~O(~consequent / antecedent)."""

    consequent: Formula
    antecedent: Formula


@dataclass(frozen=True)
class PrefGeq(Formula):
    """left >= right: left is at least as good as right, P(l / l|r)."""

    left: Formula
    right: Formula


@dataclass(frozen=True)
class PrefGt(Formula):
    """left > right: P(l / l|r) & O(~r / l|r)."""

    left: Formula
    right: Formula


TOP = Top()
BOT = Bot()


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    """Syntax error in the concrete formula syntax, with source position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<iff><->) | (?P<impl>->) | (?P<geq>>=) | (?P<gt>>)
      | (?P<box>\[\]) | (?P<dia><>)
      | (?P<neg>~) | (?P<and>&) | (?P<or>\|)
      | (?P<lpar>\() | (?P<rpar>\)) | (?P<slash>/)
      | (?P<meta>\?[A-Za-z_][A-Za-z0-9_]*)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        if m.lastgroup is not None:
            tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        if self.i >= len(self.tokens):
            raise ParseError("unexpected end of input", len(self.text))
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        if self.peek() != kind:
            pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
            found = self.tokens[self.i][1] if self.i < len(self.tokens) else "end of input"
            raise ParseError(f"expected {what}, found {found!r}", pos)
        return self.next()

    def parse(self) -> Formula:
        f = self.pref()
        if self.i < len(self.tokens):
            kind, value, pos = self.tokens[self.i]
            raise ParseError(f"unexpected trailing input {value!r}", pos)
        return f

    def pref(self) -> Formula:
        left = self.iff()
        kind = self.peek()
        if kind in ("geq", "gt"):
            self.next()
            right = self.iff()
            if self.peek() in ("geq", "gt"):
                _, _, pos = self.tokens[self.i]
                raise ParseError("preference comparisons do not chain; parenthesize", pos)
            return PrefGeq(left, right) if kind == "geq" else PrefGt(left, right)
        return left

    def iff(self) -> Formula:
        left = self.impl()
        if self.peek() == "iff":
            self.next()
            return Iff(left, self.iff())
        return left

    def impl(self) -> Formula:
        left = self.disj()
        if self.peek() == "impl":
            self.next()
            return Implies(left, self.impl())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "or":
            self.next()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "and":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "neg":
            self.next()
            return Not(self.unary())
        if kind == "box":
            self.next()
            return Box(self.unary())
        if kind == "dia":
            self.next()
            return Diamond(self.unary())
        return self.atomlike()

    def atomlike(self) -> Formula:
        kind, value, pos = self.next()
        if kind == "lpar":
            f = self.pref()
            self.expect("rpar", "')'")
            return f
        if kind == "meta":
            return MetaVar(value[1:])
        if kind == "ident":
            if value == "T":
                return TOP
            if value == "F":
                return BOT
            if value in ("O", "P") and self.peek() == "lpar":
                self.next()
                consequent = self.pref()
                self.expect("slash", "'/'")
                antecedent = self.pref()
                self.expect("rpar", "')'")
                ctor = Oblig if value == "O" else Perm
                return ctor(consequent, antecedent)
            return Atom(value)
        raise ParseError(f"expected a formula, found {value!r}", pos)


def parse(text: str) -> Formula:
    """Parse concrete syntax into a Formula AST."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printing

_PREF, _IFF, _IMPL, _OR, _AND, _UNARY, _ATOM = range(1, 8)


def _render(f: Formula) -> tuple[str, int]:
    if isinstance(f, Atom):
        return f.name, _ATOM
    if isinstance(f, MetaVar):
        return "?" + f.name, _ATOM
    if isinstance(f, Top):
        return "T", _ATOM
    if isinstance(f, Bot):
        return "F", _ATOM
    if isinstance(f, Not):
        return "~" + _wrap(f.child, _UNARY), _UNARY
    if isinstance(f, Box):
        return "[]" + _wrap(f.child, _UNARY), _UNARY
    if isinstance(f, Diamond):
        return "<>" + _wrap(f.child, _UNARY), _UNARY
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _AND + 1)}", _AND
    if isinstance(f, Or):
        return f"{_wrap(f.left, _OR)} | {_wrap(f.right, _OR + 1)}", _OR
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _IMPL + 1)} -> {_wrap(f.right, _IMPL)}", _IMPL
    if isinstance(f, Iff):
        return f"{_wrap(f.left, _IFF + 1)} <-> {_wrap(f.right, _IFF)}", _IFF
    if isinstance(f, Oblig):
        return f"O({render(f.consequent)} / {render(f.antecedent)})", _ATOM
    if isinstance(f, Perm):
        return f"P({render(f.consequent)} / {render(f.antecedent)})", _ATOM
    if isinstance(f, PrefGeq):
        return f"{_wrap(f.left, _IFF)} >= {_wrap(f.right, _IFF)}", _PREF
    if isinstance(f, PrefGt):
        return f"{_wrap(f.left, _IFF)} > {_wrap(f.right, _IFF)}", _PREF
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_level: int) -> str:
    text, level = _render(f)
    return text if level >= min_level else f"({text})"


def render(f: Formula) -> str:
    """Print a formula so that parse(render(f)) == f."""
    return _render(f)[0]


# ---------------------------------------------------------------------------
# Expansion into core constructors and variable collection


def expand(f: Formula) -> Formula:
    """Rewrite into the core fragment {Atom, MetaVar, Top, Not, Or, Box, Oblig}.

    The result is semantically equivalent under every evaluation rule, and
    expand is idempotent.
    """
    if isinstance(f, (Atom, MetaVar, Top)):
        return f
    if isinstance(f, Bot):
        return Not(TOP)
    if isinstance(f, Not):
        return Not(expand(f.child))
    if isinstance(f, Or):
        return Or(expand(f.left), expand(f.right))
    if isinstance(f, And):
        return _and(expand(f.left), expand(f.right))
    if isinstance(f, Implies):
        return Or(Not(expand(f.left)), expand(f.right))
    if isinstance(f, Iff):
        left, right = expand(f.left), expand(f.right)
        return _and(Or(Not(left), right), Or(Not(right), left))
    if isinstance(f, Box):
        return Box(expand(f.child))
    if isinstance(f, Diamond):
        return Not(Box(Not(expand(f.child))))
    if isinstance(f, Oblig):
        return Oblig(expand(f.consequent), expand(f.antecedent))
    if isinstance(f, Perm):
        return Not(Oblig(Not(expand(f.consequent)), expand(f.antecedent)))
    if isinstance(f, PrefGeq):
        left, right = expand(f.left), expand(f.right)
        return _pref_geq_core(left, right)
    if isinstance(f, PrefGt):
        left, right = expand(f.left), expand(f.right)
        return _and(_pref_geq_core(left, right), Oblig(Not(right), Or(left, right)))
    raise TypeError(f"not a formula: {f!r}")


def _and(left: Formula, right: Formula) -> Formula:
    return Not(Or(Not(left), Not(right)))


def _pref_geq_core(left: Formula, right: Formula) -> Formula:
    # P(left / left|right) in core form
    return Not(Oblig(Not(left), Or(left, right)))


def metavars(f: Formula) -> frozenset[str]:
    """Names of the metavariables occurring in f."""
    return _names(f, MetaVar)


def atoms(f: Formula) -> frozenset[str]:
    """Names of the atoms occurring in f."""
    return _names(f, Atom)


def _names(f: Formula, node_type: type) -> frozenset[str]:
    if isinstance(f, node_type):
        return frozenset((f.name,))
    if isinstance(f, (Atom, MetaVar, Top, Bot)):
        return frozenset()
    if isinstance(f, (Not, Box, Diamond)):
        return _names(f.child, node_type)
    if isinstance(f, (Or, And, Implies, Iff, PrefGeq, PrefGt)):
        return _names(f.left, node_type) | _names(f.right, node_type)
    if isinstance(f, (Oblig, Perm)):
        return _names(f.consequent, node_type) | _names(f.antecedent, node_type)
    raise TypeError(f"not a formula: {f!r}")
