"""Reading and writing equation systems, and printing sets.

System files use a small line-oriented syntax::

    # the stream x = <1; x>
    index 2
    x = <1 ; $x>
    y = [$x, 0]

A term is ``1`` (the atom), ``0`` (the empty set), ``[t, ...]`` (an I-tuple), ``$name`` (a
variable, only inside a tuple) or ``<t ; u>`` (a variant pair, padded with ``0``). Everything
after ``#`` is ignored.
"""
import json
import re
from typing import Dict, List, Optional, Tuple, Union

import click

from .coalg import AtomNode, IndexSet, RegularElement, minimize, zero
from .eqsolve import (
    ATOM_TERM,
    AtomTerm,
    ConstLeaf,
    EquationSystem,
    Leaf,
    SubTerm,
    TermX,
    TupleTerm,
    VarLeaf,
    sigma_embed,
)
from .hfs import HFSet, parse_hfset, to_nested_list

__all__ = [
    "SystemSyntaxError",
    "parse_system",
    "read_system",
    "render_system",
    "format_set",
    "FORMATS",
    "HFSetType",
]

FORMATS = ("set", "json")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<var>\$[A-Za-z_]\w*)|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<punct>[\[\],;<>=])|(?P<bad>\S))"
)
_NAME_RE = re.compile(r"^[A-Za-z_]\w*$")


class SystemSyntaxError(ValueError):
    """Syntax or validation error in a system file, with 1-based line and column."""

    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind: str, text: str, line: int, column: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        idx = line.find("#")
        if idx != -1:
            line = line[:idx]

        for match in _TOKEN_RE.finditer(line):
            kind = match.lastgroup
            if kind is None:
                continue
            column = match.start(kind) + 1
            if kind == "bad":
                raise SystemSyntaxError(
                    f"unexpected character {match.group(kind)!r}", lineno, column
                )
            tokens.append(_Token(kind, match.group(kind), lineno, column))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.index: Optional[IndexSet] = None
        self.first_use: Dict[str, _Token] = {}

    def error(self, msg: str, token: Optional[_Token] = None) -> SystemSyntaxError:
        if token is None:
            token = self.peek()
        if token is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            column = last.column + len(last.text) if last else 1
            return SystemSyntaxError(f"{msg} (found end of input)", line, column)
        return SystemSyntaxError(f"{msg} (found {token.text!r})", token.line, token.column)

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        token = self.peek()
        if token is None:
            raise self.error("unexpected end of input")
        self.pos += 1
        return token

    def expect(self, text: str) -> _Token:
        token = self.peek()
        if token is None or token.text != text:
            raise self.error(f"expected {text!r}")
        self.pos += 1
        return token

    def parse(self) -> EquationSystem:
        token = self.peek()
        if token is None or token.text != "index":
            raise self.error("a system must start with 'index N'")
        self.next()
        size_token = self.next()
        if size_token.kind != "num":
            raise self.error("expected the index set size", size_token)
        size = int(size_token.text)
        if size < 1:
            raise self.error("the index set must not be empty", size_token)
        self.index = IndexSet(size)

        equations: Dict[str, TermX] = {}
        while self.peek() is not None:
            name = self.next()
            if name.kind != "name":
                raise self.error("expected a variable name", name)
            if name.text in equations:
                raise self.error(f"duplicate equation for {name.text!r}", name)
            self.expect("=")
            equations[name.text] = self.parse_top()

        for var, token in self.first_use.items():
            if var not in equations:
                raise SystemSyntaxError(
                    f"variable {var!r} is used but has no equation", token.line, token.column
                )
        return EquationSystem(self.index, equations)

    def parse_top(self) -> TermX:
        start = self.peek()
        leaf = self.parse_leaf()
        if isinstance(leaf, VarLeaf):
            raise self.error("a right-hand side cannot be a bare variable", start)
        return self.leaf_to_term(leaf)

    def leaf_to_term(self, leaf: Leaf) -> TermX:
        if isinstance(leaf, SubTerm):
            return leaf.term
        return TupleTerm((leaf,) * self.index.size)

    def parse_leaf(self) -> Leaf:
        token = self.next()
        if token.kind == "num":
            if token.text == "1":
                return SubTerm(ATOM_TERM)
            if token.text == "0":
                return ConstLeaf(zero(self.index))
            raise self.error("only 0 and 1 are set literals", token)

        if token.kind == "var":
            name = token.text[1:]
            self.first_use.setdefault(name, token)
            return VarLeaf(name)

        if token.text == "[":
            leaves = [self.parse_leaf()]
            while self.peek() is not None and self.peek().text == ",":
                self.next()
                leaves.append(self.parse_leaf())
            self.expect("]")
            if len(leaves) != self.index.size:
                raise self.error(
                    f"tuple has {len(leaves)} component(s), expected {self.index.size}",
                    token,
                )
            return SubTerm(TupleTerm(tuple(leaves)))

        if token.text == "<":
            if self.index.size < 2:
                raise self.error("variant pairs need 'index 2' or more", token)
            left = self.parse_leaf()
            self.expect(";")
            right = self.parse_leaf()
            self.expect(">")
            padding = (ConstLeaf(zero(self.index)),) * (self.index.size - 2)
            return SubTerm(TupleTerm((left, right) + padding))

        raise self.error("expected a term", token)


def parse_system(text: str) -> EquationSystem:
    """Parse a system file's content.

    Raises:
        SystemSyntaxError: on syntax errors, unbound variables, arity mismatches and
            variant pairs with an index set smaller than 2
    """
    return _Parser(text).parse()


def read_system(path: str) -> EquationSystem:
    with open(path, "r", encoding="utf-8") as fp:
        return parse_system(fp.read())


class _Renderer:
    def __init__(self, system: EquationSystem):
        self.system = system
        self.index = system.index
        self.empty = zero(system.index)
        self.extra: List[Tuple[str, str]] = []
        self.named: Dict[RegularElement, str] = {}
        self.counter = 0

    def fresh_prefix(self) -> str:
        while any(str(x).startswith(f"_c{self.counter}s") for x in self.system.equations):
            self.counter += 1
        self.counter += 1
        return f"_c{self.counter - 1}s"

    def constant(self, c: RegularElement) -> str:
        if c == self.empty:
            return "0"
        if c.is_atom():
            return "1"
        term = sigma_embed(c)
        if all(
            not isinstance(leaf, ConstLeaf) or leaf.element == self.empty
            for leaf in term.leaves
        ):
            return self.term(term)

        # cyclic constants are written as auxiliary equations over their minimal coalgebra
        if c not in self.named:
            m = minimize(c)
            prefix = self.fresh_prefix()
            self.named[c] = f"{prefix}0"
            for state, shape in m.coalgebra.trans.items():
                if isinstance(shape, AtomNode):
                    rhs = "1"
                else:
                    rhs = "[" + ", ".join(f"${prefix}{s}" for s in shape.children) + "]"
                self.extra.append((f"{prefix}{state}", rhs))
        return f"${self.named[c]}"

    def leaf(self, leaf: Leaf) -> str:
        if isinstance(leaf, VarLeaf):
            return f"${leaf.name}"
        if isinstance(leaf, SubTerm):
            return self.term(leaf.term)
        return self.constant(leaf.element)

    def term(self, term: TermX) -> str:
        if isinstance(term, AtomTerm):
            return "1"
        return "[" + ", ".join(self.leaf(leaf) for leaf in term.leaves) + "]"

    def top(self, term: TermX) -> str:
        if isinstance(term, TupleTerm) and all(
            isinstance(leaf, ConstLeaf) and leaf.element == self.empty for leaf in term.leaves
        ):
            return "0"
        return self.term(term)


def render_system(system: EquationSystem) -> str:
    """Write a system in the syntax read by :func:`parse_system`.

    Constants that have no finite term form are written as extra equations, so the output
    may have more variables than `system`. Reparsing it gives a system whose solution is
    pointwise bisimilar on the original variables.

    Raises:
        ValueError: if a variable name is not an identifier
    """
    system.validate()
    for x in system.equations:
        if not isinstance(x, str) or not _NAME_RE.match(x):
            raise ValueError(f"variable {x!r} cannot be written in a system file")

    renderer = _Renderer(system)
    lines = [f"index {system.index.size}"]
    lines.extend(f"{x} = {renderer.top(term)}" for x, term in system.equations.items())
    lines.extend(f"{x} = {rhs}" for x, rhs in renderer.extra)
    return "\n".join(lines) + "\n"


def format_set(h: HFSet, fmt: str = "set") -> str:
    """Canonical text (``set``) or nested JSON arrays (``json``), children in canonical
    order."""
    if fmt == "set":
        return h.text
    if fmt == "json":
        return json.dumps(to_nested_list(h), separators=(",", ":"))
    raise ValueError(f"unknown format {fmt!r}, expected one of {', '.join(FORMATS)}")


class HFSetType(click.ParamType):
    name = "HFSET"

    def convert(self, value: Union[str, HFSet], param, ctx) -> HFSet:
        if isinstance(value, HFSet):
            return value
        try:
            return parse_hfset(value)
        except ValueError:
            self.fail(f"parameter {value} is not a valid hereditarily finite set")
