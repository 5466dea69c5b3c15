"""Parser for linear combinations of forests and graphs.

Grammar::

    expr    := sign? product (('+' | '-') product)*
    product := unary (('*' | '×') unary)*
    unary   := '-' unary | rational | atom
    atom    := '{' forest '}' | '(' tree ')' | '[' graph key ']' | NAME | '@' path

``*`` scales when one side is a rational and is the Hall product when both
sides are elements; ``×`` is always the Hall product.  A number added to an
element stands for that multiple of δ_∅.  NAME is a built-in
graph (B2, T3, X, Y, Gamma_eg).  ``@path`` reads a graph document or an
element document in JSON.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .corpus import BUILTINS, builtin_key
from .feyngraphs import FeynmanGraph, GraphError, canon_graph, parse_graph_key, validate
from .forests import ForestError, parse_forest
from .hall import DELTA, HallElement, HallError, backend_named, delta, hall_product


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.message = message
        self.column = column


_RATIONAL = re.compile(r"\d+(?:/\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_COLUMN = re.compile(r"column (\d+)")


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _closing(text: str, i: int, open_: str, close: str) -> int:
    depth = 0
    for j in range(i, len(text)):
        if text[j] == open_:
            depth += 1
        elif text[j] == close:
            depth -= 1
            if depth == 0:
                return j
    return len(text) - 1


def _tokens(text: str) -> list[_Tok]:
    out, i = [], 0
    while i < len(text):
        ch = text[i]
        col = i + 1
        if ch.isspace():
            i += 1
        elif ch in "+-*×−":
            out.append(_Tok("op", {"−": "-"}.get(ch, ch), col))
            i += 1
        elif ch.isdigit():
            m = _RATIONAL.match(text, i)
            out.append(_Tok("num", m.group(), col))
            i = m.end()
        elif ch == "{":
            j = text.find("}", i)
            j = len(text) - 1 if j < 0 else j
            out.append(_Tok("forest", text[i:j + 1], col))
            i = j + 1
        elif ch == "(":
            j = _closing(text, i, "(", ")")
            out.append(_Tok("tree", text[i:j + 1], col))
            i = j + 1
        elif ch == "[":
            j = text.find("]", i)
            j = len(text) - 1 if j < 0 else j
            out.append(_Tok("graph", text[i:j + 1], col))
            i = j + 1
        elif ch == "@":
            j = i + 1
            while j < len(text) and not text[j].isspace() and text[j] not in "+*×":
                j += 1
            out.append(_Tok("file", text[i + 1:j], col))
            i = j
        elif _NAME.match(text, i):
            m = _NAME.match(text, i)
            out.append(_Tok("name", m.group(), col))
            i = m.end()
        else:
            raise ParseError(f"unexpected character {ch!r}", col)
    return out


def _shift(exc: Exception, default: int) -> ParseError:
    """Re-raise a literal error with the column taken from its message."""
    m = _COLUMN.search(str(exc))
    msg = _COLUMN.sub("", str(exc)).replace(" at ", " ").strip(" :")
    return ParseError(msg, int(m.group(1)) if m else default)


def load_document(path: str, col: int = 1) -> HallElement:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}", col) from None
    try:
        if isinstance(doc, dict) and "terms" in doc:
            return HallElement.from_json(doc)
        return delta(canon_graph(validate(FeynmanGraph.from_json(doc))))
    except (GraphError, HallError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid document {path}: {exc}", col) from None


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.pos = 0

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text) + 1)
        self.pos += 1
        return tok

    def expr(self):
        value = self.product()
        while (tok := self.peek()) is not None and tok.text in "+-":
            self.take()
            rhs = self.product()
            value = _combine(value, rhs, tok)
        if (tok := self.peek()) is not None:
            raise ParseError(f"unexpected {tok.text!r}", tok.col)
        return value

    def product(self):
        value = self.unary()
        while (tok := self.peek()) is not None and tok.text in "*×":
            self.take()
            rhs = self.unary()
            value = _multiply(value, rhs, tok)
        return value

    def unary(self):
        tok = self.take()
        if tok.kind == "op":
            if tok.text in "-+":
                v = self.unary()
                return -v if tok.text == "-" else v
            raise ParseError(f"unexpected {tok.text!r}", tok.col)
        if tok.kind == "num":
            num, _, den = tok.text.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", tok.col + len(num) + 1)
            return Fraction(int(num), int(den) if den else 1)
        return self.atom(tok)

    def atom(self, tok: _Tok) -> HallElement:
        try:
            if tok.kind == "forest" or tok.kind == "tree":
                return delta(parse_forest(tok.text, tok.col - 1))
            if tok.kind == "graph":
                return delta(parse_graph_key(tok.text))
        except ForestError as exc:
            raise _shift(exc, tok.col) from None
        except GraphError as exc:
            raise ParseError(f"invalid graph key: {exc}", tok.col) from None
        if tok.kind == "name":
            if tok.text not in BUILTINS:
                raise ParseError(f"unknown name {tok.text!r}", tok.col)
            return delta(builtin_key(tok.text))
        if tok.kind == "file":
            return load_document(tok.text, tok.col)
        raise ParseError(f"unexpected {tok.text!r}", tok.col)


def _combine(lhs, rhs, tok: _Tok):
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs + rhs if tok.text == "+" else lhs - rhs
    # a bare number next to an element is a multiple of the unit δ_∅
    if isinstance(lhs, Fraction):
        lhs = _unit_like(rhs, lhs, tok)
    if isinstance(rhs, Fraction):
        rhs = _unit_like(lhs, rhs, tok)
    try:
        return lhs + rhs if tok.text == "+" else lhs - rhs
    except HallError as exc:
        raise ParseError(str(exc), tok.col) from None


def _unit_like(v: HallElement, c: Fraction, tok: _Tok) -> HallElement:
    if v.backend is None:
        raise ParseError("cannot tell the category of a bare number here", tok.col)
    return delta(v.backend.empty, c)


def _multiply(lhs, rhs, tok: _Tok):
    if isinstance(lhs, Fraction) or isinstance(rhs, Fraction):
        if tok.text == "×":
            raise ParseError("× needs elements on both sides", tok.col)
        return lhs * rhs
    try:
        return hall_product(lhs, rhs)
    except HallError as exc:
        raise ParseError(str(exc), tok.col) from None


def parse(text: str, category: str | None = None, basis: str = DELTA) -> HallElement:
    """Parse ``text`` into an element; a lone rational becomes a multiple of δ_∅.

    ``category`` (``trees`` or ``graphs``) is checked against the literals and
    used for δ_∅ when the input has no literal.
    """
    if not text.strip():
        raise ParseError("empty expression", 1)
    value = _Parser(text).expr()
    if isinstance(value, Fraction):
        if category is None:
            raise ParseError("a bare number needs a category", 1)
        value = delta(backend_named(category).empty, value)
    if category is not None and value.backend is not None and value.backend.name != category:
        raise ParseError(f"expression is in category {value.backend.name}, "
                         f"but --category is {category}", 1)
    return value.with_basis(basis) if basis != DELTA or value.basis != DELTA else value
