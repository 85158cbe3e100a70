"""Recursive-descent parser for the query concrete syntax.

Grammar (whitespace-insensitive):

    path     := inter ('+' inter)*
    inter    := concat ('&' concat)*
    concat   := compl ('/' compl)*
    compl    := '!' compl | postfix
    postfix  := atom ('*' | '{' INT ',' INT '}')*
    atom     := 'eps' | '_' | SYMBOL | SYMBOL '^-' | '[' node ']' | '(' path ')'

    node     := conj ('or' conj)*
    conj     := neg ('and' neg)*
    neg      := 'not' neg | natom
    natom    := '=' SYMBOL | '!=' SYMBOL | '<' path ('='|'!=' path)? '>'
              | '(' node ')'

SYMBOL is a bare identifier or a double-quoted string; `eps`, `not`, `and`
and `or` are reserved and must be quoted to act as labels or constants.
A top-level query may be either a path or a node expression; whichever
reading consumes the whole input wins.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import QuerySyntaxError
from . import ast
from .ast import Expr, NodeExpr, PathExpr

_PUNCT = ("!=", "^-", "(", ")", "[", "]", "<", ">", "{", "}", ",", "+", "&", "/", "*", "!", "=")


@dataclass(frozen=True)
class _Token:
    kind: str  # "sym", "str", "int", punctuation, or "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            j, parts = i + 1, []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    parts.append(text[j + 1])
                    j += 2
                else:
                    parts.append(text[j])
                    j += 1
            if j >= n:
                raise QuerySyntaxError("unterminated string", i)
            tokens.append(_Token("str", "".join(parts), i))
            i = j + 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("sym", text[i:j], i))
            i = j
            continue
        for punct in _PUNCT:
            if text.startswith(punct, i):
                tokens.append(_Token(punct, punct, i))
                i += len(punct)
                break
        else:
            raise QuerySyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: str | None = None) -> _Token:
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            raise QuerySyntaxError(f"expected {kind!r}, found {tok.text or 'end'!r}", tok.pos)
        self.i += 1
        return tok

    def at_symbol(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == word

    def symbol_name(self) -> str:
        tok = self.peek()
        if tok.kind == "str":
            self.take()
            return tok.text
        if tok.kind == "sym":
            if tok.text in ast.RESERVED_WORDS:
                raise QuerySyntaxError(f"{tok.text!r} is reserved; quote it to use as a name", tok.pos)
            self.take()
            return tok.text
        raise QuerySyntaxError(f"expected a name, found {tok.text or 'end'!r}", tok.pos)

    # -- paths -------------------------------------------------------------

    def path(self) -> PathExpr:
        expr = self.inter()
        while self.peek().kind == "+":
            self.take()
            expr = ast.Union(expr, self.inter())
        return expr

    def inter(self) -> PathExpr:
        expr = self.concat()
        while self.peek().kind == "&":
            self.take()
            expr = ast.Intersect(expr, self.concat())
        return expr

    def concat(self) -> PathExpr:
        expr = self.compl()
        while self.peek().kind == "/":
            self.take()
            expr = ast.Concat(expr, self.compl())
        return expr

    def compl(self) -> PathExpr:
        if self.peek().kind == "!":
            self.take()
            return ast.Complement(self.compl())
        return self.postfix()

    def postfix(self) -> PathExpr:
        expr = self.atom()
        while True:
            tok = self.peek()
            if tok.kind == "*":
                self.take()
                expr = ast.Star(expr)
            elif tok.kind == "{":
                self.take()
                lo = int(self.take("int").text)
                self.take(",")
                hi_tok = self.take("int")
                hi = int(hi_tok.text)
                self.take("}")
                if lo > hi:
                    raise QuerySyntaxError(f"repeat bounds {lo} > {hi}", hi_tok.pos)
                expr = ast.Repeat(expr, lo, hi)
            else:
                return expr

    def atom(self) -> PathExpr:
        tok = self.peek()
        if tok.kind == "(":
            self.take()
            expr = self.path()
            self.take(")")
            return expr
        if tok.kind == "[":
            self.take()
            cond = self.node()
            self.take("]")
            return ast.Test(cond)
        if tok.kind == "sym" and tok.text == "eps":
            self.take()
            return ast.Epsilon()
        if tok.kind == "sym" and tok.text == "_":
            self.take()
            return ast.Wildcard()
        if tok.kind in ("sym", "str"):
            name = self.symbol_name()
            if self.peek().kind == "^-":
                self.take()
                return ast.InverseLabel(name)
            return ast.Label(name)
        raise QuerySyntaxError(f"expected a path, found {tok.text or 'end'!r}", tok.pos)

    # -- node expressions ----------------------------------------------------

    def node(self) -> NodeExpr:
        expr = self.conj()
        while self.at_symbol("or"):
            self.take()
            expr = ast.Or(expr, self.conj())
        return expr

    def conj(self) -> NodeExpr:
        expr = self.neg()
        while self.at_symbol("and"):
            self.take()
            expr = ast.And(expr, self.neg())
        return expr

    def neg(self) -> NodeExpr:
        if self.at_symbol("not"):
            self.take()
            return ast.Not(self.neg())
        return self.natom()

    def natom(self) -> NodeExpr:
        tok = self.peek()
        if tok.kind == "=":
            self.take()
            return ast.DataEq(self.symbol_name())
        if tok.kind == "!=":
            self.take()
            return ast.DataNeq(self.symbol_name())
        if tok.kind == "<":
            self.take()
            left = self.path()
            nxt = self.peek()
            if nxt.kind == "=":
                self.take()
                right = self.path()
                self.take(">")
                return ast.PathEq(left, right)
            if nxt.kind == "!=":
                self.take()
                right = self.path()
                self.take(">")
                return ast.PathNeq(left, right)
            self.take(">")
            return ast.Exists(left)
        if tok.kind == "(":
            self.take()
            expr = self.node()
            self.take(")")
            return expr
        raise QuerySyntaxError(f"expected a node condition, found {tok.text or 'end'!r}", tok.pos)


def parse_path(text: str) -> PathExpr:
    parser = _Parser(_tokenize(text))
    expr = parser.path()
    parser.take("end")
    return expr


def parse_node(text: str) -> NodeExpr:
    parser = _Parser(_tokenize(text))
    expr = parser.node()
    parser.take("end")
    return expr


def parse_query(text: str) -> Expr:
    """Parse a query as a path or a node expression, whichever consumes all
    input; on a double failure, report the error that got furthest."""
    tokens = _tokenize(text)
    try:
        parser = _Parser(tokens)
        expr: Expr = parser.path()
        parser.take("end")
        return expr
    except QuerySyntaxError as path_err:
        try:
            parser = _Parser(tokens)
            node: Expr = parser.node()
            parser.take("end")
            return node
        except QuerySyntaxError as node_err:
            raise (node_err if node_err.position > path_err.position else path_err) from None
