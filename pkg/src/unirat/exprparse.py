"""Recursive-descent parser for exact rational-function expressions.

Grammar: integers, rationals a/b, declared variables, + - * / ^ with
non-negative integer exponents, and parentheses.  Anything else is rejected
with a line/column annotated ParseError.
"""

from __future__ import annotations

from .errors import ParseError, UniratError
from .fields import RatFunc
from .poly import MultiPoly

_TOKEN_CHARS = set("+-*/^()")


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.tokens = []
        self._scan()
        self.index = 0

    def _location(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1)
        return line, col

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in _TOKEN_CHARS:
                self.tokens.append((ch, i))
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.tokens.append(("int", i, int(text[i:j])))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.tokens.append(("name", i, text[i:j]))
                i = j
                continue
            line, col = self._location(i)
            raise ParseError(f"unexpected character {ch!r}", line, col)

    def peek(self):
        if self.index < len(self.tokens):
            return self.tokens[self.index]
        return ("eof", len(self.text))

    def next(self):
        tok = self.peek()
        if tok[0] != "eof":
            self.index += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        line, col = self._location(tok[1])
        raise ParseError(message, line, col)


class _Parser:
    """expr := term (('+'|'-') term)*
    term := factor (('*'|'/') factor)*
    factor := ('-'|'+')* atom ('^' int)*
    atom := int | name | '(' expr ')'
    """

    def __init__(self, text, field, vars):
        self.toks = _Tokenizer(text)
        self.field = field
        self.vars = tuple(vars)

    def parse(self) -> RatFunc:
        value = self._expr()
        tok = self.toks.peek()
        if tok[0] != "eof":
            self.toks.error(f"unexpected trailing {tok[0]!r}")
        return value

    def _expr(self):
        value = self._term()
        while True:
            tok = self.toks.peek()
            if tok[0] == "+":
                self.toks.next()
                value = value + self._term()
            elif tok[0] == "-":
                self.toks.next()
                value = value - self._term()
            else:
                return value

    def _term(self):
        value = self._factor()
        while True:
            tok = self.toks.peek()
            if tok[0] == "*":
                self.toks.next()
                value = value * self._factor()
            elif tok[0] == "/":
                self.toks.next()
                divisor = self._factor()
                if divisor.is_zero():
                    self.toks.error("division by zero", tok)
                value = value / divisor
            else:
                return value

    def _factor(self):
        sign = 1
        while True:
            tok = self.toks.peek()
            if tok[0] == "-":
                self.toks.next()
                sign = -sign
            elif tok[0] == "+":
                self.toks.next()
            else:
                break
        value = self._atom()
        while self.toks.peek()[0] == "^":
            self.toks.next()
            tok = self.toks.next()
            if tok[0] != "int":
                self.toks.error("exponent must be a non-negative integer", tok)
            value = value ** tok[2]
        if sign < 0:
            return -value
        return value

    def _atom(self):
        tok = self.toks.next()
        if tok[0] == "int":
            return RatFunc.const(self.field, self.vars, tok[2])
        if tok[0] == "name":
            if tok[2] not in self.vars:
                self.toks.error(f"unknown variable {tok[2]!r}", tok)
            return RatFunc.var(self.field, self.vars, tok[2])
        if tok[0] == "(":
            value = self._expr()
            closing = self.toks.next()
            if closing[0] != ")":
                self.toks.error("expected ')'", closing)
            return value
        if tok[0] == "eof":
            self.toks.error("unexpected end of input", tok)
        self.toks.error(f"unexpected {tok[0]!r}", tok)


def parse_expression(text: str, vars, field=None) -> RatFunc:
    """Parse `text` into an exact RatFunc over the declared variables."""
    from .coeffs import QQ

    return _Parser(text, field or QQ, vars).parse()


def format_ratfunc(r: RatFunc) -> str:
    """Printable form that parse_expression maps back to an equal RatFunc."""
    return str(r)
