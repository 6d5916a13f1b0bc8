"""Concrete syntax for likelihood and propositional formulas.

Grammar (whitespace-insensitive):

    lform    := ldisj
    ldisj    := lconj ("|" lconj)*
    lconj    := lneg ("&" lneg)*
    lneg     := "~" lneg | "(" lform ")" | basic
    basic    := term rel rational
    rel      := ">=" | "<=" | ">" | "<" | "="
    term     := [sign] addend (("+"|"-") addend)*
    addend   := [rational] "l" "(" prop ")"
    prop     := pimp
    pimp     := pdisj ["->" pimp]
    pdisj    := pconj ("|" pconj)*
    pconj    := pneg ("&" pneg)*
    pneg     := "!" pneg | "(" prop ")" | "true" | "false" | identifier
    rational := ["-"] integer ["/" positive-integer]

"~" negates likelihood formulas, "!" negates propositions.  "->" is
desugared to "!a | b".  Identifiers match [A-Za-z_][A-Za-z0-9_]* and may
not be the keywords true, false or l.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import formula as fm
from .errors import UplogicError


class ParseError(UplogicError):
    def __init__(self, text: str, offset: int, expected: str, found: str):
        self.offset = offset
        prefix = text[:offset]
        self.line = prefix.count("\n") + 1
        self.column = offset - (prefix.rfind("\n") + 1) + 1
        self.expected = expected
        self.found = found
        super().__init__(
            f"parse error at line {self.line}, column {self.column}: "
            f"expected {expected}, found {found}"
        )


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>->|>=|<=|[()!~&|><=+\-/]))"
)

_KEYWORDS = {"true", "false", "l"}


@dataclass
class _Token:
    kind: str  # "num" | "ident" | "sym" | "eof"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = pos + (len(text[pos:]) - len(stripped))
            raise ParseError(text, bad_at, "a token", repr(text[bad_at]))
        pos = m.end()
        for kind in ("num", "ident", "sym"):
            val = m.group(kind)
            if val is not None:
                tokens.append(_Token(kind, val, m.start(kind)))
                break
    tokens.append(_Token("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def error(self, expected: str) -> ParseError:
        found = "end of input" if self.cur.kind == "eof" else repr(self.cur.text)
        return ParseError(self.text, self.cur.offset, expected, found)

    def advance(self) -> _Token:
        t = self.cur
        self.i += 1
        return t

    def at_sym(self, *syms: str) -> bool:
        return self.cur.kind == "sym" and self.cur.text in syms

    def expect_sym(self, sym: str) -> None:
        if not self.at_sym(sym):
            raise self.error(repr(sym))
        self.advance()

    # -- rationals ---------------------------------------------------------

    def rational(self) -> Fraction:
        neg = False
        if self.at_sym("-"):
            neg = True
            self.advance()
        if self.cur.kind != "num":
            raise self.error("a number")
        num = int(self.advance().text)
        den = 1
        if self.at_sym("/"):
            self.advance()
            if self.cur.kind != "num":
                raise self.error("a positive denominator")
            den_tok = self.advance()
            den = int(den_tok.text)
            if den == 0:
                raise ParseError(self.text, den_tok.offset, "a nonzero denominator", "0")
        value = Fraction(num, den)
        return -value if neg else value

    # -- propositional formulas -------------------------------------------

    def prop(self) -> fm.PropFormula:
        left = self.pdisj()
        if self.at_sym("->"):
            self.advance()
            return fm.implies(left, self.prop())
        return left

    def pdisj(self) -> fm.PropFormula:
        out = self.pconj()
        while self.at_sym("|"):
            self.advance()
            out = fm.Or(out, self.pconj())
        return out

    def pconj(self) -> fm.PropFormula:
        out = self.pneg()
        while self.at_sym("&"):
            self.advance()
            out = fm.And(out, self.pneg())
        return out

    def pneg(self) -> fm.PropFormula:
        if self.at_sym("!"):
            self.advance()
            return fm.Not(self.pneg())
        if self.at_sym("("):
            self.advance()
            out = self.prop()
            self.expect_sym(")")
            return out
        if self.cur.kind == "ident":
            name = self.advance().text
            if name == "true":
                return fm.TRUE
            if name == "false":
                return fm.FALSE
            if name in _KEYWORDS:
                raise ParseError(self.text, self.tokens[self.i - 1].offset,
                                 "an identifier", repr(name))
            return fm.Prop(name)
        raise self.error("a propositional formula")

    # -- likelihood formulas ----------------------------------------------

    def lform(self) -> fm.LikelihoodFormula:
        out = self.lconj()
        while self.at_sym("|"):
            self.advance()
            out = fm.LOr(out, self.lconj())
        return out

    def lconj(self) -> fm.LikelihoodFormula:
        out = self.lneg()
        while self.at_sym("&"):
            self.advance()
            out = fm.LAnd(out, self.lneg())
        return out

    def lneg(self) -> fm.LikelihoodFormula:
        if self.at_sym("~"):
            self.advance()
            return fm.LNot(self.lneg())
        if self.at_sym("("):
            self.advance()
            out = self.lform()
            self.expect_sym(")")
            return out
        return self.basic()

    def basic(self) -> fm.Basic:
        t = self.term()
        if self.cur.kind != "sym" or self.cur.text not in (">=", "<=", ">", "<", "="):
            raise self.error("a relation (>=, <=, >, <, =)")
        rel = fm.Rel(self.advance().text)
        bound = self.rational()
        return fm.Basic(t, rel, bound)

    def term(self) -> fm.Term:
        sign = Fraction(1)
        if self.at_sym("-"):
            sign = Fraction(-1)
            self.advance()
        elif self.at_sym("+"):
            self.advance()
        parts = [self.addend(sign)]
        while self.at_sym("+", "-"):
            sign = Fraction(-1) if self.advance().text == "-" else Fraction(1)
            parts.append(self.addend(sign))
        return fm.Term(tuple(parts))

    def addend(self, sign: Fraction) -> tuple[Fraction, fm.PropFormula]:
        coeff = Fraction(1)
        if self.cur.kind == "num":
            coeff = self.rational()
        if not (self.cur.kind == "ident" and self.cur.text == "l"):
            raise self.error("'l('")
        self.advance()
        self.expect_sym("(")
        arg = self.prop()
        self.expect_sym(")")
        return (sign * coeff, arg)

    def done(self) -> None:
        if self.cur.kind != "eof":
            raise self.error("end of input")


def parse_likelihood(text: str) -> fm.LikelihoodFormula:
    p = _Parser(text)
    out = p.lform()
    p.done()
    return out


def parse_prop(text: str) -> fm.PropFormula:
    p = _Parser(text)
    out = p.prop()
    p.done()
    return out


def parse_term(text: str) -> fm.Term:
    p = _Parser(text)
    out = p.term()
    p.done()
    return out


# ---------------------------------------------------------------------------
# Printing

_NO_SPACE_BEFORE = {")", "(", "&-follow"}  # see _join
_TIGHT_AFTER = {"(", "!", "~", "u-", "l"}


def _join(tokens: list[str]) -> str:
    out: list[str] = []
    prev: Optional[str] = None
    for tok in tokens:
        text = "-" if tok == "u-" else tok
        if prev is None or prev in _TIGHT_AFTER or text in (")",) or (text == "(" and prev == "l"):
            out.append(text)
        elif text == "(":
            # grouping paren after an operator gets a space
            out.append(" " + text if prev not in _TIGHT_AFTER else text)
        else:
            out.append(" " + text)
        prev = tok
    return "".join(out)


def print_formula(f: Union[fm.PropFormula, fm.LikelihoodFormula]) -> str:
    """Canonical minimal-parentheses rendering; parse(print(f)) == f."""
    return _join(fm.canonical_tokens(f))


def print_term(t: fm.Term) -> str:
    return _join(list(fm._term_tokens(t)))
