"""Text format for Laurent polynomial matrices.

Grammar (whitespace is insignificant, ``#`` starts a comment to end of line)::

    matrix := '[' row (';' row)* ']'
    row    := entry (',' entry)*
    entry  := ['+'|'-'] term (('+'|'-') term)*
    term   := coeff | coeff '*'? zpow | zpow
    zpow   := 'z' ('^' signed_int)?
    coeff  := decimal | int ('/' int)?

Decimal literals are read as exact rationals, so ``0.7`` becomes ``7/10``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .laurent import LaurentMatrix, LaurentPolynomial

__all__ = ["parse_matrix", "format_matrix", "read_matrix", "write_matrix"]


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self._skip()

    def _advance(self, k=1):
        for _ in range(k):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _skip(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self._advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self._advance()
            else:
                break

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, expected: str):
        found = repr(self.peek()) if self.peek() else "end of input"
        raise ParseError(f"expected {expected}, found {found}", self.line, self.col)

    def take(self, ch: str):
        if self.peek() != ch:
            self.error(repr(ch))
        self._advance()
        self._skip()

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self._advance()
            self._skip()
            return True
        return False

    def digits(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self._advance()
        return self.text[start:self.pos]

    def integer(self) -> int:
        d = self.digits()
        if not d:
            self.error("integer")
        self._skip()
        return int(d)

    def number(self) -> Fraction:
        line, col = self.line, self.col
        whole = self.digits()
        if not whole:
            self.error("number")
        if self.peek() == ".":
            self._advance()
            frac = self.digits()
            if not frac:
                self.error("digits after decimal point")
            self._skip()
            return Fraction(int(whole + frac), 10 ** len(frac))
        self._skip()
        if self.accept("/"):
            den = self.integer()
            if den == 0:
                raise ParseError("zero denominator", line, col)
            return Fraction(int(whole), den)
        return Fraction(int(whole))


def _zpow(lx: _Lexer) -> int:
    lx.take("z")
    if not lx.accept("^"):
        return 1
    sign = 1
    if lx.accept("-"):
        sign = -1
    else:
        lx.accept("+")
    return sign * lx.integer()


def _term(lx: _Lexer):
    ch = lx.peek()
    if ch == "z":
        return Fraction(1), _zpow(lx)
    if ch.isdigit():
        c = lx.number()
        if lx.accept("*"):
            return c, _zpow(lx)
        if lx.peek() == "z":
            return c, _zpow(lx)
        return c, 0
    lx.error("coefficient or 'z'")


def _entry(lx: _Lexer) -> LaurentPolynomial:
    terms: dict[int, Fraction] = {}
    sign = 1
    if lx.accept("-"):
        sign = -1
    else:
        lx.accept("+")
    while True:
        c, k = _term(lx)
        terms[k] = terms.get(k, Fraction(0)) + sign * c
        if lx.accept("+"):
            sign = 1
        elif lx.accept("-"):
            sign = -1
        else:
            break
    return LaurentPolynomial.from_dict(terms)


def parse_matrix(text: str) -> LaurentMatrix:
    """Parse the bracketed matrix notation into an exact :class:`LaurentMatrix`."""
    lx = _Lexer(text)
    lx.take("[")
    rows = [[_entry(lx)]]
    while True:
        if lx.accept(","):
            rows[-1].append(_entry(lx))
        elif lx.accept(";"):
            rows.append([_entry(lx)])
        else:
            break
    line, col = lx.line, lx.col
    lx.take("]")
    if lx.peek():
        lx.error("end of input")
    if len({len(r) for r in rows}) != 1:
        raise ParseError("rows have different numbers of entries", line, col)
    return LaurentMatrix(rows)


def format_matrix(M: LaurentMatrix) -> str:
    """Inverse of :func:`parse_matrix` (one row per line)."""
    body = " ;\n  ".join(" , ".join(str(e) for e in r) for r in M.tolist())
    return f"[ {body} ]\n"


def read_matrix(path) -> LaurentMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(path, M: LaurentMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(M))
