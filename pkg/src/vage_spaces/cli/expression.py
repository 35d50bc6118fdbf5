"""
Inline series literals such as ``1 - x1 + 2*x1*x2`` or ``(1+x1)^3 + 0.5i*x2``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER ['i' | 'j'] | 'i' | 'j' | 'x' INTEGER | '(' expr ')'

Powers are ring powers, so they truncate to the window like every product.
"""
import re
from typing import List, Tuple

from src.vage_spaces.errors import UsageError, WindowError
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.monoid.multi_index import TruncationSpec

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>[ij])?"
    r"|(?P<generator>x(?P<index>\d+))"
    r"|(?P<unit>[ij])(?![A-Za-z0-9])"
    r"|(?P<op>[-+*^()]))"
)

Token = Tuple[str, str]


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    text = text.rstrip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None or match.end() == position:
            raise UsageError(f"unexpected character {text[position:].strip()[:1]!r} at offset {position} in {text!r}")
        if match.group("number") is not None:
            kind = "imag" if match.group("imag") else "number"
            tokens.append((kind, match.group("number")))
        elif match.group("generator") is not None:
            tokens.append(("generator", match.group("index")))
        elif match.group("unit") is not None:
            tokens.append(("imag", "1"))
        else:
            tokens.append(("op", match.group("op")))
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], window: TruncationSpec, source: str):
        self._tokens = tokens
        self._position = 0
        self._window = window
        self._source = source

    def _peek(self) -> Token:
        if self._position < len(self._tokens):
            return self._tokens[self._position]
        return ("end", "")

    def _take(self) -> Token:
        token = self._peek()
        self._position += 1
        return token

    def _expect(self, op: str) -> None:
        token = self._take()
        if token != ("op", op):
            raise UsageError(f"expected {op!r} in {self._source!r}, found {token[1] or 'end of input'!r}")

    def parse(self) -> Series:
        if not self._tokens:
            raise UsageError("empty series expression")
        result = self._expr()
        if self._peek()[0] != "end":
            raise UsageError(f"unexpected {self._peek()[1]!r} in {self._source!r}")
        return result

    def _expr(self) -> Series:
        result = self._term()
        while self._peek() in (("op", "+"), ("op", "-")):
            _, op = self._take()
            right = self._term()
            result = result + right if op == "+" else result - right
        return result

    def _term(self) -> Series:
        result = self._unary()
        while self._peek() == ("op", "*"):
            self._take()
            result = result * self._unary()
        return result

    def _unary(self) -> Series:
        if self._peek() == ("op", "-"):
            self._take()
            return -self._unary()
        if self._peek() == ("op", "+"):
            self._take()
            return self._unary()
        return self._power()

    def _power(self) -> Series:
        base = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            kind, text = self._take()
            if kind != "number" or not text.isdigit():
                raise UsageError(f"exponent must be a nonnegative integer in {self._source!r}")
            return base.power(int(text))
        return base

    def _atom(self) -> Series:
        kind, text = self._take()
        if kind == "number":
            return Series.constant(float(text), self._window)
        if kind == "imag":
            return Series.constant(complex(0.0, float(text)), self._window)
        if kind == "generator":
            n = int(text)
            if n < 1:
                raise UsageError(f"generators are numbered from 1, got x{n}")
            if n > self._window.max_generator:
                raise WindowError(f"generator x{n} is outside window {self._window}")
            return Series.generator(n, self._window)
        if (kind, text) == ("op", "("):
            inner = self._expr()
            self._expect(")")
            return inner
        raise UsageError(f"unexpected {text or 'end of input'!r} in {self._source!r}")


def parse_series(text: str, window: TruncationSpec) -> Series:
    """Parse an inline expression into a Series over ``window``."""
    return _Parser(tokenize(text), window, text).parse()
