"""Parser and printer for the textual term language.

Grammar::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := [rational ['*']] factor ('*' factor)*
    factor := ident | '(' expr ')' | builtin '(' args ')'

``*`` is left-associative: ``x*y*z`` means ``(x*y)*z``.  Builtins are
``assoc(a,b,c)``, ``comm(a,b)``, ``circ(a,b)`` and ``lpow(a,n)``.
The bare expression ``0`` denotes the zero polynomial.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .terms import FreePoly, Monomial, associator, circ, commutator, left_power, multiply

BUILTINS = {"assoc": 3, "comm": 2, "circ": 2, "lpow": 2}
_DEFAULT_LETTERS = ("x", "y", "z")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*(),]))")


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownGeneratorError(ValueError):
    pass


def default_name_index(name: str) -> Optional[int]:
    """Index of ``name`` under the default scheme: x, y, z or x1, x2, ..."""
    if name in _DEFAULT_LETTERS:
        return _DEFAULT_LETTERS.index(name)
    m = re.fullmatch(r"x([1-9][0-9]*)", name)
    if m:
        return int(m.group(1)) - 1
    return None


def default_names(rank: int) -> List[str]:
    if rank <= len(_DEFAULT_LETTERS):
        return list(_DEFAULT_LETTERS[:rank])
    return [f"x{i + 1}" for i in range(rank)]


class _Resolver:
    def __init__(self, rank, names):
        self.rank = rank
        self.auto = names == "auto"
        self.names: List[str] = [] if self.auto else (list(names) if names is not None else None)

    def __call__(self, name: str, pos: int) -> int:
        if self.auto:
            if name not in self.names:
                self.names.append(name)
            idx = self.names.index(name)
        elif self.names is not None:
            if name not in self.names:
                raise UnknownGeneratorError(f"unknown generator name {name!r} at position {pos}")
            idx = self.names.index(name)
        else:
            idx = default_name_index(name)
            if idx is None:
                raise UnknownGeneratorError(f"unknown generator name {name!r} at position {pos}")
        if self.rank is not None and idx >= self.rank:
            raise UnknownGeneratorError(
                f"generator {name!r} at position {pos} exceeds rank {self.rank}"
            )
        return idx


class _Parser:
    def __init__(self, text: str, resolve: _Resolver):
        self.text = text
        self.resolve = resolve
        self.tokens: List[Tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                if text[pos:].strip() == "":
                    break
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                raise TermSyntaxError(f"unexpected character {text[bad]!r}", bad)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("end", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            found = "end of input" if kind == "end" else repr(val)
            raise TermSyntaxError(f"expected {op!r}, found {found}", pos)

    def parse(self) -> FreePoly:
        if len(self.tokens) == 1 and self.tokens[0][:2] == ("num", "0"):
            return FreePoly.zero()
        out = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise TermSyntaxError(f"unexpected {val!r}", pos)
        return out

    def expr(self) -> FreePoly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                out = out + t if val == "+" else out - t
            else:
                return out

    def term(self) -> FreePoly:
        coeff = Fraction(1)
        kind, val, pos = self.peek()
        if kind == "num":
            self.take()
            coeff = _rational(val, pos)
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "*":
                self.take()
        out = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = multiply(out, self.factor())
            else:
                return out.scale(coeff)

    def factor(self) -> FreePoly:
        kind, val, pos = self.take()
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "id":
            if val in BUILTINS:
                return self.builtin(val, pos)
            return FreePoly.gen(self.resolve(val, pos))
        found = "end of input" if kind == "end" else repr(val)
        raise TermSyntaxError(f"expected a generator, builtin or '(' but found {found}", pos)

    def builtin(self, name: str, pos: int) -> FreePoly:
        self.expect("(")
        args: List = []
        if name == "lpow":
            args.append(self.expr())
            self.expect(",")
            kind, val, npos = self.take()
            if kind != "num" or "/" in val:
                raise TermSyntaxError("lpow exponent must be a positive integer", npos)
            n = int(val)
            if n == 0:
                raise TermSyntaxError("lpow exponent must be at least 1", npos)
            self.expect(")")
            return left_power(args[0], n)
        args.append(self.expr())
        while self.peek()[:2] == ("op", ","):
            self.take()
            args.append(self.expr())
        self.expect(")")
        if len(args) != BUILTINS[name]:
            raise TermSyntaxError(f"{name} takes {BUILTINS[name]} arguments, got {len(args)}", pos)
        if name == "assoc":
            return associator(*args)
        if name == "comm":
            return commutator(*args)
        return circ(*args)


def _rational(text: str, pos: int) -> Fraction:
    num, _, den = text.replace(" ", "").partition("/")
    if den and int(den) == 0:
        raise TermSyntaxError("zero denominator", pos)
    return Fraction(int(num), int(den) if den else 1)


def parse(text: str, rank: Optional[int] = None, names: Union[None, str, Sequence[str]] = None) -> FreePoly:
    """Parse a term.  ``names`` is a list of generator names, ``"auto"``
    (first-appearance order), or None for the default x, y, z / x1..xk scheme."""
    return _Parser(text, _Resolver(rank, names)).parse()


def parse_with_names(text: str, rank: Optional[int] = None) -> Tuple[FreePoly, List[str]]:
    """Parse with automatic generator naming; return the polynomial and the names
    in index order.  Default-scheme names keep their default indices when every
    identifier fits that scheme."""
    idents = [val for kind, val, _ in _Parser(text, _Resolver(None, "auto")).tokens if kind == "id"]
    idents = [v for v in idents if v not in BUILTINS]
    idx = [default_name_index(v) for v in idents]
    if idents and all(i is not None for i in idx):
        width = max(idx) + 1
        names = default_names(width) if width <= 3 and all(v in _DEFAULT_LETTERS for v in idents) else None
        if names is None:
            names = [f"x{i + 1}" for i in range(width)]
            for v, i in zip(idents, idx):
                names[i] = v
        return parse(text, rank), names
    resolver = _Resolver(rank, "auto")
    poly = _Parser(text, resolver).parse()
    return poly, resolver.names


def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial, names: Optional[Sequence[str]] = None) -> str:
    if names is None:
        names = default_names(max(m.word) + 1)
    if m.is_leaf:
        return names[m.gen]
    left = format_monomial(m.left, names)
    right = format_monomial(m.right, names)
    if not m.right.is_leaf:
        right = f"({right})"
    return f"{left}*{right}"


def format_poly(p: FreePoly, names: Optional[Sequence[str]] = None) -> str:
    if p.is_zero():
        return "0"
    if names is None:
        names = default_names(p.max_generator() + 1)
    parts: List[str] = []
    for mono, c in p.sorted_terms():
        body = format_monomial(mono, names)
        mag = abs(c)
        text = body if mag == 1 else f"{_format_coeff(mag)}*{body}"
        if not parts:
            parts.append(text if c > 0 else f"-{text}")
        else:
            parts.append(f"+ {text}" if c > 0 else f"- {text}")
    return " ".join(parts)


def format_rational(c) -> str:
    """Canonical "p/q" (or integer) text for an exact rational."""
    c = Fraction(c)
    return _format_coeff(c)
