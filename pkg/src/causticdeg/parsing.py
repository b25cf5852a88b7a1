"""Parser for polynomial and point expressions over Q(i).

Grammar (no implicit multiplication)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NUMBER 'i' | 'i' | VAR | '(' expr ')'

A point is ``[a : b : c]`` (brackets optional, ``,`` also accepted as the
separator) and may be followed by ``@ p(t), q(t, u)``: ``t`` then denotes a
root of p, ``u`` a root of q over the field with t, and so on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeTooLow, NotHomogeneous, ParseError
from .numera import BASE, IMAG, ONE, GaussianRational, adjoin_root
from .polyring import HomoPoly

_TOKEN = re.compile(r"\s*(?:(\d+)(i?)|([A-Za-z_]\w*)|(\S))")

Poly = dict  # exponent tuple -> coefficient


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    value: object
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(1) if m.group(1) else m.start(3) if m.group(3) else m.start(4)
        if m.group(1):
            value = GaussianRational(0, int(m.group(1))) if m.group(2) else GaussianRational(int(m.group(1)))
            toks.append(_Tok("num", value, start))
        elif m.group(3):
            toks.append(_Tok("name", m.group(3), start))
        else:
            toks.append(_Tok("op", m.group(4), start))
        pos = m.end()
    toks.append(_Tok("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, names: dict[str, int], constants: dict | None = None):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0
        self.names = names
        self.constants = constants or {}
        self.nvars = len(names)

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.toks[self.k]
        raise ParseError(message, tok.pos, self.text)

    @property
    def cur(self) -> _Tok:
        return self.toks[self.k]

    def take(self) -> _Tok:
        tok = self.toks[self.k]
        self.k += 1
        return tok

    def parse(self) -> Poly:
        if self.cur.kind == "end":
            self.error("empty expression")
        out = self.expr()
        if self.cur.kind != "end":
            tok = self.cur
            if tok.kind in ("num", "name") or tok.value == "(":
                self.error("implicit multiplication is not allowed; use '*'")
            self.error(f"unexpected {tok.value!r}")
        return out

    def expr(self) -> Poly:
        out = self.term()
        while self.cur.kind == "op" and self.cur.value in "+-":
            op = self.take().value
            rhs = self.term()
            out = _padd(out, rhs if op == "+" else _pscale(rhs, -ONE))
        return out

    def term(self) -> Poly:
        out = self.unary()
        while self.cur.kind == "op" and self.cur.value in "*/":
            tok = self.take()
            rhs = self.unary()
            if tok.value == "*":
                out = _pmul(out, rhs)
            else:
                c = _constant(rhs)
                if c is None:
                    self.error("division by a non-constant", tok)
                if not c or c.is_zero():
                    self.error("division by zero", tok)
                out = _pscale(out, c.inverse())
        return out

    def unary(self) -> Poly:
        if self.cur.kind == "op" and self.cur.value in "+-":
            op = self.take().value
            inner = self.unary()
            return inner if op == "+" else _pscale(inner, -ONE)
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.cur.kind == "op" and self.cur.value == "^":
            tok = self.take()
            exp = self.take()
            if exp.kind != "num" or exp.value.im or exp.value.re.denominator != 1:
                self.error("exponent must be a non-negative integer", exp)
            n = int(exp.value.re)
            out = {(0,) * self.nvars: ONE}
            for _ in range(n):
                out = _pmul(out, base)
            return out
        return base

    def atom(self) -> Poly:
        tok = self.take()
        zero_exp = (0,) * self.nvars
        if tok.kind == "num":
            return {zero_exp: tok.value}
        if tok.kind == "name":
            if tok.value == "i":
                return {zero_exp: IMAG}
            if tok.value in self.constants:
                return {zero_exp: self.constants[tok.value]}
            if tok.value in self.names:
                e = [0] * self.nvars
                e[self.names[tok.value]] = 1
                return {tuple(e): ONE}
            self.error(f"unknown name {tok.value!r}", tok)
        if tok.kind == "op" and tok.value == "(":
            inner = self.expr()
            if self.cur.kind == "op" and self.cur.value == ")":
                self.take()
                return inner
            self.error("expected ')'")
        if tok.kind == "end":
            self.error("unexpected end of input", tok)
        self.error(f"unexpected {tok.value!r}", tok)


def _padd(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out[e] + c if e in out else c
    return {e: c for e, c in out.items() if c}


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            t = c1 * c2
            out[e] = out[e] + t if e in out else t
    return {e: c for e, c in out.items() if c}


def _pscale(p: Poly, c) -> Poly:
    return {e: c * v for e, v in p.items() if v}


def _constant(p: Poly):
    if not p:
        return GaussianRational(0)
    if len(p) == 1:
        (e, c), = p.items()
        if not any(e):
            return c
    return None


def parse_poly(text: str, min_degree: int = 2) -> HomoPoly:
    """Parse a homogeneous polynomial in x, y, z with Gaussian rational coefficients."""
    terms = _Parser(text, {"x": 0, "y": 1, "z": 2}).parse()
    degrees = {sum(e) for e in terms}
    if len(degrees) > 1:
        raise NotHomogeneous(degrees)
    if not terms:
        raise DegreeTooLow("the zero polynomial does not define a curve")
    F = HomoPoly(terms)
    if F.degree < min_degree:
        raise DegreeTooLow(f"degree {F.degree} is below {min_degree}")
    return F


def parse_constant(text: str, constants: dict | None = None):
    terms = _Parser(text, {}, constants).parse()
    return terms.get((), GaussianRational(0))


_GENERATORS = ("t", "u", "v", "w")


def _generators(rel: str, text: str, offset: int) -> dict:
    """Adjoin a root of each comma-separated polynomial, naming them t, u, v, w."""
    constants: dict = {}
    tower = BASE
    pos = offset
    pieces = rel.split(",")
    if len(pieces) > len(_GENERATORS):
        raise ParseError("too many generators", offset, text)
    for name, piece in zip(_GENERATORS, pieces):
        try:
            terms = _Parser(piece, {name: 0}, constants).parse()
        except ParseError as exc:
            raise ParseError("bad defining polynomial", exc.position + pos, text) from None
        top = max((e[0] for e in terms), default=0)
        if top < 1:
            raise ParseError(f"the defining polynomial must involve {name}", pos, text)
        coeffs = [tower.embed(terms.get((k,), GaussianRational(0))) for k in range(top + 1)]
        roots = adjoin_root(tower, coeffs)
        tower, constants[name] = roots[-1]
        pos += len(piece) + 1
    return constants


def parse_point(text: str) -> tuple:
    """Parse ``[a : b : c]`` optionally followed by ``@ p(t), q(t, u), ...``."""
    constants: dict = {}
    body = text
    if "@" in text:
        body, _, rel = text.partition("@")
        constants = _generators(rel, text, len(body) + 1)
    stripped = body.strip()
    start = body.index(stripped[0]) if stripped else 0
    inner = stripped
    if inner.startswith("[") or inner.startswith("("):
        close = "]" if inner[0] == "[" else ")"
        if not inner.endswith(close):
            raise ParseError(f"expected {close!r}", start + len(inner), text)
        inner = inner[1:-1]
        start += 1
    sep = ":" if ":" in inner else ","
    parts = inner.split(sep)
    if len(parts) != 3:
        raise ParseError("a point needs exactly three coordinates", start, text)
    coords = []
    pos = start
    for part in parts:
        try:
            coords.append(parse_constant(part, constants))
        except ParseError as exc:
            raise ParseError(str(exc).split(" at position")[0], pos + exc.position, text) from None
        pos += len(part) + 1
    if all(not c or c.is_zero() for c in coords):
        raise ParseError("all coordinates vanish", start, text)
    return tuple(coords)


def format_point(coords) -> str:
    return "[" + " : ".join(_coord_text(c) for c in coords) + "]"


def _coord_text(c) -> str:
    base = c.as_base() if hasattr(c, "as_base") else c
    return str(base) if base is not None else c.to_str()
