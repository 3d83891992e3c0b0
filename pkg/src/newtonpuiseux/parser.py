"""Text format for series and covered equations.

Grammar::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor (['*'|'/'] factor)*      # juxtaposition multiplies
    factor  := atom ['^' power]
    atom    := number | 'x' | 'y' | 'y1' | 'i' | 'sqrt(' ['-'] int ')' | '(' expr ')'
    power   := int | '(' ['-'] int ['/' int] ')'

Numbers are integers or decimals and are read exactly. Division is only by
constants. Fractional powers are only allowed on ``x``.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction

import mpmath
from gmpy2 import mpq

from .scalars import ComplexField, QuadraticNumber, sqrt_exact


class ParseError(ValueError):
    """Syntax or semantic error, with the 0-based character ``position``."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>y1|sqrt|[xyi])|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


# A polynomial is a dict (x_exponent: Fraction, y_degree, y1_degree) -> coefficient.

def _padd(p, q, sign=1):
    out = dict(p)
    for k, c in q.items():
        out[k] = out.get(k, 0) + sign * c
        if out[k] == 0:
            del out[k]
    return out


def _pmul(p, q):
    out = {}
    for (a1, b1, c1), u in p.items():
        for (a2, b2, c2), v in q.items():
            k = (a1 + a2, b1 + b2, c1 + c2)
            out[k] = out.get(k, 0) + u * v
            if out[k] == 0:
                del out[k]
    return out


def _const(c):
    return {} if c == 0 else {(Fraction(0), 0, 0): c}


def _constant_value(p):
    if not p:
        return mpq(0)
    if set(p) == {(Fraction(0), 0, 0)}:
        return p[(Fraction(0), 0, 0)]
    return None


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def parse(self):
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        total = self.signed(self.term(), sign)
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            t = self.term()
            total = self.wrap(lambda: _padd(total, t, sign))
        return total

    def signed(self, p, sign):
        return p if sign == 1 else {k: -c for k, c in p.items()}

    def wrap(self, fn):
        try:
            return fn()
        except TypeError as exc:
            raise self.error(f"incompatible coefficients: {exc}") from None

    def starts_factor(self, tok):
        return tok[0] in ("num", "name") or tok[1] == "("

    def term(self):
        p = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                q = self.factor()
                p = self.wrap(lambda: _pmul(p, q))
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                q = self.factor()
                c = _constant_value(q)
                if c is None:
                    raise self.error("division by a non-constant", tok)
                if c == 0:
                    raise self.error("division by zero", tok)
                p = self.wrap(lambda: {k: v / c for k, v in p.items()})
            elif self.starts_factor(tok):
                q = self.factor()
                p = self.wrap(lambda: _pmul(p, q))
            else:
                return p

    def factor(self):
        base, kind = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            caret = self.take()
            e = self.power()
            if kind == "x":
                if e < 0:
                    raise self.error("negative exponent", caret)
                return {(e, 0, 0): mpq(1)}
            if e.denominator != 1:
                raise self.error("fractional power of something other than x", caret)
            if e < 0:
                c = _constant_value(base)
                if c is None or c == 0:
                    raise self.error("negative power of a non-constant", caret)
                return self.wrap(lambda: _const(c ** int(e)))
            out = _const(mpq(1))
            for _ in range(int(e)):
                out = self.wrap(lambda o=out: _pmul(o, base))
            return out
        return base

    def power(self):
        tok = self.take()
        if tok[0] == "num":
            if "." in tok[1]:
                raise self.error("exponent must be an integer or a fraction", tok)
            return Fraction(int(tok[1]))
        if tok[1] != "(":
            raise self.error("expected exponent", tok)
        sign = 1
        if self.peek()[1] == "-":
            self.take()
            sign = -1
        num = self.take()
        if num[0] != "num" or "." in num[1]:
            raise self.error("expected integer exponent", num)
        value = Fraction(int(num[1]))
        if self.peek()[1] == "/":
            self.take()
            den = self.take()
            if den[0] != "num" or "." in den[1] or int(den[1]) == 0:
                raise self.error("expected positive integer denominator", den)
            value /= int(den[1])
        self.expect(")")
        return sign * value

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            return _const(mpq(Fraction(val))), "const"
        if kind == "name":
            if val == "x":
                return {(Fraction(1), 0, 0): mpq(1)}, "x"
            if val == "y":
                return {(Fraction(0), 1, 0): mpq(1)}, "y"
            if val == "y1":
                return {(Fraction(0), 0, 1): mpq(1)}, "y1"
            if val == "i":
                return _const(QuadraticNumber(0, 1, -1)), "const"
            if val == "sqrt":
                self.expect("(")
                sign = 1
                if self.peek()[1] == "-":
                    self.take()
                    sign = -1
                num = self.take()
                if num[0] != "num" or "." in num[1]:
                    raise self.error("sqrt takes an integer", num)
                self.expect(")")
                return _const(sqrt_exact(sign * int(num[1]))), "const"
        if val == "(":
            p = self.expr()
            self.expect(")")
            return p, "group"
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse_polynomial(text: str):
    """Parse into ``{(x_exponent, y_degree, y1_degree): coefficient}``."""
    return _Parser(text).parse()


def parse_series(text: str, field=None):
    """Parse a Puiseux polynomial in ``x``."""
    from .series import PuiseuxPoly

    poly = parse_polynomial(text)
    for (_, b, c) in poly:
        if b or c:
            raise ParseError("a series may only contain x", 0, text)
    return PuiseuxPoly.from_terms([(a, c) for (a, _, _), c in poly.items()], field)


def parse_scalar(text: str, field=None):
    """Parse a constant, such as ``3``, ``1/2``, ``3+i/4`` or ``sqrt(2)``."""
    poly = parse_polynomial(text)
    c = _constant_value(poly)
    if c is None:
        raise ParseError("expected a constant", 0, text)
    return c if field is None else field.convert(c)


def format_coefficient(c, field) -> str:
    """Coefficient text that the parser reads back."""
    if isinstance(field, ComplexField):
        z = field.convert(c)
        re_, im = z.real, z.imag
        digits = max(20, int(field.prec * 0.302) + 2)
        parts = mpmath.nstr(re_, digits, min_fixed=-math.inf, max_fixed=math.inf)
        if not field.is_zero(im):
            sign = "-" if im < 0 else "+"
            parts += f"{sign}{mpmath.nstr(abs(im), digits, min_fixed=-math.inf, max_fixed=math.inf)}*i"
        return f"({parts})"
    if isinstance(c, QuadraticNumber):
        root = f"sqrt({c.d})" if c.d != -1 else "i"
        out = ""
        if c.a != 0:
            out = _q(c.a)
        b = c.b
        sign = "-" if b < 0 else ("+" if out else "")
        mag = abs(b)
        tail = root if mag == 1 else f"{_q(mag)}*{root}"
        return f"({out}{sign}{tail})"
    q = mpq(c)
    return f"({_q(q)})"


def _q(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _exponent_text(var: str, e) -> str:
    e = Fraction(e)
    if e == 0:
        return ""
    if e == 1:
        return var
    if e.denominator == 1:
        return f"{var}^{e.numerator}"
    return f"{var}^({e.numerator}/{e.denominator})"


def render_monomials(items, field) -> str:
    """Render ``[(x_exp, y_deg, y1_deg, coeff)]`` as a sum, in the given order."""
    parts = []
    for xe, ye, y1e, c in items:
        mono = "*".join(
            m for m in (_exponent_text("x", xe), _exponent_text("y", ye), _exponent_text("y1", y1e)) if m
        )
        coeff = format_coefficient(c, field)
        if coeff == "(1)" and mono:
            parts.append(mono)
        elif coeff == "(-1)" and mono:
            parts.append("-" + mono)
        else:
            parts.append(f"{coeff}*{mono}" if mono else coeff)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def render_series(s) -> str:
    items = [(e, 0, 0, c) for e, c in s.terms()]
    return render_monomials(items, s.field)
