"""Coefficient fields.

Three backends share one small interface:

* ``ExactField()`` -- the rationals, values are ``gmpy2.mpq``.
* ``ExactField(d)`` -- the quadratic extension Q(sqrt(d)), values are ``mpq`` or
  :class:`QuadraticNumber` with that ``d``.
* ``ComplexField(prec, eps)`` -- arbitrary precision complex numbers backed by a
  private mpmath context; ``|z| < eps`` counts as zero.

Values are plain numbers and use the usual operators; the field object only
converts, tests for zero, formats and takes principal roots.
"""
from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
import mpmath
from gmpy2 import mpq

MPQ = type(mpq())
RATIONAL_TYPES = (int, Fraction, MPQ)

DEFAULT_PRECISION = 256
DEFAULT_EPS_BITS = 128


class NotRepresentable(ValueError):
    """Raised when a value does not live in the requested exact field."""


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, w)`` with ``n == s*s*w`` and ``w`` squarefree (sign kept in ``w``)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, w = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            w *= p
        p += 1 if p == 2 else 2
    w *= n
    return s, sign * w


class QuadraticNumber:
    """An element ``a + b*sqrt(d)`` of Q(sqrt(d)), ``d`` squarefree and not 0 or 1.

    For negative ``d`` the square root is the principal one, ``i*sqrt(-d)``.
    Arithmetic that cancels the irrational part returns a plain ``mpq``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        if d in (0, 1) or squarefree_decomposition(d)[0] != 1:
            raise ValueError(f"d={d} is not a squarefree integer other than 0, 1")
        self.a = mpq(a)
        self.b = mpq(b)
        self.d = int(d)

    @staticmethod
    def make(a, b, d):
        if b == 0:
            return mpq(a)
        return QuadraticNumber(a, b, d)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise TypeError(
                    f"cannot combine elements of Q(sqrt({self.d})) and Q(sqrt({other.d}))"
                )
            return other.a, other.b
        if isinstance(other, RATIONAL_TYPES):
            return mpq(other), mpq(0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber.make(self.a + o[0], self.b + o[1], self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber.make(self.a - o[0], self.b - o[1], self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticNumber.make(o[0] - self.a, o[1] - self.b, self.d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = o
        return QuadraticNumber.make(
            self.a * a + self.d * self.b * b, self.a * b + self.b * a, self.d
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self):
        n = self.norm()
        return QuadraticNumber.make(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(other, QuadraticNumber):
            return self * other.inverse()
        if o[0] == 0:
            raise ZeroDivisionError("division by zero")
        return QuadraticNumber.make(self.a / o[0], self.b / o[0], self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inverse() * o[0]

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = mpq(1), self
        while e:
            if e & 1:
                result = base * result
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadraticNumber):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, RATIONAL_TYPES):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __complex__(self):
        root = math.sqrt(abs(self.d))
        if self.d < 0:
            return complex(float(self.a), float(self.b) * root)
        return complex(float(self.a) + float(self.b) * root)

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        return format_exact(self)


def sqrt_exact(r):
    """Principal square root of a rational as an exact number."""
    r = mpq(r)
    if r == 0:
        return mpq(0)
    num, den = int(r.numerator), int(r.denominator)
    # sqrt(num/den) = sqrt(num*den)/den
    s, w = squarefree_decomposition(num * den)
    if w == 1:
        return mpq(s, den)
    return QuadraticNumber(0, mpq(s, den), w)


def exact_root(r, k: int):
    """Principal ``k``-th root of a rational, or raise :class:`NotRepresentable`."""
    r = mpq(r)
    if k == 1 or r == 0:
        return r
    if k == 2:
        return sqrt_exact(r)
    if r > 0:
        rn, en = gmpy2.iroot(gmpy2.mpz(r.numerator), k)
        rd, ed = gmpy2.iroot(gmpy2.mpz(r.denominator), k)
        if en and ed:
            return mpq(rn, rd)
    raise NotRepresentable(f"{r}^(1/{k}) is not in a quadratic field")


def format_exact(x) -> str:
    if isinstance(x, QuadraticNumber):
        parts = []
        if x.a != 0:
            parts.append(_format_q(x.a))
        if x.b == 1:
            tail = f"sqrt({x.d})"
        elif x.b == -1:
            tail = f"-sqrt({x.d})"
        else:
            tail = f"{_format_q(x.b)}*sqrt({x.d})"
        if parts and not tail.startswith("-"):
            tail = "+" + tail
        return "".join(parts) + tail
    return _format_q(mpq(x))


def _format_q(q) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_exact_value(x) -> bool:
    return isinstance(x, RATIONAL_TYPES + (QuadraticNumber,))


class ExactField:
    """Q, or Q(sqrt(d)) when ``d`` is given."""

    exact = True

    def __init__(self, d: int | None = None):
        if d is not None:
            s, w = squarefree_decomposition(d)
            if s != 1 or w in (0, 1):
                raise ValueError(f"quadratic backend needs a squarefree d, got {d}")
        self.d = d
        self.zero = mpq(0)
        self.one = mpq(1)

    def __repr__(self):
        return "ExactField()" if self.d is None else f"ExactField({self.d})"

    def __eq__(self, other):
        return isinstance(other, ExactField) and other.d == self.d

    def __hash__(self):
        return hash(("exact", self.d))

    @property
    def name(self) -> str:
        return "rational" if self.d is None else f"quadratic:{self.d}"

    def contains(self, x) -> bool:
        if isinstance(x, RATIONAL_TYPES):
            return True
        return isinstance(x, QuadraticNumber) and x.d == self.d

    def convert(self, x):
        if isinstance(x, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(x, RATIONAL_TYPES):
            return mpq(x)
        if isinstance(x, QuadraticNumber):
            if x.d != self.d:
                raise NotRepresentable(f"{x} is not in {self.name}")
            return x
        raise NotRepresentable(f"{x!r} is not an exact scalar")

    def is_zero(self, x) -> bool:
        return x == 0

    def power(self, q, mu):
        """Principal value of ``q**mu`` for rational ``mu``."""
        mu = Fraction(mu)
        if isinstance(q, QuadraticNumber):
            if mu.denominator != 1:
                raise NotRepresentable(f"({q})^({mu}) is not exact")
            return q ** mu.numerator
        q = mpq(q)
        if q == 0:
            raise ZeroDivisionError("q must be nonzero")
        if q < 0 and mu.denominator == 2:
            # principal sqrt of a negative rational is i*sqrt(|q|) = c*sqrt(-w)
            s, w = squarefree_decomposition(-int(q.numerator) * int(q.denominator))
            root = QuadraticNumber(0, mpq(s, int(q.denominator)), -w)
        elif q < 0 and mu.denominator > 2:
            raise NotRepresentable(f"({q})^({mu}) is not exact")
        else:
            root = exact_root(q, mu.denominator)
        value = root ** mu.numerator if mu.numerator >= 0 else 1 / (root ** -mu.numerator)
        return self.convert(value)

    def sort_key(self, x):
        if isinstance(x, QuadraticNumber):
            c = complex(x)
            return (c.real, c.imag, x.a, x.b)
        return (float(x), 0.0, mpq(x), mpq(0))

    def to_complex(self, x) -> complex:
        return complex(x)

    def magnitude(self, x) -> float:
        return abs(complex(x))

    def format(self, x) -> str:
        return format_exact(x)

    def to_json(self, x):
        return format_exact(x)


class ComplexField:
    """Complex numbers at ``prec`` bits; anything below ``eps`` in modulus is zero."""

    exact = False

    def __init__(self, prec: int = DEFAULT_PRECISION, eps=None):
        self.prec = prec
        self.ctx = mpmath.MPContext()
        self.ctx.prec = prec
        self.zero = self.ctx.mpc(0)
        self.one = self.ctx.mpc(1)
        if eps is None:
            eps = self.ctx.ldexp(1, -DEFAULT_EPS_BITS)
        self.eps = self.convert(eps).real

    def __repr__(self):
        return f"ComplexField(prec={self.prec}, eps={mpmath.nstr(self.eps, 5)})"

    def __eq__(self, other):
        return (
            isinstance(other, ComplexField)
            and other.prec == self.prec
            and other.eps == self.eps
        )

    def __hash__(self):
        return hash(("complex", self.prec, str(self.eps)))

    @property
    def name(self) -> str:
        return "numeric"

    def contains(self, x) -> bool:
        return True

    def convert(self, x):
        ctx = self.ctx
        if isinstance(x, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(x, int):
            return ctx.mpc(x)
        if isinstance(x, (Fraction, MPQ)):
            return ctx.mpc(ctx.mpf(int(x.numerator)) / int(x.denominator))
        if isinstance(x, QuadraticNumber):
            return self.convert(x.a) + self.convert(x.b) * ctx.sqrt(ctx.mpf(x.d))
        if isinstance(x, (complex, float)):
            return ctx.mpc(x)
        if isinstance(x, (mpmath.mpf, mpmath.mpc)) or hasattr(x, "_mpc_") or hasattr(x, "_mpf_"):
            return ctx.mpc(x)
        raise NotRepresentable(f"{x!r} is not a scalar")

    def is_zero(self, x) -> bool:
        return abs(self.convert(x)) < self.eps

    def power(self, q, mu):
        mu = Fraction(mu)
        ctx = self.ctx
        q = self.convert(q)
        return ctx.exp(ctx.mpf(mu.numerator) / mu.denominator * ctx.log(q))

    def sort_key(self, x):
        x = self.convert(x)
        return (float(x.real), float(x.imag))

    def to_complex(self, x) -> complex:
        return complex(self.convert(x))

    def magnitude(self, x):
        return abs(self.convert(x))

    def format(self, x) -> str:
        x = self.convert(x)
        if abs(x.imag) < self.eps:
            return mpmath.nstr(x.real, 30)
        return f"({mpmath.nstr(x.real, 30)}{'+' if x.imag >= 0 else '-'}{mpmath.nstr(abs(x.imag), 30)}j)"

    def to_json(self, x):
        x = self.convert(x)
        return [mpmath.nstr(x.real, 40), mpmath.nstr(x.imag, 40)]


def field_from_name(name: str, precision: int = DEFAULT_PRECISION):
    """Parse a backend selector: ``rational``, ``quadratic:d`` or ``numeric``."""
    if name == "rational":
        return ExactField()
    if name.startswith("quadratic:"):
        return ExactField(int(name.split(":", 1)[1]))
    if name == "numeric":
        return ComplexField(precision)
    raise ValueError(f"unknown backend {name!r}")


def common_field(values, base=None):
    """Smallest exact field holding ``values`` (and ``base``), else ``None``."""
    d = base.d if isinstance(base, ExactField) else None
    if base is not None and not isinstance(base, ExactField):
        return base
    for v in values:
        if isinstance(v, QuadraticNumber):
            if d is None:
                d = v.d
            elif d != v.d:
                return None
        elif not isinstance(v, RATIONAL_TYPES):
            return None
    return ExactField(d)


def root_field(q, n: int):
    """Exact field holding ``q**(k/n)`` for all ``k``, or the numeric backend."""
    if isinstance(q, QuadraticNumber):
        return ExactField(q.d) if n == 1 else ComplexField()
    q = mpq(q)
    if q < 0:
        if n == 1:
            return ExactField()
        if n == 2:
            _, w = squarefree_decomposition(-int(q.numerator) * int(q.denominator))
            return ExactField(-w)
        return ComplexField()
    try:
        root = exact_root(q, n)
    except NotRepresentable:
        return ComplexField()
    return ExactField(root.d if isinstance(root, QuadraticNumber) else None)


def field_with_root(fld, q, n: int):
    """A field containing ``fld`` and ``q**(1/n)``: exact when one quadratic field suffices."""
    if not fld.exact:
        return fld
    r = root_field(q, n)
    if not r.exact:
        return r
    ds = {d for d in (fld.d, r.d) if d is not None}
    if len(ds) > 1:
        return ComplexField()
    return ExactField(ds.pop() if ds else None)
