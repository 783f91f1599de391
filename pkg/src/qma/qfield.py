"""Exact arithmetic in the rational function field Q(q).

Elements are quotients of Laurent polynomials in a single formal
parameter ``q`` with arbitrary-precision rational coefficients.  Every
:class:`QRat` is kept in canonical form, so equality is structural:

* numerator and denominator share no common polynomial factor,
* the denominator has a nonzero constant term (all powers of ``q`` live
  in the numerator), integer coefficients with gcd 1 and a positive
  leading coefficient.

A small expression grammar (``q``, ``q^-1``, ``(q^2-1)/(q*(q-q^-1))``,
``-1/2`` ...) is provided by :func:`parse_qrat` and is also what
``str()`` produces.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, Tuple, Union

__all__ = [
    "LaurentPoly",
    "QRat",
    "PoleError",
    "ZeroPoint",
    "ParseError",
    "q",
    "qnum",
    "reflect",
    "eval_at",
    "parse_qrat",
    "as_qrat",
]

Rational = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


class ZeroPoint(ValueError):
    """Raised when evaluating at q = 0, where negative powers are undefined."""


class ParseError(ValueError):
    pass


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


# ---------------------------------------------------------------------------
# dense ordinary polynomial helpers (lists, lowest degree first)
# ---------------------------------------------------------------------------


def _strip(c):
    n = len(c)
    while n and not c[n - 1]:
        n -= 1
    return c[:n]


def _pdivmod(a, b):
    """Division with remainder over Q; ``b`` must be nonzero and stripped."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    if len(a) <= db:
        return [], a
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if not c:
            continue
        f = Fraction(c, lb) if type(c) is int and type(lb) is int else c / lb
        f = _norm(f)
        quo[i - db] = f
        for j in range(db + 1):
            a[i - db + j] -= f * b[j]
    return quo, _strip(a)


def _pgcd(a, b):
    """Monic gcd over Q of two stripped coefficient lists."""
    while b:
        if len(b) == 1:
            return [1]
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return []
    lc = a[-1]
    return [_norm(Fraction(c) / lc) for c in a]


def _pexact_div(a, b):
    quo, rem = _pdivmod(a, b)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quo


# ---------------------------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finite sum of ``c * q**e`` with rational ``c`` and integer ``e``.

    Stored densely as ``(low, coefficients)`` where ``coefficients[i]`` is
    the coefficient of ``q**(low + i)``; both ends are nonzero.
    """

    __slots__ = ("low", "c", "_hash")

    def __init__(self, coeffs: Union[Dict[int, Rational], None] = None):
        low, c = 0, ()
        if coeffs:
            items = {e: _norm(Fraction(v)) for e, v in coeffs.items() if v}
            if items:
                low = min(items)
                hi = max(items)
                c = tuple(items.get(e, 0) for e in range(low, hi + 1))
        self.low = low
        self.c = c
        self._hash = None

    @classmethod
    def _raw(cls, low: int, c) -> "LaurentPoly":
        # c may carry zeros at either end
        n = len(c)
        i = 0
        while i < n and not c[i]:
            i += 1
        while n > i and not c[n - 1]:
            n -= 1
        obj = object.__new__(cls)
        if i == n:
            obj.low, obj.c = 0, ()
        else:
            obj.low, obj.c = low + i, tuple(c[i:n])
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff: Rational, exp: int) -> "LaurentPoly":
        return cls._raw(exp, (_norm(coeff),))

    @property
    def coeffs(self) -> Dict[int, Rational]:
        return {self.low + i: v for i, v in enumerate(self.c) if v}

    @property
    def high(self) -> int:
        return self.low + len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.low == other.low and self.c == other.c
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.c
            return self.low == 0 and self.c == (other,)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.low, self.c))
        return self._hash

    def __neg__(self):
        return LaurentPoly._raw(self.low, tuple(-v for v in self.c))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not other.c:
            return self
        if not self.c:
            return other
        low = min(self.low, other.low)
        high = max(self.high, other.high)
        out = [0] * (high - low + 1)
        o = self.low - low
        for i, v in enumerate(self.c):
            out[o + i] = v
        o = other.low - low
        for i, v in enumerate(other.c):
            out[o + i] += v
        return LaurentPoly._raw(low, [_norm(v) for v in out])

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self.c, other.c
        if not a or not b:
            return _LZERO
        if len(b) == 1:
            v = b[0]
            return LaurentPoly._raw(self.low + other.low, [_norm(x * v) for x in a])
        if len(a) == 1:
            v = a[0]
            return LaurentPoly._raw(self.low + other.low, [_norm(v * x) for x in b])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return LaurentPoly._raw(self.low + other.low, [_norm(v) for v in out])

    def scale(self, s: Rational) -> "LaurentPoly":
        return LaurentPoly._raw(self.low, [_norm(s * v) for v in self.c])

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly._raw(self.low + k, self.c)

    def evaluate(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for v in reversed(self.c):
            acc = acc * x + v
        if self.low:
            acc *= x ** self.low
        return acc

    def reflect(self) -> "LaurentPoly":
        # q -> -1/q : c q^e -> c (-1)^e q^-e
        low = -self.high
        c = [(-v if (self.low + i) % 2 else v) for i, v in enumerate(self.c)]
        return LaurentPoly._raw(low, c[::-1])

    def __repr__(self):
        return f"LaurentPoly({self.coeffs!r})"

    def __str__(self):
        return _render_laurent(self)


_LZERO = LaurentPoly()
_LONE = LaurentPoly({0: 1})


def _render_monomial(c: Rational, e: int, first: bool) -> str:
    neg = c < 0
    a = -c if neg else c
    if e == 0:
        body = str(a)
    else:
        var = "q" if e == 1 else f"q^{e}"
        body = var if a == 1 else f"{a}*{var}"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def _render_laurent(p: LaurentPoly) -> str:
    if not p.c:
        return "0"
    terms = sorted(p.coeffs.items(), key=lambda t: -t[0])
    return "".join(_render_monomial(c, e, i == 0) for i, (e, c) in enumerate(terms))


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


def _integerize(c) -> Tuple[int, list]:
    """Return (s, c*s) where c*s is a primitive integer list with positive lead."""
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (Fraction(v).denominator for v in c), 1)
    ints = [int(v * den) for v in c]
    g = reduce(math.gcd, ints, 0)
    if ints[-1] < 0:
        g = -g
    return Fraction(den, g), [v // g for v in ints]


class QRat:
    """Canonical element ``num / den`` of Q(q)."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Union[LaurentPoly, Rational] = 0, den: Union[LaurentPoly, Rational] = 1):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly({0: num})
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly({0: den})
        if not den.c:
            raise ZeroDivisionError("zero denominator")
        n, d = QRat._canon(num, den)
        self.num, self.den = n, d
        self._hash = None

    @classmethod
    def _new(cls, num: LaurentPoly, den: LaurentPoly) -> "QRat":
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        obj._hash = None
        return obj

    @staticmethod
    def _canon(num: LaurentPoly, den: LaurentPoly, coprime: bool = False):
        if not num.c:
            return _LZERO, _LONE
        if len(den.c) == 1:
            v = den.c[0]
            s = Fraction(1, v) if type(v) is int else 1 / v
            return num.scale(s).shift(-den.low), _LONE
        num = num.shift(-den.low)
        dc = den.c
        if not coprime:
            nc = num.c
            g = _pgcd(list(dc), list(nc)) if len(nc) > 1 else [1]
            if len(g) > 1:
                nc = _pexact_div(list(nc), g)
                dc = _pexact_div(list(dc), g)
                num = LaurentPoly._raw(num.low, nc)
                # num's low is unchanged: g has a nonzero constant term
                if len(dc) == 1:
                    v = dc[0]
                    return num.scale(Fraction(1) / v), _LONE
        s, dints = _integerize(dc)
        if s != 1:
            num = num.scale(_norm(s))
        return num, LaurentPoly._raw(0, dints)

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "QRat":
        return cls._new(p, _LONE)

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.num.c)

    def is_laurent(self) -> bool:
        return len(self.den.c) == 1

    def __eq__(self, other):
        if isinstance(other, QRat):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.c == (1,) and self.num == other
        if isinstance(other, LaurentPoly):
            return self.den.c == (1,) and self.num == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.den.c == (1,) and self.num.low == 0 and len(self.num.c) <= 1:
                self._hash = hash(self.num.c[0] if self.num.c else 0)
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return QRat._new(-self.num, self.den)

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, QRat):
            other = as_qrat(other)
            if other is NotImplemented:
                return NotImplemented
        if not other.num.c:
            return self
        if not self.num.c:
            return other
        a, b = self.den, other.den
        if a.c == (1,) and b.c == (1,):
            return QRat._new(self.num + other.num, _LONE)
        if a == b:
            return QRat._new(*QRat._canon(self.num + other.num, a))
        return QRat._new(*QRat._canon(self.num * b + other.num * a, a * b))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, QRat):
            other = as_qrat(other)
            if other is NotImplemented:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QRat):
            if type(other) is int or type(other) is Fraction:
                if not other:
                    return ZERO
                return QRat._new(self.num.scale(other), self.den)
            return NotImplemented
        if not self.num.c or not other.num.c:
            return ZERO
        a, b = self.den, other.den
        if a.c == (1,) and b.c == (1,):
            return QRat._new(self.num * other.num, _LONE)
        if b.c == (1,) and len(other.num.c) == 1:
            return QRat._new(self.num * other.num, a)
        if a.c == (1,) and len(self.num.c) == 1:
            return QRat._new(self.num * other.num, b)
        return QRat._new(*QRat._canon(self.num * other.num, a * b))

    __rmul__ = __mul__

    def inverse(self) -> "QRat":
        if not self.num.c:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        return QRat._new(*QRat._canon(self.den, self.num, coprime=True))

    def __truediv__(self, other):
        if not isinstance(other, QRat):
            other = as_qrat(other)
            if other is NotImplemented:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        if self.den.c == (1,) and len(self.num.c) == 1:
            return QRat._new(LaurentPoly.monomial(self.num.c[0] ** k, self.num.low * k), _LONE)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- misc -------------------------------------------------------------
    def reflect(self) -> "QRat":
        return QRat(self.num.reflect(), self.den.reflect())

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        if x == 0:
            raise ZeroPoint("cannot evaluate a Laurent polynomial at q = 0")
        d = self.den.evaluate(x)
        if d == 0:
            raise PoleError(f"denominator of {self} vanishes at q = {x}")
        return self.num.evaluate(x) / d

    def constant_value(self):
        """The rational value if this element does not depend on q, else None."""
        if self.den.c == (1,) and (not self.num.c or (self.num.low == 0 and len(self.num.c) == 1)):
            return self.num.c[0] if self.num.c else 0
        return None

    def __repr__(self):
        return f"QRat('{self}')"

    def __str__(self):
        if self.den.c == (1,):
            return _render_laurent(self.num)
        num = _render_laurent(self.num)
        if len(self.num.c) > 1:
            num = f"({num})"
        return f"{num}/({_render_laurent(self.den)})"


ZERO = QRat._new(_LZERO, _LONE)
ONE = QRat._new(_LONE, _LONE)
q = QRat._new(LaurentPoly({1: 1}), _LONE)


def as_qrat(x) -> QRat:
    if isinstance(x, QRat):
        return x
    if isinstance(x, (int, Fraction)):
        if not x:
            return ZERO
        return QRat._new(LaurentPoly._raw(0, (_norm(Fraction(x)),)), _LONE)
    if isinstance(x, LaurentPoly):
        return QRat._new(x, _LONE)
    if isinstance(x, str):
        return parse_qrat(x)
    return NotImplemented


def qnum(k: int, qv=None):
    """The q-number ``(q^k - q^-k)/(q - q^-1) = q^(k-1) + q^(k-3) + ... + q^(1-k)``.

    ``qv`` substitutes a value for q (an exact rational or another QRat such
    as ``reflect(q)``); the sum form keeps ``qv = 1`` well defined.
    """
    if k < 0:
        raise ValueError("qnum expects k >= 0")
    if qv is None:
        if k == 0:
            return ZERO
        return QRat._new(LaurentPoly._raw(1 - k, [1 if i % 2 == 0 else 0 for i in range(2 * k - 1)]), _LONE)
    total = 0
    for j in range(k):
        total = total + qv ** (k - 1 - 2 * j)
    return total


def reflect(f: QRat) -> QRat:
    """Substitute q -> -1/q."""
    return as_qrat(f).reflect()


def eval_at(f, x) -> Fraction:
    """Evaluate at q = x exactly.  Raises PoleError / ZeroPoint."""
    if isinstance(f, (int, Fraction)):
        return Fraction(f)
    return as_qrat(f).evaluate(x)


# ---------------------------------------------------------------------------
# expression grammar
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|([-+*/^()]))")


def _tokenize(s: str):
    pos, out = 0, []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos} in {s!r}")
        if m.group(1):
            out.append(("INT", int(m.group(1))))
        elif m.group(2):
            out.append(("Q", "q"))
        else:
            out.append(("OP", m.group(3)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (val and t[1] != val):
            raise ParseError(f"unexpected token {t[1]!r} in {self.text!r}")
        self.i += 1
        return t

    def expr(self) -> QRat:
        v = self.term()
        while self.peek() in (("OP", "+"), ("OP", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> QRat:
        v = self.factor()
        while self.peek() in (("OP", "*"), ("OP", "/")):
            op = self.take()[1]
            rhs = self.factor()
            if op == "*":
                v = v * rhs
            else:
                if not rhs:
                    raise ParseError(f"division by zero in {self.text!r}")
                v = v / rhs
        return v

    def factor(self) -> QRat:
        kind, val = self.peek()
        if kind == "INT":
            self.take()
            return as_qrat(val)
        if kind == "Q":
            self.take()
            if self.peek() == ("OP", "^"):
                self.take()
                sign = 1
                if self.peek() in (("OP", "-"), ("OP", "+")):
                    sign = -1 if self.take()[1] == "-" else 1
                e = self.take("INT")[1]
                return q ** (sign * e)
            return q
        if (kind, val) == ("OP", "("):
            self.take()
            v = self.expr()
            self.take("OP", ")")
            return v
        if (kind, val) == ("OP", "-"):
            self.take()
            return -self.factor()
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_qrat(text: str) -> QRat:
    """Parse a coefficient expression such as ``"(q^2-1)/(q*(q-q^-1))"``."""
    p = _Parser(text)
    if not p.toks:
        raise ParseError("empty expression")
    v = p.expr()
    if p.i != len(p.toks):
        raise ParseError(f"trailing input in {text!r}")
    return v


def field_elements(values: Iterable) -> list:
    return [as_qrat(v) for v in values]
