"""Exact scalar fields: the rationals and prime fields F_p.

Elements of ``QQ`` are :class:`fractions.Fraction`; elements of ``GF(p)``
are :class:`Fp`.  Both support the usual arithmetic operators, so the
linear-algebra and polynomial code is written once for either field.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache

from sympy import isprime

from .errors import InputError, ParseError


class Fp:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in F_{self.p}")
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return None

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(o * pow(self.v, -1, self.p), self.p)

    def __pow__(self, e: int):
        if e < 0:
            if self.v == 0:
                raise ZeroDivisionError("division by zero in F_%d" % self.p)
            return Fp(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return Fp(pow(self.v, e, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self.v == o

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class RationalField:
    """The field Q with exact Fraction arithmetic."""

    tag = "q"
    char = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fp):
            raise ValueError("cannot lift an F_p element to Q")
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def format(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def parse(self, text: str) -> Fraction:
        text = text.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ParseError(f"not an exact rational: {text!r}")
        value = Fraction(text)
        return value

    def random(self, rng: random.Random, box: int = 3) -> Fraction:
        return Fraction(rng.randint(-box, box))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The prime field F_p."""

    char: int

    def __init__(self, p: int):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.tag = f"fp:{p}"
        self.size = p

    def __call__(self, x) -> Fp:
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ValueError(f"cannot map F_{x.p} element into F_{self.p}")
            return x
        if isinstance(x, Fraction):
            return Fp(0, self.p) + x
        return Fp(int(x), self.p)

    @property
    def zero(self) -> Fp:
        return Fp(0, self.p)

    @property
    def one(self) -> Fp:
        return Fp(1, self.p)

    def elements(self):
        return [Fp(v, self.p) for v in range(self.p)]

    def format(self, x) -> str:
        return f"{self(x).v} mod {self.p}"

    def parse(self, text: str) -> Fp:
        text = text.strip()
        m = re.fullmatch(r"([+-]?\d+)\s*mod\s*(\d+)", text)
        if m:
            if int(m.group(2)) != self.p:
                raise ParseError(f"modulus {m.group(2)} does not match field F_{self.p}")
            return self(int(m.group(1)))
        if re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            return self(Fraction(text))
        raise ParseError(f"not an element of F_{self.p}: {text!r}")

    def random(self, rng: random.Random, box: int | None = None) -> Fp:
        return Fp(rng.randrange(self.p), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()

Field = RationalField | PrimeField


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(tag: str) -> Field:
    """Parse a field tag: ``q`` or ``fp:P``."""
    tag = tag.strip().lower()
    if tag in ("q", "qq"):
        return QQ
    m = re.fullmatch(r"fp:(\d+)", tag)
    if m:
        try:
            return GF(int(m.group(1)))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    raise InputError(f"unknown field tag {tag!r} (expected 'q' or 'fp:P')")


def field_of(x) -> Field:
    if isinstance(x, Fp):
        return GF(x.p)
    return QQ
