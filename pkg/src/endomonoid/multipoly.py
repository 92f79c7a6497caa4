"""Polynomials in the matrix-entry variables x_{k,l} of K[L(U)].

A :class:`Poly` over d×d matrices has ``d*d`` variables; variable
``x_{k,l}`` (1-based) has index ``(k-1)*d + (l-1)``.  Monomials are
exponent tuples and are compared in graded lexicographic order, so
``x_{1,1} > x_{1,2} > ... > x_{d,d}`` in degree one.

The module also carries the right-translation action
``(g·f)(u) = f(u g)``, orbit spans, and a plain Buchberger engine used to
intersect a finite-dimensional space of polynomials with an ideal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import isqrt
from typing import Iterable, Mapping, Sequence

from .errors import ParseError
from .fields import QQ, Field
from .linalg import LabeledSpace, Mat, Subspace, kernel_sparse

Monomial = tuple


def grlex_key(m: Monomial):
    return (sum(m), m)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def _mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    """Immutable multivariate polynomial with exact coefficients."""

    __slots__ = ("field", "nvars", "terms", "_hash")

    def __init__(self, field: Field, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.field = field
        self.nvars = nvars
        self.terms = {m: field(c) for m, c in (terms or {}).items() if c}
        self._hash = None

    # constructors
    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Poly":
        return cls(field, nvars)

    @classmethod
    def const(cls, c, field: Field, nvars: int) -> "Poly":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, i: int, field: Field, nvars: int) -> "Poly":
        m = [0] * nvars
        m[i] = 1
        return cls(field, nvars, {tuple(m): 1})

    @classmethod
    def x(cls, k: int, l: int, d: int, field: Field = QQ) -> "Poly":
        return cls.var(letter_to_variable(k, l, d), field, d * d)

    @classmethod
    def monomial(cls, m: Monomial, field: Field, c=1) -> "Poly":
        return cls(field, len(m), {tuple(m): c})

    # structure
    @property
    def d(self) -> int:
        d = isqrt(self.nvars)
        if d * d != self.nvars:
            raise ValueError(f"{self.nvars} variables is not a matrix-entry ring")
        return d

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def monomials(self) -> list[Monomial]:
        return sorted(self.terms, key=grlex_key, reverse=True)

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=grlex_key)

    def leading_coeff(self):
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        inv = self.field.one / self.leading_coeff()
        return Poly(self.field, self.nvars, {m: c * inv for m, c in self.terms.items()})

    def _compat(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly.const(other, self.field, self.nvars)
        if other.nvars != self.nvars or other.field != self.field:
            raise ValueError("polynomials live in different rings")
        return other

    # arithmetic
    def __add__(self, other) -> "Poly":
        other = self._compat(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t[m] + c if m in t else c
        return Poly(self.field, self.nvars, t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.field, self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._compat(other))

    def __rsub__(self, other) -> "Poly":
        return self._compat(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = self.field(other)
            return Poly(self.field, self.nvars, {m: c * a for m, a in self.terms.items()})
        other = self._compat(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                t[m] = t[m] + c1 * c2 if m in t else c1 * c2
        return Poly(self.field, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.field, self.nvars)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def mul_term(self, m: Monomial, c) -> "Poly":
        return Poly(self.field, self.nvars, {_mono_mul(m, k): c * a for k, a in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)) or hasattr(other, "p"):
            return self == Poly.const(other, self.field, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # evaluation and substitution
    def evaluate(self, point: Sequence) -> object:
        if len(point) != self.nvars:
            raise ValueError("point has the wrong number of coordinates")
        F = self.field
        point = [F(x) for x in point]
        total = F.zero
        for m, c in self.terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * x**e
            total = total + t
        return total

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable i with ``images[i]`` (all in one common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        ring_n = images[0].nvars if images else 0
        out = Poly.zero(self.field, ring_n)
        powers: dict = {}
        for m, c in self.terms.items():
            t = Poly.const(c, self.field, ring_n)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in powers:
                        powers[i, e] = images[i] ** e
                    t = t * powers[i, e]
            out = out + t
        return out

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)


def letter_to_variable(k: int, j: int, d: int) -> int:
    """Variable index of the linear function paired with basis letter f_{k,j}.

    Under the trace pairing l_B(A) = tr(AB), the j-th basis vector of the
    k-th copy of U corresponds to A ↦ A_{k,j}, i.e. the variable x_{k,j}.
    """
    if not (1 <= k <= d and 1 <= j <= d):
        raise ValueError(f"letter f_{{{k},{j}}} out of range for d={d}")
    return (k - 1) * d + (j - 1)


def variable_to_letter(i: int, d: int) -> tuple[int, int]:
    if not 0 <= i < d * d:
        raise ValueError("variable index out of range")
    return divmod(i, d)[0] + 1, i % d + 1


def poly_eval(f: Poly, g: Mat) -> object:
    """Substitute x_{k,l} := g[k,l]."""
    d = f.d
    if g.shape != (d, d):
        raise ValueError(f"expected a {d}x{d} matrix, got {g.shape}")
    if g.field != f.field:
        raise ValueError("matrix and polynomial are over different fields")
    return f.evaluate([g[k, l] for k in range(d) for l in range(d)])


def right_translate(f: Poly, g: Mat) -> Poly:
    """The polynomial u ↦ f(u·g), i.e. (g·f) for the right-translation action."""
    d = f.d
    F = f.field
    n = d * d
    images = []
    for k in range(1, d + 1):
        for l in range(1, d + 1):
            lin = Poly.zero(F, n)
            for i in range(1, d + 1):
                c = g[i - 1, l - 1]
                if c:
                    lin = lin + Poly.x(k, i, d, F) * c
            images.append(lin)
    return f.substitute(images)


def right_translate_expand(f: Poly, d: int | None = None) -> list[tuple[Poly, Poly]]:
    """Expand f(u·g) = sum_j F_j(u) H_j(g) with distinct monomials H_j.

    Pairs are returned with H_j in decreasing graded-lex order.
    """
    d = f.d if d is None else d
    if d * d != f.nvars:
        raise ValueError("polynomial ring does not match d")
    F = f.field
    n = d * d
    big = 2 * n  # u-variables first, then g-variables
    images = []
    for k in range(1, d + 1):
        for l in range(1, d + 1):
            lin = Poly.zero(F, big)
            for i in range(1, d + 1):
                lin = lin + Poly.var(letter_to_variable(k, i, d), F, big) * Poly.var(n + letter_to_variable(i, l, d), F, big)
            images.append(lin)
    expanded = f.substitute(images)
    grouped: dict[Monomial, dict] = {}
    for m, c in expanded.terms.items():
        grouped.setdefault(m[n:], {})[m[:n]] = c
    out = []
    for gm in sorted(grouped, key=grlex_key, reverse=True):
        out.append((Poly(F, n, grouped[gm]), Poly.monomial(gm, F)))
    return out


def monomials_up_to(nvars: int, h: int) -> tuple[Monomial, ...]:
    """All monomials of total degree <= h, in decreasing graded-lex order."""
    out = []
    for deg in range(h + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            m = [0] * nvars
            for i in combo:
                m[i] += 1
            out.append(tuple(m))
    return tuple(sorted(out, key=grlex_key, reverse=True))


def poly_space(polys: Iterable[Poly], h: int, d: int, field: Field) -> LabeledSpace:
    """Span of ``polys`` in the coordinates of all monomials of degree <= h."""
    return LabeledSpace.from_elements(monomials_up_to(d * d, h), [p.terms for p in polys], field)


def space_polys(space: LabeledSpace, nvars: int) -> list[Poly]:
    return [Poly(space.field, nvars, el) for el in space.elements()]


def orbit_span(fs: Sequence[Poly], d: int | None = None, field: Field | None = None) -> tuple[LabeledSpace, int]:
    """Span of all translation coefficients F_j of the inputs, with h = max degree."""
    if not fs:
        d = 1 if d is None else d
        return poly_space([], 0, d, field or QQ), 0
    d = fs[0].d
    field = fs[0].field
    h = max(f.degree() for f in fs)
    coeffs = [F for f in fs for F, _ in right_translate_expand(f, d)]
    return poly_space(coeffs, h, d, field), h


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic Gröbner basis under graded lex; generators sorted by leading monomial."""

    gens: tuple
    field: Field
    nvars: int

    @property
    def is_unit(self) -> bool:
        return len(self.gens) == 1 and self.gens[0].degree() == 0

    def normal_form(self, f: Poly) -> Poly:
        return normal_form(f, self)

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)


def _reduce(f: Poly, divisors: Sequence[Poly]) -> Poly:
    F = f.field
    p = dict(f.terms)
    rem: dict = {}
    leads = [(g.leading_monomial(), g.leading_coeff(), g) for g in divisors]
    while p:
        m = max(p, key=grlex_key)
        c = p[m]
        for lm, lc, g in leads:
            if _mono_divides(lm, m):
                q = _mono_div(m, lm)
                coef = c / lc
                for gm, gc in g.terms.items():
                    t = _mono_mul(gm, q)
                    v = p.get(t, F.zero) - coef * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            rem[m] = c
            del p[m]
    return Poly(F, f.nvars, rem)


def normal_form(f: Poly, gb: GroebnerBasis) -> Poly:
    if f.nvars != gb.nvars:
        raise ValueError("polynomial ring does not match the basis")
    return _reduce(f, gb.gens)


def _spoly(f: Poly, g: Poly) -> Poly:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = _mono_lcm(lf, lg)
    a = f.mul_term(_mono_div(lcm, lf), f.field.one / f.leading_coeff())
    b = g.mul_term(_mono_div(lcm, lg), g.field.one / g.leading_coeff())
    return a - b


def buchberger(gens: Sequence[Poly]) -> GroebnerBasis:
    """Reduced Gröbner basis by the plain Buchberger algorithm.

    Pairs are processed smallest-lcm first; pairs with coprime leading
    monomials are skipped (Buchberger's first criterion).
    """
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("buchberger needs at least one nonzero generator")
    field, nvars = gens[0].field, gens[0].nvars
    G = [g.monic() for g in gens]
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    while pairs:
        i, j = min(pairs, key=lambda ij: (grlex_key(_mono_lcm(G[ij[0]].leading_monomial(), G[ij[1]].leading_monomial())), ij))
        pairs.discard((i, j))
        li, lj = G[i].leading_monomial(), G[j].leading_monomial()
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        r = _reduce(_spoly(G[i], G[j]), G)
        if r:
            G.append(r.monic())
            k = len(G) - 1
            pairs.update((a, k) for a in range(k))
    # minimal basis, then interreduce
    G.sort(key=lambda g: grlex_key(g.leading_monomial()))
    minimal: list[Poly] = []
    for g in G:
        lm = g.leading_monomial()
        if not any(_mono_divides(h.leading_monomial(), lm) for h in minimal):
            minimal = [h for h in minimal if not _mono_divides(lm, h.leading_monomial())]
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        reduced.append(_reduce(g, others).monic())
    reduced.sort(key=lambda g: grlex_key(g.leading_monomial()), reverse=True)
    return GroebnerBasis(tuple(reduced), field, nvars)


def intersect_with_ideal(v: LabeledSpace, gb: GroebnerBasis | None) -> LabeledSpace:
    """{w in v : normal_form(w, gb) = 0}, as a subspace of v's coordinatization.

    ``gb=None`` stands for the zero ideal.
    """
    if gb is None:
        return LabeledSpace(v.labels, Subspace.zero(len(v.labels), v.field))
    F = v.field
    basis = space_polys(v, gb.nvars)
    nfs = [normal_form(b, gb) for b in basis]
    # columns are basis elements of v, rows are normal-form monomials
    rows: dict[Monomial, dict] = {}
    for j, nf in enumerate(nfs):
        for m, c in nf.terms.items():
            rows.setdefault(m, {})[j] = c
    ker = kernel_sparse(list(rows.values()), len(basis), F)
    elements = []
    for kv in ker.basis:
        w = Poly.zero(F, gb.nvars)
        for j, c in kv:
            w = w + basis[j] * c
        elements.append(w.terms)
    return LabeledSpace.from_elements(v.labels, elements, F)


# ---------------------------------------------------------------------------
# text grammar:  2*x1,1^2*x2,2 - x1,2 + 3

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x(?P<k>\d+),(?P<l>\d+))|(?P<op>[-+*^/]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[start]!r}", pos=start)
        start = m.start(m.lastgroup)
        if m.group("num") is not None:
            toks.append(("num", int(m.group("num")), start))
        elif m.group("var") is not None:
            toks.append(("var", (int(m.group("k")), int(m.group("l"))), start))
        else:
            toks.append(("op", m.group("op"), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def parse_poly(text: str, d: int, field: Field = QQ) -> Poly:
    """Parse the polynomial grammar; errors carry the 0-based character position."""
    toks = _tokenize(text)
    i = 0
    n = d * d

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        t = toks[i]
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            if t[0] == "end":
                raise ParseError("unexpected end of input", pos=t[2])
            raise ParseError(f"unexpected token {t[1]!r}", pos=t[2])
        i += 1
        return t

    def factor() -> Poly:
        t = peek()
        if t[0] == "num":
            take()
            num = t[1]
            if peek()[:2] == ("op", "/"):
                take()
                den = take("num")
                if den[1] == 0:
                    raise ParseError("zero denominator", pos=den[2])
                return Poly.const(Fraction(num, den[1]), field, n)
            return Poly.const(num, field, n)
        if t[0] == "var":
            take()
            k, l = t[1]
            if not (1 <= k <= d and 1 <= l <= d):
                raise ParseError(f"variable x{k},{l} out of range for d={d}", pos=t[2])
            base = Poly.x(k, l, d, field)
            if peek()[0] == "op" and peek()[1] == "^":
                take()
                e = take("num")
                return base ** e[1]
            return base
        if t[0] == "end":
            raise ParseError("unexpected end of input", pos=t[2])
        raise ParseError(f"unexpected token {t[1]!r}", pos=t[2])

    def term() -> Poly:
        out = factor()
        while peek()[0] == "op" and peek()[1] == "*":
            take()
            out = out * factor()
        return out

    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take()[1] == "-" else 1
    total = term() * sign
    while peek()[0] != "end":
        op = take("op")
        if op[1] not in "+-":
            raise ParseError(f"unexpected token {op[1]!r}", pos=op[2])
        t = term()
        total = total + t if op[1] == "+" else total - t
    return total


def _format_coeff(c, field) -> str:
    if field.char:
        return str(int(c))
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    try:
        d = f.d
    except ValueError:
        d = None
    parts = []
    for m in f.monomials():
        c = f.terms[m]
        neg = False
        if not f.field.char and c < 0:
            neg, c = True, -c
        factors = []
        for i, e in enumerate(m):
            if e:
                if d is not None:
                    k, l = variable_to_letter(i, d)
                    name = f"x{k},{l}"
                else:
                    name = f"y{i}"
                factors.append(name if e == 1 else f"{name}^{e}")
        cs = _format_coeff(c, f.field)
        if not factors:
            body = cs
        elif cs == "1":
            body = "*".join(factors)
        else:
            body = "*".join([cs] + factors)
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out
