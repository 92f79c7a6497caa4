"""Shared oracles and strategies.

sympy is the independent reference for dense linear algebra and polynomial
arithmetic; nothing here calls back into endomonoid's own solvers.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import settings
from hypothesis import strategies as st

from endomonoid.fields import QQ
from endomonoid.linalg import Mat

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def sym_matrix(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])


def oracle_rank(rows):
    if not rows or not rows[0]:
        return 0
    return sym_matrix(rows).rank()


def oracle_in_span(vectors, v):
    """Dense solve: is v a combination of the given vectors."""
    if not vectors:
        return all(x == 0 for x in v)
    A = sym_matrix(vectors).T
    aug = A.row_join(sym_matrix([v]).T)
    return A.rank() == aug.rank()


def oracle_poly(p, d):
    """Translate a Poly into a sympy expression in symbols x{k}{l}."""
    syms = [sympy.Symbol(f"x{k}{l}") for k in range(1, d + 1) for l in range(1, d + 1)]
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s**e
        expr += term
    return sympy.expand(expr), syms


small_q = st.integers(-5, 5).map(Fraction)


@st.composite
def q_matrices(draw, max_rows=6, max_cols=6):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return [[draw(small_q) for _ in range(n)] for _ in range(m)]


@st.composite
def square_q(draw, d):
    return Mat.of([[draw(small_q) for _ in range(d)] for _ in range(d)], QQ)


@pytest.fixture(scope="session")
def bool_realization():
    from endomonoid.formats import load_presentation
    from endomonoid.pipeline import realize

    pres = load_presentation("corpus:bool")
    real, dh = realize(pres)
    return pres, real, dh
